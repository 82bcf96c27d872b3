#pragma once

#include <stdexcept>
#include <string>

namespace lossforecast {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Problems with input data (bad files, gaps, misaligned series). CLI exit code 2.
class DataError : public Error {
public:
    using Error::Error;
};

/// Numeric failures (degenerate samples, singular systems). CLI exit code 3.
class NumericError : public Error {
public:
    using Error::Error;
};

// core_timeseries
class EmptyInput : public DataError { public: using DataError::DataError; };
class InteriorGap : public DataError { public: using DataError::DataError; };
class LagTooLarge : public DataError { public: using DataError::DataError; };
class SeriesTooShort : public DataError { public: using DataError::DataError; };
class DivisionByZero : public NumericError { public: using NumericError::NumericError; };
class SpanTooSmall : public DataError { public: using DataError::DataError; };
class NoOverlap : public DataError { public: using DataError::DataError; };
class LengthMismatch : public DataError { public: using DataError::DataError; };

// transforms
class TooFewPoints : public DataError { public: using DataError::DataError; };
class DegenerateSample : public NumericError { public: using NumericError::NumericError; };
class DomainViolation : public NumericError { public: using NumericError::NumericError; };

// regression
class ConstantColumn : public NumericError { public: using NumericError::NumericError; };
class SingularSystem : public NumericError { public: using NumericError::NumericError; };
class GridEmpty : public DataError { public: using DataError::DataError; };
class SplitOutOfRange : public DataError { public: using DataError::DataError; };
class EmptySelection : public NumericError { public: using NumericError::NumericError; };
class ZeroVariance : public NumericError { public: using NumericError::NumericError; };

// msic
class SingleClass : public NumericError { public: using NumericError::NumericError; };
class P1OutOfRange : public DataError { public: using DataError::DataError; };
class DegenerateGap : public NumericError { public: using NumericError::NumericError; };

// ingestion
class ParseError : public DataError { public: using DataError::DataError; };
class NonMonotoneDates : public DataError { public: using DataError::DataError; };

} // namespace lossforecast
