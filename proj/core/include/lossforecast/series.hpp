#pragma once

#include "lossforecast/quarter.hpp"

#include <optional>
#include <string>
#include <vector>

namespace lossforecast {

/// Gapless quarterly series. Index i holds the value for start.plus(i).
/// Immutable after construction; all operations below are pure.
class QuarterlySeries {
public:
    QuarterlySeries(std::string id, Quarter start, std::vector<double> values);

    const std::string& id() const { return id_; }
    Quarter start() const { return start_; }
    Quarter end() const { return start_.plus(static_cast<int>(values_.size()) - 1); }
    std::size_t size() const { return values_.size(); }
    const std::vector<double>& values() const { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }

    /// Value at a given quarter; throws DataError if out of range.
    double at(Quarter q) const;
    bool covers(Quarter q) const;

    QuarterlySeries with_id(std::string new_id) const;

    /// Sub-series [first, first+count).
    QuarterlySeries slice(std::size_t first, std::size_t count) const;

private:
    std::string id_;
    Quarter start_;
    std::vector<double> values_;
};

struct MetricReport {
    double mse = 0.0;
    std::optional<double> r_squared; // empty when the actual series is constant
    std::size_t n = 0;
};

enum class ResampleMethod { mean, last };

/// Collapse dated observations into one value per quarter.
/// Incomplete leading/trailing coverage simply bounds the series; an interior
/// quarter with no observation throws InteriorGap.
QuarterlySeries resample_to_quarterly(const std::string& id,
                                      const std::vector<DatedObservation>& obs,
                                      ResampleMethod method);

/// Output value at quarter t equals input at t-k; start advances by k, id gains "_lag{k}".
QuarterlySeries lag(const QuarterlySeries& s, int k);

/// x_t / x_{t-4} - 1. Four quarters shorter than the input.
QuarterlySeries yoy_change(const QuarterlySeries& s);

/// Non-overlapping windows of exactly span_quarters; partial tail discarded.
std::vector<QuarterlySeries> chunk(const QuarterlySeries& s, int span_quarters);

/// Clip every series to the common quarter range.
std::vector<QuarterlySeries> align(const std::vector<QuarterlySeries>& list);

/// MSE and R^2 of predicted against actual (must share start and length).
MetricReport metrics(const QuarterlySeries& actual, const QuarterlySeries& predicted);
MetricReport metrics(const std::vector<double>& actual, const std::vector<double>& predicted);

} // namespace lossforecast
