#pragma once

#include <compare>
#include <cstdint>
#include <string>

namespace lossforecast {

/// Calendar quarter, e.g. 1985Q1. Ordering is lexicographic on (year, quarter).
struct Quarter {
    int year = 0;
    int quarter = 1; // 1..4

    Quarter() = default;
    Quarter(int y, int q);

    /// Quarter advanced by n (n may be negative).
    Quarter plus(int n) const;

    /// Signed number of quarters from other to *this.
    int minus(const Quarter& other) const;

    /// "1985Q1"
    std::string str() const;

    /// Parses "1985Q1"; throws ParseError on malformed input.
    static Quarter parse(const std::string& s);

    /// Quarter containing the given calendar date.
    static Quarter from_date(int year, int month);

    auto operator<=>(const Quarter&) const = default;
};

/// A single dated observation at arbitrary (daily/weekly/monthly) frequency.
struct DatedObservation {
    int year = 0;
    int month = 0; // 1..12
    int day = 0;   // 1..31
    double value = 0.0;
};

} // namespace lossforecast
