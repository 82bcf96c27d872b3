#include "lossforecast/quarter.hpp"

#include "lossforecast/errors.hpp"

#include <cstdio>

namespace lossforecast {

Quarter::Quarter(int y, int q) : year(y), quarter(q) {
    if (q < 1 || q > 4)
        throw DataError("quarter must be in 1..4, got " + std::to_string(q));
}

Quarter Quarter::plus(int n) const {
    int idx = year * 4 + (quarter - 1) + n;
    int y = idx >= 0 ? idx / 4 : -((-idx + 3) / 4);
    int q = idx - y * 4;
    return Quarter(y, q + 1);
}

int Quarter::minus(const Quarter& other) const {
    return (year * 4 + quarter) - (other.year * 4 + other.quarter);
}

std::string Quarter::str() const {
    return std::to_string(year) + "Q" + std::to_string(quarter);
}

Quarter Quarter::parse(const std::string& s) {
    int y = 0, q = 0;
    char sep = 0;
    if (std::sscanf(s.c_str(), "%d%c%d", &y, &sep, &q) != 3 || (sep != 'Q' && sep != 'q') ||
        q < 1 || q > 4)
        throw ParseError("bad quarter string: '" + s + "'");
    return Quarter(y, q);
}

Quarter Quarter::from_date(int year, int month) {
    if (month < 1 || month > 12)
        throw ParseError("bad month: " + std::to_string(month));
    return Quarter(year, (month - 1) / 3 + 1);
}

} // namespace lossforecast
