#include "lossforecast/series.hpp"

#include "lossforecast/errors.hpp"

#include <algorithm>
#include <cmath>

namespace lossforecast {

QuarterlySeries::QuarterlySeries(std::string id, Quarter start, std::vector<double> values)
    : id_(std::move(id)), start_(start), values_(std::move(values)) {
    if (values_.empty())
        throw EmptyInput("series '" + id_ + "' has no values");
    for (double v : values_)
        if (!std::isfinite(v))
            throw DataError("series '" + id_ + "' contains a non-finite value");
}

double QuarterlySeries::at(Quarter q) const {
    int i = q.minus(start_);
    if (i < 0 || i >= static_cast<int>(values_.size()))
        throw DataError("quarter " + q.str() + " outside series '" + id_ + "'");
    return values_[static_cast<std::size_t>(i)];
}

bool QuarterlySeries::covers(Quarter q) const {
    int i = q.minus(start_);
    return i >= 0 && i < static_cast<int>(values_.size());
}

QuarterlySeries QuarterlySeries::with_id(std::string new_id) const {
    return QuarterlySeries(std::move(new_id), start_, values_);
}

QuarterlySeries QuarterlySeries::slice(std::size_t first, std::size_t count) const {
    if (first + count > values_.size())
        throw DataError("slice out of range for series '" + id_ + "'");
    return QuarterlySeries(id_, start_.plus(static_cast<int>(first)),
                           std::vector<double>(values_.begin() + first,
                                               values_.begin() + first + count));
}

QuarterlySeries resample_to_quarterly(const std::string& id,
                                      const std::vector<DatedObservation>& obs,
                                      ResampleMethod method) {
    if (obs.empty())
        throw EmptyInput("no observations for '" + id + "'");

    Quarter first = Quarter::from_date(obs.front().year, obs.front().month);
    Quarter last = Quarter::from_date(obs.back().year, obs.back().month);
    int span = last.minus(first) + 1;

    std::vector<std::vector<double>> buckets(static_cast<std::size_t>(span));
    for (const auto& o : obs) {
        Quarter q = Quarter::from_date(o.year, o.month);
        buckets[static_cast<std::size_t>(q.minus(first))].push_back(o.value);
    }

    // An incomplete leading/trailing quarter (fewer observations than a typical
    // complete quarter) bounds the series instead of entering it. The modal
    // per-quarter count stands in for "complete"; the slack of 2 tolerates the
    // 12-vs-13 week quarters of weekly extracts.
    std::size_t modal = 0;
    {
        std::vector<std::size_t> counts;
        for (const auto& b : buckets)
            counts.push_back(b.size());
        std::sort(counts.begin(), counts.end());
        std::size_t best_run = 0;
        for (std::size_t i = 0; i < counts.size();) {
            std::size_t j = i;
            while (j < counts.size() && counts[j] == counts[i])
                ++j;
            if (j - i >= best_run) { // ties prefer the larger count
                best_run = j - i;
                modal = counts[i];
            }
            i = j;
        }
    }
    std::size_t complete = modal >= 4 ? modal - 2 : modal;
    std::size_t lo = 0, hi = buckets.size();
    if (hi - lo > 1 && buckets[lo].size() < complete)
        ++lo;
    if (hi - lo > 1 && buckets[hi - 1].size() < complete)
        --hi;
    first = first.plus(static_cast<int>(lo));

    std::vector<double> out;
    out.reserve(hi - lo);
    for (std::size_t i = lo; i < hi; ++i) {
        const auto& b = buckets[i];
        if (b.empty())
            throw InteriorGap("no observations in interior quarter " +
                              first.plus(static_cast<int>(i - lo)).str() + " for '" + id + "'");
        if (method == ResampleMethod::mean) {
            double s = 0.0;
            for (double v : b) s += v;
            out.push_back(s / static_cast<double>(b.size()));
        } else {
            out.push_back(b.back());
        }
    }
    return QuarterlySeries(id, first, std::move(out));
}

QuarterlySeries lag(const QuarterlySeries& s, int k) {
    if (k < 0)
        throw DataError("lag must be >= 0");
    if (k > static_cast<int>(s.size()) - 1)
        throw LagTooLarge("lag " + std::to_string(k) + " too large for series of length " +
                          std::to_string(s.size()));
    std::vector<double> vals(s.values().begin(), s.values().end() - k);
    return QuarterlySeries(s.id() + "_lag" + std::to_string(k), s.start().plus(k),
                           std::move(vals));
}

QuarterlySeries yoy_change(const QuarterlySeries& s) {
    if (s.size() < 5)
        throw SeriesTooShort("need >= 5 quarters for YoY change, got " +
                             std::to_string(s.size()));
    std::vector<double> out;
    out.reserve(s.size() - 4);
    for (std::size_t t = 4; t < s.size(); ++t) {
        double base = s[t - 4];
        if (base == 0.0)
            throw DivisionByZero("zero value at " + s.start().plus(static_cast<int>(t - 4)).str() +
                                 " in series '" + s.id() + "'");
        out.push_back(s[t] / base - 1.0);
    }
    return QuarterlySeries(s.id() + "_yoy", s.start().plus(4), std::move(out));
}

std::vector<QuarterlySeries> chunk(const QuarterlySeries& s, int span_quarters) {
    if (span_quarters < 8)
        throw SpanTooSmall("chunk span must be >= 8 quarters");
    std::vector<QuarterlySeries> out;
    std::size_t span = static_cast<std::size_t>(span_quarters);
    for (std::size_t first = 0; first + span <= s.size(); first += span)
        out.push_back(s.slice(first, span).with_id(s.id() + "_chunk" +
                                                   std::to_string(out.size())));
    return out;
}

std::vector<QuarterlySeries> align(const std::vector<QuarterlySeries>& list) {
    if (list.empty())
        throw EmptyInput("align: empty series list");
    Quarter lo = list.front().start();
    Quarter hi = list.front().end();
    for (const auto& s : list) {
        lo = std::max(lo, s.start());
        hi = std::min(hi, s.end());
    }
    if (hi < lo)
        throw NoOverlap("series ranges do not overlap");
    std::vector<QuarterlySeries> out;
    out.reserve(list.size());
    std::size_t len = static_cast<std::size_t>(hi.minus(lo)) + 1;
    for (const auto& s : list)
        out.push_back(s.slice(static_cast<std::size_t>(lo.minus(s.start())), len));
    return out;
}

MetricReport metrics(const std::vector<double>& actual, const std::vector<double>& predicted) {
    if (actual.size() != predicted.size())
        throw LengthMismatch("metrics: length mismatch");
    std::size_t n = actual.size();
    if (n < 2)
        throw DataError("metrics: need at least 2 points");

    double sse = 0.0, mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double r = actual[i] - predicted[i];
        sse += r * r;
        mean += actual[i];
    }
    mean /= static_cast<double>(n);

    double sst = 0.0;
    for (double a : actual) sst += (a - mean) * (a - mean);

    MetricReport rep;
    rep.mse = sse / static_cast<double>(n);
    rep.n = n;
    if (sst > 0.0)
        rep.r_squared = 1.0 - sse / sst;
    return rep;
}

MetricReport metrics(const QuarterlySeries& actual, const QuarterlySeries& predicted) {
    if (actual.start() != predicted.start() || actual.size() != predicted.size())
        throw LengthMismatch("metrics: series not aligned");
    return metrics(actual.values(), predicted.values());
}

} // namespace lossforecast
