#include "lossforecast/features.hpp"

#include "lossforecast/errors.hpp"
#include "lossforecast/stats.hpp"

#include <algorithm>
#include <cmath>

namespace lossforecast {

LagTable build_lag_table(const std::vector<QuarterlySeries>& indicators,
                         const QuarterlySeries& target) {
    if (indicators.empty())
        throw EmptyInput("build_lag_table: no indicators");

    for (const auto& ind : indicators) {
        Quarter lo = std::max(ind.start(), target.start());
        Quarter hi = std::min(ind.end(), target.end());
        int overlap = hi.minus(lo) + 1;
        if (overlap < 24)
            throw SeriesTooShort("indicator '" + ind.id() + "' overlaps target by only " +
                            std::to_string(overlap) + " quarters (need >= 24)");
    }

    std::vector<LaggedFeature> raw;
    raw.reserve(indicators.size() * (kMaxLag + 1));
    for (const auto& ind : indicators) {
        for (int k = 0; k <= kMaxLag; ++k) {
            QuarterlySeries lagged = lag(ind, k);
            TransformSpec spec = select_best_transform(lagged.values());
            QuarterlySeries transformed(lagged.id(), lagged.start(),
                                        lossforecast::apply(spec, lagged.values()));
            raw.push_back(LaggedFeature{ind.id(), k, spec, yoy_change(transformed)});
        }
    }

    QuarterlySeries target_yoy = yoy_change(target);

    // Clip everything to the common quarter range.
    std::vector<QuarterlySeries> all;
    all.reserve(raw.size() + 1);
    for (const auto& f : raw) all.push_back(f.yoy_values);
    all.push_back(target_yoy);
    std::vector<QuarterlySeries> aligned = align(all);

    LagTable table{{}, aligned.back()};
    table.features.reserve(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i)
        table.features.push_back(
            LaggedFeature{raw[i].indicator_id, raw[i].lag, raw[i].transform, aligned[i]});
    return table;
}

CorrelationRecord correlation(const LaggedFeature& feature, const QuarterlySeries& target_yoy) {
    std::vector<QuarterlySeries> aligned = align({feature.yoy_values, target_yoy});
    if (aligned.front().size() < 5)
        throw DataError("correlation: need >= 5 overlapping quarters");

    CorrelationRecord rec;
    rec.indicator_id = feature.indicator_id;
    rec.lag = feature.lag;
    rec.r = stats::pearson_r(aligned[0].values(), aligned[1].values());
    rec.p_value = stats::correlation_p_value(rec.r, aligned[0].size());
    rec.significant_at_10pct = rec.p_value < 0.1;
    return rec;
}

std::map<std::string, int> optimal_lag_selection(const std::vector<CorrelationRecord>& records) {
    if (records.empty())
        throw EmptyInput("optimal_lag_selection: no records");
    std::map<std::string, int> best_lag;
    std::map<std::string, double> best_abs;
    for (const auto& rec : records) {
        double a = std::fabs(rec.r);
        auto it = best_lag.find(rec.indicator_id);
        if (it == best_lag.end() || a > best_abs[rec.indicator_id] ||
            (a == best_abs[rec.indicator_id] && rec.lag < it->second)) {
            best_lag[rec.indicator_id] = rec.lag;
            best_abs[rec.indicator_id] = a;
        }
    }
    return best_lag;
}

FeatureMatrix assemble_matrix(const std::vector<LaggedFeature>& features,
                              const QuarterlySeries& target_yoy) {
    if (features.empty())
        throw EmptyInput("assemble_matrix: no features");

    std::vector<QuarterlySeries> all;
    all.reserve(features.size() + 1);
    for (const auto& f : features) all.push_back(f.yoy_values);
    all.push_back(target_yoy);
    std::vector<QuarterlySeries> aligned = align(all);

    FeatureMatrix m;
    m.start = aligned.front().start();
    m.rows = aligned.front().size();
    for (std::size_t c = 0; c < features.size(); ++c) {
        m.column_labels.emplace_back(features[c].indicator_id, features[c].lag);
        m.X.push_back(aligned[c].values());
    }
    m.y = aligned.back().values();
    return m;
}

} // namespace lossforecast
