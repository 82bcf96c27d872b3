#pragma once

#include "lossforecast/series.hpp"
#include "lossforecast/transforms.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace lossforecast {

/// One lagged, transformed, YoY-converted indicator column.
struct LaggedFeature {
    std::string indicator_id;
    int lag = 0; // 0..4
    TransformSpec transform;
    QuarterlySeries yoy_values;
};

/// Output of the data-preparation step: every (indicator, lag) column plus the
/// YoY target, all clipped to a common quarter range.
struct LagTable {
    std::vector<LaggedFeature> features;
    QuarterlySeries target_yoy;
};

struct CorrelationRecord {
    std::string indicator_id;
    int lag = 0;
    double r = 0.0;
    double p_value = 1.0;
    bool significant_at_10pct = false;
};

/// Aligned design matrix. X is column-major: X[c][row].
struct FeatureMatrix {
    std::vector<std::pair<std::string, int>> column_labels; // (indicator_id, lag)
    Quarter start;
    std::size_t rows = 0;
    std::vector<std::vector<double>> X;
    std::vector<double> y;

    int row_of(Quarter q) const { return q.minus(start); }
    Quarter quarter_of(std::size_t row) const { return start.plus(static_cast<int>(row)); }
};

inline constexpr int kMaxLag = 4;

/// Lags 0..4 per indicator, best transform per lagged column, YoY conversion,
/// target converted to YoY untransformed. Requires >= 24 quarters of overlap
/// between each indicator and the target.
LagTable build_lag_table(const std::vector<QuarterlySeries>& indicators,
                         const QuarterlySeries& target);

/// Pearson correlation of the feature column with the YoY target plus the
/// two-sided t-test p-value.
CorrelationRecord correlation(const LaggedFeature& feature, const QuarterlySeries& target_yoy);

/// Per indicator, the lag maximizing |r|; ties break toward the smaller lag.
/// The result is keyed by indicator id and independent of record order.
std::map<std::string, int> optimal_lag_selection(const std::vector<CorrelationRecord>& records);

/// Assemble the aligned design matrix from the given feature columns.
FeatureMatrix assemble_matrix(const std::vector<LaggedFeature>& features,
                              const QuarterlySeries& target_yoy);

} // namespace lossforecast
