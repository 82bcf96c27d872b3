#pragma once

#include "lossforecast/forecasters.hpp"
#include "lossforecast/series.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace lossforecast {

inline constexpr std::size_t kSeriesFeatureCount = 12;

/// Fixed-order descriptor vector: mean, sd, cv, skewness, excess kurtosis,
/// trend slope of the standardized series, autocorrelations at lags 1-4,
/// diff-sd over level-sd, last value over mean.
struct SeriesFeatures {
    std::array<double, kSeriesFeatureCount> v{};
    bool degenerate = false; // a zero denominator was replaced by 0
};

SeriesFeatures extract_features(const QuarterlySeries& series);

struct ChunkLabel {
    QuarterlySeries chunk;
    SeriesFeatures features;
    ForecastModel best_model = ForecastModel::naive;
    std::array<double, 7> per_model_mse{}; // catalog order; +inf if unfittable
};

/// Score every catalog forecaster on each chunk's final holdout_h points and
/// label the chunk with the winner. Models the chunk is too short for score
/// +inf and cannot win.
std::vector<ChunkLabel> label_chunks(const std::vector<QuarterlySeries>& chunks, int holdout_h,
                                     std::uint64_t seed = 0);

enum class ClassifierKind { logistic_regression, linear_svm, decision_tree };

const char* classifier_kind_name(ClassifierKind k);
ClassifierKind classifier_kind_from_name(const std::string& name);

struct ClsNode {
    int feature = -1;   // -1 for leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    int label = 0;      // class index, leaves only
};

struct MsicModel {
    ClassifierKind kind = ClassifierKind::logistic_regression;
    std::vector<ForecastModel> classes;
    std::array<double, kSeriesFeatureCount> feat_mean{};
    std::array<double, kSeriesFeatureCount> feat_sd{};
    bool constant = false; // single training class, degenerate classifier

    // logistic_regression: one row per class, kSeriesFeatureCount weights + bias.
    // linear_svm: one one-vs-rest row per class, same layout.
    std::vector<std::vector<double>> weights;
    // decision_tree
    std::vector<ClsNode> tree;

    ForecastModel predict(const SeriesFeatures& f) const;
};

/// Train a series-feature classifier on labeled chunks. A pool with a single
/// distinct label yields a constant classifier with the `constant` flag set.
MsicModel train_msic(const std::vector<ChunkLabel>& labels, ClassifierKind kind,
                     std::uint64_t seed = 0);

/// Classify the full series and forecast with the predicted model.
std::pair<ForecastModel, Forecast> msic_select(const MsicModel& model,
                                               const QuarterlySeries& series, int horizon,
                                               std::uint64_t seed = 0);

struct TraditionalResult {
    ForecastModel best_model = ForecastModel::naive;
    Forecast forecast;
    std::array<double, 7> validation_mse{}; // catalog order; +inf if unfittable
};

/// Fit all seven on series[0..p1), score on series[p1..), refit the winner on
/// the full series and forecast.
TraditionalResult traditional_selection(const QuarterlySeries& series, int p1, int horizon,
                                        std::uint64_t seed = 0);

/// 100 * (trad - method) / (trad - optimal). Throws DegenerateGap when the
/// traditional baseline already matches the oracle.
double optimality_gap_reduction(double mse_optimal, double mse_traditional, double mse_method);

struct BenchmarkRow {
    std::string series_id;
    int p1 = 0;
    double mse_optimal = 0.0;
    ForecastModel optimal_model = ForecastModel::naive;
    double mse_traditional = 0.0;
    ForecastModel traditional_model = ForecastModel::naive;
    std::vector<ClassifierKind> classifiers;
    std::vector<double> mse_msic;                      // parallel to classifiers
    std::vector<ForecastModel> msic_model;             // parallel to classifiers
    std::vector<std::optional<double>> gap_reduction;  // empty when not applicable
    std::optional<double> gap_reduction_traditional;   // always 0 when applicable
};

/// Score MSIC variants against the traditional baseline on the series' final
/// horizon points. `pool` restricts the forecaster catalog (test hook).
std::vector<BenchmarkRow> benchmark(const QuarterlySeries& series, const std::vector<int>& p1_list,
                                    const std::vector<ClassifierKind>& classifier_kinds,
                                    int chunk_span, int horizon, std::uint64_t seed,
                                    const std::vector<ForecastModel>* pool = nullptr);

} // namespace lossforecast
