#pragma once

#include "lossforecast/features.hpp"
#include "lossforecast/linear_models.hpp"
#include "lossforecast/series.hpp"
#include "lossforecast/trees.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace lossforecast {

enum class LearnerKind { lasso, ridge, gbm, rf };

const char* learner_name(LearnerKind k);
LearnerKind learner_from_name(const std::string& name);

/// One hyperparameter grid point; only the members for the learner kind matter.
struct LearnerParams {
    double lambda = 0.0;
    GbmParams gbm;
    RfParams rf;

    std::string describe(LearnerKind kind) const;
};

struct FittedModel {
    LearnerKind kind = LearnerKind::lasso;
    LearnerParams params;
    std::optional<LinearFit> linear;
    std::optional<TreeEnsemble> ensemble;

    double predict(const std::vector<double>& raw_row) const;
    std::vector<double> predict_all(const std::vector<std::vector<double>>& columns) const;
};

/// Fit one learner on raw (unstandardized) feature columns. Linear learners
/// standardize internally; the seed feeds tree randomness only.
FittedModel fit_learner(LearnerKind kind, const std::vector<std::vector<double>>& columns,
                        const std::vector<double>& y, const LearnerParams& params,
                        std::uint64_t seed);

/// Per-column importance in [0,1], max-normalized. Linear: |standardized
/// coefficient|; trees: total split SSE reduction. All-zero input stays zero.
std::vector<double> relative_importance(const FittedModel& fit);

enum class FeatureMode { optimal_lags, all_lags };
const char* feature_mode_name(FeatureMode m);

struct SelectedFeature {
    std::string indicator_id;
    int lag = 0;
    double r = 0.0;
    double importance = 0.0;
};

struct SelectionResult {
    FeatureMode mode = FeatureMode::optimal_lags;
    double lambda = 0.0;               // chosen Lasso penalty
    std::vector<SelectedFeature> selected; // importance > 0.2, strict
    std::vector<double> all_importances;   // per matrix column
};

/// Grids from the project defaults; p = number of feature columns.
std::vector<LearnerParams> default_grid(LearnerKind kind, std::size_t p);

/// Contiguous time-ordered k-fold cross-validation; best = min mean validation
/// MSE, ties toward earlier grid entries.
LearnerParams hyperparameter_search(LearnerKind kind,
                                    const std::vector<std::vector<double>>& columns,
                                    const std::vector<double>& y,
                                    const std::vector<LearnerParams>& grid, int folds,
                                    std::uint64_t seed);

/// Lasso-based feature selection at the strict 0.2 importance threshold.
/// An empty selection is returned as-is; callers decide whether to abort.
SelectionResult lasso_feature_select(const FeatureMatrix& matrix, FeatureMode mode,
                                     std::uint64_t seed);

struct LearnerReport {
    LearnerKind kind = LearnerKind::lasso;
    FittedModel model;
    LearnerParams params;
    MetricReport train;
    MetricReport test;
};

struct EvaluationResult {
    std::vector<LearnerReport> reports;
    std::size_t best_index = 0; // min test MSE
    std::size_t split_row = 0;  // first test row
};

/// Tune each learner on the training partition only, refit on the full
/// training range, evaluate on both partitions. Best learner = min test MSE.
EvaluationResult train_and_evaluate(const FeatureMatrix& matrix, Quarter split_quarter,
                                    const std::vector<LearnerKind>& learners,
                                    std::uint64_t seed, int folds = 5);

} // namespace lossforecast
