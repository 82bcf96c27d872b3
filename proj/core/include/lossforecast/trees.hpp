#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace lossforecast {

/// Axis-aligned regression tree with constant leaves, stored as a flat node array.
struct RegressionTree {
    struct Node {
        bool leaf = true;
        double value = 0.0;  // leaf prediction
        int feature = -1;    // split feature
        double threshold = 0.0;
        int left = -1;
        int right = -1;
    };
    std::vector<Node> nodes;

    double predict(const std::vector<double>& row) const;
};

enum class EnsembleKind { gbm, rf };

struct TreeEnsemble {
    EnsembleKind kind = EnsembleKind::gbm;
    std::vector<RegressionTree> trees;
    double shrinkage = 1.0;       // gbm only
    double base_prediction = 0.0; // gbm: target mean
    std::vector<double> split_gain; // per-feature total SSE reduction over all trees

    /// gbm: base + shrinkage * sum of trees; rf: mean of trees.
    double predict(const std::vector<double>& row) const;
    std::vector<double> predict_all(const std::vector<std::vector<double>>& columns) const;
};

struct GbmParams {
    int n_trees = 100;
    int max_depth = 3;       // <= 0 means unlimited
    double shrinkage = 0.1;
    int min_leaf = 3;
    double subsample = 1.0;  // fraction, without replacement
    std::uint64_t seed = 0;
};

struct RfParams {
    int n_trees = 500;
    int max_depth = 0;       // <= 0 means unlimited
    int min_leaf = 3;
    int mtry = 0;            // 0 means all features
    bool bootstrap = true;   // test hook: disable resampling
    std::uint64_t seed = 0;
};

/// Least-squares gradient boosting: each tree fits current residuals on a
/// seeded subsample; greedy variance-reduction splits.
TreeEnsemble fit_gbm(const std::vector<std::vector<double>>& columns,
                     const std::vector<double>& y, const GbmParams& params);

/// Random forest regressor: bootstrap per tree, mtry features per split.
TreeEnsemble fit_random_forest(const std::vector<std::vector<double>>& columns,
                               const std::vector<double>& y, const RfParams& params);

} // namespace lossforecast
