#include "lossforecast/trees.hpp"

#include "lossforecast/errors.hpp"
#include "lossforecast/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace lossforecast {

double RegressionTree::predict(const std::vector<double>& row) const {
    int i = 0;
    while (!nodes[static_cast<std::size_t>(i)].leaf) {
        const Node& nd = nodes[static_cast<std::size_t>(i)];
        i = row[static_cast<std::size_t>(nd.feature)] <= nd.threshold ? nd.left : nd.right;
    }
    return nodes[static_cast<std::size_t>(i)].value;
}

double TreeEnsemble::predict(const std::vector<double>& row) const {
    double s = 0.0;
    for (const auto& t : trees) s += t.predict(row);
    if (kind == EnsembleKind::gbm)
        return base_prediction + shrinkage * s;
    return trees.empty() ? base_prediction : s / static_cast<double>(trees.size());
}

std::vector<double> TreeEnsemble::predict_all(
    const std::vector<std::vector<double>>& columns) const {
    std::size_t n = columns.empty() ? 0 : columns.front().size();
    std::vector<double> out(n);
    std::vector<double> row(columns.size());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t c = 0; c < columns.size(); ++c)
            row[c] = columns[c][i];
        out[i] = predict(row);
    }
    return out;
}

namespace {

struct SplitResult {
    bool found = false;
    int feature = -1;
    double threshold = 0.0;
    double gain = 0.0; // SSE reduction
};

/// Best split over the given feature subset. Thresholds are midpoints of
/// consecutive sorted unique values; ties in gain break toward the lowest
/// feature index, then the lowest threshold.
SplitResult best_split(const std::vector<std::vector<double>>& columns,
                       const std::vector<double>& y, const std::vector<int>& idx,
                       const std::vector<int>& features, int min_leaf) {
    std::size_t n = idx.size();
    double sum = 0.0, sumsq = 0.0;
    for (int i : idx) {
        sum += y[static_cast<std::size_t>(i)];
        sumsq += y[static_cast<std::size_t>(i)] * y[static_cast<std::size_t>(i)];
    }
    double parent_sse = sumsq - sum * sum / static_cast<double>(n);

    SplitResult best;
    std::vector<int> order;
    for (int f : features) {
        const auto& col = columns[static_cast<std::size_t>(f)];
        order = idx;
        std::sort(order.begin(), order.end(), [&](int a, int b) {
            double va = col[static_cast<std::size_t>(a)], vb = col[static_cast<std::size_t>(b)];
            return va < vb || (va == vb && a < b);
        });

        double left_sum = 0.0, left_sumsq = 0.0;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            double yi = y[static_cast<std::size_t>(order[i])];
            left_sum += yi;
            left_sumsq += yi * yi;
            double v = col[static_cast<std::size_t>(order[i])];
            double vnext = col[static_cast<std::size_t>(order[i + 1])];
            if (v == vnext)
                continue;
            std::size_t nl = i + 1, nr = n - nl;
            if (nl < static_cast<std::size_t>(min_leaf) || nr < static_cast<std::size_t>(min_leaf))
                continue;
            double right_sum = sum - left_sum;
            double right_sumsq = sumsq - left_sumsq;
            double sse = (left_sumsq - left_sum * left_sum / static_cast<double>(nl)) +
                         (right_sumsq - right_sum * right_sum / static_cast<double>(nr));
            double gain = parent_sse - sse;
            double thr = (v + vnext) / 2.0;
            if (gain > best.gain ||
                (gain == best.gain && best.found &&
                 (f < best.feature || (f == best.feature && thr < best.threshold)))) {
                if (gain > 0.0) {
                    best.found = true;
                    best.feature = f;
                    best.threshold = thr;
                    best.gain = gain;
                }
            }
        }
    }
    return best;
}

int grow(RegressionTree& tree, const std::vector<std::vector<double>>& columns,
         const std::vector<double>& y, const std::vector<int>& idx, int depth, int max_depth,
         int min_leaf, int mtry, std::mt19937_64* engine, std::vector<double>& split_gain) {
    double mean = 0.0;
    for (int i : idx) mean += y[static_cast<std::size_t>(i)];
    mean /= static_cast<double>(idx.size());

    int node_id = static_cast<int>(tree.nodes.size());
    tree.nodes.push_back(RegressionTree::Node{true, mean, -1, 0.0, -1, -1});

    bool depth_ok = max_depth <= 0 || depth < max_depth;
    if (!depth_ok || idx.size() < 2 * static_cast<std::size_t>(min_leaf))
        return node_id;

    int p = static_cast<int>(columns.size());
    std::vector<int> features;
    if (mtry > 0 && mtry < p && engine) {
        std::vector<int> all(static_cast<std::size_t>(p));
        std::iota(all.begin(), all.end(), 0);
        for (int k = 0; k < mtry; ++k) {
            std::uniform_int_distribution<int> pick(k, p - 1);
            std::swap(all[static_cast<std::size_t>(k)], all[static_cast<std::size_t>(pick(*engine))]);
        }
        features.assign(all.begin(), all.begin() + mtry);
        std::sort(features.begin(), features.end());
    } else {
        features.resize(static_cast<std::size_t>(p));
        std::iota(features.begin(), features.end(), 0);
    }

    SplitResult split = best_split(columns, y, idx, features, min_leaf);
    if (!split.found)
        return node_id;

    split_gain[static_cast<std::size_t>(split.feature)] += split.gain;

    std::vector<int> left_idx, right_idx;
    const auto& col = columns[static_cast<std::size_t>(split.feature)];
    for (int i : idx) {
        if (col[static_cast<std::size_t>(i)] <= split.threshold)
            left_idx.push_back(i);
        else
            right_idx.push_back(i);
    }

    int left = grow(tree, columns, y, left_idx, depth + 1, max_depth, min_leaf, mtry, engine,
                    split_gain);
    int right = grow(tree, columns, y, right_idx, depth + 1, max_depth, min_leaf, mtry, engine,
                     split_gain);

    RegressionTree::Node& nd = tree.nodes[static_cast<std::size_t>(node_id)];
    nd.leaf = false;
    nd.feature = split.feature;
    nd.threshold = split.threshold;
    nd.left = left;
    nd.right = right;
    return node_id;
}

RegressionTree fit_tree(const std::vector<std::vector<double>>& columns,
                        const std::vector<double>& y, const std::vector<int>& idx,
                        int max_depth, int min_leaf, int mtry, std::mt19937_64* engine,
                        std::vector<double>& split_gain) {
    RegressionTree tree;
    grow(tree, columns, y, idx, 0, max_depth, min_leaf, mtry, engine, split_gain);
    return tree;
}

} // namespace

TreeEnsemble fit_gbm(const std::vector<std::vector<double>>& columns,
                     const std::vector<double>& y, const GbmParams& params) {
    std::size_t n = y.size();
    if (n < 2 * static_cast<std::size_t>(params.min_leaf))
        throw DataError("fit_gbm: too few rows for min_leaf");

    TreeEnsemble ens;
    ens.kind = EnsembleKind::gbm;
    ens.shrinkage = params.shrinkage;
    ens.split_gain.assign(columns.size(), 0.0);
    double mean = 0.0;
    for (double v : y) mean += v;
    ens.base_prediction = mean / static_cast<double>(n);

    std::vector<double> resid(n);
    for (std::size_t i = 0; i < n; ++i)
        resid[i] = y[i] - ens.base_prediction;

    std::vector<int> all(n);
    std::iota(all.begin(), all.end(), 0);

    for (int t = 0; t < params.n_trees; ++t) {
        std::vector<int> idx;
        if (params.subsample < 1.0) {
            auto engine = make_engine(params.seed, 0x67626d /*gbm*/, static_cast<std::uint64_t>(t));
            std::vector<int> pool = all;
            std::size_t m = std::max<std::size_t>(
                2 * static_cast<std::size_t>(params.min_leaf),
                static_cast<std::size_t>(params.subsample * static_cast<double>(n)));
            m = std::min(m, n);
            for (std::size_t k = 0; k < m; ++k) {
                std::uniform_int_distribution<std::size_t> pick(k, n - 1);
                std::swap(pool[k], pool[pick(engine)]);
            }
            idx.assign(pool.begin(), pool.begin() + static_cast<long>(m));
            std::sort(idx.begin(), idx.end());
        } else {
            idx = all;
        }

        RegressionTree tree =
            fit_tree(columns, resid, idx, params.max_depth, params.min_leaf, 0, nullptr,
                     ens.split_gain);

        std::vector<double> row(columns.size());
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t c = 0; c < columns.size(); ++c)
                row[c] = columns[c][i];
            resid[i] -= params.shrinkage * tree.predict(row);
        }
        ens.trees.push_back(std::move(tree));
    }
    return ens;
}

TreeEnsemble fit_random_forest(const std::vector<std::vector<double>>& columns,
                               const std::vector<double>& y, const RfParams& params) {
    std::size_t n = y.size();
    int p = static_cast<int>(columns.size());
    if (n < 2 * static_cast<std::size_t>(params.min_leaf))
        throw DataError("fit_random_forest: too few rows for min_leaf");
    int mtry = params.mtry <= 0 ? p : params.mtry;
    if (mtry > p)
        throw DataError("fit_random_forest: mtry > number of features");

    TreeEnsemble ens;
    ens.kind = EnsembleKind::rf;
    ens.split_gain.assign(columns.size(), 0.0);
    double mean = 0.0;
    for (double v : y) mean += v;
    ens.base_prediction = mean / static_cast<double>(n);

    for (int t = 0; t < params.n_trees; ++t) {
        auto engine = make_engine(params.seed, 0x7266 /*rf*/, static_cast<std::uint64_t>(t));
        std::vector<int> idx;
        if (params.bootstrap) {
            idx.resize(n);
            std::uniform_int_distribution<int> pick(0, static_cast<int>(n) - 1);
            for (std::size_t i = 0; i < n; ++i)
                idx[i] = pick(engine);
            std::sort(idx.begin(), idx.end());
        } else {
            idx.resize(n);
            std::iota(idx.begin(), idx.end(), 0);
        }
        ens.trees.push_back(fit_tree(columns, y, idx, params.max_depth, params.min_leaf,
                                     mtry < p ? mtry : 0, &engine, ens.split_gain));
    }
    return ens;
}

} // namespace lossforecast
