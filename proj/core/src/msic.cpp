#include "lossforecast/msic.hpp"

#include "lossforecast/errors.hpp"
#include "lossforecast/rng.hpp"
#include "lossforecast/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>

namespace lossforecast {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::size_t catalog_index(ForecastModel m) {
    for (std::size_t i = 0; i < std::size(kForecasterCatalog); ++i)
        if (kForecasterCatalog[i] == m)
            return i;
    throw DataError("model not in catalog");
}

} // namespace

SeriesFeatures extract_features(const QuarterlySeries& series) {
    const std::vector<double>& y = series.values();
    std::size_t n = y.size();
    if (n < 8)
        throw SeriesTooShort("extract_features: need at least 8 quarters, got " +
                             std::to_string(n));

    SeriesFeatures f;
    double m = stats::mean(y);
    double sd = stats::sd_pop(y);
    f.v[0] = m;
    f.v[1] = sd;
    if (sd == 0.0) {
        f.degenerate = true;
    } else {
        f.v[2] = m != 0.0 ? sd / std::fabs(m) : 0.0;
        if (m == 0.0)
            f.degenerate = true;
        f.v[3] = stats::skewness(y);
        f.v[4] = stats::excess_kurtosis(y);

        // OLS slope of the standardized series against the quarter index
        double tm = (static_cast<double>(n) - 1.0) / 2.0;
        double num = 0.0, den = 0.0;
        for (std::size_t t = 0; t < n; ++t) {
            double dt = static_cast<double>(t) - tm;
            num += dt * (y[t] - m) / sd;
            den += dt * dt;
        }
        f.v[5] = num / den;

        for (std::size_t lagk = 1; lagk <= 4; ++lagk)
            f.v[5 + lagk] = stats::autocorrelation(y, lagk);

        std::vector<double> diff(n - 1);
        for (std::size_t t = 1; t < n; ++t)
            diff[t - 1] = y[t] - y[t - 1];
        f.v[10] = stats::sd_pop(diff) / sd;
    }
    if (m != 0.0)
        f.v[11] = y.back() / m;
    else
        f.degenerate = true;
    for (double v : f.v)
        if (!std::isfinite(v))
            throw NumericError("extract_features: non-finite feature");
    return f;
}

namespace {

std::vector<ChunkLabel> label_chunks_pool(const std::vector<QuarterlySeries>& chunks,
                                          int holdout_h, std::uint64_t seed,
                                          const std::vector<ForecastModel>& pool) {
    if (chunks.empty())
        throw EmptyInput("label_chunks: empty chunk list");
    std::vector<ChunkLabel> out;
    out.reserve(chunks.size());
    for (const QuarterlySeries& c : chunks) {
        if (c.size() < static_cast<std::size_t>(holdout_h) + 8)
            throw SeriesTooShort("label_chunks: chunk '" + c.id() + "' shorter than holdout + 8");
        ChunkLabel label{c, extract_features(c), ForecastModel::naive, {}};
        label.per_model_mse.fill(kInf);
        bool have = false;
        double best = kInf;
        for (ForecastModel m : pool) {
            double mse;
            try {
                mse = holdout_mse(m, c, holdout_h, seed);
            } catch (const Error&) {
                continue; // model unfittable on this chunk, mse stays +inf
            }
            label.per_model_mse[catalog_index(m)] = mse;
            if (!have || mse < best) {
                best = mse;
                label.best_model = m;
                have = true;
            }
        }
        if (!have)
            throw SeriesTooShort("label_chunks: no forecaster fits chunk '" + c.id() + "'");
        // snap float-dust ties toward catalog order so labels stay deterministic
        double tie = best + 1e-12 * (1.0 + best);
        for (ForecastModel m : kForecasterCatalog)
            if (label.per_model_mse[catalog_index(m)] <= tie) {
                label.best_model = m;
                break;
            }
        out.push_back(std::move(label));
    }
    return out;
}

} // namespace

std::vector<ChunkLabel> label_chunks(const std::vector<QuarterlySeries>& chunks, int holdout_h,
                                     std::uint64_t seed) {
    std::vector<ForecastModel> pool(std::begin(kForecasterCatalog), std::end(kForecasterCatalog));
    return label_chunks_pool(chunks, holdout_h, seed, pool);
}

const char* classifier_kind_name(ClassifierKind k) {
    switch (k) {
    case ClassifierKind::logistic_regression: return "logistic_regression";
    case ClassifierKind::linear_svm: return "linear_svm";
    case ClassifierKind::decision_tree: return "decision_tree";
    }
    return "unknown";
}

ClassifierKind classifier_kind_from_name(const std::string& name) {
    if (name == "logistic_regression" || name == "lr")
        return ClassifierKind::logistic_regression;
    if (name == "linear_svm" || name == "svm")
        return ClassifierKind::linear_svm;
    if (name == "decision_tree" || name == "dt")
        return ClassifierKind::decision_tree;
    throw ParseError("unknown classifier '" + name + "'");
}

namespace {

using FeatRow = std::array<double, kSeriesFeatureCount>;

double score_linear(const std::vector<double>& w, const FeatRow& x) {
    double s = w[kSeriesFeatureCount]; // bias
    for (std::size_t j = 0; j < kSeriesFeatureCount; ++j)
        s += w[j] * x[j];
    return s;
}

/// Multinomial softmax with L2 penalty 1e-4 on the non-bias weights,
/// full-batch gradient descent with an adaptive step, run until the gradient
/// norm drops below 1e-6.
std::vector<std::vector<double>> fit_logistic(const std::vector<FeatRow>& X,
                                              const std::vector<int>& y, std::size_t n_classes) {
    const double l2 = 1e-4;
    const std::size_t n = X.size();
    const std::size_t d = kSeriesFeatureCount + 1;
    std::vector<std::vector<double>> W(n_classes, std::vector<double>(d, 0.0));

    auto loss_and_grad = [&](const std::vector<std::vector<double>>& w,
                             std::vector<std::vector<double>>* grad) {
        if (grad)
            for (auto& g : *grad)
                std::fill(g.begin(), g.end(), 0.0);
        double loss = 0.0;
        std::vector<double> s(n_classes);
        for (std::size_t i = 0; i < n; ++i) {
            double smax = -kInf;
            for (std::size_t k = 0; k < n_classes; ++k) {
                s[k] = score_linear(w[k], X[i]);
                smax = std::max(smax, s[k]);
            }
            double z = 0.0;
            for (std::size_t k = 0; k < n_classes; ++k) {
                s[k] = std::exp(s[k] - smax);
                z += s[k];
            }
            loss -= std::log(s[static_cast<std::size_t>(y[i])] / z);
            if (grad) {
                for (std::size_t k = 0; k < n_classes; ++k) {
                    double p = s[k] / z;
                    double err = p - (static_cast<int>(k) == y[i] ? 1.0 : 0.0);
                    for (std::size_t j = 0; j < kSeriesFeatureCount; ++j)
                        (*grad)[k][j] += err * X[i][j] / static_cast<double>(n);
                    (*grad)[k][kSeriesFeatureCount] += err / static_cast<double>(n);
                }
            }
        }
        loss /= static_cast<double>(n);
        for (std::size_t k = 0; k < n_classes; ++k)
            for (std::size_t j = 0; j < kSeriesFeatureCount; ++j) {
                loss += 0.5 * l2 * w[k][j] * w[k][j];
                if (grad)
                    (*grad)[k][j] += l2 * w[k][j];
            }
        return loss;
    };

    std::vector<std::vector<double>> grad(n_classes, std::vector<double>(d, 0.0));
    double step = 1.0;
    double loss = loss_and_grad(W, &grad);
    for (int it = 0; it < 200000; ++it) {
        double gnorm = 0.0;
        for (const auto& g : grad)
            for (double v : g)
                gnorm += v * v;
        if (std::sqrt(gnorm) < 1e-6)
            break;
        std::vector<std::vector<double>> trial = W;
        for (std::size_t k = 0; k < n_classes; ++k)
            for (std::size_t j = 0; j < d; ++j)
                trial[k][j] -= step * grad[k][j];
        double trial_loss = loss_and_grad(trial, nullptr);
        if (trial_loss <= loss) {
            W = std::move(trial);
            loss = trial_loss;
            loss_and_grad(W, &grad);
            step *= 1.1;
        } else {
            step *= 0.5;
            if (step < 1e-14)
                break;
        }
    }
    return W;
}

/// One-vs-rest hinge loss with L2 penalty 1e-3, full-batch subgradient descent
/// with iterate averaging over 10,000 steps.
std::vector<std::vector<double>> fit_linear_svm(const std::vector<FeatRow>& X,
                                                const std::vector<int>& y,
                                                std::size_t n_classes) {
    const double l2 = 1e-3;
    const std::size_t n = X.size();
    const std::size_t d = kSeriesFeatureCount + 1;
    const int steps = 10000;

    std::vector<std::vector<double>> out;
    out.reserve(n_classes);
    for (std::size_t k = 0; k < n_classes; ++k) {
        std::vector<double> w(d, 0.0), avg(d, 0.0);
        for (int t = 1; t <= steps; ++t) {
            std::vector<double> g(d, 0.0);
            for (std::size_t j = 0; j < kSeriesFeatureCount; ++j)
                g[j] = l2 * w[j];
            for (std::size_t i = 0; i < n; ++i) {
                double target = y[i] == static_cast<int>(k) ? 1.0 : -1.0;
                if (target * score_linear(w, X[i]) < 1.0) {
                    for (std::size_t j = 0; j < kSeriesFeatureCount; ++j)
                        g[j] -= target * X[i][j] / static_cast<double>(n);
                    g[kSeriesFeatureCount] -= target / static_cast<double>(n);
                }
            }
            double eta = 1.0 / (l2 * static_cast<double>(t));
            for (std::size_t j = 0; j < d; ++j) {
                w[j] -= eta * g[j];
                avg[j] += (w[j] - avg[j]) / static_cast<double>(t);
            }
        }
        out.push_back(std::move(avg));
    }
    return out;
}

double gini(const std::vector<std::size_t>& counts, std::size_t total) {
    if (total == 0)
        return 0.0;
    double g = 1.0;
    for (std::size_t c : counts) {
        double p = static_cast<double>(c) / static_cast<double>(total);
        g -= p * p;
    }
    return g;
}

int majority_label(const std::vector<int>& y, const std::vector<std::size_t>& idx,
                   std::size_t n_classes) {
    std::vector<std::size_t> counts(n_classes, 0);
    for (std::size_t i : idx)
        ++counts[static_cast<std::size_t>(y[i])];
    return static_cast<int>(std::max_element(counts.begin(), counts.end()) - counts.begin());
}

int grow_cls_tree(std::vector<ClsNode>& nodes, const std::vector<FeatRow>& X,
                  const std::vector<int>& y, std::vector<std::size_t> idx, int depth,
                  std::size_t n_classes) {
    constexpr int max_depth = 6;
    constexpr std::size_t min_leaf = 3;

    auto make_leaf = [&] {
        ClsNode leaf;
        leaf.label = majority_label(y, idx, n_classes);
        nodes.push_back(leaf);
        return static_cast<int>(nodes.size() - 1);
    };

    std::vector<std::size_t> total_counts(n_classes, 0);
    for (std::size_t i : idx)
        ++total_counts[static_cast<std::size_t>(y[i])];
    double parent_gini = gini(total_counts, idx.size());
    if (depth >= max_depth || idx.size() < 2 * min_leaf || parent_gini == 0.0)
        return make_leaf();

    int best_feature = -1;
    double best_threshold = 0.0;
    double best_score = kInf; // weighted child impurity
    for (std::size_t j = 0; j < kSeriesFeatureCount; ++j) {
        std::vector<std::size_t> order = idx;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return X[a][j] < X[b][j];
        });
        std::vector<std::size_t> left_counts(n_classes, 0);
        for (std::size_t pos = 0; pos + 1 < order.size(); ++pos) {
            ++left_counts[static_cast<std::size_t>(y[order[pos]])];
            std::size_t n_left = pos + 1;
            std::size_t n_right = order.size() - n_left;
            if (n_left < min_leaf || n_right < min_leaf)
                continue;
            if (X[order[pos]][j] == X[order[pos + 1]][j])
                continue;
            std::vector<std::size_t> right_counts(n_classes);
            for (std::size_t k = 0; k < n_classes; ++k)
                right_counts[k] = total_counts[k] - left_counts[k];
            double score = (static_cast<double>(n_left) * gini(left_counts, n_left) +
                            static_cast<double>(n_right) * gini(right_counts, n_right)) /
                           static_cast<double>(order.size());
            if (score < best_score - 1e-15) {
                best_score = score;
                best_feature = static_cast<int>(j);
                best_threshold = 0.5 * (X[order[pos]][j] + X[order[pos + 1]][j]);
            }
        }
    }
    if (best_feature < 0 || best_score >= parent_gini - 1e-15)
        return make_leaf();

    std::vector<std::size_t> left_idx, right_idx;
    for (std::size_t i : idx) {
        if (X[i][static_cast<std::size_t>(best_feature)] <= best_threshold)
            left_idx.push_back(i);
        else
            right_idx.push_back(i);
    }
    ClsNode node;
    node.feature = best_feature;
    node.threshold = best_threshold;
    nodes.push_back(node);
    int self = static_cast<int>(nodes.size() - 1);
    int left = grow_cls_tree(nodes, X, y, std::move(left_idx), depth + 1, n_classes);
    int right = grow_cls_tree(nodes, X, y, std::move(right_idx), depth + 1, n_classes);
    nodes[static_cast<std::size_t>(self)].left = left;
    nodes[static_cast<std::size_t>(self)].right = right;
    return self;
}

} // namespace

ForecastModel MsicModel::predict(const SeriesFeatures& f) const {
    if (constant || classes.size() == 1)
        return classes.front();
    FeatRow x;
    for (std::size_t j = 0; j < kSeriesFeatureCount; ++j)
        x[j] = (f.v[j] - feat_mean[j]) / feat_sd[j];
    if (kind == ClassifierKind::decision_tree) {
        int node = 0;
        while (tree[static_cast<std::size_t>(node)].feature >= 0) {
            const ClsNode& nd = tree[static_cast<std::size_t>(node)];
            node = x[static_cast<std::size_t>(nd.feature)] <= nd.threshold ? nd.left : nd.right;
        }
        return classes[static_cast<std::size_t>(tree[static_cast<std::size_t>(node)].label)];
    }
    std::size_t best = 0;
    double best_score = -kInf;
    for (std::size_t k = 0; k < classes.size(); ++k) {
        double s = score_linear(weights[k], x);
        if (s > best_score) {
            best_score = s;
            best = k;
        }
    }
    return classes[best];
}

MsicModel train_msic(const std::vector<ChunkLabel>& labels, ClassifierKind kind,
                     std::uint64_t seed) {
    (void)seed; // training is deterministic; kept for interface stability
    if (labels.empty())
        throw EmptyInput("train_msic: no labeled chunks");

    MsicModel model;
    model.kind = kind;

    std::set<ForecastModel> distinct;
    for (const ChunkLabel& l : labels)
        distinct.insert(l.best_model);
    for (ForecastModel m : kForecasterCatalog)
        if (distinct.count(m))
            model.classes.push_back(m);

    if (model.classes.size() == 1) {
        model.constant = true;
        model.feat_sd.fill(1.0);
        return model;
    }
    if (labels.size() < 4)
        throw DataError("train_msic: need at least 4 chunks for a multi-class pool");

    std::size_t n = labels.size();
    std::vector<FeatRow> X(n);
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        X[i] = labels[i].features.v;
        y[i] = static_cast<int>(std::find(model.classes.begin(), model.classes.end(),
                                          labels[i].best_model) -
                                model.classes.begin());
    }

    for (std::size_t j = 0; j < kSeriesFeatureCount; ++j) {
        std::vector<double> col(n);
        for (std::size_t i = 0; i < n; ++i)
            col[i] = X[i][j];
        model.feat_mean[j] = stats::mean(col);
        double sd = stats::sd_pop(col);
        model.feat_sd[j] = sd > 0.0 ? sd : 1.0;
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < kSeriesFeatureCount; ++j)
            X[i][j] = (X[i][j] - model.feat_mean[j]) / model.feat_sd[j];

    std::size_t n_classes = model.classes.size();
    switch (kind) {
    case ClassifierKind::logistic_regression:
        model.weights = fit_logistic(X, y, n_classes);
        break;
    case ClassifierKind::linear_svm:
        model.weights = fit_linear_svm(X, y, n_classes);
        break;
    case ClassifierKind::decision_tree: {
        std::vector<std::size_t> idx(n);
        std::iota(idx.begin(), idx.end(), 0);
        grow_cls_tree(model.tree, X, y, std::move(idx), 0, n_classes);
        break;
    }
    }
    return model;
}

std::pair<ForecastModel, Forecast> msic_select(const MsicModel& model,
                                               const QuarterlySeries& series, int horizon,
                                               std::uint64_t seed) {
    if (model.classes.empty())
        throw DataError("msic_select: untrained model");
    ForecastModel chosen = model.predict(extract_features(series));
    Forecast fc = forecast_with(chosen, series, horizon, seed);
    return {chosen, fc};
}

namespace {

TraditionalResult traditional_selection_pool(const QuarterlySeries& series, int p1, int horizon,
                                             std::uint64_t seed,
                                             const std::vector<ForecastModel>& pool) {
    std::size_t n = series.size();
    if (p1 < 8 || static_cast<std::size_t>(p1) > n - 1)
        throw P1OutOfRange("traditional_selection: p1 = " + std::to_string(p1) +
                           " outside [8, " + std::to_string(n - 1) + "]");

    QuarterlySeries head = series.slice(0, static_cast<std::size_t>(p1));
    int val_h = static_cast<int>(n) - p1;
    std::vector<double> actual(series.values().end() - val_h, series.values().end());

    TraditionalResult result;
    result.validation_mse.fill(kInf);
    bool have = false;
    double best = kInf;
    for (ForecastModel m : pool) {
        double mse;
        try {
            Forecast fc = forecast_with(m, head, val_h, seed);
            double sse = 0.0;
            for (int i = 0; i < val_h; ++i) {
                double e = actual[static_cast<std::size_t>(i)] -
                           fc.values[static_cast<std::size_t>(i)];
                sse += e * e;
            }
            mse = sse / static_cast<double>(val_h);
        } catch (const Error&) {
            continue;
        }
        result.validation_mse[catalog_index(m)] = mse;
        if (!have || mse < best) {
            best = mse;
            result.best_model = m;
            have = true;
        }
    }
    if (!have)
        throw SeriesTooShort("traditional_selection: no forecaster fits the training span");
    double tie = best + 1e-12 * (1.0 + best);
    for (ForecastModel m : kForecasterCatalog)
        if (result.validation_mse[catalog_index(m)] <= tie) {
            result.best_model = m;
            break;
        }
    result.forecast = forecast_with(result.best_model, series, horizon, seed);
    return result;
}

} // namespace

TraditionalResult traditional_selection(const QuarterlySeries& series, int p1, int horizon,
                                        std::uint64_t seed) {
    std::vector<ForecastModel> pool(std::begin(kForecasterCatalog), std::end(kForecasterCatalog));
    return traditional_selection_pool(series, p1, horizon, seed, pool);
}

double optimality_gap_reduction(double mse_optimal, double mse_traditional, double mse_method) {
    if (mse_traditional <= mse_optimal + 1e-12)
        throw DegenerateGap("gap reduction undefined: traditional MSE matches the oracle");
    return 100.0 * (mse_traditional - mse_method) / (mse_traditional - mse_optimal);
}

std::vector<BenchmarkRow> benchmark(const QuarterlySeries& series, const std::vector<int>& p1_list,
                                    const std::vector<ClassifierKind>& classifier_kinds,
                                    int chunk_span, int horizon, std::uint64_t seed,
                                    const std::vector<ForecastModel>* pool_opt) {
    if (p1_list.empty())
        throw EmptyInput("benchmark: empty p1 list");
    std::vector<ForecastModel> pool;
    if (pool_opt)
        pool = *pool_opt;
    else
        pool.assign(std::begin(kForecasterCatalog), std::end(kForecasterCatalog));

    std::size_t n = series.size();
    std::size_t h = static_cast<std::size_t>(horizon);
    if (n <= h + 8)
        throw SeriesTooShort("benchmark: series too short for the holdout");
    QuarterlySeries work = series.slice(0, n - h);
    std::vector<double> actual(series.values().end() - horizon, series.values().end());

    auto score_forecast = [&](const Forecast& fc) {
        double sse = 0.0;
        for (int i = 0; i < horizon; ++i) {
            double e = actual[static_cast<std::size_t>(i)] - fc.values[static_cast<std::size_t>(i)];
            sse += e * e;
        }
        return sse / static_cast<double>(horizon);
    };

    // oracle: the best single forecaster on the holdout
    double mse_optimal = kInf;
    ForecastModel optimal_model = pool.front();
    for (ForecastModel m : pool) {
        try {
            double mse = score_forecast(forecast_with(m, work, horizon, seed));
            if (mse < mse_optimal) {
                mse_optimal = mse;
                optimal_model = m;
            }
        } catch (const Error&) {
        }
    }
    if (!std::isfinite(mse_optimal))
        throw SeriesTooShort("benchmark: no forecaster fits the series");

    std::vector<QuarterlySeries> chunks = chunk(work, chunk_span);
    std::vector<ChunkLabel> labels = label_chunks_pool(chunks, horizon, seed, pool);

    std::vector<double> msic_mse;
    std::vector<ForecastModel> msic_model;
    for (ClassifierKind kind : classifier_kinds) {
        MsicModel model = train_msic(labels, kind, seed);
        ForecastModel chosen;
        Forecast fc;
        try {
            std::tie(chosen, fc) = msic_select(model, work, horizon, seed);
        } catch (const SeriesTooShort&) {
            chosen = ForecastModel::naive;
            fc = forecast_with(chosen, work, horizon, seed);
            fc.fallback = true;
        }
        msic_mse.push_back(score_forecast(fc));
        msic_model.push_back(chosen);
    }

    std::vector<BenchmarkRow> rows;
    for (int p1 : p1_list) {
        TraditionalResult trad = traditional_selection_pool(work, p1, horizon, seed, pool);
        BenchmarkRow row;
        row.series_id = series.id();
        row.p1 = p1;
        row.mse_optimal = mse_optimal;
        row.optimal_model = optimal_model;
        row.mse_traditional = score_forecast(trad.forecast);
        row.traditional_model = trad.best_model;
        row.classifiers = classifier_kinds;
        row.mse_msic = msic_mse;
        row.msic_model = msic_model;
        for (double mse : msic_mse) {
            try {
                row.gap_reduction.emplace_back(
                    optimality_gap_reduction(mse_optimal, row.mse_traditional, mse));
            } catch (const DegenerateGap&) {
                row.gap_reduction.emplace_back(std::nullopt);
            }
        }
        try {
            row.gap_reduction_traditional = optimality_gap_reduction(
                mse_optimal, row.mse_traditional, row.mse_traditional);
        } catch (const DegenerateGap&) {
            row.gap_reduction_traditional = std::nullopt;
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

} // namespace lossforecast
