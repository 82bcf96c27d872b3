#include "lossforecast/model_selection.hpp"

#include "lossforecast/errors.hpp"
#include "lossforecast/rng.hpp"
#include "lossforecast/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace lossforecast {

const char* learner_name(LearnerKind k) {
    switch (k) {
    case LearnerKind::lasso: return "lasso";
    case LearnerKind::ridge: return "ridge";
    case LearnerKind::gbm: return "gbm";
    case LearnerKind::rf: return "rf";
    }
    return "unknown";
}

LearnerKind learner_from_name(const std::string& name) {
    for (LearnerKind k : {LearnerKind::lasso, LearnerKind::ridge, LearnerKind::gbm,
                          LearnerKind::rf})
        if (name == learner_name(k))
            return k;
    throw ParseError("unknown learner '" + name + "'");
}

const char* feature_mode_name(FeatureMode m) {
    return m == FeatureMode::optimal_lags ? "optimal_lags" : "all_lags";
}

std::string LearnerParams::describe(LearnerKind kind) const {
    std::ostringstream os;
    switch (kind) {
    case LearnerKind::lasso:
    case LearnerKind::ridge:
        os << "lambda=" << lambda;
        break;
    case LearnerKind::gbm:
        os << "n_trees=" << gbm.n_trees << " max_depth=" << gbm.max_depth
           << " shrinkage=" << gbm.shrinkage << " min_leaf=" << gbm.min_leaf
           << " subsample=" << gbm.subsample;
        break;
    case LearnerKind::rf:
        os << "n_trees=" << rf.n_trees << " max_depth=" << rf.max_depth
           << " mtry=" << rf.mtry << " min_leaf=" << rf.min_leaf;
        break;
    }
    return os.str();
}

double FittedModel::predict(const std::vector<double>& raw_row) const {
    if (linear)
        return linear->predict(raw_row);
    return ensemble->predict(raw_row);
}

std::vector<double> FittedModel::predict_all(
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

FittedModel fit_learner(LearnerKind kind, const std::vector<std::vector<double>>& columns,
                        const std::vector<double>& y, const LearnerParams& params,
                        std::uint64_t seed) {
    FittedModel model;
    model.kind = kind;
    model.params = params;
    switch (kind) {
    case LearnerKind::lasso:
        model.linear = fit_lasso(standardize(columns, y), params.lambda);
        break;
    case LearnerKind::ridge:
        model.linear = fit_ridge(standardize(columns, y), params.lambda);
        break;
    case LearnerKind::gbm: {
        GbmParams p = params.gbm;
        p.seed = derive_seed(seed, 0x666974 /*fit*/, 1);
        model.ensemble = fit_gbm(columns, y, p);
        break;
    }
    case LearnerKind::rf: {
        RfParams p = params.rf;
        p.seed = derive_seed(seed, 0x666974, 2);
        model.ensemble = fit_random_forest(columns, y, p);
        break;
    }
    }
    return model;
}

std::vector<double> relative_importance(const FittedModel& fit) {
    std::vector<double> raw;
    if (fit.linear) {
        for (double b : fit.linear->beta_std)
            raw.push_back(std::fabs(b));
    } else {
        raw = fit.ensemble->split_gain;
    }
    double mx = 0.0;
    for (double v : raw) mx = std::max(mx, v);
    if (mx <= 0.0)
        return std::vector<double>(raw.size(), 0.0);
    for (double& v : raw) v /= mx;
    return raw;
}

std::vector<LearnerParams> default_grid(LearnerKind kind, std::size_t p) {
    std::vector<LearnerParams> grid;
    switch (kind) {
    case LearnerKind::lasso:
    case LearnerKind::ridge: {
        constexpr int kPoints = 50;
        double lo = std::log10(1e-4), hi = std::log10(1e1);
        for (int i = 0; i < kPoints; ++i) {
            LearnerParams lp;
            lp.lambda = std::pow(10.0, lo + (hi - lo) * i / (kPoints - 1));
            grid.push_back(lp);
        }
        break;
    }
    case LearnerKind::gbm:
        for (int n_trees : {100, 300})
            for (int depth : {1, 2, 3})
                for (double shrinkage : {0.05, 0.1}) {
                    LearnerParams lp;
                    lp.gbm.n_trees = n_trees;
                    lp.gbm.max_depth = depth;
                    lp.gbm.shrinkage = shrinkage;
                    lp.gbm.subsample = 0.8;
                    lp.gbm.min_leaf = 3;
                    grid.push_back(lp);
                }
        break;
    case LearnerKind::rf: {
        int mtry_a = static_cast<int>(std::ceil(static_cast<double>(p) / 3.0));
        int mtry_b = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(p))));
        for (int depth : {3, 6, 0})
            for (int mtry : {mtry_a, mtry_b}) {
                LearnerParams lp;
                lp.rf.n_trees = 500;
                lp.rf.max_depth = depth;
                lp.rf.mtry = std::min<int>(std::max(mtry, 1), static_cast<int>(p));
                lp.rf.min_leaf = 3;
                grid.push_back(lp);
            }
        break;
    }
    }
    return grid;
}

namespace {

std::vector<std::vector<double>> take_rows(const std::vector<std::vector<double>>& columns,
                                           const std::vector<std::size_t>& rows) {
    std::vector<std::vector<double>> out(columns.size());
    for (std::size_t c = 0; c < columns.size(); ++c) {
        out[c].reserve(rows.size());
        for (std::size_t r : rows)
            out[c].push_back(columns[c][r]);
    }
    return out;
}

std::vector<double> take(const std::vector<double>& v, const std::vector<std::size_t>& rows) {
    std::vector<double> out;
    out.reserve(rows.size());
    for (std::size_t r : rows)
        out.push_back(v[r]);
    return out;
}

double mse_of(const std::vector<double>& actual, const std::vector<double>& predicted) {
    double s = 0.0;
    for (std::size_t i = 0; i < actual.size(); ++i) {
        double d = actual[i] - predicted[i];
        s += d * d;
    }
    return s / static_cast<double>(actual.size());
}

} // namespace

LearnerParams hyperparameter_search(LearnerKind kind,
                                    const std::vector<std::vector<double>>& columns,
                                    const std::vector<double>& y,
                                    const std::vector<LearnerParams>& grid, int folds,
                                    std::uint64_t seed) {
    if (grid.empty())
        throw GridEmpty("hyperparameter_search: empty grid");
    if (folds < 2)
        throw DataError("hyperparameter_search: folds must be >= 2");

    std::size_t n = y.size();
    std::size_t best_idx = 0;
    double best_score = std::numeric_limits<double>::infinity();

    for (std::size_t g = 0; g < grid.size(); ++g) {
        double total = 0.0;
        int scored = 0;
        bool failed = false;
        for (int f = 0; f < folds && !failed; ++f) {
            std::size_t lo = n * static_cast<std::size_t>(f) / static_cast<std::size_t>(folds);
            std::size_t hi = n * static_cast<std::size_t>(f + 1) / static_cast<std::size_t>(folds);
            if (hi <= lo)
                continue;
            std::vector<std::size_t> train_rows, val_rows;
            for (std::size_t r = 0; r < n; ++r)
                (r >= lo && r < hi ? val_rows : train_rows).push_back(r);
            if (train_rows.size() < 2)
                continue;
            try {
                FittedModel model =
                    fit_learner(kind, take_rows(columns, train_rows), take(y, train_rows),
                                grid[g], derive_seed(seed, 0x6376 /*cv*/, g, static_cast<std::uint64_t>(f)));
                total += mse_of(take(y, val_rows), model.predict_all(take_rows(columns, val_rows)));
                ++scored;
            } catch (const Error&) {
                failed = true;
            }
        }
        if (failed || scored == 0)
            continue;
        double score = total / scored;
        if (score < best_score) {
            best_score = score;
            best_idx = g;
        }
    }
    if (!std::isfinite(best_score))
        throw NumericError("hyperparameter_search: every grid point failed");
    return grid[best_idx];
}

SelectionResult lasso_feature_select(const FeatureMatrix& matrix, FeatureMode mode,
                                     std::uint64_t seed) {
    std::vector<LearnerParams> grid = default_grid(LearnerKind::lasso, matrix.X.size());
    LearnerParams best = hyperparameter_search(LearnerKind::lasso, matrix.X, matrix.y, grid, 5,
                                               seed);
    FittedModel model = fit_learner(LearnerKind::lasso, matrix.X, matrix.y, best, seed);
    std::vector<double> imp = relative_importance(model);

    SelectionResult result;
    result.mode = mode;
    result.lambda = best.lambda;
    result.all_importances = imp;
    for (std::size_t c = 0; c < matrix.X.size(); ++c) {
        if (imp[c] > 0.2) {
            double r = stats::pearson_r(matrix.X[c], matrix.y);
            result.selected.push_back(SelectedFeature{matrix.column_labels[c].first,
                                                      matrix.column_labels[c].second, r, imp[c]});
        }
    }
    return result;
}

EvaluationResult train_and_evaluate(const FeatureMatrix& matrix, Quarter split_quarter,
                                    const std::vector<LearnerKind>& learners,
                                    std::uint64_t seed, int folds) {
    int split = matrix.row_of(split_quarter);
    if (split < 8 || split > static_cast<int>(matrix.rows) - 8)
        throw SplitOutOfRange("split quarter " + split_quarter.str() +
                              " leaves < 8 quarters on one side");
    std::size_t split_row = static_cast<std::size_t>(split);

    std::vector<std::size_t> train_rows, test_rows;
    for (std::size_t r = 0; r < matrix.rows; ++r)
        (r < split_row ? train_rows : test_rows).push_back(r);

    auto X_train = take_rows(matrix.X, train_rows);
    auto y_train = take(matrix.y, train_rows);
    auto X_test = take_rows(matrix.X, test_rows);
    auto y_test = take(matrix.y, test_rows);

    EvaluationResult result;
    result.split_row = split_row;
    double best_mse = std::numeric_limits<double>::infinity();
    for (std::size_t li = 0; li < learners.size(); ++li) {
        LearnerKind kind = learners[li];
        std::vector<LearnerParams> grid = default_grid(kind, matrix.X.size());
        LearnerParams params = hyperparameter_search(kind, X_train, y_train, grid, folds,
                                                     derive_seed(seed, 0x7475 /*tu*/, li));
        FittedModel model =
            fit_learner(kind, X_train, y_train, params, derive_seed(seed, 0x6d6f /*mo*/, li));

        LearnerReport rep;
        rep.kind = kind;
        rep.params = params;
        rep.train = metrics(y_train, model.predict_all(X_train));
        rep.test = metrics(y_test, model.predict_all(X_test));
        rep.model = std::move(model);
        if (rep.test.mse < best_mse) {
            best_mse = rep.test.mse;
            result.best_index = li;
        }
        result.reports.push_back(std::move(rep));
    }
    if (result.reports.empty())
        throw EmptyInput("train_and_evaluate: no learners given");
    return result;
}

} // namespace lossforecast
