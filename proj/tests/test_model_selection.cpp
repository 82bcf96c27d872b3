#include <doctest.h>

#include "lossforecast/errors.hpp"
#include "lossforecast/model_selection.hpp"
#include "lossforecast/rng.hpp"

#include <cmath>
#include <random>
#include <vector>

using namespace lossforecast;

namespace {

FeatureMatrix signal_matrix(std::size_t n, std::size_t noise_cols, std::uint64_t seed) {
    auto engine = make_engine(seed, 0x6d73);
    std::normal_distribution<double> normal(0.0, 1.0);
    FeatureMatrix m;
    m.start = Quarter(1985, 1);
    m.rows = n;
    m.X.assign(noise_cols + 1, std::vector<double>(n));
    m.y.assign(n, 0.0);
    m.column_labels.emplace_back("signal", 0);
    for (std::size_t j = 0; j < noise_cols; ++j)
        m.column_labels.emplace_back("noise" + std::to_string(j), 0);
    for (std::size_t j = 0; j <= noise_cols; ++j)
        for (std::size_t i = 0; i < n; ++i)
            m.X[j][i] = normal(engine);
    for (std::size_t i = 0; i < n; ++i)
        m.y[i] = 1.5 * m.X[0][i] + 0.02 * normal(engine);
    return m;
}

} // namespace

TEST_CASE("learner names round trip") {
    for (LearnerKind k : {LearnerKind::lasso, LearnerKind::ridge, LearnerKind::gbm,
                          LearnerKind::rf})
        CHECK(learner_from_name(learner_name(k)) == k);
    CHECK_THROWS_AS(learner_from_name("mystery"), ParseError);
}

TEST_CASE("relative importance normalization") {
    FeatureMatrix m = signal_matrix(100, 3, 2);
    FittedModel fit = fit_learner(LearnerKind::lasso, m.X, m.y, LearnerParams{0.05, {}, {}}, 1);
    std::vector<double> imp = relative_importance(fit);
    double mx = 0.0;
    for (double v : imp)
        mx = std::max(mx, v);
    CHECK(mx == doctest::Approx(1.0));
    CHECK(imp[0] == doctest::Approx(1.0)); // the signal column dominates
}

TEST_CASE("all-zero importances stay zero") {
    FeatureMatrix m = signal_matrix(60, 2, 3);
    // lambda far above the kill threshold zeroes every coefficient
    FittedModel fit = fit_learner(LearnerKind::lasso, m.X, m.y, LearnerParams{1e3, {}, {}}, 1);
    for (double v : relative_importance(fit))
        CHECK(v == 0.0);
}

TEST_CASE("hyperparameter_search basics") {
    FeatureMatrix m = signal_matrix(80, 2, 5);
    std::vector<LearnerParams> one{LearnerParams{0.123, {}, {}}};
    LearnerParams picked = hyperparameter_search(LearnerKind::ridge, m.X, m.y, one, 4, 7);
    CHECK(picked.lambda == doctest::Approx(0.123));

    std::vector<LearnerParams> two{LearnerParams{0.0, {}, {}}, LearnerParams{1e6, {}, {}}};
    LearnerParams best = hyperparameter_search(LearnerKind::ridge, m.X, m.y, two, 4, 7);
    CHECK(best.lambda == 0.0);

    LearnerParams again = hyperparameter_search(LearnerKind::ridge, m.X, m.y, two, 4, 7);
    CHECK(again.lambda == best.lambda);

    CHECK_THROWS_AS(hyperparameter_search(LearnerKind::ridge, m.X, m.y, {}, 4, 7), GridEmpty);
}

TEST_CASE("lasso_feature_select keeps exactly the signal column") {
    FeatureMatrix m = signal_matrix(200, 5, 11);
    SelectionResult sel = lasso_feature_select(m, FeatureMode::optimal_lags, 13);
    REQUIRE(sel.selected.size() == 1);
    CHECK(sel.selected[0].indicator_id == "signal");
    CHECK(sel.selected[0].importance > 0.2);
    for (const SelectedFeature& sf : sel.selected)
        CHECK(sf.importance > 0.2);
}

TEST_CASE("selection set invariant under positive column rescaling") {
    FeatureMatrix m = signal_matrix(150, 4, 17);
    SelectionResult base = lasso_feature_select(m, FeatureMode::all_lags, 19);
    FeatureMatrix scaled = m;
    for (double& v : scaled.X[2])
        v *= 37.0;
    SelectionResult rescaled = lasso_feature_select(scaled, FeatureMode::all_lags, 19);
    REQUIRE(base.selected.size() == rescaled.selected.size());
    for (std::size_t i = 0; i < base.selected.size(); ++i)
        CHECK(base.selected[i].indicator_id == rescaled.selected[i].indicator_id);
}

TEST_CASE("train_and_evaluate splits, reports, picks min test MSE") {
    FeatureMatrix m = signal_matrix(60, 2, 23);
    Quarter split = m.start.plus(40);
    EvaluationResult res = train_and_evaluate(m, split, {LearnerKind::ridge}, 3);
    CHECK(res.reports.size() == 1);
    CHECK(res.split_row == 40);
    CHECK(res.reports[0].train.n == 40);
    CHECK(res.reports[0].test.n == 20);

    EvaluationResult multi =
        train_and_evaluate(m, split, {LearnerKind::lasso, LearnerKind::ridge}, 3);
    double best = multi.reports[multi.best_index].test.mse;
    for (const LearnerReport& rep : multi.reports)
        CHECK(best <= rep.test.mse);

    CHECK_THROWS_AS(train_and_evaluate(m, m.start.plus(3), {LearnerKind::ridge}, 3),
                    SplitOutOfRange);
    CHECK_THROWS_AS(train_and_evaluate(m, m.start.plus(58), {LearnerKind::ridge}, 3),
                    SplitOutOfRange);
}

TEST_CASE("default grids have the documented shapes") {
    CHECK(default_grid(LearnerKind::lasso, 10).size() == 50);
    CHECK(default_grid(LearnerKind::ridge, 10).size() == 50);
    CHECK(default_grid(LearnerKind::gbm, 10).size() == 12);
    CHECK(default_grid(LearnerKind::rf, 10).size() == 6);
}
