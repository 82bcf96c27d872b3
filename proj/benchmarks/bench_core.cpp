// Microbenchmarks for the hot paths: penalized linear fits, tree ensembles,
// smoothing forecasters, chunk labeling, and the transform search.

#include "lossforecast/forecasters.hpp"
#include "lossforecast/linear_models.hpp"
#include "lossforecast/msic.hpp"
#include "lossforecast/rng.hpp"
#include "lossforecast/series.hpp"
#include "lossforecast/transforms.hpp"
#include "lossforecast/trees.hpp"

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

using namespace lossforecast;

namespace {

struct Design {
    std::vector<std::vector<double>> X;
    std::vector<double> y;
};

Design make_design(std::size_t n, std::size_t p) {
    auto engine = make_engine(7, 0x62656e);
    std::normal_distribution<double> normal(0.0, 1.0);
    Design d;
    d.X.assign(p, std::vector<double>(n));
    d.y.assign(n, 0.0);
    for (auto& col : d.X)
        for (double& v : col)
            v = normal(engine);
    for (std::size_t i = 0; i < n; ++i)
        d.y[i] = d.X[0][i] - 0.5 * d.X[p / 2][i] + 0.3 * normal(engine);
    return d;
}

QuarterlySeries make_series(std::size_t n) {
    auto engine = make_engine(11, 0x736572);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> v(n);
    for (std::size_t t = 0; t < n; ++t)
        v[t] = 50.0 + 0.2 * t + 2.0 * normal(engine);
    return QuarterlySeries("bench", Quarter(1985, 1), std::move(v));
}

void BM_FitLasso(benchmark::State& state) {
    Design d = make_design(static_cast<std::size_t>(state.range(0)), 95);
    Standardized s = standardize(d.X, d.y);
    for (auto _ : state)
        benchmark::DoNotOptimize(fit_lasso(s, 0.05));
}
BENCHMARK(BM_FitLasso)->Arg(60)->Arg(120);

void BM_FitRidge(benchmark::State& state) {
    Design d = make_design(static_cast<std::size_t>(state.range(0)), 95);
    Standardized s = standardize(d.X, d.y);
    for (auto _ : state)
        benchmark::DoNotOptimize(fit_ridge(s, 0.05));
}
BENCHMARK(BM_FitRidge)->Arg(60)->Arg(120);

void BM_FitGbm(benchmark::State& state) {
    Design d = make_design(100, static_cast<std::size_t>(state.range(0)));
    GbmParams params;
    params.n_trees = 100;
    params.max_depth = 2;
    for (auto _ : state)
        benchmark::DoNotOptimize(fit_gbm(d.X, d.y, params));
}
BENCHMARK(BM_FitGbm)->Arg(6)->Arg(24);

void BM_FitRandomForest(benchmark::State& state) {
    Design d = make_design(100, static_cast<std::size_t>(state.range(0)));
    RfParams params;
    params.n_trees = 100;
    for (auto _ : state)
        benchmark::DoNotOptimize(fit_random_forest(d.X, d.y, params));
}
BENCHMARK(BM_FitRandomForest)->Arg(6)->Arg(24);

void BM_ForecastHolt(benchmark::State& state) {
    QuarterlySeries s = make_series(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(forecast_smoothing(ForecastModel::holt, s, 5, 1));
}
BENCHMARK(BM_ForecastHolt)->Arg(32)->Arg(136);

void BM_FitArima(benchmark::State& state) {
    QuarterlySeries s = make_series(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(fit_arima(s, 5, 1));
}
BENCHMARK(BM_FitArima)->Arg(32)->Arg(136);

void BM_LabelChunks(benchmark::State& state) {
    std::vector<QuarterlySeries> chunks = chunk(make_series(136), 16);
    for (auto _ : state)
        benchmark::DoNotOptimize(label_chunks(chunks, 4, 1));
}
BENCHMARK(BM_LabelChunks);

void BM_SelectBestTransform(benchmark::State& state) {
    QuarterlySeries s = make_series(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state)
        benchmark::DoNotOptimize(select_best_transform(s.values()));
}
BENCHMARK(BM_SelectBestTransform)->Arg(136);

} // namespace

BENCHMARK_MAIN();
