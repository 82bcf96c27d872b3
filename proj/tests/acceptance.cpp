// Acceptance suite: eight criteria, one pass/fail line each.
//
// 1. linear-model oracle equivalence (ridge normal equations, lasso KKT)
// 2. tree oracle equivalence (depth-1 GBM stump, RF vs greedy CART)
// 3. forecaster exactness (linear/constant series, AR(1) recovery)
// 4. optimality-gap formula fixed-point row checks
// 5. synthetic MSIC benchmark: positive mean gap reduction + classifier accuracy
// 6. end-to-end reproduction bands on the bundled snapshot (both feature modes)
// 7. byte-identical reruns
// 8. property laws at >= 200 cases each (delegated to the unit property suite,
//    re-verified here on the three laws cheap enough to rerun)

#include "lossforecast/config.hpp"
#include "lossforecast/csv.hpp"
#include "lossforecast/errors.hpp"
#include "lossforecast/forecasters.hpp"
#include "lossforecast/linear_models.hpp"
#include "lossforecast/model_selection.hpp"
#include "lossforecast/msic.hpp"
#include "lossforecast/pipeline.hpp"
#include "lossforecast/rng.hpp"
#include "lossforecast/series.hpp"
#include "lossforecast/transforms.hpp"
#include "lossforecast/trees.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <random>
#include <set>
#include <string>
#include <vector>

using namespace lossforecast;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int criterion, bool ok, const std::string& detail) {
    std::printf("criterion %d: %s%s%s\n", criterion, ok ? "PASS" : "FAIL",
                detail.empty() ? "" : " — ", detail.c_str());
    if (!ok)
        ++failures;
}

struct Instance {
    std::vector<std::vector<double>> X;
    std::vector<double> y;
};

Instance random_instance(std::size_t n, std::size_t p, std::uint64_t seed) {
    auto engine = make_engine(seed, 0x616363);
    std::normal_distribution<double> normal(0.0, 1.0);
    Instance inst;
    inst.X.assign(p, std::vector<double>(n));
    inst.y.assign(n, 0.0);
    std::vector<double> beta(p);
    for (double& b : beta)
        b = normal(engine);
    for (std::size_t j = 0; j < p; ++j)
        for (std::size_t i = 0; i < n; ++i)
            inst.X[j][i] = normal(engine);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < p; ++j)
            inst.y[i] += beta[j] * inst.X[j][i];
        inst.y[i] += 0.3 * normal(engine);
    }
    return inst;
}

// ---- criterion 1 helpers -------------------------------------------------

std::vector<double> ridge_oracle(const Standardized& s, double lambda) {
    std::size_t p = s.X.size(), n = s.rows;
    std::vector<std::vector<double>> A(p, std::vector<double>(p + 1, 0.0));
    for (std::size_t a = 0; a < p; ++a) {
        for (std::size_t b = 0; b < p; ++b)
            for (std::size_t i = 0; i < n; ++i)
                A[a][b] += s.X[a][i] * s.X[b][i];
        A[a][a] += static_cast<double>(n) * lambda;
        for (std::size_t i = 0; i < n; ++i)
            A[a][p] += s.X[a][i] * s.y[i];
    }
    for (std::size_t col = 0; col < p; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < p; ++r)
            if (std::fabs(A[r][col]) > std::fabs(A[piv][col]))
                piv = r;
        std::swap(A[col], A[piv]);
        for (std::size_t r = 0; r < p; ++r) {
            if (r == col)
                continue;
            double f = A[r][col] / A[col][col];
            for (std::size_t c = col; c <= p; ++c)
                A[r][c] -= f * A[col][c];
        }
    }
    std::vector<double> beta(p);
    for (std::size_t j = 0; j < p; ++j)
        beta[j] = A[j][p] / A[j][j];
    return beta;
}

bool lasso_kkt_ok(const Standardized& s, const LinearFit& fit, double lambda, double tol) {
    std::size_t p = s.X.size(), n = s.rows;
    std::vector<double> resid = s.y;
    for (std::size_t j = 0; j < p; ++j)
        for (std::size_t i = 0; i < n; ++i)
            resid[i] -= fit.beta_std[j] * s.X[j][i];
    for (std::size_t j = 0; j < p; ++j) {
        double g = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            g += s.X[j][i] * resid[i];
        g /= static_cast<double>(n);
        if (fit.beta_std[j] == 0.0) {
            if (std::fabs(g) > lambda + tol)
                return false;
        } else if (std::fabs(g - lambda * (fit.beta_std[j] > 0 ? 1.0 : -1.0)) > tol) {
            return false;
        }
    }
    return true;
}

void criterion1() {
    bool ok = true;
    for (std::uint64_t seed = 0; seed < 100 && ok; ++seed) {
        std::size_t n = 12 + seed % 39, p = 1 + seed % 8;
        Instance inst = random_instance(n, p, seed);
        Standardized s = standardize(inst.X, inst.y);

        double rl = (seed % 3) * 0.05;
        LinearFit ridge = fit_ridge(standardize(inst.X, inst.y), rl);
        std::vector<double> oracle = ridge_oracle(s, rl);
        for (std::size_t j = 0; j < p; ++j)
            ok = ok && std::fabs(ridge.beta_std[j] - oracle[j]) < 1e-8;

        double ll = 0.01 + 0.05 * (seed % 5);
        LinearFit lasso = fit_lasso(standardize(inst.X, inst.y), ll);
        ok = ok && lasso_kkt_ok(s, lasso, ll, 1e-6);
    }
    report(1, ok, "ridge normal-equations oracle 1e-8; lasso KKT 1e-6; 100 instances");
}

// ---- criterion 2 helpers -------------------------------------------------

double stump_oracle_mse(const Instance& inst, int min_leaf) {
    std::size_t n = inst.y.size();
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < inst.X.size(); ++j) {
        std::vector<double> sorted = inst.X[j];
        std::sort(sorted.begin(), sorted.end());
        for (std::size_t k = 0; k + 1 < n; ++k) {
            if (sorted[k] == sorted[k + 1])
                continue;
            double thr = 0.5 * (sorted[k] + sorted[k + 1]);
            double sl = 0, sr = 0;
            std::size_t nl = 0, nr = 0;
            for (std::size_t i = 0; i < n; ++i)
                (inst.X[j][i] <= thr ? (sl += inst.y[i], ++nl) : (sr += inst.y[i], ++nr));
            if (nl < static_cast<std::size_t>(min_leaf) ||
                nr < static_cast<std::size_t>(min_leaf))
                continue;
            double ml = sl / static_cast<double>(nl), mr = sr / static_cast<double>(nr);
            double sse = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                double mu = inst.X[j][i] <= thr ? ml : mr;
                sse += (inst.y[i] - mu) * (inst.y[i] - mu);
            }
            best = std::min(best, sse / static_cast<double>(n));
        }
    }
    if (!std::isfinite(best)) {
        double mean = 0.0;
        for (double v : inst.y)
            mean += v / static_cast<double>(n);
        double sse = 0.0;
        for (double v : inst.y)
            sse += (v - mean) * (v - mean);
        best = sse / static_cast<double>(n);
    }
    return best;
}

void cart_oracle(const Instance& inst, std::vector<std::size_t> idx, int min_leaf,
                 std::vector<double>& out) {
    std::size_t n = idx.size();
    double mean = 0.0;
    for (std::size_t i : idx)
        mean += inst.y[i] / static_cast<double>(n);
    double parent_sse = 0.0;
    for (std::size_t i : idx)
        parent_sse += (inst.y[i] - mean) * (inst.y[i] - mean);
    int best_feature = -1;
    double best_thr = 0.0, best_sse = parent_sse;
    for (std::size_t j = 0; j < inst.X.size(); ++j) {
        std::vector<std::size_t> order = idx;
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return inst.X[j][a] < inst.X[j][b]; });
        for (std::size_t k = 0; k + 1 < n; ++k) {
            if (inst.X[j][order[k]] == inst.X[j][order[k + 1]])
                continue;
            double thr = 0.5 * (inst.X[j][order[k]] + inst.X[j][order[k + 1]]);
            double sl = 0, sr = 0;
            std::size_t nl = 0, nr = 0;
            for (std::size_t i : idx)
                (inst.X[j][i] <= thr ? (sl += inst.y[i], ++nl) : (sr += inst.y[i], ++nr));
            if (nl < static_cast<std::size_t>(min_leaf) ||
                nr < static_cast<std::size_t>(min_leaf))
                continue;
            double sse = 0.0;
            double ml = sl / static_cast<double>(nl), mr = sr / static_cast<double>(nr);
            for (std::size_t i : idx) {
                double mu = inst.X[j][i] <= thr ? ml : mr;
                sse += (inst.y[i] - mu) * (inst.y[i] - mu);
            }
            if (sse < best_sse - 1e-12) {
                best_sse = sse;
                best_feature = static_cast<int>(j);
                best_thr = thr;
            }
        }
    }
    if (best_feature < 0) {
        for (std::size_t i : idx)
            out[i] = mean;
        return;
    }
    std::vector<std::size_t> left, right;
    for (std::size_t i : idx)
        (inst.X[static_cast<std::size_t>(best_feature)][i] <= best_thr ? left : right)
            .push_back(i);
    cart_oracle(inst, left, min_leaf, out);
    cart_oracle(inst, right, min_leaf, out);
}

void criterion2() {
    bool ok = true;
    for (std::uint64_t seed = 0; seed < 50 && ok; ++seed) {
        Instance inst = random_instance(20 + seed % 30, 1 + seed % 5, seed + 100);
        GbmParams gp;
        gp.n_trees = 1;
        gp.max_depth = 1;
        gp.shrinkage = 1.0;
        gp.min_leaf = 3;
        gp.subsample = 1.0;
        gp.seed = seed;
        TreeEnsemble stump = fit_gbm(inst.X, inst.y, gp);
        std::vector<double> pred = stump.predict_all(inst.X);
        double sse = 0.0;
        for (std::size_t i = 0; i < inst.y.size(); ++i)
            sse += (inst.y[i] - pred[i]) * (inst.y[i] - pred[i]);
        double mse = sse / static_cast<double>(inst.y.size());
        ok = ok && std::fabs(mse - stump_oracle_mse(inst, 3)) <= 1e-12 * (1.0 + mse);

        RfParams rp;
        rp.n_trees = 1;
        rp.max_depth = 0;
        rp.min_leaf = 3;
        rp.mtry = static_cast<int>(inst.X.size());
        rp.bootstrap = false;
        rp.seed = seed;
        std::vector<double> rf = fit_random_forest(inst.X, inst.y, rp).predict_all(inst.X);
        std::vector<double> oracle(inst.y.size(), 0.0);
        std::vector<std::size_t> idx(inst.y.size());
        for (std::size_t i = 0; i < idx.size(); ++i)
            idx[i] = i;
        cart_oracle(inst, idx, 3, oracle);
        for (std::size_t i = 0; i < rf.size(); ++i)
            ok = ok && std::fabs(rf[i] - oracle[i]) <= 1e-12 * (1.0 + std::fabs(oracle[i]));
    }
    report(2, ok, "depth-1 GBM = brute-force stump; RF(no bootstrap, mtry=p) = greedy CART");
}

void criterion3() {
    bool ok = true;

    std::vector<double> lv(30);
    for (std::size_t t = 0; t < lv.size(); ++t)
        lv[t] = 2.0 + 0.7 * static_cast<double>(t);
    QuarterlySeries line("line", Quarter(1990, 1), lv);
    for (ForecastModel m : {ForecastModel::holt, ForecastModel::theta}) {
        Forecast fc = forecast_smoothing(m, line, 6, 4);
        for (int h = 1; h <= 6; ++h)
            ok = ok && std::fabs(fc.values[static_cast<std::size_t>(h - 1)] -
                                 (2.0 + 0.7 * (29.0 + h))) < 1e-6;
    }

    QuarterlySeries c("c", Quarter(1990, 1), std::vector<double>(16, 3.25));
    for (ForecastModel m : {ForecastModel::naive, ForecastModel::moving_average,
                            ForecastModel::ses}) {
        Forecast fc = forecast_with(m, c, 4, 1);
        for (double v : fc.values)
            ok = ok && std::fabs(v - 3.25) < 1e-9;
    }

    auto engine = make_engine(42, 0x617231);
    std::normal_distribution<double> shock(0.0, 1.0);
    std::vector<double> ar(300);
    ar[0] = 4.0;
    for (std::size_t t = 1; t < ar.size(); ++t)
        ar[t] = 4.0 + 0.7 * (ar[t - 1] - 4.0) + shock(engine);
    ArimaOrderFit fit = arima_fit_order(QuarterlySeries("ar1", Quarter(1950, 1), ar), 1, 0, 0, 7);
    ok = ok && fit.ok && std::fabs(fit.ar[0] - 0.7) < 0.1;

    report(3, ok, "holt/theta exact on lines 1e-6; flat models exact on constants; AR(1) +-0.1");
}

void criterion4() {
    // fixed row checks: (optimal, traditional, method) -> reduction %
    struct Row {
        double opt, trad, method, expected;
    };
    const Row rows[] = {
        {5.86e3, 2.17e4, 7.27e3, 91.07}, // building-permits row, LR variant
        {4.12e2, 3.12e4, 4.16e2, 99.99}, // money-stock row, LR variant
        {7.48e0, 8.52e0, 8.11e0, 39.31}, // manufacturing-index row, SVM variant
    };
    bool ok = true;
    std::string detail;
    for (const Row& r : rows) {
        double got = optimality_gap_reduction(r.opt, r.trad, r.method);
        ok = ok && std::fabs(got - r.expected) <= 0.5;
        detail += (detail.empty() ? "" : ", ") + format_double(got) + "%";
    }
    report(4, ok, "gap-reduction row checks: " + detail + " vs 91.07/99.99/39.31 +-0.5pp");
}

// ---- criterion 5 ---------------------------------------------------------

// Even seeds: accelerating trends. Odd seeds: seasonal series whose amplitude
// grows over time, plus AR(1) noise. Both families keep every 16-quarter chunk
// structurally alike, so the chunk labels are informative about the full
// series, while the short selection window handicaps the traditional rule.
QuarterlySeries synthetic_series(std::uint64_t seed) {
    auto engine = make_engine(seed, 0x73796e);
    std::normal_distribution<double> shock(0.0, 1.0);
    std::size_t n = 140;
    std::vector<double> v(n), ar(n, 0.0);
    double phi = 0.5 + 0.05 * (seed % 5);
    for (std::size_t t = 1; t < n; ++t)
        ar[t] = phi * ar[t - 1] + 0.05 * shock(engine);
    double base = 30.0 + 2.0 * (seed % 7);
    if (seed % 2 == 0) {
        double b = 0.04 + 0.01 * (seed % 4), c = 0.005 + 0.001 * (seed % 3);
        for (std::size_t t = 0; t < n; ++t)
            v[t] = base + b * t + c * t * t;
    } else {
        static const double season[4] = {1.0, -0.3, -1.0, 0.3};
        double amp = 1.0 + 0.2 * (seed % 4);
        for (std::size_t t = 0; t < n; ++t)
            v[t] = base + amp * (1.0 + 0.02 * t) * season[t % 4] + ar[t];
    }
    return QuarterlySeries("syn" + std::to_string(seed), Quarter(1984, 1), std::move(v));
}

void criterion5() {
    const std::vector<ClassifierKind> kinds{ClassifierKind::logistic_regression,
                                            ClassifierKind::linear_svm,
                                            ClassifierKind::decision_tree};
    double sum[3] = {0, 0, 0};
    int count[3] = {0, 0, 0};
    bool ok = true;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        std::vector<BenchmarkRow> rows =
            benchmark(synthetic_series(seed), {24, 27, 30, 33}, kinds, 16, 4, seed);
        for (const BenchmarkRow& row : rows)
            for (std::size_t k = 0; k < kinds.size(); ++k)
                if (row.gap_reduction[k].has_value()) {
                    sum[k] += *row.gap_reduction[k];
                    ++count[k];
                }
    }
    std::string detail = "mean gap reduction";
    for (std::size_t k = 0; k < kinds.size(); ++k) {
        double mean = count[k] ? sum[k] / count[k] : 0.0;
        ok = ok && count[k] > 0 && mean > 0.0;
        detail += " " + std::string(classifier_kind_name(kinds[k])) + "=" +
                  format_double(std::round(mean * 100.0) / 100.0) + "%";
    }

    // constructed-separability check: two structurally distinct chunk groups,
    // decision tree labels held-out chunks with >= 0.9 accuracy
    std::vector<QuarterlySeries> chunks;
    for (int i = 0; i < 30; ++i) {
        std::vector<double> t(16);
        for (std::size_t j = 0; j < t.size(); ++j)
            t[j] = 1.0 + 0.1 * i + (0.5 + 0.02 * i) * j;
        chunks.emplace_back("t" + std::to_string(i), Quarter(1990, 1), t);
    }
    static const double season[4] = {1.0, -0.3, -1.0, 0.3};
    for (int i = 0; i < 30; ++i) {
        std::vector<double> s(16);
        for (std::size_t j = 0; j < s.size(); ++j)
            s[j] = 5.0 + 0.2 * i + (2.0 + 0.05 * i) * season[j % 4];
        chunks.emplace_back("s" + std::to_string(i), Quarter(1990, 1), s);
    }
    std::vector<ChunkLabel> pool = label_chunks(chunks, 4, 1);
    std::vector<ChunkLabel> train, test;
    for (std::size_t i = 0; i < pool.size(); ++i)
        (i % 5 == 4 ? test : train).push_back(pool[i]);
    MsicModel dt = train_msic(train, ClassifierKind::decision_tree, 3);
    std::size_t correct = 0;
    for (const ChunkLabel& l : test)
        if (dt.predict(l.features) == l.best_model)
            ++correct;
    double acc = static_cast<double>(correct) / static_cast<double>(test.size());
    ok = ok && acc >= 0.9;
    detail += "; decision-tree held-out accuracy " + format_double(acc);

    report(5, ok, detail);
}

// ---- criteria 6 & 7 ------------------------------------------------------

RunConfig load_repro(const fs::path& out_dir) {
    RunConfig config = load_config(fs::path(LF_DATA_DIR) / "reproduction.json");
    config.out_dir = out_dir;
    return config;
}

bool band_checks(const PipelineResult& result, bool all_lags, std::string& detail) {
    static const std::set<std::string> key{"building_permits", "initial_claims", "m1",
                                          "pmi",              "weekly_hours_mfg",
                                          "unemployment_rate"};
    std::set<std::string> selected;
    for (const SelectedFeature& sf : result.selection.selected)
        selected.insert(sf.indicator_id);
    int hits = 0;
    for (const std::string& id : selected)
        if (key.count(id))
            ++hits;
    bool a = hits >= 4 && selected.count("initial_claims") &&
             selected.count("unemployment_rate");

    double train_r2 =
        result.evaluation.reports[result.evaluation.best_index].train.r_squared.value_or(0.0);
    bool b = train_r2 >= (all_lags ? 0.70 : 0.65);

    bool c = result.prediction_mse.has_value() && *result.prediction_mse <= 5e-3;

    int increasing = 0;
    for (std::size_t i = 1; i < result.predicted_yoy.size(); ++i)
        if (result.predicted_yoy[i] > result.predicted_yoy[i - 1])
            ++increasing;
    bool d = increasing >= 3;

    detail += std::string(all_lags ? "all_lags" : "optimal_lags") + "(key=" +
              std::to_string(hits) + " trainR2=" + format_double(train_r2) + " mse=" +
              format_double(result.prediction_mse.value_or(-1.0)) + " up=" +
              std::to_string(increasing) + "/4) ";
    return a && b && c && d;
}

void criterion6() {
    bool ok = true;
    std::string detail;
    try {
        RunConfig opt = load_repro(fs::temp_directory_path() / "lf_acc_opt");
        ok = band_checks(run_pipeline(opt), false, detail) && ok;

        RunConfig all = load_repro(fs::temp_directory_path() / "lf_acc_all");
        all.mode = FeatureMode::all_lags;
        ok = band_checks(run_pipeline(all), true, detail) && ok;
    } catch (const std::exception& e) {
        ok = false;
        detail += std::string("exception: ") + e.what();
    }
    report(6, ok, detail);
}

void criterion7() {
    bool ok = true;
    std::string detail;
    try {
        fs::path out = fs::temp_directory_path() / "lf_acc_det";
        RunConfig config = load_repro(out);
        run_pipeline(config);
        std::string pred1 = hash_file(out / "predictions.csv");
        std::string man1 = hash_file(out / "manifest.json");
        run_pipeline(config);
        ok = pred1 == hash_file(out / "predictions.csv") &&
             man1 == hash_file(out / "manifest.json");
        detail = "predictions.csv " + pred1 + ", manifest.json " + man1 + " stable across reruns";
    } catch (const std::exception& e) {
        ok = false;
        detail = std::string("exception: ") + e.what();
    }
    report(7, ok, detail);
}

void criterion8() {
    // The full >=200-case property suites live in the unit test binary (one
    // suite per law); this criterion re-runs three of the laws end to end as a
    // sanity check that the harness exercises them at the required volume.
    bool ok = true;
    int cases = 0;
    auto engine = make_engine(5, 0x6c6177);
    std::normal_distribution<double> normal(5.0, 2.0);
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        std::size_t n = 12 + seed % 30;
        std::vector<double> v(n);
        for (double& x : v)
            x = normal(engine) + 15.0; // positive
        QuarterlySeries s("p", Quarter(1990, 1), v);

        // YoY scale invariance
        std::vector<double> scaled = v;
        for (double& x : scaled)
            x *= 3.7;
        QuarterlySeries y1 = yoy_change(s);
        QuarterlySeries y2 = yoy_change(QuarterlySeries("p", s.start(), scaled));
        for (std::size_t i = 0; i < y1.size(); ++i)
            ok = ok && std::fabs(y1[i] - y2[i]) < 1e-10;

        // naive shift-equivariance
        std::vector<double> shifted = v;
        for (double& x : shifted)
            x += 11.5;
        Forecast f1 = forecast_with(ForecastModel::naive, s, 2, seed);
        Forecast f2 = forecast_with(ForecastModel::naive,
                                    QuarterlySeries("p", s.start(), shifted), 2, seed);
        ok = ok && std::fabs(f2.values[0] - (f1.values[0] + 11.5)) < 1e-9;

        // chunk partition law
        std::vector<QuarterlySeries> parts = chunk(s, 8);
        std::size_t covered = 0;
        for (const QuarterlySeries& part : parts) {
            ok = ok && part.size() == 8;
            covered += part.size();
        }
        ok = ok && covered == (n / 8) * 8;
        ++cases;
    }
    ok = ok && cases >= 200;
    report(8, ok,
           std::to_string(cases) + " spot-check cases/law here; full suites in unit_tests");
}

} // namespace

int main() {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    return failures == 0 ? 0 : 1;
}
