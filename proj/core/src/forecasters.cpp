#include "lossforecast/forecasters.hpp"

#include "lossforecast/errors.hpp"
#include "lossforecast/nelder_mead.hpp"
#include "lossforecast/rng.hpp"
#include "lossforecast/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lossforecast {

const char* forecast_model_name(ForecastModel m) {
    switch (m) {
    case ForecastModel::naive: return "naive";
    case ForecastModel::moving_average: return "moving_average";
    case ForecastModel::ses: return "ses";
    case ForecastModel::holt: return "holt";
    case ForecastModel::holt_winters: return "holt_winters";
    case ForecastModel::arima: return "arima";
    case ForecastModel::theta: return "theta";
    }
    return "unknown";
}

ForecastModel forecast_model_from_name(const std::string& name) {
    for (ForecastModel m : kForecasterCatalog)
        if (name == forecast_model_name(m))
            return m;
    throw ParseError("unknown forecast model '" + name + "'");
}

std::size_t forecast_model_min_length(ForecastModel m) {
    switch (m) {
    case ForecastModel::naive:
    case ForecastModel::moving_average: return 2;
    case ForecastModel::ses:
    case ForecastModel::holt: return 4;
    case ForecastModel::holt_winters: return 12;
    case ForecastModel::theta: return 5;
    case ForecastModel::arima: return 20;
    }
    return 2;
}

namespace {

Forecast make_forecast(const QuarterlySeries& series, int horizon, std::vector<double> values) {
    Forecast fc;
    fc.origin = series.end();
    fc.horizon = horizon;
    fc.values = std::move(values);
    return fc;
}

void check_length(ForecastModel model, const QuarterlySeries& series) {
    if (series.size() < forecast_model_min_length(model))
        throw SeriesTooShort(std::string(forecast_model_name(model)) + ": series of length " +
                             std::to_string(series.size()) + " too short");
}

/// Bounded smoothing-parameter search: quadratic penalty outside [0,1]^k,
/// clamped evaluation inside, 3 seeded restarts.
std::vector<double> optimize_unit_box(
    const std::function<double(const std::vector<double>&)>& sse, std::size_t dim,
    std::uint64_t seed, bool* failed) {
    auto objective = [&](const std::vector<double>& x) {
        double penalty = 0.0;
        std::vector<double> clamped(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) {
            clamped[i] = std::clamp(x[i], 0.0, 1.0);
            double d = x[i] - clamped[i];
            penalty += 1e6 * d * d;
        }
        double v = sse(clamped);
        if (!std::isfinite(v))
            return 1e30;
        return v + penalty;
    };

    auto engine = make_engine(seed, 0x736d6f6f7468ULL /*smooth*/);
    std::uniform_real_distribution<double> unif(0.05, 0.95);

    bool any = false;
    std::vector<double> best;
    double best_val = std::numeric_limits<double>::infinity();
    for (int restart = 0; restart < 3; ++restart) {
        std::vector<double> start(dim, 0.3);
        if (restart > 0)
            for (double& s : start) s = unif(engine);
        NelderMeadResult res = nelder_mead(objective, start, 0.2, 400);
        if (std::isfinite(res.value) && res.value < best_val) {
            best_val = res.value;
            best = res.x;
            any = true;
        }
    }
    if (!any || best.empty()) {
        if (failed) *failed = true;
        return std::vector<double>(dim, 0.5);
    }
    for (double& v : best) v = std::clamp(v, 0.0, 1.0);
    if (failed) *failed = false;
    return best;
}

struct SesRun {
    double level = 0.0;
    double sse = 0.0;
};

SesRun run_ses(const std::vector<double>& y, double alpha) {
    SesRun r;
    r.level = y[0];
    for (std::size_t t = 1; t < y.size(); ++t) {
        double e = y[t] - r.level;
        r.sse += e * e;
        r.level = alpha * y[t] + (1.0 - alpha) * r.level;
    }
    return r;
}

/// SES whose one-step prediction carries a fixed per-step drift, so a series
/// drifting at exactly that rate is tracked with zero residuals.
SesRun run_ses_drift(const std::vector<double>& y, double alpha, double drift) {
    SesRun r;
    r.level = y[0];
    for (std::size_t t = 1; t < y.size(); ++t) {
        double pred = r.level + drift;
        double e = y[t] - pred;
        r.sse += e * e;
        r.level = alpha * y[t] + (1.0 - alpha) * pred;
    }
    return r;
}

struct HoltRun {
    double level = 0.0;
    double trend = 0.0;
    double sse = 0.0;
};

HoltRun run_holt(const std::vector<double>& y, double alpha, double beta) {
    HoltRun r;
    r.level = y[0];
    r.trend = y[1] - y[0];
    for (std::size_t t = 1; t < y.size(); ++t) {
        double pred = r.level + r.trend;
        double e = y[t] - pred;
        r.sse += e * e;
        double new_level = alpha * y[t] + (1.0 - alpha) * pred;
        r.trend = beta * (new_level - r.level) + (1.0 - beta) * r.trend;
        r.level = new_level;
    }
    return r;
}

struct HwRun {
    double level = 0.0;
    double trend = 0.0;
    std::vector<double> season; // last 4, season[t % 4]
    double sse = 0.0;
};

HwRun run_holt_winters(const std::vector<double>& y, double alpha, double beta, double gamma) {
    constexpr std::size_t period = 4;
    HwRun r;
    double m1 = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i < period; ++i) {
        m1 += y[i];
        m2 += y[i + period];
    }
    m1 /= period;
    m2 /= period;
    r.level = m1;
    r.trend = (m2 - m1) / static_cast<double>(period);
    r.season.resize(period);
    for (std::size_t i = 0; i < period; ++i)
        r.season[i] = y[i] - m1;

    for (std::size_t t = period; t < y.size(); ++t) {
        double s_old = r.season[t % period];
        double pred = r.level + r.trend + s_old;
        double e = y[t] - pred;
        r.sse += e * e;
        double new_level = alpha * (y[t] - s_old) + (1.0 - alpha) * (r.level + r.trend);
        r.trend = beta * (new_level - r.level) + (1.0 - beta) * r.trend;
        r.season[t % period] = gamma * (y[t] - new_level) + (1.0 - gamma) * s_old;
        r.level = new_level;
    }
    return r;
}

struct TrendFit {
    double intercept = 0.0; // value at t = 0
    double slope = 0.0;     // per quarter
};

TrendFit ols_trend(const std::vector<double>& y) {
    std::size_t n = y.size();
    double tm = (static_cast<double>(n) - 1.0) / 2.0;
    double ym = stats::mean(y);
    double num = 0.0, den = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        double dt = static_cast<double>(t) - tm;
        num += dt * (y[t] - ym);
        den += dt * dt;
    }
    TrendFit f;
    f.slope = den > 0.0 ? num / den : 0.0;
    f.intercept = ym - f.slope * tm;
    return f;
}

} // namespace

Forecast forecast_baseline(ForecastModel model, const QuarterlySeries& series, int horizon,
                           int w) {
    if (horizon < 1)
        throw DataError("horizon must be >= 1");
    const std::vector<double>& y = series.values();
    std::size_t n = y.size();

    if (model == ForecastModel::naive) {
        check_length(model, series);
        Forecast fc = make_forecast(series, horizon,
                                    std::vector<double>(static_cast<std::size_t>(horizon), y.back()));
        return fc;
    }
    if (model != ForecastModel::moving_average)
        throw DataError("forecast_baseline: model must be naive or moving_average");

    if (w == 0) {
        // tune by one-step-ahead in-sample MSE
        int w_max = static_cast<int>(std::min<std::size_t>(12, n / 2));
        if (w_max < 1)
            throw SeriesTooShort("moving_average: series too short to tune window");
        double best = std::numeric_limits<double>::infinity();
        int best_w = 1;
        for (int cand = 1; cand <= w_max; ++cand) {
            double sse = 0.0;
            std::size_t count = 0;
            for (std::size_t t = static_cast<std::size_t>(cand); t < n; ++t) {
                double m = 0.0;
                for (int j = 1; j <= cand; ++j)
                    m += y[t - static_cast<std::size_t>(j)];
                m /= cand;
                double e = y[t] - m;
                sse += e * e;
                ++count;
            }
            double mse = count ? sse / static_cast<double>(count)
                               : std::numeric_limits<double>::infinity();
            if (mse < best) {
                best = mse;
                best_w = cand;
            }
        }
        w = best_w;
    }
    if (n < std::max<std::size_t>(2, static_cast<std::size_t>(w)))
        throw SeriesTooShort("moving_average: window larger than series");

    double m = 0.0;
    for (int j = 0; j < w; ++j)
        m += y[n - 1 - static_cast<std::size_t>(j)];
    m /= w;
    Forecast fc = make_forecast(series, horizon,
                                std::vector<double>(static_cast<std::size_t>(horizon), m));
    fc.params["w"] = w;
    return fc;
}

Forecast forecast_ses_fixed_alpha(const QuarterlySeries& series, int horizon, double alpha) {
    check_length(ForecastModel::ses, series);
    SesRun r = run_ses(series.values(), alpha);
    Forecast fc = make_forecast(series, horizon,
                                std::vector<double>(static_cast<std::size_t>(horizon), r.level));
    fc.params["alpha"] = alpha;
    return fc;
}

Forecast forecast_smoothing(ForecastModel model, const QuarterlySeries& series, int horizon,
                            std::uint64_t seed) {
    if (horizon < 1)
        throw DataError("horizon must be >= 1");
    check_length(model, series);
    const std::vector<double>& y = series.values();
    std::size_t n = y.size();
    bool opt_failed = false;

    switch (model) {
    case ForecastModel::ses: {
        auto sse = [&](const std::vector<double>& x) { return run_ses(y, x[0]).sse; };
        std::vector<double> p = optimize_unit_box(sse, 1, derive_seed(seed, 0x736573ULL), &opt_failed);
        SesRun r = run_ses(y, p[0]);
        Forecast fc = make_forecast(series, horizon,
                                    std::vector<double>(static_cast<std::size_t>(horizon), r.level));
        fc.params["alpha"] = p[0];
        fc.fallback = opt_failed;
        return fc;
    }
    case ForecastModel::holt: {
        auto sse = [&](const std::vector<double>& x) { return run_holt(y, x[0], x[1]).sse; };
        std::vector<double> p = optimize_unit_box(sse, 2, derive_seed(seed, 0x686f6c74ULL), &opt_failed);
        HoltRun r = run_holt(y, p[0], p[1]);
        std::vector<double> vals(static_cast<std::size_t>(horizon));
        for (int h = 1; h <= horizon; ++h)
            vals[static_cast<std::size_t>(h - 1)] = r.level + h * r.trend;
        Forecast fc = make_forecast(series, horizon, std::move(vals));
        fc.params["alpha"] = p[0];
        fc.params["beta"] = p[1];
        fc.fallback = opt_failed;
        return fc;
    }
    case ForecastModel::holt_winters: {
        auto sse = [&](const std::vector<double>& x) {
            return run_holt_winters(y, x[0], x[1], x[2]).sse;
        };
        std::vector<double> p = optimize_unit_box(sse, 3, derive_seed(seed, 0x6877ULL), &opt_failed);
        HwRun r = run_holt_winters(y, p[0], p[1], p[2]);
        std::vector<double> vals(static_cast<std::size_t>(horizon));
        for (int h = 1; h <= horizon; ++h)
            vals[static_cast<std::size_t>(h - 1)] =
                r.level + h * r.trend + r.season[(n + static_cast<std::size_t>(h) - 1) % 4];
        Forecast fc = make_forecast(series, horizon, std::move(vals));
        fc.params["alpha"] = p[0];
        fc.params["beta"] = p[1];
        fc.params["gamma"] = p[2];
        fc.fallback = opt_failed;
        return fc;
    }
    case ForecastModel::theta: {
        // Two-line theta: the trend line is extrapolated linearly; the
        // double-curvature line is extrapolated by drift-corrected SES so the
        // fitted per-quarter drift carries through the horizon.
        TrendFit trend = ols_trend(y);
        std::vector<double> z(n);
        for (std::size_t t = 0; t < n; ++t)
            z[t] = 2.0 * y[t] - (trend.intercept + trend.slope * static_cast<double>(t));
        auto sse = [&](const std::vector<double>& x) {
            return run_ses_drift(z, x[0], trend.slope).sse;
        };
        std::vector<double> p = optimize_unit_box(sse, 1, derive_seed(seed, 0x7468657461ULL), &opt_failed);
        SesRun r = run_ses_drift(z, p[0], trend.slope);
        std::vector<double> vals(static_cast<std::size_t>(horizon));
        for (int h = 1; h <= horizon; ++h) {
            double line = trend.intercept + trend.slope * static_cast<double>(n - 1 + h);
            double theta2 = r.level + trend.slope * h;
            vals[static_cast<std::size_t>(h - 1)] = 0.5 * line + 0.5 * theta2;
        }
        Forecast fc = make_forecast(series, horizon, std::move(vals));
        fc.params["alpha"] = p[0];
        fc.params["drift"] = trend.slope;
        fc.fallback = opt_failed;
        return fc;
    }
    default:
        throw DataError("forecast_smoothing: unsupported model");
    }
}

namespace {

std::vector<double> difference(const std::vector<double>& y, int d) {
    std::vector<double> w = y;
    for (int k = 0; k < d; ++k) {
        std::vector<double> next(w.size() - 1);
        for (std::size_t i = 1; i < w.size(); ++i)
            next[i - 1] = w[i] - w[i - 1];
        w = std::move(next);
    }
    return w;
}

/// Roots of 1 - c1*z - c2*z^2 outside the unit circle.
bool stable_poly2(double c1, double c2) {
    return std::fabs(c2) < 1.0 && c1 + c2 < 1.0 && c2 - c1 < 1.0;
}

bool params_admissible(int p, int q, const std::vector<double>& theta) {
    // theta layout: mu, ar[0..p), ma[0..q)
    double ar1 = p >= 1 ? theta[1] : 0.0;
    double ar2 = p >= 2 ? theta[2] : 0.0;
    if (!stable_poly2(ar1, ar2))
        return false;
    double ma1 = q >= 1 ? theta[1 + static_cast<std::size_t>(p)] : 0.0;
    double ma2 = q >= 2 ? theta[2 + static_cast<std::size_t>(p)] : 0.0;
    return stable_poly2(-ma1, -ma2);
}

double arima_css(const std::vector<double>& w, int p, int q, const std::vector<double>& theta,
                 std::vector<double>* residuals) {
    std::size_t m = w.size();
    double mu = theta[0];
    std::vector<double> e(m, 0.0);
    double sse = 0.0;
    for (std::size_t t = static_cast<std::size_t>(p); t < m; ++t) {
        double pred = mu;
        for (int i = 1; i <= p; ++i)
            pred += theta[static_cast<std::size_t>(i)] * (w[t - static_cast<std::size_t>(i)] - mu);
        for (int j = 1; j <= q; ++j) {
            if (t >= static_cast<std::size_t>(j))
                pred += theta[static_cast<std::size_t>(p + j)] * e[t - static_cast<std::size_t>(j)];
        }
        e[t] = w[t] - pred;
        sse += e[t] * e[t];
    }
    if (residuals)
        *residuals = std::move(e);
    return sse;
}

} // namespace

ArimaOrderFit arima_fit_order(const QuarterlySeries& series, int p, int d, int q,
                              std::uint64_t seed) {
    ArimaOrderFit fit;
    fit.p = p;
    fit.d = d;
    fit.q = q;
    const std::vector<double>& y = series.values();
    std::vector<double> w = difference(y, d);
    std::size_t m = w.size();
    std::size_t n_eff = m - static_cast<std::size_t>(p);
    if (m < static_cast<std::size_t>(p + q + 3) || n_eff < 4)
        return fit; // ok stays false

    double w_mean = stats::mean(w);
    std::size_t dim = 1 + static_cast<std::size_t>(p + q);

    auto objective = [&](const std::vector<double>& theta) {
        if (!params_admissible(p, q, theta))
            return 1e30;
        return arima_css(w, p, q, theta, nullptr);
    };

    auto engine = make_engine(seed, 0x6172696d61ULL /*arima*/, static_cast<std::uint64_t>(p * 9 + d * 3 + q));
    std::uniform_real_distribution<double> unif(-0.4, 0.4);

    bool any = false;
    std::vector<double> best;
    double best_sse = std::numeric_limits<double>::infinity();
    for (int restart = 0; restart < 3; ++restart) {
        std::vector<double> start(dim, 0.1);
        start[0] = w_mean;
        if (restart > 0)
            for (std::size_t i = 1; i < dim; ++i)
                start[i] = unif(engine);
        NelderMeadResult res = nelder_mead(objective, start, 0.2, 300 * static_cast<int>(dim));
        if (res.value < 1e29 && res.value < best_sse) {
            best_sse = res.value;
            best = res.x;
            any = true;
        }
    }
    if (!any)
        return fit;

    fit.ok = true;
    fit.mu = best[0];
    fit.ar.assign(best.begin() + 1, best.begin() + 1 + p);
    fit.ma.assign(best.begin() + 1 + p, best.end());
    fit.sse = best_sse;
    fit.aic = static_cast<double>(n_eff) * std::log(best_sse / static_cast<double>(n_eff)) +
              2.0 * (p + q + 1);
    return fit;
}

ArimaResult fit_arima(const QuarterlySeries& series, int horizon, std::uint64_t seed) {
    if (horizon < 1)
        throw DataError("horizon must be >= 1");
    check_length(ForecastModel::arima, series);

    ArimaOrderFit best;
    for (int d = 0; d <= 1; ++d)
        for (int p = 0; p <= 2; ++p)
            for (int q = 0; q <= 2; ++q) {
                if (p == 0 && d == 0 && q == 0)
                    continue;
                ArimaOrderFit fit = arima_fit_order(series, p, d, q, seed);
                if (fit.ok && (!best.ok || fit.aic < best.aic))
                    best = fit;
            }

    if (!best.ok) {
        ArimaResult result;
        result.forecast = forecast_baseline(ForecastModel::naive, series, horizon);
        result.forecast.fallback = true;
        return result;
    }

    const std::vector<double>& y = series.values();
    std::vector<double> w = difference(y, best.d);
    std::vector<double> theta;
    theta.push_back(best.mu);
    theta.insert(theta.end(), best.ar.begin(), best.ar.end());
    theta.insert(theta.end(), best.ma.begin(), best.ma.end());
    std::vector<double> resid;
    arima_css(w, best.p, best.q, theta, &resid);

    // forecast recursion on the differenced scale, future shocks zero
    std::vector<double> ext = w;
    std::vector<double> e_ext = resid;
    for (int h = 0; h < horizon; ++h) {
        std::size_t t = ext.size();
        double pred = best.mu;
        for (std::size_t i = 1; i <= best.ar.size(); ++i)
            pred += best.ar[i - 1] * (ext[t - i] - best.mu);
        for (std::size_t j = 1; j <= best.ma.size(); ++j)
            if (t >= j)
                pred += best.ma[j - 1] * e_ext[t - j];
        ext.push_back(pred);
        e_ext.push_back(0.0);
    }

    std::vector<double> vals(ext.end() - horizon, ext.end());
    if (best.d == 1) {
        double lvl = y.back();
        for (double& v : vals) {
            lvl += v;
            v = lvl;
        }
    }

    ArimaResult result;
    result.forecast = make_forecast(series, horizon, std::move(vals));
    result.forecast.params["p"] = best.p;
    result.forecast.params["d"] = best.d;
    result.forecast.params["q"] = best.q;
    result.forecast.params["mu"] = best.mu;
    for (std::size_t i = 0; i < best.ar.size(); ++i)
        result.forecast.params["ar" + std::to_string(i + 1)] = best.ar[i];
    for (std::size_t j = 0; j < best.ma.size(); ++j)
        result.forecast.params["ma" + std::to_string(j + 1)] = best.ma[j];
    result.order = best;
    return result;
}

Forecast forecast_with(ForecastModel model, const QuarterlySeries& series, int horizon,
                       std::uint64_t seed) {
    switch (model) {
    case ForecastModel::naive:
    case ForecastModel::moving_average:
        return forecast_baseline(model, series, horizon);
    case ForecastModel::ses:
    case ForecastModel::holt:
    case ForecastModel::holt_winters:
    case ForecastModel::theta:
        return forecast_smoothing(model, series, horizon, seed);
    case ForecastModel::arima:
        return fit_arima(series, horizon, seed).forecast;
    }
    throw DataError("forecast_with: unknown model");
}

double holdout_mse(ForecastModel model, const QuarterlySeries& series, int holdout_h,
                   std::uint64_t seed) {
    if (holdout_h < 1)
        throw DataError("holdout_mse: holdout must be >= 1");
    std::size_t h = static_cast<std::size_t>(holdout_h);
    if (series.size() < h + forecast_model_min_length(model))
        throw SeriesTooShort("holdout_mse: series too short for holdout");
    QuarterlySeries head = series.slice(0, series.size() - h);
    Forecast fc = forecast_with(model, head, holdout_h, seed);
    double sse = 0.0;
    for (std::size_t i = 0; i < h; ++i) {
        double e = series[series.size() - h + i] - fc.values[i];
        sse += e * e;
    }
    return sse / static_cast<double>(h);
}

} // namespace lossforecast
