#pragma once

#include "lossforecast/series.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace lossforecast {

enum class ForecastModel { naive, moving_average, ses, holt, holt_winters, arima, theta };

inline constexpr ForecastModel kForecasterCatalog[] = {
    ForecastModel::naive,  ForecastModel::moving_average, ForecastModel::ses,
    ForecastModel::holt,   ForecastModel::holt_winters,   ForecastModel::arima,
    ForecastModel::theta};

const char* forecast_model_name(ForecastModel m);
ForecastModel forecast_model_from_name(const std::string& name);

/// Minimum series length the model can be fitted on.
std::size_t forecast_model_min_length(ForecastModel m);

struct Forecast {
    Quarter origin;            // last observed quarter
    int horizon = 0;
    std::vector<double> values;
    std::map<std::string, double> params; // fitted parameters, for reporting
    bool fallback = false;     // optimizer failure handled with defaults
};

/// naive: all forecasts equal the last observation. moving_average: mean of
/// the last w observations; w == 0 tunes w over 1..min(12, n/2) by one-step
/// in-sample MSE. Flat forecast paths.
Forecast forecast_baseline(ForecastModel model, const QuarterlySeries& series, int horizon,
                           int w = 0);

/// ses / holt / holt_winters (additive, period 4) / theta. Smoothing
/// parameters fitted by bounded Nelder-Mead on one-step-ahead squared error
/// with 3 seeded restarts.
Forecast forecast_smoothing(ForecastModel model, const QuarterlySeries& series, int horizon,
                            std::uint64_t seed = 0);

/// Test hook: SES with a fixed smoothing parameter.
Forecast forecast_ses_fixed_alpha(const QuarterlySeries& series, int horizon, double alpha);

struct ArimaOrderFit {
    int p = 0, d = 0, q = 0;
    double mu = 0.0;
    std::vector<double> ar;
    std::vector<double> ma;
    double sse = 0.0;
    double aic = 0.0;
    bool ok = false;
};

/// Conditional-sum-of-squares fit of a single (p,d,q) order.
ArimaOrderFit arima_fit_order(const QuarterlySeries& series, int p, int d, int q,
                              std::uint64_t seed = 0);

struct ArimaResult {
    Forecast forecast;
    ArimaOrderFit order;
};

/// Grid over p in 0..2, d in 0..1, q in 0..2 excluding (0,0,0); order chosen
/// by AIC; falls back to naive (flagged) if every order fails.
ArimaResult fit_arima(const QuarterlySeries& series, int horizon, std::uint64_t seed = 0);

/// Dispatch to the right fitter for any catalog model.
Forecast forecast_with(ForecastModel model, const QuarterlySeries& series, int horizon,
                       std::uint64_t seed = 0);

/// Fit on series[0..n-h), forecast h, MSE against the held-out tail.
double holdout_mse(ForecastModel model, const QuarterlySeries& series, int holdout_h,
                   std::uint64_t seed = 0);

} // namespace lossforecast
