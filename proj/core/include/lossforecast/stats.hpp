#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace lossforecast::stats {

double mean(std::span<const double> x);
/// Population standard deviation (divide by n).
double sd_pop(std::span<const double> x);
/// Sample standard deviation (divide by n-1).
double sd_sample(std::span<const double> x);
double skewness(std::span<const double> x);
double excess_kurtosis(std::span<const double> x);
/// Sample autocorrelation at the given lag (0 for degenerate series).
double autocorrelation(std::span<const double> x, std::size_t lag);

/// Pearson product-moment correlation. Throws ZeroVariance if either input is constant.
double pearson_r(std::span<const double> x, std::span<const double> y);

/// Two-sided p-value for H0: rho = 0 given sample correlation r and n points,
/// via t = r*sqrt((n-2)/(1-r^2)) against Student-t with n-2 df.
double correlation_p_value(double r, std::size_t n);

/// Regularized incomplete beta function I_x(a, b).
double incomplete_beta(double a, double b, double x);

/// Student-t CDF with nu degrees of freedom.
double student_t_cdf(double t, double nu);

/// Standard normal CDF.
double normal_cdf(double z);

/// Standard normal quantile (inverse CDF), Acklam's rational approximation
/// polished with one Halley step.
double normal_quantile(double p);

} // namespace lossforecast::stats
