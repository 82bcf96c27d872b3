#pragma once

#include <span>
#include <string>
#include <vector>

namespace lossforecast {

enum class TransformKind { identity, log_shift, sqrt_shift, arcsinh, box_cox, yeo_johnson };

const char* transform_kind_name(TransformKind k);
TransformKind transform_kind_from_name(const std::string& name);

/// A fitted normalization transform: elementwise map followed by
/// standardization with the fitting sample's mean and sd.
struct TransformSpec {
    TransformKind kind = TransformKind::identity;
    double shift = 0.0;  // log_shift / sqrt_shift / box_cox only
    double lambda = 1.0; // box_cox / yeo_johnson only
    double mean = 0.0;   // of the transformed fitting sample
    double sd = 1.0;     // > 0
};

struct NormalityScore {
    double statistic = 0.0; // Pearson chi-square per degree of freedom; lower is better
    int n_classes = 0;
};

/// Fit a transform of the given kind on the sample (n >= 8). The shift for
/// log/sqrt/box_cox is max(0, 1e-6 - min); lambda is fitted by golden-section
/// maximization of the Gaussian profile log-likelihood over [-2, 2].
TransformSpec fit_transform(std::span<const double> values, TransformKind kind);

/// Elementwise transform then standardization by the stored mean/sd.
std::vector<double> apply(const TransformSpec& spec, std::span<const double> values);
double apply_one(const TransformSpec& spec, double value);

/// Inverse of apply; defined for every kind in the catalog.
std::vector<double> invert(const TransformSpec& spec, std::span<const double> values);
double invert_one(const TransformSpec& spec, double value);

/// Pearson chi-square normality statistic over ceil(2*n^(2/5)) equiprobable
/// bins of the fitted normal, per (classes - 3) degrees of freedom.
NormalityScore normality_statistic(std::span<const double> values);

/// Fit every applicable kind and return the spec minimizing the normality
/// statistic of the transformed sample; ties break toward catalog order.
TransformSpec select_best_transform(std::span<const double> values);

} // namespace lossforecast
