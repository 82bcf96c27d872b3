#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace lossforecast {

/// Column-standardized design matrix with the statistics needed to map
/// coefficients back to the original scale. Matrices are column-major.
struct Standardized {
    std::vector<std::vector<double>> X; // each column mean 0, sd 1
    std::vector<double> y;              // centered
    std::vector<double> col_mean;
    std::vector<double> col_sd;
    double y_mean = 0.0;
    std::size_t rows = 0;
};

enum class Penalty { l1, l2 };

struct LinearFit {
    Penalty penalty = Penalty::l2;
    double lambda = 0.0;
    std::vector<double> beta_std; // coefficients on standardized predictors
    double intercept = 0.0;       // original scale
    std::vector<double> beta;     // original scale
    double y_mean = 0.0;
    bool converged = true;

    double predict(const std::vector<double>& raw_row) const;
};

/// Standardize each column to mean 0, sd 1 (population sd); center y.
Standardized standardize(const std::vector<std::vector<double>>& X,
                         const std::vector<double>& y);

/// Minimize (1/2n)||y - Xb||^2 + lambda*||b||_1 by cyclic coordinate descent
/// with soft thresholding. Stops at max coefficient change < 1e-8 or 10000
/// sweeps (converged flag cleared in the latter case).
LinearFit fit_lasso(const Standardized& data, double lambda);

/// b = (X'X + n*lambda*I)^-1 X'y via a symmetric positive-definite solve.
LinearFit fit_ridge(const Standardized& data, double lambda);

} // namespace lossforecast
