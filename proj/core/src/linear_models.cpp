#include "lossforecast/linear_models.hpp"

#include "lossforecast/errors.hpp"
#include "lossforecast/stats.hpp"

#include <cmath>

namespace lossforecast {

double LinearFit::predict(const std::vector<double>& raw_row) const {
    double out = intercept;
    for (std::size_t j = 0; j < beta.size(); ++j)
        out += beta[j] * raw_row[j];
    return out;
}

Standardized standardize(const std::vector<std::vector<double>>& X,
                         const std::vector<double>& y) {
    if (X.empty() || y.empty())
        throw EmptyInput("standardize: empty input");
    std::size_t n = y.size();

    Standardized out;
    out.rows = n;
    out.y_mean = stats::mean(y);
    out.y.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        out.y[i] = y[i] - out.y_mean;

    for (std::size_t c = 0; c < X.size(); ++c) {
        const auto& col = X[c];
        if (col.size() != n)
            throw LengthMismatch("standardize: column length mismatch");
        double m = stats::mean(col);
        double s = stats::sd_pop(col);
        if (s <= 0.0)
            throw ConstantColumn("standardize: constant column " + std::to_string(c));
        std::vector<double> z(n);
        for (std::size_t i = 0; i < n; ++i)
            z[i] = (col[i] - m) / s;
        out.X.push_back(std::move(z));
        out.col_mean.push_back(m);
        out.col_sd.push_back(s);
    }
    return out;
}

namespace {

void finalize(LinearFit& fit, const Standardized& data) {
    std::size_t p = data.X.size();
    fit.beta.resize(p);
    fit.intercept = data.y_mean;
    fit.y_mean = data.y_mean;
    for (std::size_t j = 0; j < p; ++j) {
        fit.beta[j] = fit.beta_std[j] / data.col_sd[j];
        fit.intercept -= fit.beta_std[j] * data.col_mean[j] / data.col_sd[j];
    }
}

double soft_threshold(double z, double g) {
    if (z > g) return z - g;
    if (z < -g) return z + g;
    return 0.0;
}

} // namespace

LinearFit fit_lasso(const Standardized& data, double lambda) {
    if (lambda < 0.0)
        throw NumericError("fit_lasso: lambda must be >= 0");
    std::size_t n = data.rows, p = data.X.size();

    // (1/n) * x_j'x_j per column; standardized columns make this 1 but we
    // compute it to stay correct for any caller.
    std::vector<double> col_ss(p);
    for (std::size_t j = 0; j < p; ++j) {
        double s = 0.0;
        for (double v : data.X[j]) s += v * v;
        col_ss[j] = s / static_cast<double>(n);
    }

    LinearFit fit;
    fit.penalty = Penalty::l1;
    fit.lambda = lambda;
    fit.beta_std.assign(p, 0.0);

    std::vector<double> resid = data.y; // y - X*beta
    constexpr int kMaxSweeps = 10000;
    constexpr double kTol = 1e-8;
    fit.converged = false;
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        double max_change = 0.0;
        for (std::size_t j = 0; j < p; ++j) {
            const auto& xj = data.X[j];
            double rho = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                rho += xj[i] * resid[i];
            rho = rho / static_cast<double>(n) + col_ss[j] * fit.beta_std[j];
            double bj = soft_threshold(rho, lambda) / col_ss[j];
            double delta = bj - fit.beta_std[j];
            if (delta != 0.0) {
                for (std::size_t i = 0; i < n; ++i)
                    resid[i] -= delta * xj[i];
                fit.beta_std[j] = bj;
            }
            max_change = std::max(max_change, std::fabs(delta));
        }
        if (max_change < kTol) {
            fit.converged = true;
            break;
        }
    }
    finalize(fit, data);
    return fit;
}

LinearFit fit_ridge(const Standardized& data, double lambda) {
    if (lambda < 0.0)
        throw NumericError("fit_ridge: lambda must be >= 0");
    std::size_t n = data.rows, p = data.X.size();

    // A = X'X + n*lambda*I, b = X'y
    std::vector<std::vector<double>> A(p, std::vector<double>(p, 0.0));
    std::vector<double> b(p, 0.0);
    for (std::size_t j = 0; j < p; ++j) {
        for (std::size_t k = j; k < p; ++k) {
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                s += data.X[j][i] * data.X[k][i];
            A[j][k] = A[k][j] = s;
        }
        A[j][j] += static_cast<double>(n) * lambda;
        for (std::size_t i = 0; i < n; ++i)
            b[j] += data.X[j][i] * data.y[i];
    }

    // Cholesky A = L L'
    std::vector<std::vector<double>> L(p, std::vector<double>(p, 0.0));
    for (std::size_t j = 0; j < p; ++j) {
        for (std::size_t k = 0; k <= j; ++k) {
            double s = A[j][k];
            for (std::size_t m = 0; m < k; ++m)
                s -= L[j][m] * L[k][m];
            if (j == k) {
                if (s <= 0.0)
                    throw SingularSystem("fit_ridge: singular system (collinear columns at lambda=0?)");
                L[j][j] = std::sqrt(s);
            } else {
                L[j][k] = s / L[k][k];
            }
        }
    }

    std::vector<double> z(p), beta(p);
    for (std::size_t j = 0; j < p; ++j) {
        double s = b[j];
        for (std::size_t m = 0; m < j; ++m)
            s -= L[j][m] * z[m];
        z[j] = s / L[j][j];
    }
    for (std::size_t j = p; j-- > 0;) {
        double s = z[j];
        for (std::size_t m = j + 1; m < p; ++m)
            s -= L[m][j] * beta[m];
        beta[j] = s / L[j][j];
    }

    LinearFit fit;
    fit.penalty = Penalty::l2;
    fit.lambda = lambda;
    fit.beta_std = std::move(beta);
    finalize(fit, data);
    return fit;
}

} // namespace lossforecast
