#include "lossforecast/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lossforecast {

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             std::vector<double> start, double step, int max_iter, double tol) {
    std::size_t dim = start.size();
    std::vector<std::vector<double>> simplex(dim + 1, start);
    for (std::size_t i = 0; i < dim; ++i)
        simplex[i + 1][i] += step;

    std::vector<double> values(dim + 1);
    for (std::size_t i = 0; i <= dim; ++i)
        values[i] = f(simplex[i]);

    auto order = [&] {
        std::vector<std::size_t> idx(dim + 1);
        for (std::size_t i = 0; i <= dim; ++i) idx[i] = i;
        std::sort(idx.begin(), idx.end(),
                  [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
        std::vector<std::vector<double>> s2;
        std::vector<double> v2;
        for (std::size_t i : idx) {
            s2.push_back(simplex[i]);
            v2.push_back(values[i]);
        }
        simplex = std::move(s2);
        values = std::move(v2);
    };

    NelderMeadResult result;
    for (int it = 0; it < max_iter; ++it) {
        order();
        if (std::isfinite(values[0]) && std::isfinite(values[dim]) &&
            std::fabs(values[dim] - values[0]) < tol) {
            result.converged = true;
            break;
        }

        std::vector<double> centroid(dim, 0.0);
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = 0; j < dim; ++j)
                centroid[j] += simplex[i][j] / static_cast<double>(dim);

        auto point = [&](double coef) {
            std::vector<double> x(dim);
            for (std::size_t j = 0; j < dim; ++j)
                x[j] = centroid[j] + coef * (simplex[dim][j] - centroid[j]);
            return x;
        };

        std::vector<double> xr = point(-1.0);
        double fr = f(xr);
        if (fr < values[0]) {
            std::vector<double> xe = point(-2.0);
            double fe = f(xe);
            if (fe < fr) {
                simplex[dim] = std::move(xe);
                values[dim] = fe;
            } else {
                simplex[dim] = std::move(xr);
                values[dim] = fr;
            }
        } else if (fr < values[dim - 1]) {
            simplex[dim] = std::move(xr);
            values[dim] = fr;
        } else {
            std::vector<double> xc = point(fr < values[dim] ? -0.5 : 0.5);
            double fc = f(xc);
            if (fc < std::min(fr, values[dim])) {
                simplex[dim] = std::move(xc);
                values[dim] = fc;
            } else {
                // shrink toward the best vertex
                for (std::size_t i = 1; i <= dim; ++i) {
                    for (std::size_t j = 0; j < dim; ++j)
                        simplex[i][j] = simplex[0][j] + 0.5 * (simplex[i][j] - simplex[0][j]);
                    values[i] = f(simplex[i]);
                }
            }
        }
    }
    order();
    result.x = simplex[0];
    result.value = values[0];
    return result;
}

} // namespace lossforecast
