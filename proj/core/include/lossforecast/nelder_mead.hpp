#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace lossforecast {

struct NelderMeadResult {
    std::vector<double> x;
    double value = 0.0;
    bool converged = false;
};

/// Downhill simplex minimization. The objective may return +inf as a penalty.
NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                             std::vector<double> start, double step = 0.1,
                             int max_iter = 500, double tol = 1e-10);

} // namespace lossforecast
