#include "lossforecast/transforms.hpp"

#include "lossforecast/errors.hpp"
#include "lossforecast/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace lossforecast {

namespace {

constexpr double kShiftEps = 1e-6;

double raw_transform(TransformKind kind, double shift, double lambda, double x) {
    switch (kind) {
    case TransformKind::identity:
        return x;
    case TransformKind::log_shift: {
        double a = x + shift;
        if (a <= 0.0)
            throw DomainViolation("log_shift: argument <= 0");
        return std::log(a);
    }
    case TransformKind::sqrt_shift: {
        double a = x + shift;
        if (a <= 0.0)
            throw DomainViolation("sqrt_shift: argument <= 0");
        return std::sqrt(a);
    }
    case TransformKind::arcsinh:
        return std::asinh(x);
    case TransformKind::box_cox: {
        double a = x + shift;
        if (a <= 0.0)
            throw DomainViolation("box_cox: argument <= 0");
        if (std::fabs(lambda) < 1e-12)
            return std::log(a);
        return (std::pow(a, lambda) - 1.0) / lambda;
    }
    case TransformKind::yeo_johnson: {
        if (x >= 0.0) {
            if (std::fabs(lambda) < 1e-12)
                return std::log1p(x);
            return (std::pow(x + 1.0, lambda) - 1.0) / lambda;
        }
        if (std::fabs(lambda - 2.0) < 1e-12)
            return -std::log1p(-x);
        return -(std::pow(1.0 - x, 2.0 - lambda) - 1.0) / (2.0 - lambda);
    }
    }
    throw NumericError("unknown transform kind");
}

double raw_inverse(TransformKind kind, double shift, double lambda, double y) {
    switch (kind) {
    case TransformKind::identity:
        return y;
    case TransformKind::log_shift:
        return std::exp(y) - shift;
    case TransformKind::sqrt_shift:
        if (y < 0.0)
            throw DomainViolation("sqrt_shift inverse: negative input");
        return y * y - shift;
    case TransformKind::arcsinh:
        return std::sinh(y);
    case TransformKind::box_cox: {
        if (std::fabs(lambda) < 1e-12)
            return std::exp(y) - shift;
        double a = lambda * y + 1.0;
        if (a <= 0.0)
            throw DomainViolation("box_cox inverse: out of range");
        return std::pow(a, 1.0 / lambda) - shift;
    }
    case TransformKind::yeo_johnson: {
        if (y >= 0.0) {
            if (std::fabs(lambda) < 1e-12)
                return std::expm1(y);
            double a = lambda * y + 1.0;
            if (a <= 0.0)
                throw DomainViolation("yeo_johnson inverse: out of range");
            return std::pow(a, 1.0 / lambda) - 1.0;
        }
        if (std::fabs(lambda - 2.0) < 1e-12)
            return -std::expm1(-y);
        double a = 1.0 - (2.0 - lambda) * y;
        if (a <= 0.0)
            throw DomainViolation("yeo_johnson inverse: out of range");
        return 1.0 - std::pow(a, 1.0 / (2.0 - lambda));
    }
    }
    throw NumericError("unknown transform kind");
}

bool uses_lambda(TransformKind kind) {
    return kind == TransformKind::box_cox || kind == TransformKind::yeo_johnson;
}

bool uses_shift(TransformKind kind) {
    return kind == TransformKind::log_shift || kind == TransformKind::sqrt_shift ||
           kind == TransformKind::box_cox;
}

/// Gaussian profile log-likelihood of the transformed sample, including the
/// Jacobian of the power transform so scale games cannot cheat the fit.
double profile_loglik(TransformKind kind, double shift, double lambda,
                      std::span<const double> values) {
    std::size_t n = values.size();
    std::vector<double> t(n);
    double log_jac = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double x = values[i];
        t[i] = raw_transform(kind, shift, lambda, x);
        if (kind == TransformKind::box_cox) {
            log_jac += (lambda - 1.0) * std::log(x + shift);
        } else if (kind == TransformKind::yeo_johnson) {
            if (x >= 0.0)
                log_jac += (lambda - 1.0) * std::log1p(x);
            else
                log_jac += (1.0 - lambda) * std::log1p(-x);
        }
    }
    double var = 0.0, m = stats::mean(t);
    for (double v : t) var += (v - m) * (v - m);
    var /= static_cast<double>(n);
    if (var <= 0.0)
        return -std::numeric_limits<double>::infinity();
    return -0.5 * static_cast<double>(n) * std::log(var) + log_jac;
}

double golden_section_max(TransformKind kind, double shift, std::span<const double> values,
                          double lo, double hi) {
    const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - phi * (b - a);
    double d = a + phi * (b - a);
    double fc = profile_loglik(kind, shift, c, values);
    double fd = profile_loglik(kind, shift, d, values);
    while (b - a > 1e-7) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - phi * (b - a);
            fc = profile_loglik(kind, shift, c, values);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + phi * (b - a);
            fd = profile_loglik(kind, shift, d, values);
        }
    }
    return (a + b) / 2.0;
}

} // namespace

const char* transform_kind_name(TransformKind k) {
    switch (k) {
    case TransformKind::identity: return "identity";
    case TransformKind::log_shift: return "log_shift";
    case TransformKind::sqrt_shift: return "sqrt_shift";
    case TransformKind::arcsinh: return "arcsinh";
    case TransformKind::box_cox: return "box_cox";
    case TransformKind::yeo_johnson: return "yeo_johnson";
    }
    return "unknown";
}

TransformKind transform_kind_from_name(const std::string& name) {
    for (TransformKind k : {TransformKind::identity, TransformKind::log_shift,
                            TransformKind::sqrt_shift, TransformKind::arcsinh,
                            TransformKind::box_cox, TransformKind::yeo_johnson})
        if (name == transform_kind_name(k))
            return k;
    throw ParseError("unknown transform kind '" + name + "'");
}

TransformSpec fit_transform(std::span<const double> values, TransformKind kind) {
    if (values.size() < 8)
        throw TooFewPoints("fit_transform: need >= 8 points");
    for (double v : values)
        if (!std::isfinite(v))
            throw DataError("fit_transform: non-finite value");

    TransformSpec spec;
    spec.kind = kind;
    if (uses_shift(kind)) {
        double mn = *std::min_element(values.begin(), values.end());
        spec.shift = std::max(0.0, kShiftEps - mn);
    }
    if (uses_lambda(kind))
        spec.lambda = golden_section_max(kind, spec.shift, values, -2.0, 2.0);

    std::vector<double> t(values.size());
    for (std::size_t i = 0; i < values.size(); ++i)
        t[i] = raw_transform(kind, spec.shift, spec.lambda, values[i]);

    spec.mean = stats::mean(t);
    spec.sd = stats::sd_pop(t);
    if (spec.sd <= 0.0)
        throw DegenerateSample("fit_transform: zero variance after transform");
    return spec;
}

double apply_one(const TransformSpec& spec, double value) {
    return (raw_transform(spec.kind, spec.shift, spec.lambda, value) - spec.mean) / spec.sd;
}

std::vector<double> apply(const TransformSpec& spec, std::span<const double> values) {
    std::vector<double> out(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        try {
            out[i] = apply_one(spec, values[i]);
        } catch (const DomainViolation& e) {
            throw DomainViolation(std::string(e.what()) + " at index " + std::to_string(i));
        }
    }
    return out;
}

double invert_one(const TransformSpec& spec, double value) {
    return raw_inverse(spec.kind, spec.shift, spec.lambda, value * spec.sd + spec.mean);
}

std::vector<double> invert(const TransformSpec& spec, std::span<const double> values) {
    std::vector<double> out(values.size());
    for (std::size_t i = 0; i < values.size(); ++i)
        out[i] = invert_one(spec, values[i]);
    return out;
}

NormalityScore normality_statistic(std::span<const double> values) {
    std::size_t n = values.size();
    if (n < 8)
        throw TooFewPoints("normality_statistic: need >= 8 points");
    double m = stats::mean(values);
    double s = stats::sd_pop(values);
    if (s <= 0.0)
        throw DegenerateSample("normality_statistic: zero variance");

    int k = static_cast<int>(std::ceil(2.0 * std::pow(static_cast<double>(n), 0.4)));
    std::vector<double> edges(static_cast<std::size_t>(k - 1));
    for (int j = 1; j < k; ++j)
        edges[static_cast<std::size_t>(j - 1)] =
            m + s * stats::normal_quantile(static_cast<double>(j) / k);

    std::vector<int> counts(static_cast<std::size_t>(k), 0);
    for (double v : values) {
        auto it = std::upper_bound(edges.begin(), edges.end(), v);
        counts[static_cast<std::size_t>(it - edges.begin())]++;
    }

    double expected = static_cast<double>(n) / k;
    double chi2 = 0.0;
    for (int c : counts) {
        double d = c - expected;
        chi2 += d * d / expected;
    }

    NormalityScore score;
    score.n_classes = k;
    score.statistic = chi2 / static_cast<double>(k - 3);
    return score;
}

TransformSpec select_best_transform(std::span<const double> values) {
    static const TransformKind catalog[] = {
        TransformKind::identity,   TransformKind::log_shift, TransformKind::sqrt_shift,
        TransformKind::arcsinh,    TransformKind::box_cox,   TransformKind::yeo_johnson};

    bool have_best = false;
    TransformSpec best;
    double best_stat = 0.0;
    for (TransformKind kind : catalog) {
        try {
            TransformSpec spec = fit_transform(values, kind);
            std::vector<double> t = lossforecast::apply(spec, values);
            double stat = normality_statistic(t).statistic;
            if (!have_best || stat < best_stat) {
                have_best = true;
                best = spec;
                best_stat = stat;
            }
        } catch (const TooFewPoints&) {
            throw;
        } catch (const Error&) {
            // kind not applicable to this sample
        }
    }
    if (!have_best)
        return fit_transform(values, TransformKind::identity); // propagates the failure
    return best;
}

} // namespace lossforecast
