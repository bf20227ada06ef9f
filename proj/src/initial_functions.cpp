#include "sheetlab/initial_functions.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace sheetlab {
namespace {

// Probabilists' Hermite He_n(y), so that d^{2m}/dy^{2m} e^{-y^2/2} = He_{2m}(y) e^{-y^2/2}.
double hermite_he(int n, double y) {
    if (n == 0) return 1.0;
    double p0 = 1.0, p1 = y;
    for (int k = 1; k < n; ++k) {
        const double p2 = y * p1 - k * p0;
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

double norm_sq(std::span<const double> x) {
    double s = 0.0;
    for (double v : x) s += v * v;
    return s;
}

}  // namespace

InitialFunction InitialFunction::constant(int d, double c) {
    return {FunctionId::Constant, d, kAnalyticLaplacianOrder, 1.0, Growth::Bounded, c, 1.0};
}
InitialFunction InitialFunction::quadratic(int d) {
    return {FunctionId::Quadratic, d, kAnalyticLaplacianOrder, 1.0, Growth::Polynomial, 1.0, 1.0};
}
InitialFunction InitialFunction::quartic(int d) {
    return {FunctionId::Quartic, d, kAnalyticLaplacianOrder, 1.0, Growth::Polynomial, 1.0, 1.0};
}
InitialFunction InitialFunction::gaussian(int d) {
    return {FunctionId::Gaussian, d, kAnalyticLaplacianOrder, 1.0, Growth::Bounded, 1.0, 1.0};
}
InitialFunction InitialFunction::bump(int d, double c, double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("bump exponent alpha must lie in (0, 1]");
    return {FunctionId::Bump, d, alpha == 1.0 ? 1 : 0, alpha, Growth::Bounded, c, alpha};
}

std::string InitialFunction::name() const {
    switch (id_) {
        case FunctionId::Constant: return "constant";
        case FunctionId::Quadratic: return "quadratic";
        case FunctionId::Quartic: return "quartic";
        case FunctionId::Gaussian: return "gaussian";
        case FunctionId::Bump: return "bump";
    }
    return "unknown";
}

void InitialFunction::check_point(std::span<const double> x) const {
    if (static_cast<int>(x.size()) != d_)
        throw std::invalid_argument("point has dimension " + std::to_string(x.size()) + ", function expects " +
                                    std::to_string(d_));
}

double InitialFunction::value(std::span<const double> x) const {
    check_point(x);
    switch (id_) {
        case FunctionId::Constant: return c_;
        case FunctionId::Quadratic: return norm_sq(x);
        case FunctionId::Quartic: {
            double s = 0.0;
            for (double v : x) s += v * v * v * v;
            return s;
        }
        case FunctionId::Gaussian: return std::exp(-0.5 * norm_sq(x));
        case FunctionId::Bump: return bump_f0(c_, alpha_, x);
    }
    return 0.0;
}

double InitialFunction::laplacian(std::span<const double> x, int k) const {
    check_point(x);
    if (k < 0) throw std::invalid_argument("Laplacian power must be nonnegative");
    if (k == 0) return value(x);
    if (k > max_k_)
        throw std::invalid_argument(name() + " provides Laplacian powers only up to " + std::to_string(max_k_));
    const double d = static_cast<double>(d_);
    switch (id_) {
        case FunctionId::Constant: return 0.0;
        case FunctionId::Quadratic: return k == 1 ? 2.0 * d : 0.0;
        case FunctionId::Quartic:
            if (k == 1) return 12.0 * norm_sq(x);
            return k == 2 ? 24.0 * d : 0.0;
        case FunctionId::Gaussian: {
            // Multinomial expansion of (sum_i d_i^2)^k over the product e^{-y_i^2/2}.
            std::vector<double> acc(static_cast<std::size_t>(k) + 1, 0.0);
            acc[0] = 1.0;
            for (double y : x) {
                std::vector<double> next(acc.size(), 0.0);
                double fact = 1.0;
                for (int m = 0; m <= k; ++m) {
                    if (m > 0) fact *= m;
                    const double term = hermite_he(2 * m, y) / fact;
                    for (int j = 0; j + m <= k; ++j) next[static_cast<std::size_t>(j + m)] += acc[static_cast<std::size_t>(j)] * term;
                }
                acc = std::move(next);
            }
            double kfact = 1.0;
            for (int i = 2; i <= k; ++i) kfact *= i;
            return kfact * acc[static_cast<std::size_t>(k)] * std::exp(-0.5 * norm_sq(x));
        }
        case FunctionId::Bump: {
            const double r2 = norm_sq(x);
            if (r2 >= 1.0) return 0.0;
            const double q = r2 - 1.0;
            const double g = c_ * std::exp(1.0 / q);
            return g / (q * q * q * q) * (4.0 * r2 + 8.0 * r2 * q - 2.0 * d * q * q);
        }
    }
    return 0.0;
}

std::optional<double> InitialFunction::heat_mean(std::span<const double> x, double variance) const {
    check_point(x);
    if (variance < 0.0) throw std::invalid_argument("variance must be nonnegative");
    const double v = variance;
    switch (id_) {
        case FunctionId::Constant: return c_;
        case FunctionId::Quadratic: return norm_sq(x) + static_cast<double>(d_) * v;
        case FunctionId::Quartic: {
            double s = 0.0;
            for (double y : x) s += y * y * y * y + 6.0 * y * y * v + 3.0 * v * v;
            return s;
        }
        case FunctionId::Gaussian:
            return std::pow(1.0 + v, -0.5 * d_) * std::exp(-0.5 * norm_sq(x) / (1.0 + v));
        case FunctionId::Bump: return std::nullopt;
    }
    return std::nullopt;
}

void InitialFunction::require_admissible(bool polynomial_growth_admitted) const {
    if (growth_ == Growth::Polynomial && !polynomial_growth_admitted)
        throw std::invalid_argument(name() +
                                    " has polynomial growth; enable the polynomial_growth relaxation to use it");
}

double bump_f0(double c, double alpha, std::span<const double> x) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("bump exponent alpha must lie in (0, 1]");
    const double r2 = norm_sq(x);
    if (r2 >= 1.0) return 0.0;
    return c * std::exp(1.0 / (std::pow(r2, alpha) - 1.0));
}

double bump_laplacian_d2(double c, std::span<const double> x, bool at_boundary_limit) {
    if (x.size() != 2) throw std::invalid_argument("bump_laplacian_d2 needs a point in the plane");
    const double r2 = norm_sq(x);
    if (r2 == 1.0) {
        if (at_boundary_limit) return 0.0;
        throw std::domain_error("the bump Laplacian formula is singular on |x| = 1");
    }
    if (r2 > 1.0) return 0.0;
    const double q = r2 - 1.0;
    return 4.0 * c * (r2 * r2 + r2 - 1.0) * std::exp(1.0 / q) / (q * q * q * q);
}

InitialFunction make_initial_function(std::string_view name, int d, double c, double alpha) {
    if (d < 1) throw std::invalid_argument("spatial dimension must be >= 1");
    if (name == "constant") return InitialFunction::constant(d, c);
    if (name == "quadratic") return InitialFunction::quadratic(d);
    if (name == "quartic") return InitialFunction::quartic(d);
    if (name == "gaussian") return InitialFunction::gaussian(d);
    if (name == "bump") return InitialFunction::bump(d, c, alpha);
    throw std::invalid_argument("unknown initial function '" + std::string(name) + "'");
}

std::vector<InitialFunction> catalog(int d) {
    return {InitialFunction::constant(d), InitialFunction::quadratic(d), InitialFunction::quartic(d),
            InitialFunction::gaussian(d), InitialFunction::bump(d)};
}

}  // namespace sheetlab
