#include "sheetlab/quadrature.hpp"

#include <lapacke.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sheetlab {

QuadratureRule gauss_legendre(std::size_t n) {
    if (n < 1) throw std::invalid_argument("Gauss-Legendre rule needs n >= 1");
    QuadratureRule r{std::vector<double>(n), std::vector<double>(n)};
    const auto nd = static_cast<double>(n);
    for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) / (nd + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (std::size_t k = 2; k <= n; ++k) {
                const auto kd = static_cast<double>(k);
                const double p2 = ((2.0 * kd - 1.0) * x * p1 - (kd - 1.0) * p0) / kd;
                p0 = p1;
                p1 = p2;
            }
            if (n == 1) p0 = 1.0;
            dp = nd * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        r.nodes[i] = -x;
        r.nodes[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        r.weights[i] = w;
        r.weights[n - 1 - i] = w;
    }
    return r;
}

QuadratureRule gauss_hermite_normal(std::size_t n) {
    if (n < 1) throw std::invalid_argument("Gauss-Hermite rule needs n >= 1");
    // Roots of the physicists' polynomial: eigenvalues of the Jacobi matrix, then
    // Newton on the orthonormal recurrence. The recurrence grows like e^{z^2/2},
    // so it is carried with a separate binary exponent.
    std::vector<double> roots(n, 0.0), off(n, 0.0);
    for (std::size_t k = 0; k + 1 < n; ++k) off[k] = std::sqrt(static_cast<double>(k + 1) / 2.0);
    if (LAPACKE_dsterf(static_cast<lapack_int>(n), roots.data(), off.data()) != 0)
        throw std::runtime_error("Gauss-Hermite eigenvalue solve failed");

    std::vector<double> x(n), w(n), a(n + 1), b(n + 1);
    for (std::size_t j = 1; j <= n; ++j) {
        const auto jd = static_cast<double>(j);
        a[j] = std::sqrt(2.0 / jd);
        b[j] = std::sqrt((jd - 1.0) / jd);
    }
    const double pim4 = std::pow(std::numbers::pi, -0.25);
    const auto nd = static_cast<double>(n);
    for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
        double z = roots[n - 1 - i];
        double p_prev = 0.0;
        int scale = 0;
        for (int it = 0; it < 8; ++it) {
            double p1 = pim4, p2 = 0.0;
            scale = 0;
            for (std::size_t j = 1; j <= n; ++j) {
                const double p3 = p2;
                p2 = p1;
                p1 = z * a[j] * p2 - b[j] * p3;
                if (std::abs(p1) > 0x1p500) {
                    p1 = std::ldexp(p1, -500);
                    p2 = std::ldexp(p2, -500);
                    scale += 500;
                }
            }
            p_prev = p2;
            const double dz = p1 / (std::sqrt(2.0 * nd) * p2);
            z -= dz;
            if (std::abs(dz) <= 1e-15 * std::max(1.0, std::abs(z))) break;
        }
        x[i] = z;
        x[n - 1 - i] = -z;
        // w = 2 / (2n p_{n-1}^2) with p_{n-1} = p_prev * 2^scale.
        const double frac = 1.0 / (nd * p_prev * p_prev);
        w[i] = std::ldexp(frac, -2 * scale);
        w[n - 1 - i] = w[i];
    }
    QuadratureRule r{std::vector<double>(n), std::vector<double>(n)};
    const double sqrt_pi = std::sqrt(std::numbers::pi);
    for (std::size_t i = 0; i < n; ++i) {
        r.nodes[i] = std::numbers::sqrt2 * x[n - 1 - i];
        r.weights[i] = w[n - 1 - i] / sqrt_pi;
    }
    if (n % 2 == 1) r.nodes[n / 2] = 0.0;
    return r;
}

}  // namespace sheetlab
