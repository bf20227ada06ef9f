#include "sheetlab/densities.hpp"

#include "sheetlab/error.hpp"
#include "sheetlab/laplace_inversion.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <string>

namespace sheetlab {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEps = std::numeric_limits<double>::epsilon();

void require_beta(double beta) {
    if (!(beta > 0.0 && beta < 1.0)) throw std::domain_error("beta must lie in (0,1)");
}

double closed_form_half(double x) { return std::exp(-1.5 * std::log(x) - 0.25 / x) / (2.0 * std::sqrt(kPi)); }

struct SeriesValue {
    double value;
    double bound;  // rounding from cancellation plus the first omitted term
};

SeriesValue stable_series(double beta, double x, double tolerance) {
    const double lx = std::log(x);
    double sum = 0.0, abs_sum = 0.0, last = 0.0;
    double prev_log = -std::numeric_limits<double>::infinity();
    for (int k = 1; k <= 4000; ++k) {
        const double kb = k * beta;
        const double log_mag = std::lgamma(kb + 1.0) - std::lgamma(k + 1.0) - (kb + 1.0) * lx;
        const double mag = std::exp(log_mag) / kPi;
        const double term = ((k % 2) ? 1.0 : -1.0) * mag * std::sin(k * kPi * beta);
        sum += term;
        abs_sum += std::abs(term);
        last = mag;
        // Cancellation alone already exceeds the tolerance: give up early.
        if (8.0 * kEps * abs_sum > tolerance) return {sum, 8.0 * kEps * abs_sum};
        const bool decreasing = log_mag < prev_log;
        prev_log = log_mag;
        if (k > 2 && decreasing && (mag < 1e-3 * tolerance || mag < 1e-17 * abs_sum)) break;
    }
    return {sum, 8.0 * kEps * abs_sum + last};
}

// A(u) from the Zolotarev/Kanter representation on (0, pi).
// g(x) = (1/pi) int_0^pi c x^{-1/(1-beta)} A(u) exp(-A(u) x^{-beta/(1-beta)}) du with c = beta/(1-beta).
// Positive integrand, so it stays accurate where the series cancels and the
// fixed contour is unusable (beta > 1/2).
double stable_kanter(double beta, double x) {
    const double big = std::pow(x, -beta / (1.0 - beta));
    const double log_pre = std::log(beta / (1.0 - beta) / kPi) - std::log(x) / (1.0 - beta);
    // A(u) increases from A(0+) = beta^{beta/(1-beta)} (1-beta), so this bounds the integrand.
    const double a0 = std::pow(beta, beta / (1.0 - beta)) * (1.0 - beta);
    if (log_pre + std::log(a0) - a0 * big < -745.0) return 0.0;
    boost::math::quadrature::gauss_kronrod<double, 61> gk;
    double err = 0.0;
    return gk.integrate(
        [&](double u) {
            if (u <= 0.0 || u >= kPi) return 0.0;
            const double a = kanter_a(beta, u);
            return std::exp(log_pre + std::log(a) - a * big);
        },
        0.0, kPi, 15, 1e-12, &err);
}

double stable_talbot(double beta, double x) {
    const double v = talbot_inverse_log([beta](std::complex<double> s) { return -std::pow(s, beta); }, x, 32);
    if (!std::isfinite(v)) {
        // Only the far left tail, where g is below any representable tolerance, overflows the contour.
        if (x < 1e-3) return 0.0;
        throw NumericalError("stable_g", "Talbot inversion overflowed at x=" + std::to_string(x));
    }
    return std::max(v, 0.0);
}

}  // namespace

double kanter_a(double beta, double u) {
    if (u < 1e-8) return std::pow(beta, beta / (1.0 - beta)) * (1.0 - beta);
    return std::exp(beta / (1.0 - beta) * std::log(std::sin(beta * u)) + std::log(std::sin((1.0 - beta) * u)) -
                    std::log(std::sin(u)) / (1.0 - beta));
}

void KernelId::validate() const {
    switch (kind) {
        case KernelKind::StableG:
        case KernelKind::InvSubordinator:
            if (!beta) throw std::invalid_argument("stable and inverse-subordinator kernels need beta");
            break;
        case KernelKind::BS:
            if (!n || !d || *n < 1 || *d < 1) throw std::invalid_argument("Brownian-sheet kernel needs n >= 1 and d >= 1");
            break;
        case KernelKind::BM:
            break;
    }
}

double bm_density(double t, double s) {
    if (!(t > 0.0)) throw std::domain_error("bm_density requires t > 0");
    return std::exp(-s * s / (2.0 * t)) / std::sqrt(2.0 * kPi * t);
}

double abs_bm_density(double t, double x) {
    if (x < 0.0) return 0.0;
    return 2.0 * bm_density(t, x);
}

double bs_density(std::span<const double> s, std::span<const double> x, std::span<const double> y) {
    if (s.empty()) throw std::invalid_argument("bs_density needs at least one time parameter");
    if (x.size() != y.size() || x.empty()) throw std::invalid_argument("bs_density needs matching non-empty points");
    double v = 1.0;
    for (double si : s) {
        if (!(si > 0.0)) throw std::domain_error("bs_density requires every s_i > 0");
        v *= si;
    }
    double r2 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) r2 += (x[i] - y[i]) * (x[i] - y[i]);
    const double d = static_cast<double>(x.size());
    return std::exp(-r2 / (2.0 * v)) / std::pow(2.0 * kPi * v, d / 2.0);
}

double stable_g(double beta, double x, StableMethod method, double tolerance) {
    require_beta(beta);
    if (!(x > 0.0)) throw std::domain_error("stable_g requires x > 0");
    switch (method) {
        case StableMethod::ClosedFormHalf:
            if (beta != 0.5) throw std::invalid_argument("closed form is only available for beta = 1/2");
            return closed_form_half(x);
        case StableMethod::Talbot:
            if (beta > 0.5) throw std::invalid_argument("the fixed Talbot contour is only valid for beta <= 1/2");
            return stable_talbot(beta, x);
        case StableMethod::Integral:
            return stable_kanter(beta, x);
        case StableMethod::Series: {
            const auto s = stable_series(beta, x, tolerance);
            if (s.bound > tolerance) {
                std::ostringstream msg;
                msg << "stable_g series cannot reach tolerance " << tolerance << " at x=" << x << " (bound " << s.bound
                    << ")";
                throw SeriesRangeError(msg.str(), s.bound);
            }
            return std::max(s.value, 0.0);
        }
        case StableMethod::Auto:
            break;
    }
    if (beta == 0.5) return closed_form_half(x);
    const auto s = stable_series(beta, x, tolerance);
    if (s.bound <= tolerance) return std::max(s.value, 0.0);
    return beta <= 0.5 ? stable_talbot(beta, x) : stable_kanter(beta, x);
}

double inv_subordinator_density(double beta, double t, double x, double tolerance) {
    require_beta(beta);
    if (!(t > 0.0)) throw std::domain_error("inverse-subordinator density requires t > 0");
    if (!(x > 0.0)) throw std::domain_error("inverse-subordinator density requires x > 0 (use the boundary routine at 0)");
    const double arg = t * std::pow(x, -1.0 / beta);
    const double prefactor = t / beta * std::pow(x, -1.0 - 1.0 / beta);
    if (!(arg > 1e-300) || prefactor == 0.0) return 0.0;  // beyond double range in the far tail
    // So close to x = 0 that the formula overflows: the density equals its boundary value to O(x).
    if (!std::isfinite(prefactor) || arg > 1e250) return std::pow(t, -beta) / std::tgamma(1.0 - beta);
    // The g tolerance is scaled so the product meets the requested absolute accuracy.
    const double g_tol = std::max(tolerance / std::max(prefactor, 1e-300), 1e-15);
    return prefactor * stable_g(beta, arg, StableMethod::Auto, std::min(g_tol, 1.0));
}

double inv_subordinator_boundary_formula(double beta, double t, int k) {
    require_beta(beta);
    if (k < 0) throw std::invalid_argument("derivative order must be nonnegative");
    const double a = 1.0 - (k + 1) * beta;
    // 1/Gamma vanishes at the non-positive integers.
    if (std::abs(a - std::round(a)) < 1e-12 && std::round(a) <= 0.0) return 0.0;
    return std::pow(t, -(k + 1) * beta) * ((k % 2) ? -1.0 : 1.0) / std::tgamma(a);
}

double inv_subordinator_boundary(double beta, double t, int k, double delta) {
    require_beta(beta);
    if (k < 0 || k > 6) throw std::invalid_argument("boundary derivative order must be in 0..6");
    if (!(delta > 0.0)) throw std::invalid_argument("extrapolation step must be positive");
    constexpr int m = 8;
    // Newton divided differences on x_i = (i+1) delta, then differentiate the
    // interpolant k times at 0 by expanding to monomial coefficients.
    double xs[m], c[m];
    for (int i = 0; i < m; ++i) {
        xs[i] = (i + 1) * delta;
        c[i] = inv_subordinator_density(beta, t, xs[i], 1e-14);
    }
    for (int j = 1; j < m; ++j)
        for (int i = m - 1; i >= j; --i) c[i] = (c[i] - c[i - 1]) / (xs[i] - xs[i - j]);
    double poly[m] = {0};
    for (int i = m - 1; i >= 0; --i) {
        for (int p = m - 1; p >= 1; --p) poly[p] = poly[p - 1] - xs[i] * poly[p];
        poly[0] = -xs[i] * poly[0] + c[i];
    }
    double fact = 1.0;
    for (int i = 2; i <= k; ++i) fact *= i;
    return poly[k] * fact;
}

KernelEval evaluate_kernel(const KernelId& id, std::span<const double> t, std::span<const double> source,
                           std::span<const double> target, double tolerance) {
    id.validate();
    KernelEval e{id, {t.begin(), t.end()}, {source.begin(), source.end()}, {target.begin(), target.end()}, 0.0};
    auto one = [](std::span<const double> v, const char* what) {
        if (v.size() != 1) throw std::invalid_argument(std::string("expected a single value for ") + what);
        return v[0];
    };
    switch (id.kind) {
        case KernelKind::BM:
            e.value = bm_density(one(t, "t"), one(target, "target") - one(source, "source"));
            break;
        case KernelKind::BS:
            if (static_cast<int>(t.size()) != *id.n || static_cast<int>(source.size()) != *id.d)
                throw std::invalid_argument("Brownian-sheet arguments do not match (n, d)");
            e.value = bs_density(t, source, target);
            break;
        case KernelKind::StableG:
            e.value = stable_g(id.beta->beta(), one(target, "x"), StableMethod::Auto, tolerance);
            break;
        case KernelKind::InvSubordinator:
            e.value = inv_subordinator_density(id.beta->beta(), one(t, "t"), one(target, "x") - (source.empty() ? 0.0 : source[0]),
                                               tolerance);
            break;
    }
    return e;
}

double laplace_check(double beta, double x, std::span<const double> s_points) {
    require_beta(beta);
    if (!(x > 0.0)) throw std::domain_error("laplace_check requires x > 0");
    boost::math::quadrature::exp_sinh<double> integrator;
    double worst = 0.0;
    for (double s : s_points) {
        if (!(s > 0.0)) throw std::domain_error("Laplace variable must be positive");
        double err = 0.0, l1 = 0.0;
        const double value = integrator.integrate(
            [&](double t) { return t > 0.0 ? std::exp(-s * t) * inv_subordinator_density(beta, t, x, 1e-14) : 0.0; },
            1e-12, &err, &l1);
        const double target = std::pow(s, beta - 1.0) * std::exp(-x * std::pow(s, beta));
        if (!std::isfinite(value) || err > 1e-6 * std::max(l1, 1e-300) + 1e-14)
            throw NumericalError("laplace_check", "quadrature did not converge at s=" + std::to_string(s));
        worst = std::max(worst, std::abs(value - target));
    }
    return worst;
}

DensityPdeResult density_pde_residual(const FractionalOrder& order, const DensityGrid& grid) {
    const int nu = order.require_nu();
    if (nu != 2 && nu != 3) throw std::invalid_argument("density PDE residual supports nu in {2, 3}");
    const double beta = order.beta();
    if (grid.nt < 3 || grid.nx < static_cast<std::size_t>(2 * nu + 1))
        throw std::invalid_argument("grid too coarse for the derivative stencils");
    if (!(grid.x_lo > 0.0) || !(grid.t_lo > 0.0) || grid.x_hi <= grid.x_lo || grid.t_hi <= grid.t_lo)
        throw std::invalid_argument("density grid must satisfy 0 < t_lo < t_hi and 0 < x_lo < x_hi");

    const double ht = (grid.t_hi - grid.t_lo) / static_cast<double>(grid.nt - 1);
    const double hx = (grid.x_hi - grid.x_lo) / static_cast<double>(grid.nx - 1);
    const int gx = nu == 2 ? 1 : 2;  // ghost columns for the spatial stencil
    if (grid.x_lo - gx * hx <= 0.0) throw std::invalid_argument("spatial stencil would cross x = 0");
    const std::size_t mt = grid.nt + 2, mx = grid.nx + 2 * gx;
    std::vector<double> k(mt * mx);
    for (std::size_t i = 0; i < mt; ++i) {
        const double t = grid.t_lo + (static_cast<double>(i) - 1.0) * ht;
        for (std::size_t j = 0; j < mx; ++j) {
            const double x = grid.x_lo + (static_cast<double>(j) - gx) * hx;
            k[i * mx + j] = inv_subordinator_density(beta, t, x, 1e-14);
        }
    }
    auto at = [&](std::size_t i, std::size_t j) { return k[i * mx + j]; };

    DensityPdeResult out;
    auto& hr = out.higher_order;
    hr.system = SystemKind::DensityHigherOrder;
    {
        std::ostringstream d;
        d << "t=[" << grid.t_lo << ',' << grid.t_hi << "]x" << grid.nt << " x=[" << grid.x_lo << ',' << grid.x_hi << "]x"
          << grid.nx << " nu=" << nu;
        hr.grid_desc = d.str();
    }
    const double sign = (nu % 2 == 0) ? 1.0 : -1.0;
    for (std::size_t i = 1; i + 1 < mt; ++i) {
        for (std::size_t j = gx; j + gx < mx; ++j) {
            const double dt = (at(i + 1, j) - at(i - 1, j)) / (2.0 * ht);
            double dx;
            if (nu == 2)
                dx = (at(i, j + 1) - 2.0 * at(i, j) + at(i, j - 1)) / (hx * hx);
            else
                dx = (at(i, j + 2) - 2.0 * at(i, j + 1) + 2.0 * at(i, j - 1) - at(i, j - 2)) / (2.0 * hx * hx * hx);
            hr.add(dt - sign * dx);
        }
    }
    hr.finish();

    for (int kk = 0; kk < nu; ++kk) {
        BoundaryCheck b;
        const bool relative = inv_subordinator_boundary_formula(beta, 1.0, kk) != 0.0;
        b.row = "d^" + std::to_string(kk) + "K/dx^" + std::to_string(kk) + " at x=0+ (" +
                (relative ? "relative" : "absolute") + ")";
        b.tolerance = 1e-3;
        for (double t : {grid.t_lo, 0.5 * (grid.t_lo + grid.t_hi), grid.t_hi}) {
            const double num = inv_subordinator_boundary(beta, t, kk);
            const double ref = inv_subordinator_boundary_formula(beta, t, kk);
            const double err = relative ? std::abs(num - ref) / std::abs(ref) : std::abs(num - ref);
            b.max_abs_error = std::max(b.max_abs_error, err);
            ++b.points;
        }
        hr.boundary.push_back(b);
    }

    // Fractional form on x >= epsilon: Caputo in t from 0, where K(0, x) = 0.
    auto& fr = out.fractional;
    fr.system = SystemKind::DensityFractional;
    const auto tg = TimeGrid1D::uniform(grid.t_hi, grid.fractional_steps);
    const CaputoOperator op(tg, beta);
    const double x0 = std::max(grid.x_lo, grid.epsilon);
    const std::size_t nfx = std::max<std::size_t>(grid.fractional_x_points, 2);
    {
        std::ostringstream d;
        d << "t=[0," << grid.t_hi << "]x" << tg.size() << " x=[" << x0 << ',' << grid.x_hi << "]x" << nfx
          << " eval t>=" << grid.t_lo;
        fr.grid_desc = d.str();
    }
    const double h = 1e-3;
    for (std::size_t q = 0; q < nfx; ++q) {
        const double x = x0 + (grid.x_hi - x0) * static_cast<double>(q) / static_cast<double>(nfx - 1);
        std::vector<double> line(tg.size(), 0.0);
        for (std::size_t i = 1; i < tg.size(); ++i) line[i] = inv_subordinator_density(beta, tg[i], x, 1e-14);
        const auto cap = op.apply(line);
        for (std::size_t i = 1; i < tg.size(); ++i) {
            const double t = tg[i];
            if (t < grid.t_lo - 1e-12) continue;
            auto kx = [&](double xx) { return inv_subordinator_density(beta, t, xx, 1e-14); };
            const double dx = (-kx(x + 2 * h) + 8.0 * kx(x + h) - 8.0 * kx(x - h) + kx(x - 2 * h)) / (12.0 * h);
            fr.add(cap[i] + dx);
        }
    }
    fr.finish();
    return out;
}

}  // namespace sheetlab
