#include "sheetlab/fractional_calculus.hpp"

#include "convolution.hpp"
#include "linear_solve.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace sheetlab {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_beta(double beta) {
    if (!(beta > 0.0 && beta < 1.0))
        throw std::domain_error("fractional order must lie in (0,1), got " + std::to_string(beta));
}

double parse_double(std::string_view s) {
    double v = 0.0;
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc{} || ptr != end)
        throw std::invalid_argument("cannot parse number '" + std::string(s) + "'");
    return v;
}

// Base scheme on a unit step grid (tau = 1) without any prefactor.
std::vector<double> l1_kernel(double beta, std::size_t len) {
    std::vector<double> b(len);
    for (std::size_t k = 0; k < len; ++k) {
        const double kk = static_cast<double>(k);
        b[k] = std::pow(kk + 1.0, 1.0 - beta) - std::pow(kk, 1.0 - beta);
    }
    return b;
}

std::vector<double> gl_kernel(double beta, std::size_t len) {
    std::vector<double> g(len);
    g[0] = 1.0;
    for (std::size_t k = 1; k < len; ++k) g[k] = g[k - 1] * (1.0 - (beta + 1.0) / static_cast<double>(k));
    return g;
}

// Applies the unscaled base scheme: out[n] for n >= 1, out[0] unused.
std::vector<double> base_apply(CaputoScheme scheme, const detail::KernelConvolver& conv,
                               std::span<const double> u) {
    const std::size_t n = u.size();
    std::vector<double> out(n, kNaN);
    if (scheme == CaputoScheme::L1) {
        std::vector<double> diff(n - 1);
        for (std::size_t i = 1; i < n; ++i) diff[i - 1] = u[i] - u[i - 1];
        const auto c = conv.apply(diff);
        for (std::size_t i = 1; i < n; ++i) out[i] = c[i - 1];
    } else {
        std::vector<double> shifted(n);
        for (std::size_t i = 0; i < n; ++i) shifted[i] = u[i] - u[0];
        const auto c = conv.apply(shifted);
        for (std::size_t i = 1; i < n; ++i) out[i] = c[i];
    }
    return out;
}

}  // namespace

FractionalOrder FractionalOrder::from_beta(double beta) {
    check_beta(beta);
    return FractionalOrder(beta, std::nullopt);
}

FractionalOrder FractionalOrder::from_nu(int nu) {
    if (nu < 2) throw std::domain_error("nu must be an integer >= 2, got " + std::to_string(nu));
    return FractionalOrder(1.0 / nu, nu);
}

FractionalOrder FractionalOrder::parse(std::string_view text) {
    while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
    while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
    if (text.empty()) throw std::invalid_argument("empty fractional order");
    if (const auto slash = text.find('/'); slash != std::string_view::npos) {
        const double num = parse_double(text.substr(0, slash));
        const double den = parse_double(text.substr(slash + 1));
        if (num == 1.0 && den == std::floor(den) && den >= 2.0) return from_nu(static_cast<int>(den));
        if (den == 0.0) throw std::invalid_argument("zero denominator in fractional order");
        return from_beta(num / den);
    }
    const double v = parse_double(text);
    if (v >= 2.0 && v == std::floor(v)) return from_nu(static_cast<int>(v));
    // A decimal that is exactly 1/nu (e.g. 0.5, 0.25) keeps the nu tag.
    if (v > 0.0 && v < 1.0) {
        const double inv = 1.0 / v;
        if (inv == std::floor(inv) && static_cast<double>(1.0 / inv) == v) return from_nu(static_cast<int>(inv));
    }
    return from_beta(v);
}

int FractionalOrder::require_nu() const {
    if (!nu_) throw std::invalid_argument("this operation requires beta = 1/nu with integer nu");
    return *nu_;
}

TimeGrid1D TimeGrid1D::uniform(double t_end, std::size_t steps) {
    if (!(t_end > 0.0) || steps < 1) throw std::invalid_argument("uniform grid needs t_end > 0 and steps >= 1");
    std::vector<double> pts(steps + 1);
    const double tau = t_end / static_cast<double>(steps);
    for (std::size_t i = 0; i <= steps; ++i) pts[i] = tau * static_cast<double>(i);
    TimeGrid1D g(std::move(pts));
    g.step_ = tau;
    return g;
}

TimeGrid1D::TimeGrid1D(std::vector<double> points) : points_(std::move(points)) {
    if (points_.empty() || points_[0] != 0.0) throw std::invalid_argument("time grid must start at 0");
    for (std::size_t i = 1; i < points_.size(); ++i)
        if (!(points_[i] > points_[i - 1])) throw std::invalid_argument("time grid must be strictly increasing");
    if (points_.size() >= 2) {
        const double h = points_.back() / static_cast<double>(points_.size() - 1);
        bool uniform = true;
        for (std::size_t i = 1; i < points_.size() && uniform; ++i)
            uniform = std::abs(points_[i] - h * static_cast<double>(i)) <= 1e-12 * points_.back();
        if (uniform) step_ = h;
    }
}

std::vector<double> power_series_exponents(double beta, double max_exponent) {
    check_beta(beta);
    std::vector<double> out;
    for (int k = 1; k * beta <= max_exponent + 1e-12; ++k) out.push_back(k * beta);
    return out;
}

double caputo_power(double p, double beta, double t) {
    check_beta(beta);
    if (!(p > 0.0)) throw std::domain_error("caputo_power requires p > 0");
    if (!(t > 0.0)) throw std::domain_error("caputo_power requires t > 0");
    return std::exp(std::lgamma(p + 1.0) - std::lgamma(p + 1.0 - beta)) * std::pow(t, p - beta);
}

CaputoOperator::CaputoOperator(const TimeGrid1D& grid, double beta, const CaputoOptions& options)
    : grid_(grid), beta_(beta), scheme_(options.scheme), scale_(0.0) {
    check_beta(beta);
    if (grid.size() < 3) throw std::invalid_argument("Caputo scheme needs at least 3 grid points");
    if (!grid.uniform_step()) throw std::invalid_argument("Caputo scheme requires a uniform grid");
    const std::size_t n = grid.size();
    const double tau = *grid.uniform_step();
    if (scheme_ == CaputoScheme::L1) {
        conv_ = std::make_unique<detail::KernelConvolver>(l1_kernel(beta, n - 1), n - 1);
        scale_ = std::pow(tau, -beta) / std::tgamma(2.0 - beta);
    } else {
        conv_ = std::make_unique<detail::KernelConvolver>(gl_kernel(beta, n), n);
        scale_ = std::pow(tau, -beta);
    }

    const auto& sig = options.singular_exponents;
    corrections_ = sig.size();
    if (corrections_ == 0) return;
    if (corrections_ + 1 > n) throw std::invalid_argument("grid too short for the requested starting corrections");
    for (double s : sig)
        if (!(s > 0.0)) throw std::invalid_argument("correction exponents must be positive");

    // For each exponent, the unit-step residual of the base scheme on m^sigma.
    const std::size_t mc = corrections_;
    std::vector<std::vector<double>> rhs(mc);
    const double base_factor = scale_ * std::pow(tau, beta);  // unscaled prefactor (1/Gamma(2-beta) or 1)
    for (std::size_t r = 0; r < mc; ++r) {
        std::vector<double> u(n);
        for (std::size_t i = 0; i < n; ++i) u[i] = std::pow(static_cast<double>(i), sig[r]);
        const auto approx = base_apply(scheme_, *conv_, u);
        const double c = std::exp(std::lgamma(1.0 + sig[r]) - std::lgamma(1.0 + sig[r] - beta));
        rhs[r].resize(n);
        for (std::size_t i = 1; i < n; ++i)
            rhs[r][i] = c * std::pow(static_cast<double>(i), sig[r] - beta) - base_factor * approx[i];
    }
    detail::DenseMatrix a(mc, mc);
    for (std::size_t r = 0; r < mc; ++r)
        for (std::size_t m = 0; m < mc; ++m) a(r, m) = std::pow(static_cast<double>(m + 1), sig[r]);
    const detail::LuFactor lu(a);
    weights_.assign(n * mc, 0.0);
    const double tau_scale = std::pow(tau, -beta);
    std::vector<double> b(mc);
    for (std::size_t i = 1; i < n; ++i) {
        for (std::size_t r = 0; r < mc; ++r) b[r] = rhs[r][i];
        const auto w = lu.solve(b);
        for (std::size_t m = 0; m < mc; ++m) weights_[i * mc + m] = tau_scale * w[m];
    }
}

CaputoOperator::~CaputoOperator() = default;
CaputoOperator::CaputoOperator(CaputoOperator&&) noexcept = default;
CaputoOperator& CaputoOperator::operator=(CaputoOperator&&) noexcept = default;

std::vector<double> CaputoOperator::apply(std::span<const double> values) const {
    const std::size_t n = grid_.size();
    if (values.size() != n) throw std::invalid_argument("value count does not match the time grid");
    for (double v : values)
        if (!std::isfinite(v)) throw std::invalid_argument("Caputo input contains non-finite values");
    auto out = base_apply(scheme_, *conv_, values);
    for (std::size_t i = 1; i < n; ++i) out[i] *= scale_;
    if (corrections_ > 0) {
        for (std::size_t i = 1; i < n; ++i) {
            double s = 0.0;
            for (std::size_t m = 0; m < corrections_; ++m) s += weights_[i * corrections_ + m] * (values[m + 1] - values[0]);
            out[i] += s;
        }
    }
    return out;
}

double extrapolate_to_zero(std::span<const double> values, double exponent, int terms) {
    if (terms < 1) throw std::invalid_argument("extrapolation needs at least one term");
    const auto m_count = static_cast<std::size_t>(terms);
    if (values.size() < m_count + 1) throw std::invalid_argument("too few interior points to extrapolate");
    std::vector<double> z(m_count);
    for (std::size_t m = 0; m < m_count; ++m) z[m] = std::pow(static_cast<double>(m + 1), exponent);
    double a = 0.0;
    for (std::size_t m = 0; m < m_count; ++m) {
        double l = 1.0;
        for (std::size_t k = 0; k < m_count; ++k)
            if (k != m) l *= (0.0 - z[k]) / (z[m] - z[k]);
        a += l * values[m + 1];
    }
    return a;
}

CaputoResult caputo_l1(std::span<const double> values, const TimeGrid1D& grid, double beta,
                       const CaputoOptions& options) {
    const CaputoOperator op(grid, beta, options);
    CaputoResult r{grid, op.apply(values), FractionalOrder::from_beta(beta), 1, 0.0, {}};
    r.limit_at_zero = extrapolate_to_zero(r.values, beta);
    r.pass_limits.push_back(r.limit_at_zero);
    return r;
}

CaputoResult iterated_caputo(std::span<const double> values, const TimeGrid1D& grid, double beta, int k,
                             const CaputoOptions& options) {
    check_beta(beta);
    if (k < 1) throw std::invalid_argument("iteration count must be >= 1");
    if (k * beta > 1.0 + 1e-12)
        throw std::domain_error("iterated Caputo requires k*beta <= 1");
    const CaputoOperator op(grid, beta, options);
    std::vector<double> current(values.begin(), values.end());
    CaputoResult r{grid, {}, FractionalOrder::from_beta(beta), k, 0.0, {}};
    for (int pass = 0; pass < k; ++pass) {
        current = op.apply(current);
        const double lim = extrapolate_to_zero(current, beta);
        r.pass_limits.push_back(lim);
        if (pass + 1 < k) current[0] = lim;
    }
    r.values = std::move(current);
    r.limit_at_zero = r.pass_limits.back();
    return r;
}

CompositionReport composition_residual(std::span<const double> values, const TimeGrid1D& grid, double beta1,
                                       double beta2, const CaputoOptions& options) {
    check_beta(beta1);
    check_beta(beta2);
    const double total = beta1 + beta2;
    if (total > 1.0 + 1e-12) throw std::domain_error("composition identity requires beta1 + beta2 <= 1");
    const std::size_t n = grid.size();
    if (values.size() != n) throw std::invalid_argument("value count does not match the time grid");

    const CaputoOperator inner_op(grid, beta2, options);
    auto inner = inner_op.apply(values);
    const double inner0 = extrapolate_to_zero(inner, beta2);
    inner[0] = inner0;

    CaputoOptions outer_options = options;
    if (outer_options.singular_exponents.empty() && options.scheme == CaputoScheme::L1)
        outer_options.singular_exponents = {1.0 - beta2};
    const CaputoOperator outer_op(grid, beta1, outer_options);
    const auto lhs = outer_op.apply(inner);

    std::vector<double> rhs(n, kNaN);
    if (std::abs(total - 1.0) <= 1e-12) {
        const double tau = *grid.uniform_step();
        for (std::size_t i = 1; i + 1 < n; ++i) rhs[i] = (values[i + 1] - values[i - 1]) / (2.0 * tau);
        rhs[n - 1] = (3.0 * values[n - 1] - 4.0 * values[n - 2] + values[n - 3]) / (2.0 * tau);
    } else {
        rhs = CaputoOperator(grid, total, options).apply(values);
    }

    CompositionReport rep;
    rep.residual.assign(n, kNaN);
    const double g = std::tgamma(1.0 - beta1);
    for (std::size_t i = 1; i < n; ++i) {
        const double corr = std::pow(grid[i], -beta1) / g * inner0;
        rep.residual[i] = lhs[i] - rhs[i] + corr;
        rep.inf_norm = std::max(rep.inf_norm, std::abs(rep.residual[i]));
    }
    return rep;
}

std::vector<double> causal_convolution(std::span<const double> a, std::span<const double> b, std::size_t out_len) {
    return detail::KernelConvolver(a, out_len).apply(b);
}

}  // namespace sheetlab
