#include "sheetlab/moments.hpp"

#include "sheetlab/densities.hpp"
#include "sheetlab/error.hpp"
#include "sheetlab/samplers.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace sheetlab {
namespace {

double factorial(int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

double closed_form(const FractionalOrder& order, double gamma) {
    const auto nu = order.nu();
    const double k = std::round(gamma);
    if (!nu || k != gamma || k < 1.0)
        throw std::invalid_argument("closed-form moment needs beta = 1/nu and an integer gamma >= 1");
    return *nu * factorial(static_cast<int>(k) - 1) / std::tgamma(k / *nu);
}

double quadrature(double beta, double gamma, const MomentOptions& options) {
    auto integrand = [beta, gamma](double x) {
        if (x <= 0.0) return 0.0;
        const double g = stable_g(beta, x);
        return g == 0.0 ? 0.0 : std::pow(x, -gamma * beta) * g;
    };
    const double delta = options.split;
    double err_left = 0.0, err_right = 0.0, l1 = 0.0;
    boost::math::quadrature::tanh_sinh<double> left;
    const double a = left.integrate(integrand, 0.0, delta, options.tolerance, &err_left, &l1);
    boost::math::quadrature::exp_sinh<double> right;
    const double b = right.integrate([&](double y) { return integrand(delta + y); }, options.tolerance, &err_right,
                                     &l1);
    const double value = a + b;
    if (!std::isfinite(value) || err_left + err_right > 1e-6 * std::max(1.0, std::abs(value)))
        throw NumericalError("moment_E", "quadrature did not converge (error estimate " +
                                             std::to_string(err_left + err_right) + ")");
    return value;
}

}  // namespace

MomentRoute parse_moment_route(std::string_view text) {
    if (text == "closed-form" || text == "closed_form" || text == "CLOSED_FORM") return MomentRoute::ClosedForm;
    if (text == "quadrature" || text == "QUADRATURE") return MomentRoute::Quadrature;
    if (text == "monte-carlo" || text == "monte_carlo" || text == "MONTE_CARLO") return MomentRoute::MonteCarlo;
    throw std::invalid_argument("unknown moment route '" + std::string(text) + "'");
}

const char* to_string(MomentRoute route) {
    switch (route) {
        case MomentRoute::ClosedForm: return "CLOSED_FORM";
        case MomentRoute::Quadrature: return "QUADRATURE";
        case MomentRoute::MonteCarlo: return "MONTE_CARLO";
    }
    return "UNKNOWN";
}

double moment_E_gamma_ratio(double beta, double gamma) {
    if (!(gamma > -1.0)) throw std::invalid_argument("moment order gamma must exceed -1");
    return std::exp(std::lgamma(1.0 + gamma) - std::lgamma(1.0 + gamma * beta));
}

MomentConstant moment_E(const FractionalOrder& order, double gamma, MomentRoute route, const MomentOptions& options) {
    if (!(gamma > -1.0)) throw std::invalid_argument("moment order gamma must exceed -1");
    MomentConstant out{order, gamma, 0.0, route, 0.0};
    const double beta = order.beta();
    switch (route) {
        case MomentRoute::ClosedForm: out.value = closed_form(order, gamma); break;
        case MomentRoute::Quadrature: out.value = quadrature(beta, gamma, options); break;
        case MomentRoute::MonteCarlo: {
            const RngStream stream(options.seed, options.stream_id);
            const auto est = mc_mean(options.samples, stream, [beta, gamma](RngStream& s) {
                return std::pow(sample_stable_L1(beta, s), -gamma * beta);
            });
            out.value = est.estimate;
            out.standard_error = est.standard_error;
            break;
        }
    }
    return out;
}

double abs_bm_moment(double t, double q) {
    if (t < 0.0 || !(q > -1.0)) throw std::invalid_argument("abs_bm_moment needs t >= 0 and q > -1");
    if (q == 0.0) return 1.0;
    return std::pow(2.0 * t, 0.5 * q) * std::tgamma(0.5 * (q + 1.0)) / std::sqrt(std::numbers::pi);
}

double clock_moment(const Clock& clock, double t, double q) {
    clock.validate();
    if (clock.kind == ClockKind::BTBS) return abs_bm_moment(t, q);
    if (t < 0.0) throw std::invalid_argument("time must be nonnegative");
    if (q == 0.0) return 1.0;
    const double beta = clock.order->beta();
    return std::pow(t, q * beta) * moment_E_gamma_ratio(beta, q);
}

double boundary_constant(const Clock& clock) {
    clock.validate();
    if (clock.kind == ClockKind::BTBS) return std::sqrt(2.0 / std::numbers::pi);
    return moment_E_gamma_ratio(clock.order->beta(), 1.0);
}

TimeProfile profile_M(const FractionalOrder& order, std::size_t active, int kappa, std::span<const double> t) {
    const int nu = order.require_nu();
    if (kappa < 1 || kappa > nu - 1) throw std::invalid_argument("kappa must lie in 1..nu-1");
    if (active >= t.size()) throw std::invalid_argument("active index out of range");
    const double e = moment_E(order, kappa).value;
    const double p = static_cast<double>(kappa) / nu;
    double prod = 1.0;
    for (double ti : t) {
        if (ti < 0.0) throw std::invalid_argument("times must be nonnegative");
        prod *= std::pow(ti, p);
    }
    TimeProfile out{ProfileKind::MKappa, active, kappa, {t.begin(), t.end()}, 0.0, 0.0};
    const double c = std::pow(e, static_cast<double>(t.size())) / factorial(kappa);
    out.value = c * prod;
    double rest = 1.0;
    for (std::size_t i = 0; i < t.size(); ++i)
        if (i != active) rest *= std::pow(t[i], p);
    out.d_dtj = t[active] > 0.0 ? c * rest * p * std::pow(t[active], p - 1.0)
                                : (rest == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
    return out;
}

TimeProfile profile_N(const FractionalOrder& order, std::size_t active, std::span<const double> t) {
    const int nu = order.require_nu();
    if (active >= t.size()) throw std::invalid_argument("active index out of range");
    double prod = 1.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] < 0.0) throw std::invalid_argument("times must be nonnegative");
        if (i != active) prod *= t[i];
    }
    const double e = moment_E(order, nu).value;
    return {ProfileKind::NNu, active, nu, {t.begin(), t.end()}, std::pow(e, static_cast<double>(t.size()) - 1.0) * prod,
            0.0};
}

}  // namespace sheetlab
