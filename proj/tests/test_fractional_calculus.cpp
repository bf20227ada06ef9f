#include <doctest.h>

#include "sheetlab/fractional_calculus.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

using namespace sheetlab;

namespace {

// Independent oracle: Gamma ratio via the recursion Gamma(z+1) = z Gamma(z) down to
// known half-integer and integer values.
double power_rule(double p, double beta, double t) {
    return std::tgamma(p + 1.0) / std::tgamma(p + 1.0 - beta) * std::pow(t, p - beta);
}

std::vector<double> sample(const TimeGrid1D& g, const std::function<double(double)>& f) {
    std::vector<double> v(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) v[i] = f(g[i]);
    return v;
}

const double kSqrtPi = std::sqrt(std::numbers::pi);

}  // namespace

TEST_CASE("power rule closed values") {
    CHECK(caputo_power(1.0, 0.5, 1.0) == doctest::Approx(2.0 / kSqrtPi).epsilon(1e-14));
    CHECK(caputo_power(0.5, 0.5, 5.0) == doctest::Approx(kSqrtPi / 2.0).epsilon(1e-14));
    CHECK(caputo_power(0.5, 0.5, 0.01) == doctest::Approx(kSqrtPi / 2.0).epsilon(1e-14));
    CHECK(caputo_power(2.0, 0.5, 1.0) == doctest::Approx(2.0 / (3.0 * kSqrtPi / 4.0)).epsilon(1e-14));
    CHECK(caputo_power(2.0, 0.5, 1.0) == doctest::Approx(1.5045055561).epsilon(1e-10));
    CHECK(caputo_power(1.0 / 3.0, 1.0 / 3.0, 2.0) == doctest::Approx(std::tgamma(4.0 / 3.0)).epsilon(1e-14));
    CHECK_THROWS_AS(caputo_power(0.0, 0.5, 1.0), std::domain_error);
    CHECK_THROWS_AS(caputo_power(1.0, 0.5, 0.0), std::domain_error);
    CHECK_THROWS_AS(caputo_power(1.0, 1.0, 1.0), std::domain_error);
}

TEST_CASE("fractional order parsing keeps nu exact") {
    const auto a = FractionalOrder::parse("1/3");
    REQUIRE(a.nu());
    CHECK(*a.nu() == 3);
    CHECK(a.beta() * *a.nu() == 1.0);
    CHECK(FractionalOrder::parse("0.5").nu() == 2);
    CHECK(FractionalOrder::parse("2").nu() == 2);
    CHECK_FALSE(FractionalOrder::parse("0.3").nu());
    CHECK(FractionalOrder::parse("2/5").beta() == doctest::Approx(0.4));
    CHECK_THROWS(FractionalOrder::parse("1.5"));
    CHECK_THROWS(FractionalOrder::parse("abc"));
    CHECK_THROWS(FractionalOrder::from_nu(1));
}

TEST_CASE("time grids") {
    const auto g = TimeGrid1D::uniform(1.0, 4);
    CHECK(g.size() == 5);
    REQUIRE(g.uniform_step());
    CHECK(*g.uniform_step() == 0.25);
    CHECK_FALSE(TimeGrid1D({0.0, 0.1, 0.3}).uniform_step());
    CHECK(TimeGrid1D({0.0, 0.5, 1.0}).uniform_step());
    CHECK_THROWS(TimeGrid1D({0.1, 0.2}));
    CHECK_THROWS(TimeGrid1D({0.0, 0.2, 0.2}));
}

TEST_CASE("L1 on linear data at t=1") {
    const auto g = TimeGrid1D::uniform(1.0, 1024);
    const auto r = caputo_l1(sample(g, [](double t) { return t; }), g, 0.5);
    CHECK(r.values.back() == doctest::Approx(2.0 / kSqrtPi).epsilon(1e-3));
    CHECK(std::isnan(r.values[0]));
    // The scheme integrates piecewise-linear data exactly.
    for (std::size_t i = 1; i < g.size(); i += 97)
        CHECK(r.values[i] == doctest::Approx(power_rule(1.0, 0.5, g[i])).epsilon(1e-12));
}

TEST_CASE("L1 kills constants exactly") {
    const auto g = TimeGrid1D::uniform(2.0, 1000);
    for (auto scheme : {CaputoScheme::L1, CaputoScheme::GrunwaldLetnikov}) {
        CaputoOptions o;
        o.scheme = scheme;
        const auto r = caputo_l1(std::vector<double>(g.size(), 3.7), g, 0.4, o);
        for (std::size_t i = 1; i < g.size(); ++i) CHECK(r.values[i] == 0.0);
    }
}

TEST_CASE("L1 on square-root data") {
    const auto g = TimeGrid1D::uniform(1.0, 1024);
    const auto u = sample(g, [](double t) { return std::sqrt(t); });
    const auto plain = caputo_l1(u, g, 0.5);
    CHECK(std::abs(plain.values.back() - kSqrtPi / 2.0) < 5e-3);
    CaputoOptions o;
    o.singular_exponents = {0.5};
    const auto fixed = caputo_l1(u, g, 0.5, o);
    for (std::size_t i = 1; i < g.size(); ++i) CHECK(std::abs(fixed.values[i] - kSqrtPi / 2.0) < 1e-8);
}

TEST_CASE("L1 linearity") {
    const auto g = TimeGrid1D::uniform(1.0, 2048);
    const auto u = sample(g, [](double t) { return std::sin(3.0 * t) + t * t; });
    const auto v = sample(g, [](double t) { return std::exp(-t) * std::sqrt(t); });
    std::vector<double> w(g.size());
    const double a = 1.7, b = -0.3;
    for (std::size_t i = 0; i < g.size(); ++i) w[i] = a * u[i] + b * v[i];
    for (auto scheme : {CaputoScheme::L1, CaputoScheme::GrunwaldLetnikov}) {
        CaputoOptions o;
        o.scheme = scheme;
        const auto ru = caputo_l1(u, g, 0.5, o), rv = caputo_l1(v, g, 0.5, o), rw = caputo_l1(w, g, 0.5, o);
        double worst = 0.0, scale = 0.0;
        for (std::size_t i = 1; i < g.size(); ++i) {
            worst = std::max(worst, std::abs(rw.values[i] - (a * ru.values[i] + b * rv.values[i])));
            scale = std::max(scale, std::abs(rw.values[i]));
        }
        CHECK(worst <= 1e-13 * std::max(1.0, scale));
    }
}

TEST_CASE("L1 convergence order for beta=1/2") {
    // t^2 is smooth at the origin, so the asymptotic order 2-beta is visible.
    std::vector<double> errors;
    for (std::size_t steps : {64u, 128u, 256u, 512u}) {
        const auto g = TimeGrid1D::uniform(1.0, steps);
        const auto r = caputo_l1(sample(g, [](double t) { return t * t; }), g, 0.5);
        double e = 0.0;
        for (std::size_t i = 1; i < g.size(); ++i) e = std::max(e, std::abs(r.values[i] - power_rule(2.0, 0.5, g[i])));
        errors.push_back(e);
    }
    for (std::size_t k = 1; k < errors.size(); ++k) {
        const double order = std::log2(errors[k - 1] / errors[k]);
        CAPTURE(order);
        CHECK(order >= 1.4);
    }
}

TEST_CASE("Grunwald-Letnikov cross-check") {
    const auto g = TimeGrid1D::uniform(1.0, 4096);
    CaputoOptions o;
    o.scheme = CaputoScheme::GrunwaldLetnikov;
    const auto r = caputo_l1(sample(g, [](double t) { return t * t; }), g, 0.5, o);
    CHECK(r.values.back() == doctest::Approx(power_rule(2.0, 0.5, 1.0)).epsilon(2e-3));
}

TEST_CASE("starting corrections make the scheme exact on the chosen powers") {
    const auto g = TimeGrid1D::uniform(1.5, 600);
    CaputoOptions o;
    o.singular_exponents = power_series_exponents(1.0 / 3.0);
    REQUIRE(o.singular_exponents.size() == 4);
    for (double p : {1.0 / 3.0, 2.0 / 3.0, 4.0 / 3.0}) {
        const auto r = caputo_l1(sample(g, [p](double t) { return std::pow(t, p); }), g, 1.0 / 3.0, o);
        for (std::size_t i = 1; i < g.size(); i += 13)
            CHECK(r.values[i] == doctest::Approx(power_rule(p, 1.0 / 3.0, g[i])).epsilon(1e-9));
    }
}

TEST_CASE("input validation") {
    CHECK_THROWS_AS(caputo_l1(std::vector<double>{0.0, 1.0}, TimeGrid1D({0.0, 1.0}), 0.5), std::invalid_argument);
    CHECK_THROWS_AS(caputo_l1(std::vector<double>{0.0, 1.0, 2.0}, TimeGrid1D({0.0, 1.0, 3.0}), 0.5),
                    std::invalid_argument);
    const auto g = TimeGrid1D::uniform(1.0, 10);
    CHECK_THROWS_AS(caputo_l1(std::vector<double>(5, 0.0), g, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(iterated_caputo(std::vector<double>(11, 0.0), g, 0.5, 3), std::domain_error);
}

TEST_CASE("iterated derivative of t with beta=1/2 is one") {
    const auto g = TimeGrid1D::uniform(1.0, 2048);
    CaputoOptions o;
    o.singular_exponents = power_series_exponents(0.5);
    const auto r = iterated_caputo(sample(g, [](double t) { return t; }), g, 0.5, 2, o);
    CHECK(r.iterations == 2);
    for (std::size_t i = 1; i < g.size(); ++i) CHECK(std::abs(r.values[i] - 1.0) < 2e-3);
    CHECK(std::abs(r.pass_limits[0]) < 1e-6);
    CHECK(std::abs(r.limit_at_zero - 1.0) < 2e-3);
}

TEST_CASE("iterated derivative of constants and single pass on cube root") {
    const auto g = TimeGrid1D::uniform(1.0, 1536);
    const auto c = iterated_caputo(std::vector<double>(g.size(), -2.0), g, 1.0 / 3.0, 3);
    for (std::size_t i = 1; i < g.size(); ++i) CHECK(c.values[i] == 0.0);
    CaputoOptions o;
    o.singular_exponents = power_series_exponents(1.0 / 3.0);
    const auto r = iterated_caputo(sample(g, [](double t) { return std::cbrt(t); }), g, 1.0 / 3.0, 1, o);
    CHECK(r.values.back() == doctest::Approx(0.8929795116).epsilon(1e-8));
}

TEST_CASE("extrapolation recovers the constant term of a t^beta series") {
    const double beta = 1.0 / 3.0, tau = 1e-3;
    std::vector<double> v(6);
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double z = std::pow(tau * static_cast<double>(i), beta);
        v[i] = 0.7 - 1.3 * z + 2.1 * z * z;
    }
    CHECK(extrapolate_to_zero(v, beta) == doctest::Approx(0.7).epsilon(1e-12));
}

TEST_CASE("composition identity") {
    const auto g = TimeGrid1D::uniform(1.0, 2047);
    SUBCASE("linear data, half plus half") {
        const auto r = composition_residual(sample(g, [](double t) { return t; }), g, 0.5, 0.5);
        CHECK(r.inf_norm < 5e-3);
    }
    SUBCASE("constant data gives an exact zero") {
        const auto r = composition_residual(std::vector<double>(g.size(), 4.0), g, 0.3, 0.4);
        CHECK(r.inf_norm == 0.0);
    }
    SUBCASE("quadratic data, third plus third") {
        const auto r = composition_residual(sample(g, [](double t) { return t * t; }), g, 1.0 / 3.0, 1.0 / 3.0);
        CHECK(r.inf_norm < 5e-3);
    }
    SUBCASE("nonzero inner limit selects the negative exponent") {
        // D^{1/2} sqrt(t) is the constant Gamma(3/2); the identity then reads
        // 0 = D^{3/4} sqrt(t) - t^{-1/4} Gamma(3/2)/Gamma(3/4), which holds exactly.
        CaputoOptions o;
        o.singular_exponents = {0.5, 1.0};
        const auto r = composition_residual(sample(g, [](double t) { return std::sqrt(t); }), g, 0.25, 0.5, o);
        CHECK(r.inf_norm < 1e-6);
        // The other reading, with t^{+1/4}, is off by an O(1) amount.
        const double inner0 = kSqrtPi / 2.0;
        const double t = 0.5;
        const double alt = std::pow(t, 0.25) / std::tgamma(0.75) * inner0;
        const double correct = std::pow(t, -0.25) / std::tgamma(0.75) * inner0;
        CHECK(std::abs(alt - correct) > 0.1);
    }
    CHECK_THROWS_AS(composition_residual(std::vector<double>(g.size(), 0.0), g, 0.6, 0.6), std::domain_error);
}

TEST_CASE("nu-fold composition for linear data") {
    const auto g = TimeGrid1D::uniform(1.0, 4095);
    const auto u = sample(g, [](double t) { return t; });
    for (int nu : {2, 3}) {
        const double beta = 1.0 / nu;
        CaputoOptions o;
        o.singular_exponents = power_series_exponents(beta, 1.0);
        const auto lhs = iterated_caputo(u, g, beta, nu, o);
        // Limits of D^{(nu-kappa) beta} t at 0+ are all zero for kappa >= 1 except
        // kappa = 0 (not present), so the right side is just du/dt = 1.
        double correction_limit = 0.0;
        for (int kappa = 1; kappa < nu; ++kappa) {
            const auto inner = iterated_caputo(u, g, beta, nu - kappa, o);
            correction_limit = std::max(correction_limit, std::abs(inner.limit_at_zero));
        }
        CHECK(correction_limit < 1e-6);
        double worst = 0.0;
        for (std::size_t i = 1; i < g.size(); ++i) worst = std::max(worst, std::abs(lhs.values[i] - 1.0));
        CAPTURE(nu);
        CHECK(worst < 1e-2);
    }
}

TEST_CASE("convolution helper matches a direct sum") {
    std::vector<double> a(1000), b(1000);
    for (std::size_t i = 0; i < a.size(); ++i) {
        a[i] = 1.0 / (1.0 + static_cast<double>(i));
        b[i] = std::cos(0.01 * static_cast<double>(i));
    }
    const auto c = causal_convolution(a, b, 1000);
    for (std::size_t n : {0u, 1u, 17u, 999u}) {
        double s = 0.0;
        for (std::size_t k = 0; k <= n; ++k) s += a[k] * b[n - k];
        CHECK(c[n] == doctest::Approx(s).epsilon(1e-12));
    }
}
