#include <doctest.h>

#include "sheetlab/densities.hpp"
#include "sheetlab/error.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/airy.hpp>

#include <array>
#include <cmath>
#include <numbers>

using namespace sheetlab;

namespace {

constexpr double kPi = std::numbers::pi;

// For beta = 1/3 the inverse-subordinator density is an Airy function:
// K(t,x) = t^{-1/3} 3^{2/3} Ai(x t^{-1/3} / 3^{1/3}).
double airy_oracle(double t, double x) {
    const double z = x * std::pow(t, -1.0 / 3.0);
    return std::pow(t, -1.0 / 3.0) * std::pow(3.0, 2.0 / 3.0) * boost::math::airy_ai(z / std::cbrt(3.0));
}

double heat_oracle(double t, double x) { return 2.0 * std::exp(-x * x / (4.0 * t)) / std::sqrt(4.0 * kPi * t); }

}  // namespace

TEST_CASE("Brownian motion kernel") {
    CHECK(bm_density(1.0, 0.0) == doctest::Approx(0.3989422804).epsilon(1e-10));
    CHECK(bm_density(4.0, 0.0) == doctest::Approx(0.1994711402).epsilon(1e-10));
    CHECK(bm_density(1.0, 1.0) == doctest::Approx(0.2419707245).epsilon(1e-10));
    CHECK(bm_density(2.0, 0.7) == bm_density(2.0, -0.7));
    CHECK_THROWS_AS(bm_density(0.0, 1.0), std::domain_error);
}

TEST_CASE("Brownian sheet kernel") {
    const std::array<double, 2> s11{1.0, 1.0}, s23{2.0, 3.0};
    const std::array<double, 1> z{0.0};
    CHECK(bs_density(s11, z, z) == doctest::Approx(bm_density(1.0, 0.0)).epsilon(1e-15));
    CHECK(bs_density(s23, z, z) == doctest::Approx(0.1628675040).epsilon(1e-9));
    const std::array<double, 2> x{0.3, -0.2}, y{-1.0, 0.5};
    CHECK(bs_density(s23, x, y) == bs_density(s23, y, x));
    const std::array<double, 2> bad{1.0, 0.0};
    CHECK_THROWS_AS(bs_density(bad, z, z), std::domain_error);
}

TEST_CASE("Brownian sheet kernel normalises") {
    boost::math::quadrature::tanh_sinh<double> ts;
    auto line = [&](auto&& f) { return ts.integrate(f, -std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()); };
    for (int n = 1; n <= 2; ++n) {
        std::vector<double> s = n == 1 ? std::vector<double>{0.7} : std::vector<double>{0.7, 2.5};
        const std::array<double, 1> x1{0.4};
        const double one_d = line([&](double y) {
            const std::array<double, 1> yy{y};
            return bs_density(s, x1, yy);
        });
        CHECK(one_d == doctest::Approx(1.0).epsilon(1e-8));
        const std::array<double, 2> x2{0.4, -1.0};
        const double two_d = line([&](double y1) {
            return line([&](double y2) {
                const std::array<double, 2> yy{y1, y2};
                return bs_density(s, x2, yy);
            });
        });
        CHECK(two_d == doctest::Approx(1.0).epsilon(1e-8));
    }
}

TEST_CASE("stable density at beta=1/2") {
    CHECK(stable_g(0.5, 1.0, StableMethod::ClosedFormHalf) == doctest::Approx(0.2196956447).epsilon(1e-9));
    for (double x = 0.3; x <= 10.0; x += 0.05) {
        CAPTURE(x);
        const double a = stable_g(0.5, x, StableMethod::ClosedFormHalf);
        CHECK(std::abs(stable_g(0.5, x, StableMethod::Series) - a) < 1e-8);
        CHECK(std::abs(stable_g(0.5, x, StableMethod::Talbot) - a) < 1e-9);
    }
    CHECK_THROWS_AS(stable_g(1.0 / 3.0, 1.0, StableMethod::ClosedFormHalf), std::invalid_argument);
}

TEST_CASE("series reports its attained bound when it cannot converge") {
    try {
        stable_g(1.0 / 3.0, 1e-3, StableMethod::Series, 1e-8);
        FAIL("expected a range error");
    } catch (const SeriesRangeError& e) {
        CHECK(e.attained_bound() > 1e-8);
    }
    // The automatic route falls back to the contour and still gives a density value.
    const double v = stable_g(1.0 / 3.0, 1e-3, StableMethod::Auto);
    const double expected = (1.0 / 3.0) * std::pow(1e-3, -4.0 / 3.0) * airy_oracle(1.0, 10.0);
    CHECK(std::abs(v - expected) < 1e-9);
}

TEST_CASE("stable density at beta=1/3 against the Airy form") {
    // g(u) = beta u^{-1-1/beta} K(1, u^{-beta}) inverts the density relation at t = 1.
    for (double u : {0.01, 0.05, 0.3, 1.0, 4.0, 30.0}) {
        const double expected = (1.0 / 3.0) * std::pow(u, -4.0 / 3.0) * airy_oracle(1.0, std::pow(u, -1.0 / 3.0));
        CAPTURE(u);
        CHECK(std::abs(stable_g(1.0 / 3.0, u) - expected) < 1e-9);
        CHECK(std::abs(stable_g(1.0 / 3.0, u, StableMethod::Talbot) - expected) < 1e-9);
    }
}

TEST_CASE("integral route agrees with the other routes") {
    for (double x : {0.05, 0.3, 1.0, 5.0}) {
        CHECK(std::abs(stable_g(0.5, x, StableMethod::Integral) - stable_g(0.5, x, StableMethod::ClosedFormHalf)) < 1e-10);
        CHECK(std::abs(stable_g(1.0 / 3.0, x, StableMethod::Integral) - stable_g(1.0 / 3.0, x, StableMethod::Talbot)) < 1e-10);
    }
    for (double x : {0.5, 1.0, 5.0})
        CHECK(std::abs(stable_g(0.7, x, StableMethod::Integral) - stable_g(0.7, x, StableMethod::Series)) < 1e-10);
    CHECK_THROWS_AS(stable_g(0.7, 0.1, StableMethod::Talbot), std::invalid_argument);
}

TEST_CASE("stable density normalises") {
    boost::math::quadrature::exp_sinh<double> es;
    for (double beta : {1.0 / 3.0, 0.5, 0.7}) {
        const double total = es.integrate([beta](double x) { return x > 0.0 ? stable_g(beta, x) : 0.0; }, 1e-10);
        CAPTURE(beta);
        CHECK(total == doctest::Approx(1.0).epsilon(1e-5));
    }
}

TEST_CASE("inverse subordinator density") {
    CHECK(inv_subordinator_density(0.5, 1.0, 1.0) == doctest::Approx(0.4393912894).epsilon(1e-9));
    for (double t : {0.3, 1.0, 2.5})
        for (double x : {0.01, 0.4, 1.0, 3.0, 7.0}) {
            CHECK(std::abs(inv_subordinator_density(0.5, t, x) - heat_oracle(t, x)) < 1e-12);
            CHECK(std::abs(inv_subordinator_density(1.0 / 3.0, t, x) - airy_oracle(t, x)) < 1e-9);
        }
    CHECK_THROWS_AS(inv_subordinator_density(0.5, 1.0, 0.0), std::domain_error);
    CHECK_THROWS_AS(inv_subordinator_density(0.5, 0.0, 1.0), std::domain_error);
}

TEST_CASE("inverse subordinator density normalises and is nonnegative") {
    boost::math::quadrature::exp_sinh<double> es;
    for (double beta : {1.0 / 3.0, 0.5, 0.25, 0.8}) {
        const double total = es.integrate([beta](double x) { return x > 0.0 ? inv_subordinator_density(beta, 1.0, x) : 0.0; }, 1e-10);
        CAPTURE(beta);
        CHECK(total == doctest::Approx(1.0).epsilon(1e-4));
        for (double x = 0.01; x < 20.0; x *= 1.3) CHECK(inv_subordinator_density(beta, 1.0, x) >= 0.0);
    }
}

TEST_CASE("reflected Brownian motion matches the beta=1/2 density after rescaling") {
    for (double t : {0.5, 1.0, 2.0})
        for (double x = 0.01; x <= 3.0; x += 0.01) {
            const double lhs = abs_bm_density(t, x);
            const double rhs = std::sqrt(2.0) * inv_subordinator_density(0.5, t, std::sqrt(2.0) * x);
            CHECK(std::abs(lhs - rhs) < 1e-10);
        }
}

TEST_CASE("scaling law") {
    for (double beta : {1.0 / 3.0, 0.5, 0.6})
        for (double c : {0.5, 2.0, 7.0})
            for (double x : {0.2, 1.0, 2.5}) {
                const double lhs = inv_subordinator_density(beta, c * 1.3, std::pow(c, beta) * x);
                const double rhs = std::pow(c, -beta) * inv_subordinator_density(beta, 1.3, x);
                CHECK(std::abs(lhs - rhs) < 1e-9);
            }
}

TEST_CASE("boundary limits at x = 0+") {
    CHECK(std::abs(inv_subordinator_boundary(0.5, 1.0, 0) - 1.0 / std::sqrt(kPi)) < 1e-3 / std::sqrt(kPi));
    CHECK(inv_subordinator_boundary_formula(0.5, 1.0, 0) == doctest::Approx(0.5641895835).epsilon(1e-10));
    CHECK(std::abs(inv_subordinator_boundary(0.5, 1.0, 1)) < 1e-3);
    CHECK(inv_subordinator_boundary_formula(0.5, 1.0, 1) == 0.0);
    for (double t : {0.5, 1.0, 2.0}) {
        for (int k = 0; k < 3; ++k) {
            const double num = inv_subordinator_boundary(1.0 / 3.0, t, k);
            const double ref = inv_subordinator_boundary_formula(1.0 / 3.0, t, k);
            CAPTURE(t);
            CAPTURE(k);
            CHECK(std::abs(num - ref) < 1e-3 * std::max(1.0, std::abs(ref)));
        }
    }
}

TEST_CASE("Laplace transform in t") {
    const std::array<double, 3> s{0.5, 1.0, 2.0};
    CHECK(laplace_check(0.5, 1.0, s) < 1e-5);
    const std::array<double, 1> one{1.0};
    CHECK(laplace_check(1.0 / 3.0, 0.5, one) < 1e-4);
    CHECK(laplace_check(0.5, 20.0, one) < 1e-11);
}

TEST_CASE("kernel evaluation records its arguments") {
    KernelId id{KernelKind::InvSubordinator, FractionalOrder::from_nu(2), std::nullopt, std::nullopt};
    const std::array<double, 1> t{1.0}, src{0.0}, tgt{1.0};
    const auto e = evaluate_kernel(id, t, src, tgt);
    CHECK(e.value == doctest::Approx(0.4393912894).epsilon(1e-9));
    CHECK(e.target.at(0) == 1.0);
    KernelId bad{KernelKind::StableG, std::nullopt, std::nullopt, std::nullopt};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    KernelId bs{KernelKind::BS, std::nullopt, 2, 1};
    const std::array<double, 2> tt{2.0, 3.0};
    CHECK(evaluate_kernel(bs, tt, src, src).value == doctest::Approx(0.1628675040).epsilon(1e-9));
}

TEST_CASE("density PDE residual for beta = 1/2 on a coarse grid") {
    DensityGrid g;
    g.nt = 64;
    g.nx = 64;
    g.fractional_steps = 512;
    g.fractional_x_points = 8;
    const auto r = density_pde_residual(FractionalOrder::from_nu(2), g);
    CHECK(r.higher_order.inf_norm < 1e-2);
    CHECK(r.higher_order.boundary_passed());
    CHECK(r.fractional.inf_norm < 2e-2);
    DensityGrid tiny = g;
    tiny.nx = 4;
    CHECK_THROWS_AS(density_pde_residual(FractionalOrder::from_nu(2), tiny), std::invalid_argument);
    CHECK_THROWS_AS(density_pde_residual(FractionalOrder::from_beta(0.4), g), std::invalid_argument);
}

TEST_CASE("density PDE residual for beta = 1/3") {
    DensityGrid g;
    g.nt = 128;
    g.nx = 128;
    g.fractional_steps = 512;
    g.fractional_x_points = 8;
    const auto r = density_pde_residual(FractionalOrder::from_nu(3), g);
    CAPTURE(r.higher_order.inf_norm);
    CHECK(r.higher_order.inf_norm < 1e-2);
    CHECK(r.higher_order.boundary_passed());
    CHECK(r.fractional.inf_norm < 2e-2);
}
