#include <doctest.h>

#include "sheetlab/quadrature.hpp"

#include <cmath>
#include <numbers>

using namespace sheetlab;

TEST_CASE("Gauss-Legendre integrates polynomials of degree 2n-1") {
    for (std::size_t n : {1u, 2u, 5u, 16u, 64u}) {
        const auto r = gauss_legendre(n);
        for (std::size_t deg = 0; deg < 2 * n; deg += 1) {
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) s += r.weights[i] * std::pow(r.nodes[i], static_cast<double>(deg));
            const double exact = deg % 2 ? 0.0 : 2.0 / static_cast<double>(deg + 1);
            CHECK(s == doctest::Approx(exact).epsilon(1e-12).scale(1.0));
        }
    }
}

TEST_CASE("Gauss-Hermite reproduces normal moments") {
    for (std::size_t n : {1u, 4u, 9u, 24u, 60u}) {
        const auto r = gauss_hermite_normal(n);
        double dfact = 1.0;  // (k-1)!! for even k
        for (std::size_t k = 0; k < 2 * n; ++k) {
            double s = 0.0, mag = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                s += r.weights[i] * std::pow(r.nodes[i], static_cast<double>(k));
                mag += r.weights[i] * std::pow(std::abs(r.nodes[i]), static_cast<double>(k));
            }
            double exact = 0.0;
            if (k % 2 == 0) {
                exact = dfact;
                dfact *= static_cast<double>(k + 1);
            }
            CAPTURE(n);
            CAPTURE(k);
            CHECK(std::abs(s - exact) <= 1e-12 * std::max(1.0, mag));
        }
    }
}

TEST_CASE("Gauss-Hermite on a non-polynomial integrand") {
    // E[cos(Z)] = exp(-1/2).
    const auto r = gauss_hermite_normal(30);
    double s = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) s += r.weights[i] * std::cos(r.nodes[i]);
    CHECK(s == doctest::Approx(std::exp(-0.5)).epsilon(1e-14));
}
