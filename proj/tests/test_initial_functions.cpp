#include "sheetlab/initial_functions.hpp"

#include <doctest.h>

#include <cmath>
#include <functional>
#include <random>
#include <stdexcept>
#include <vector>

using namespace sheetlab;

namespace {

// Central-difference Laplacian of g, applied recursively k times.
double fd_laplacian(const std::function<double(const std::vector<double>&)>& g, std::vector<double> x, int k,
                    double h) {
    if (k == 0) return g(x);
    double acc = 0.0;
    const double centre = fd_laplacian(g, x, k - 1, h);
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double xi = x[i];
        x[i] = xi + h;
        const double up = fd_laplacian(g, x, k - 1, h);
        x[i] = xi - h;
        const double down = fd_laplacian(g, x, k - 1, h);
        x[i] = xi;
        acc += up - 2.0 * centre + down;
    }
    return acc / (h * h);
}

}  // namespace

TEST_CASE("bump values") {
    const std::vector<double> origin{0.0, 0.0};
    CHECK(bump_f0(1.0, 1.0, origin) == doctest::Approx(0.3678794412).epsilon(1e-10));
    const std::vector<double> far{1.5, 0.0};
    CHECK(bump_f0(3.0, 0.4, far) == 0.0);
    const std::vector<double> half{0.5};
    CHECK(bump_f0(2.0, 1.0, half) == doctest::Approx(2.0 * std::exp(-4.0 / 3.0)).epsilon(1e-14));
    CHECK(bump_f0(2.0, 1.0, half) == doctest::Approx(0.5271).epsilon(1e-4));
    CHECK_THROWS_AS(bump_f0(1.0, 0.0, half), std::invalid_argument);
    CHECK_THROWS_AS(bump_f0(1.0, 1.5, half), std::invalid_argument);

    // Continuity at the unit sphere: the value tends to 0 from inside.
    const std::vector<double> inside{1.0 - 1e-6, 0.0};
    CHECK(bump_f0(1.0, 1.0, inside) < 1e-100);
}

TEST_CASE("planar bump Laplacian") {
    const std::vector<double> origin{0.0, 0.0};
    CHECK(bump_laplacian_d2(1.0, origin) == doctest::Approx(-4.0 * std::exp(-1.0)).epsilon(1e-14));
    CHECK(bump_laplacian_d2(1.0, origin) == doctest::Approx(-1.4715).epsilon(1e-4));
    const std::vector<double> out{2.0, 0.0};
    CHECK(bump_laplacian_d2(1.0, out) == 0.0);
    const std::vector<double> on{0.6, 0.8};
    const double r2 = 0.6 * 0.6 + 0.8 * 0.8;
    if (r2 == 1.0) {
        CHECK_THROWS_AS(bump_laplacian_d2(1.0, on), std::domain_error);
        CHECK(bump_laplacian_d2(1.0, on, true) == 0.0);
    }
    const std::vector<double> on_axis{1.0, 0.0};
    CHECK_THROWS_AS(bump_laplacian_d2(1.0, on_axis), std::domain_error);
    CHECK(bump_laplacian_d2(1.0, on_axis, true) == 0.0);

    const std::vector<double> p{0.3, 0.2};
    auto f = [](const std::vector<double>& y) { return bump_f0(1.0, 1.0, y); };
    const double fd = fd_laplacian(f, p, 1, 1e-4);
    CHECK(std::abs(fd - bump_laplacian_d2(1.0, p)) < 1e-4 * std::abs(fd));

    // The general-d formula used by the catalog agrees with the planar display.
    const auto b = InitialFunction::bump(2, 1.7);
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> u(-0.7, 0.7);
    for (int i = 0; i < 20; ++i) {
        const std::vector<double> y{u(gen), u(gen)};
        CHECK(b.laplacian(y, 1) == doctest::Approx(bump_laplacian_d2(1.7, y)).epsilon(1e-12));
    }
}

TEST_CASE("catalog laplacians match iterated finite differences") {
    std::mt19937_64 gen(2024);
    for (int d : {1, 2}) {
        for (const auto& f : catalog(d)) {
            const int top = std::min(f.max_k(), 3);
            auto value = [&f](const std::vector<double>& y) { return f.value(y); };
            std::uniform_real_distribution<double> u(f.id() == FunctionId::Bump ? -0.6 / d : -1.5,
                                                     f.id() == FunctionId::Bump ? 0.6 / d : 1.5);
            for (int k = 1; k <= top; ++k) {
                // Richardson-combined steps: roundoff grows like eps/h^{2k}, so higher powers need larger h.
                const double h = k == 1 ? 1e-3 : (k == 2 ? 1e-2 : 3e-2);
                for (int i = 0; i < 20; ++i) {
                    std::vector<double> x(static_cast<std::size_t>(d));
                    for (auto& v : x) v = u(gen);
                    const double exact = f.laplacian(x, k);
                    const double fd = (4.0 * fd_laplacian(value, x, k, h) - fd_laplacian(value, x, k, 2 * h)) / 3.0;
                    INFO(f.name() << " d=" << d << " k=" << k);
                    const double scale = std::max(std::abs(exact), 1.0);
                    CHECK(std::abs(fd - exact) <= 1e-4 * scale);
                }
            }
        }
    }
}

TEST_CASE("catalog closed forms") {
    const auto q = InitialFunction::quadratic(1);
    const std::vector<double> y{0.7};
    CHECK(q.laplacian(y, 1) == 2.0);
    CHECK(q.laplacian(y, 2) == 0.0);
    const auto q3 = InitialFunction::quadratic(3);
    const std::vector<double> y3{0.1, 0.2, 0.3};
    CHECK(q3.laplacian(y3, 1) == 6.0);

    const auto r = InitialFunction::quartic(1);
    CHECK(r.laplacian(y, 1) == doctest::Approx(12.0 * 0.49));
    CHECK(r.laplacian(y, 2) == 24.0);
    CHECK(r.laplacian(y, 3) == 0.0);

    const auto g = InitialFunction::gaussian(1);
    const std::vector<double> zero{0.0};
    CHECK(g.laplacian(zero, 1) == doctest::Approx(-1.0));
    // d^4/dy^4 e^{-y^2/2} = (y^4 - 6y^2 + 3) e^{-y^2/2}
    CHECK(g.laplacian(y, 2) == doctest::Approx((0.7 * 0.7 * 0.7 * 0.7 - 6 * 0.49 + 3) * std::exp(-0.245)));
    // Hermite product form in 2d: Delta e^{-|y|^2/2} = (|y|^2 - 2) e^{-|y|^2/2}.
    const auto g2 = InitialFunction::gaussian(2);
    const std::vector<double> p{0.4, -1.1};
    const double r2 = 0.16 + 1.21;
    CHECK(g2.laplacian(p, 1) == doctest::Approx((r2 - 2.0) * std::exp(-0.5 * r2)).epsilon(1e-13));

    CHECK(InitialFunction::constant(2, 3.0).laplacian(p, 4) == 0.0);
    CHECK(InitialFunction::constant(2, 3.0).value(p) == 3.0);
}

TEST_CASE("bump support is compact") {
    for (double alpha : {1.0, 0.5, 0.25}) {
        const auto b = InitialFunction::bump(2, 1.0, alpha);
        CHECK(b.holder_alpha() == alpha);
        for (double r : {1.0 + 1e-12, 1.0 + 1e-6, 1.3, 10.0}) {
            for (double angle : {0.0, 0.7, 2.0, 4.5}) {
                const std::vector<double> x{r * std::cos(angle), r * std::sin(angle)};
                CHECK(b.value(x) == 0.0);
                for (int k = 1; k <= b.max_k(); ++k) CHECK(b.laplacian(x, k) == 0.0);
            }
        }
    }
    CHECK(InitialFunction::bump(2, 1.0, 1.0).max_k() == 1);
    CHECK(InitialFunction::bump(2, 1.0, 0.5).max_k() == 0);
    const std::vector<double> x{0.1, 0.1};
    CHECK_THROWS_AS(InitialFunction::bump(2, 1.0, 0.5).laplacian(x, 1), std::invalid_argument);
}

TEST_CASE("heat means and admissibility") {
    const std::vector<double> x{2.0};
    CHECK(*InitialFunction::quadratic(1).heat_mean(x, 3.0) == 7.0);
    const std::vector<double> zero{0.0};
    CHECK(*InitialFunction::gaussian(1).heat_mean(zero, 1.0) == doctest::Approx(1.0 / std::sqrt(2.0)));
    // E (x + sqrt(v) Z)^4 = x^4 + 6 x^2 v + 3 v^2
    CHECK(*InitialFunction::quartic(1).heat_mean(x, 0.5) == doctest::Approx(16.0 + 12.0 + 0.75));
    CHECK_FALSE(InitialFunction::bump(1).heat_mean(zero, 1.0).has_value());

    CHECK_THROWS_AS(InitialFunction::quadratic(1).require_admissible(false), std::invalid_argument);
    CHECK_NOTHROW(InitialFunction::quadratic(1).require_admissible(true));
    CHECK_NOTHROW(InitialFunction::gaussian(1).require_admissible(false));
    CHECK(InitialFunction::quartic(2).growth() == Growth::Polynomial);

    CHECK(make_initial_function("quartic", 2).id() == FunctionId::Quartic);
    CHECK_THROWS_AS(make_initial_function("cubic", 2), std::invalid_argument);
    CHECK_THROWS_AS(InitialFunction::gaussian(2).value(x), std::invalid_argument);
}
