#pragma once

#include "sheetlab/clock.hpp"
#include "sheetlab/initial_functions.hpp"
#include "sheetlab/samplers.hpp"

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sheetlab {

enum class FunctionalKind { U, ScriptU, ScriptV, ScriptUNu };

// u, or one of the weighted expectations with prod_{i != j} s_i^p inserted.
struct Functional {
    FunctionalKind kind = FunctionalKind::U;
    std::size_t active = 0;  // zero-based j
    int nu = 0;              // ScriptUNu only

    static Functional u() { return {}; }
    static Functional script_u(std::size_t j) { return {FunctionalKind::ScriptU, j, 0}; }
    static Functional script_v(std::size_t j) { return {FunctionalKind::ScriptV, j, 0}; }
    static Functional script_u_nu(std::size_t j, int nu) { return {FunctionalKind::ScriptUNu, j, nu}; }

    Weight weight() const;
    std::string name() const;  // "u", "U1", "V2", "Unu1" (1-based j)
};

Functional parse_functional(std::string_view text, std::size_t active, int nu);

enum class InnerRule { GaussHermite, ClosedFormIfAvailable };

struct QuadratureSpec {
    std::size_t inner = 24;   // starting Gauss-Hermite nodes per spatial axis
    std::size_t outer = 64;   // Gauss-Legendre nodes per clock axis
    double tolerance = 1e-6;  // target absolute error
    InnerRule inner_rule = InnerRule::GaussHermite;
    bool polynomial_growth = false;  // admits QUADRATIC / QUARTIC

    // 1e-6 for n = 1, 1e-5 for n >= 2.
    static QuadratureSpec defaults(std::size_t n);
    void validate() const;
};

// E f(x + sqrt(variance) Z) by a tensor Gauss-Hermite rule with `nodes` per axis.
// The rule is compared against one with 3/4 of the nodes and a NumericalError is
// raised when the two differ by more than `tolerance`.
double gaussian_expectation(const InitialFunction& f, std::span<const double> x, double variance,
                            std::size_t nodes = 24, double tolerance = 1e-8);

// Nested quadrature over the clock laws: the per-axis substitution s = c (w/(1-w))
// with c = sqrt(t) (half-normal weight) or t^beta (K^{Lambda,beta}(1, .) weight),
// Gauss-Legendre in w. Axes with t_i = 0 collapse to the point mass at s_i = 0.
// A Gauss-Hermite inner rule is refined by doubling until the change from a 3/4-size
// rule is below tolerance/2; NumericalError if that needs more than 40000 points
// or more than 2048 nodes on one axis.
double eval_functional(const Functional& functional, const Clock& clock, const InitialFunction& f,
                       std::span<const double> t, std::span<const double> x, const QuadratureSpec& spec);

// Exact value for QUADRATIC and QUARTIC f from clock moments.
double oracle_polynomial(const Functional& functional, const Clock& clock, const InitialFunction& f,
                         std::span<const double> t, std::span<const double> x);

// Cartesian lattice: every combination of one value per t-axis and one per x-axis.
struct Lattice {
    std::vector<std::vector<double>> t_axes;
    std::vector<std::vector<double>> x_axes;

    std::size_t n() const noexcept { return t_axes.size(); }
    std::size_t d() const noexcept { return x_axes.size(); }
    std::size_t t_count() const;
    std::size_t x_count() const;
    std::size_t size() const { return t_count() * x_count(); }
    // Point k in row-major order with the t index outermost.
    std::vector<double> t_at(std::size_t k) const;
    std::vector<double> x_at(std::size_t k) const;
    void validate() const;
};

std::vector<double> linspace(double lo, double hi, std::size_t count);

struct SolutionField {
    Functional functional;
    Clock clock;
    Lattice lattice;
    std::vector<double> values;  // lattice order
};

SolutionField eval_field(const Functional& functional, const Clock& clock, const InitialFunction& f,
                         const Lattice& lattice, const QuadratureSpec& spec);

// Header comment, then `t1,...,tn,x1,...,xd,value`.
void write_solution_csv(std::ostream& os, const SolutionField& field, std::string_view header_comment);

}  // namespace sheetlab
