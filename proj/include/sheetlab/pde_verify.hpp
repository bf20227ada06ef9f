#pragma once

#include "sheetlab/clock.hpp"
#include "sheetlab/initial_functions.hpp"
#include "sheetlab/report.hpp"
#include "sheetlab/solutions.hpp"

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace sheetlab {

// Values on a d-dimensional tensor lattice with equal spacing h on every axis,
// stored row-major with the last axis fastest.
struct LatticeValues {
    std::vector<std::size_t> shape;
    std::vector<double> values;
    std::size_t size() const;
};

// k-fold second-order central Laplacian. The result has shape - 2k on every axis.
LatticeValues fd_laplacian_power(const LatticeValues& field, int k, double h);

// Value of a functional at (t, x).
using FieldProvider = std::function<double(const Functional&, std::span<const double>, std::span<const double>)>;

// Nested quadrature (closed-form inner mean when the catalog has one).
FieldProvider quadrature_provider(const Clock& clock, const InitialFunction& f, QuadratureSpec spec);
// oracle_polynomial; QUADRATIC / QUARTIC only.
FieldProvider oracle_provider(const Clock& clock, const InitialFunction& f);

struct VerifyGrid {
    double t_lo = 0.5, t_hi = 2.0;  // residual range of the active time t_j
    double tau = 1e-3;              // temporal step; Caputo grids run from 0 to t_hi
    std::size_t t_points = 0;       // residual t_j samples taken from the tau-grid; 0 means all
    double x_lo = -1.0, x_hi = 1.0; // per spatial axis
    double h = 1.0 / 16.0;          // spatial step; stencil margins extend beyond [x_lo, x_hi]

    std::string describe() const;
    void validate() const;
};

struct VerifyProblem {
    Clock clock;
    InitialFunction f;
    std::size_t n = 1;
    std::size_t active = 0;              // zero-based j
    std::vector<std::vector<double>> other_t;  // each entry: the n-1 values of t_i, i != j
    VerifyGrid grid;
    FieldProvider field;                 // quadrature_provider(...) unless overridden
    bool keep_per_point = false;
    double boundary_tolerance = 1e-5;

    // Quadrature-backed problem with the catalog heat mean as inner rule.
    static VerifyProblem make(const Clock& clock, const InitialFunction& f, std::size_t n, std::size_t active,
                              std::vector<std::vector<double>> other_t, VerifyGrid grid,
                              bool polynomial_growth = false);
    void validate() const;
};

// dt_j u = sqrt(prod_{i != j} t_i / (2^{4-n} t_j pi^n)) Delta f + (1/8) Delta^2 U^(j)   (BTBS).
ResidualReport residual_fourth_order(const VerifyProblem& problem);

// Caputo d^beta_{t_j} u = c Delta V^(j) with c = 1/sqrt 8 for BTBS (beta = 1/2), 1/2 for ISLTBS.
ResidualReport residual_fractional(const VerifyProblem& problem);
inline constexpr double kBtbsFractionalCoefficient = 0.35355339059327376;  // 1/sqrt(8)
inline constexpr double kIsltbsFractionalCoefficient = 0.5;

// dt_j u = sum_{k<nu} Delta^k f / 2^k dt_j M_k + 2^{-nu} Delta^nu U_nu^(j)   (ISLTBS, beta = 1/nu).
ResidualReport residual_order_2nu(const VerifyProblem& problem);

// BTBS:   sqrt 8 Delta(d^{1/2} V^(j)) - Delta^2 U^(j).
// ISLTBS: 2^{nu-1} Delta(d^{(nu-1) x beta} V^(j)) - Delta^nu U_nu^(j).
// Extras: the commuted-order discrepancy, and for ISLTBS the t_j -> 0+ limits of the
// iterated derivatives of u against both forms of the coefficient display.
ResidualReport equivalence_residual(const VerifyProblem& problem);

struct RefinementLevel {
    double h = 0.0;
    double tau = 0.0;
    double inf_norm = 0.0;
    double l2_norm = 0.0;
};

struct RefinementStudy {
    std::vector<RefinementLevel> levels;
    std::vector<double> orders;  // log2 ratios of successive inf norms (halving steps)
    bool monotone(double noise = 0.10) const;
    double min_order() const;
};

using ResidualFn = ResidualReport (*)(const VerifyProblem&);

// Runs `fn` with (h, tau) = (h0, tau0) / 2^l for l = 0..levels-1.
RefinementStudy refinement_study(ResidualFn fn, VerifyProblem problem, double h0, double tau0, int levels = 3);

}  // namespace sheetlab
