#pragma once

#include "sheetlab/fractional_calculus.hpp"
#include "sheetlab/report.hpp"

#include <optional>
#include <span>
#include <vector>

namespace sheetlab {

enum class KernelKind { BM, BS, StableG, InvSubordinator };

struct KernelId {
    KernelKind kind = KernelKind::BM;
    std::optional<FractionalOrder> beta;
    std::optional<int> n;
    std::optional<int> d;

    void validate() const;
};

struct KernelEval {
    KernelId kernel;
    std::vector<double> t;
    std::vector<double> source;
    std::vector<double> target;
    double value = 0.0;
};

inline constexpr double kDefaultKernelTolerance = 1e-8;

double bm_density(double t, double s);

// Gaussian density in y with mean x and covariance (prod s_i) I_d.
double bs_density(std::span<const double> s, std::span<const double> x, std::span<const double> y);

// Auto: closed form at beta = 1/2, else the series when its cancellation bound
// meets the tolerance, else the Talbot contour (beta <= 1/2) or the positive
// Zolotarev-Kanter integral (beta > 1/2).
enum class StableMethod { Auto, Series, ClosedFormHalf, Talbot, Integral };

// Density of L(1) for the beta-stable subordinator with Laplace transform exp(-s^beta).
double stable_g(double beta, double x, StableMethod method = StableMethod::Auto,
                double tolerance = kDefaultKernelTolerance);

// Zolotarev-Kanter function A(u) on (0, pi): L(1) has the law of (A(U)/E)^{(1-beta)/beta}
// for U uniform on (0, pi) and E standard exponential.
double kanter_a(double beta, double u);

// Density of Lambda(t) at x > 0:  (t / beta) x^{-1-1/beta} g_beta(t x^{-1/beta}).
double inv_subordinator_density(double beta, double t, double x, double tolerance = kDefaultKernelTolerance);

// Density of |B(t)| at x >= 0, i.e. 2 K^BM(t, x).
double abs_bm_density(double t, double x);

// k-th x-derivative of K^{Lambda,beta}(t, .) at x = 0+, by one-sided polynomial
// extrapolation from x = m*delta, m = 1..8. The formula is never evaluated at 0.
double inv_subordinator_boundary(double beta, double t, int k, double delta = 0.02);

// The closed-form boundary values t^{-(k+1) beta} (-1)^k / Gamma(1 - (k+1) beta).
double inv_subordinator_boundary_formula(double beta, double t, int k);

KernelEval evaluate_kernel(const KernelId& id, std::span<const double> t, std::span<const double> source,
                           std::span<const double> target, double tolerance = kDefaultKernelTolerance);

// Max over s of |int_0^inf e^{-st} K(t,x) dt - s^{beta-1} e^{-x s^beta}|.
double laplace_check(double beta, double x, std::span<const double> s_points);

struct DensityGrid {
    double t_lo = 0.5, t_hi = 2.0;
    std::size_t nt = 512;
    double x_lo = 0.2, x_hi = 3.0;
    std::size_t nx = 512;
    double epsilon = 0.05;  // excluded band x < epsilon for the fractional form
    std::size_t fractional_steps = 2048;  // Caputo grid on [0, t_hi]
    std::size_t fractional_x_points = 48;
};

// Finite-difference residual of  dK/dt - (-1)^nu d^nu K/dx^nu  on the grid, plus
// x -> 0+ boundary checks for k = 0..nu-1. A second report holds the fractional
// form  D_t^beta K + dK/dx = 0  on x >= epsilon.
struct DensityPdeResult {
    ResidualReport higher_order;
    ResidualReport fractional;
};

DensityPdeResult density_pde_residual(const FractionalOrder& order, const DensityGrid& grid = {});

}  // namespace sheetlab
