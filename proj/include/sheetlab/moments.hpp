#pragma once

#include "sheetlab/clock.hpp"
#include "sheetlab/fractional_calculus.hpp"
#include "sheetlab/rng.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace sheetlab {

enum class MomentRoute { ClosedForm, Quadrature, MonteCarlo };

MomentRoute parse_moment_route(std::string_view text);  // "closed-form", "quadrature", "monte-carlo"
const char* to_string(MomentRoute route);

struct MomentConstant {
    FractionalOrder order;
    double gamma = 0.0;
    double value = 0.0;
    MomentRoute route = MomentRoute::ClosedForm;
    double standard_error = 0.0;  // Monte Carlo only
};

struct MomentOptions {
    std::size_t samples = 1'000'000;
    std::uint64_t seed = 20240601;
    std::uint64_t stream_id = 0;
    double split = 0.05;        // quadrature splits [0, split] and [split, inf)
    double tolerance = 1e-10;   // quadrature target
};

// E(beta, gamma) = E[Lambda(1)^gamma] = E[L(1)^{-gamma beta}] for gamma > -1.
// The closed form nu (k-1)!/Gamma(k/nu) needs beta = 1/nu and integer gamma = k >= 1.
MomentConstant moment_E(const FractionalOrder& order, double gamma, MomentRoute route = MomentRoute::ClosedForm,
                        const MomentOptions& options = {});

// Gamma(1 + gamma) / Gamma(1 + gamma beta), valid for every beta in (0,1) and gamma > -1.
double moment_E_gamma_ratio(double beta, double gamma);

// E|B(t)|^q = t^{q/2} 2^{q/2} Gamma((q+1)/2) / sqrt(pi).
double abs_bm_moment(double t, double q);

// E[S(t)^q] for the clock S: |B(t)| or Lambda(t).
double clock_moment(const Clock& clock, double t, double q);

// The constant E[S(1)] multiplying t_i^{e} in the V-functional boundary rows:
// sqrt(2/pi) for BTBS and E(beta, 1) for ISLTBS.
double boundary_constant(const Clock& clock);

enum class ProfileKind { MKappa, NNu };

struct TimeProfile {
    ProfileKind kind = ProfileKind::MKappa;
    std::size_t active = 0;  // zero-based j
    int index = 0;           // kappa for M, nu for N
    std::vector<double> t;
    double value = 0.0;
    double d_dtj = 0.0;      // partial derivative in t_j
};

// M_kappa = E(1/nu, kappa)^n / kappa! * prod_i t_i^{kappa/nu}, 1 <= kappa <= nu-1.
TimeProfile profile_M(const FractionalOrder& order, std::size_t active, int kappa, std::span<const double> t);

// N_nu = E(1/nu, nu)^{n-1} * prod_{i != j} t_i.
TimeProfile profile_N(const FractionalOrder& order, std::size_t active, std::span<const double> t);

}  // namespace sheetlab
