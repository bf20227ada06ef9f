#pragma once

#include "sheetlab/clock.hpp"
#include "sheetlab/initial_functions.hpp"
#include "sheetlab/rng.hpp"

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace sheetlab {

// One draw of L(1) for the beta-stable subordinator with E exp(-s L(1)) = exp(-s^beta).
double sample_stable_L1(double beta, RngStream& stream);

// Lambda(t) = t^beta L(1)^{-beta}; exactly 0 at t = 0.
double sample_inverse_subordinator(double beta, double t, RngStream& stream);

// |B(t)| = |sqrt(t) Z|.
double sample_abs_bm(double t, RngStream& stream);

double sample_clock(const Clock& clock, double t, RngStream& stream);

struct FieldSample {
    Clock clock;
    std::vector<double> t;
    std::vector<double> x;
    std::vector<double> inner_times;
    std::vector<double> value;
};

// Draws the n clock values, then W^x at those times, i.e. N(x, prod(inner_times) I_d).
FieldSample sample_field(const Clock& clock, std::span<const double> t, std::span<const double> x,
                         RngStream& stream);

// Resamples the sheet value with the inner times held fixed.
std::vector<double> sample_sheet_value(std::span<const double> inner_times, std::span<const double> x,
                                       RngStream& stream);

// prod_{i != j} s_i^p inserted into the expectation: p = 0 for u, 1 for the V
// functional, 2 for the BTBS U functional and nu for the ISLTBS U_nu functional.
enum class WeightKind { None, ProdS, ProdSSq, ProdSNu };

struct Weight {
    WeightKind kind = WeightKind::None;
    int nu = 0;  // only for ProdSNu

    static Weight none() { return {}; }
    static Weight prod_s() { return {WeightKind::ProdS, 0}; }
    static Weight prod_s_sq() { return {WeightKind::ProdSSq, 0}; }
    static Weight prod_s_nu(int nu) { return {WeightKind::ProdSNu, nu}; }

    int power() const;
    // prod over i != active of s_i^power.
    double apply(std::span<const double> inner_times, std::size_t active) const;
};

struct McEstimate {
    double estimate = 0.0;
    double standard_error = 0.0;
    std::size_t samples = 0;
};

inline constexpr std::size_t kMcShardSize = std::size_t{1} << 14;

// Mean and standard error of draw(shard_stream) over `samples` draws. Shard k of
// kMcShardSize draws uses stream.derive(k); shard statistics are merged by a fixed
// pairwise tree, so the result does not depend on the number of worker threads.
McEstimate mc_mean(std::size_t samples, const RngStream& stream, const std::function<double(RngStream&)>& draw);

McEstimate mc_expectation(const Clock& clock, const InitialFunction& f, Weight weight, std::size_t active,
                          std::span<const double> t, std::span<const double> x, std::size_t samples,
                          const RngStream& stream);

// Demo only: a Brownian path on a uniform grid of `steps` increments over [0, t_end],
// and a two-parameter Brownian sheet on an (n1+1) x (n2+1) grid over [0,a] x [0,b]
// built from cumulative sums of independent cell masses.
std::vector<double> brownian_path(double t_end, std::size_t steps, RngStream& stream);
std::vector<std::vector<double>> brownian_sheet_grid(double a, double b, std::size_t n1, std::size_t n2,
                                                     RngStream& stream);

}  // namespace sheetlab
