#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace sheetlab {

// Order beta in (0,1). When built from nu the integer is the source of truth and
// beta is derived as 1/nu, so beta*nu == 1 holds exactly in the nu-paths.
class FractionalOrder {
public:
    static FractionalOrder from_beta(double beta);
    static FractionalOrder from_nu(int nu);
    // Accepts "1/3", "0.25", or a bare integer nu ("3" means beta = 1/3).
    static FractionalOrder parse(std::string_view text);

    double beta() const noexcept { return beta_; }
    std::optional<int> nu() const noexcept { return nu_; }
    int require_nu() const;

    friend bool operator==(const FractionalOrder&, const FractionalOrder&) = default;

private:
    FractionalOrder(double beta, std::optional<int> nu) : beta_(beta), nu_(nu) {}
    double beta_;
    std::optional<int> nu_;
};

class TimeGrid1D {
public:
    static TimeGrid1D uniform(double t_end, std::size_t steps);
    explicit TimeGrid1D(std::vector<double> points);

    std::span<const double> points() const noexcept { return points_; }
    std::optional<double> uniform_step() const noexcept { return step_; }
    std::size_t size() const noexcept { return points_.size(); }
    double operator[](std::size_t i) const { return points_[i]; }

private:
    std::vector<double> points_;
    std::optional<double> step_;
};

enum class CaputoScheme { L1, GrunwaldLetnikov };

struct CaputoOptions {
    CaputoScheme scheme = CaputoScheme::L1;
    // Exponents sigma for which the scheme is made exact on t^sigma via
    // starting-weight corrections. Empty means the plain scheme.
    std::vector<double> singular_exponents;
};

// Exponents k*beta for k = 1, 2, ... up to max_exponent.
std::vector<double> power_series_exponents(double beta, double max_exponent = 1.5);

struct CaputoResult {
    TimeGrid1D grid;
    std::vector<double> values;  // values[0] is NaN: undefined at t = 0
    FractionalOrder order;
    int iterations = 1;
    double limit_at_zero = 0.0;               // extrapolated t -> 0+ value of the final pass
    std::vector<double> pass_limits;          // t -> 0+ value after each pass
};

double caputo_power(double p, double beta, double t);

namespace detail {
class KernelConvolver;
}

// A discretized Caputo derivative bound to one uniform grid. Building it does the
// kernel and correction-weight work once; apply() can then run on many lines.
class CaputoOperator {
public:
    CaputoOperator(const TimeGrid1D& grid, double beta, const CaputoOptions& options = {});
    ~CaputoOperator();
    CaputoOperator(CaputoOperator&&) noexcept;
    CaputoOperator& operator=(CaputoOperator&&) noexcept;

    // Output has the grid's length; entry 0 is NaN.
    std::vector<double> apply(std::span<const double> values) const;

    const TimeGrid1D& grid() const noexcept { return grid_; }
    double beta() const noexcept { return beta_; }

private:
    TimeGrid1D grid_;
    double beta_;
    CaputoScheme scheme_;
    double scale_;  // tau^{-beta}, times 1/Gamma(2-beta) for L1
    std::unique_ptr<detail::KernelConvolver> conv_;
    std::size_t corrections_ = 0;
    std::vector<double> weights_;  // (N x corrections_) row-major, already scaled by tau^{-beta}
};

CaputoResult caputo_l1(std::span<const double> values, const TimeGrid1D& grid, double beta,
                       const CaputoOptions& options = {});

CaputoResult iterated_caputo(std::span<const double> values, const TimeGrid1D& grid, double beta,
                             int k, const CaputoOptions& options = {});

// Limit at t -> 0+ from the first `terms` interior points, modelled as a
// polynomial of degree terms-1 in t^e.
double extrapolate_to_zero(std::span<const double> values, double exponent, int terms = 3);

struct CompositionReport {
    std::vector<double> residual;  // residual[0] is NaN
    double inf_norm = 0.0;
};

// Residual of  D^{b1}(D^{b2} f) - D^{b1+b2} f + t^{-b1}/Gamma(1-b1) * (D^{b2} f)(0+).
// When b1 + b2 == 1 the right-hand derivative is the ordinary first derivative.
CompositionReport composition_residual(std::span<const double> values, const TimeGrid1D& grid,
                                       double beta1, double beta2, const CaputoOptions& options = {});

// Causal convolution c[n] = sum_{k<=n} a[k] b[n-k] for n < out_len.
std::vector<double> causal_convolution(std::span<const double> a, std::span<const double> b,
                                       std::size_t out_len);

}  // namespace sheetlab
