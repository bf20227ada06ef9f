#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sheetlab {

enum class Growth { Bounded, Polynomial };

enum class FunctionId { Constant, Quadratic, Quartic, Gaussian, Bump };

// Highest Laplacian power served analytically for the smooth catalog entries.
inline constexpr int kAnalyticLaplacianOrder = 8;

class InitialFunction {
public:
    static InitialFunction constant(int d, double c = 1.0);
    static InitialFunction quadratic(int d);  // sum y_k^2
    static InitialFunction quartic(int d);    // sum y_k^4
    static InitialFunction gaussian(int d);   // exp(-|y|^2 / 2)
    static InitialFunction bump(int d, double c = 1.0, double alpha = 1.0);

    FunctionId id() const noexcept { return id_; }
    std::string name() const;
    int dimension() const noexcept { return d_; }
    int max_k() const noexcept { return max_k_; }
    double holder_alpha() const noexcept { return holder_alpha_; }
    Growth growth() const noexcept { return growth_; }

    double value(std::span<const double> x) const;
    // k-th power of the Laplacian; k = 0 is the value itself.
    double laplacian(std::span<const double> x, int k) const;

    // E[f(x + sqrt(v) Z)] in closed form when the heat semigroup is explicit.
    std::optional<double> heat_mean(std::span<const double> x, double variance) const;

    // Throws unless the function is bounded or polynomial growth was admitted.
    void require_admissible(bool polynomial_growth_admitted) const;

private:
    InitialFunction(FunctionId id, int d, int max_k, double holder, Growth g, double c, double alpha)
        : id_(id), d_(d), max_k_(max_k), holder_alpha_(holder), growth_(g), c_(c), alpha_(alpha) {}
    void check_point(std::span<const double> x) const;

    FunctionId id_;
    int d_;
    int max_k_;
    double holder_alpha_;
    Growth growth_;
    double c_;
    double alpha_;
};

// Catalog lookup by name: "constant", "quadratic", "quartic", "gaussian", "bump".
InitialFunction make_initial_function(std::string_view name, int d, double c = 1.0, double alpha = 1.0);
std::vector<InitialFunction> catalog(int d);

// C exp(1/(|x|^{2 alpha} - 1)) inside the unit ball, 0 outside.
double bump_f0(double c, double alpha, std::span<const double> x);

// Laplacian of the alpha = 1 bump in two dimensions. |x| = 1 is rejected unless
// at_boundary_limit is set, in which case the limit 0 is returned.
double bump_laplacian_d2(double c, std::span<const double> x, bool at_boundary_limit = false);

}  // namespace sheetlab
