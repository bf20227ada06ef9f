#pragma once

#include <cstddef>
#include <vector>

namespace sheetlab {

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    std::size_t size() const noexcept { return nodes.size(); }
};

// Gauss-Legendre on [-1, 1].
QuadratureRule gauss_legendre(std::size_t n);

// Gauss-Hermite for the standard normal: sum w_i g(z_i) ~ E[g(Z)], weights sum to 1.
QuadratureRule gauss_hermite_normal(std::size_t n);

}  // namespace sheetlab
