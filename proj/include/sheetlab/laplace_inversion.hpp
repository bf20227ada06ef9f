#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace sheetlab {

// Fixed Talbot contour inversion of a Laplace transform at time t > 0.
// F maps std::complex<double> to std::complex<double>.
template <class F>
double talbot_inverse(F&& transform, double t, int nodes = 32) {
    if (!(t > 0.0)) throw std::domain_error("Talbot inversion requires t > 0");
    if (nodes < 4) throw std::invalid_argument("Talbot inversion needs at least 4 nodes");
    const double m = static_cast<double>(nodes);
    const double r = 2.0 * m / (5.0 * t);
    double sum = 0.5 * std::exp(r * t) * std::real(transform(std::complex<double>(r, 0.0)));
    for (int k = 1; k < nodes; ++k) {
        const double theta = static_cast<double>(k) * std::numbers::pi / m;
        const double cot = std::cos(theta) / std::sin(theta);
        const std::complex<double> s = r * theta * std::complex<double>(cot, 1.0);
        const std::complex<double> sigma(theta + (theta * cot - 1.0) * cot, 0.0);
        const std::complex<double> factor = std::complex<double>(1.0, 0.0) + std::complex<double>(0.0, 1.0) * sigma;
        sum += std::real(std::exp(s * t) * transform(s) * factor);
    }
    return sum * r / m;
}

// Same contour, but the transform is supplied as log F(s). The exponentials are
// combined before evaluation so transforms that grow on the contour do not overflow.
template <class LogF>
double talbot_inverse_log(LogF&& log_transform, double t, int nodes = 32) {
    if (!(t > 0.0)) throw std::domain_error("Talbot inversion requires t > 0");
    if (nodes < 4) throw std::invalid_argument("Talbot inversion needs at least 4 nodes");
    const double m = static_cast<double>(nodes);
    const double r = 2.0 * m / (5.0 * t);
    double sum = 0.5 * std::real(std::exp(r * t + log_transform(std::complex<double>(r, 0.0))));
    for (int k = 1; k < nodes; ++k) {
        const double theta = static_cast<double>(k) * std::numbers::pi / m;
        const double cot = std::cos(theta) / std::sin(theta);
        const std::complex<double> s = r * theta * std::complex<double>(cot, 1.0);
        const double sigma = theta + (theta * cot - 1.0) * cot;
        sum += std::real(std::exp(s * t + log_transform(s)) * std::complex<double>(1.0, sigma));
    }
    return sum * r / m;
}

}  // namespace sheetlab
