#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace sheetlab::detail {

// Applies c[n] = sum_{k<=n} kernel[k] * signal[n-k] for n < out_len, with the
// kernel spectrum cached so many signals can share one kernel.
class KernelConvolver {
public:
    KernelConvolver(std::span<const double> kernel, std::size_t out_len);

    std::vector<double> apply(std::span<const double> signal) const;

private:
    std::vector<double> kernel_;
    std::size_t out_len_;
    std::size_t fft_len_ = 0;
    std::vector<std::complex<double>> spectrum_;
};

}  // namespace sheetlab::detail
