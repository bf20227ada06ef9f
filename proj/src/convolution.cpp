#include "convolution.hpp"

#include <fftw3.h>

#include <algorithm>
#include <mutex>

namespace sheetlab::detail {
namespace {

constexpr std::size_t kDirectLimit = 384;

// Plan creation in FFTW is not thread-safe; execution on distinct arrays is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct FftwBuffers {
    explicit FftwBuffers(std::size_t n)
        : real(fftw_alloc_real(n)), spec(fftw_alloc_complex(n / 2 + 1)), n(n) {
        std::lock_guard lock(planner_mutex());
        forward = fftw_plan_dft_r2c_1d(static_cast<int>(n), real, spec, FFTW_ESTIMATE);
        backward = fftw_plan_dft_c2r_1d(static_cast<int>(n), spec, real, FFTW_ESTIMATE);
    }
    ~FftwBuffers() {
        {
            std::lock_guard lock(planner_mutex());
            fftw_destroy_plan(forward);
            fftw_destroy_plan(backward);
        }
        fftw_free(real);
        fftw_free(spec);
    }
    FftwBuffers(const FftwBuffers&) = delete;
    FftwBuffers& operator=(const FftwBuffers&) = delete;

    double* real;
    fftw_complex* spec;
    std::size_t n;
    fftw_plan forward{};
    fftw_plan backward{};
};

}  // namespace

KernelConvolver::KernelConvolver(std::span<const double> kernel, std::size_t out_len)
    : kernel_(kernel.begin(), kernel.begin() + std::min(kernel.size(), out_len)), out_len_(out_len) {
    if (out_len_ <= kDirectLimit) return;
    fft_len_ = 1;
    while (fft_len_ < 2 * out_len_) fft_len_ *= 2;
    FftwBuffers buf(fft_len_);
    std::fill(buf.real, buf.real + fft_len_, 0.0);
    std::copy(kernel_.begin(), kernel_.end(), buf.real);
    fftw_execute(buf.forward);
    spectrum_.resize(fft_len_ / 2 + 1);
    for (std::size_t i = 0; i < spectrum_.size(); ++i)
        spectrum_[i] = {buf.spec[i][0], buf.spec[i][1]};
}

std::vector<double> KernelConvolver::apply(std::span<const double> signal) const {
    std::vector<double> out(out_len_, 0.0);
    const std::size_t m = std::min(signal.size(), out_len_);
    if (fft_len_ == 0) {
        for (std::size_t n = 0; n < out_len_; ++n) {
            double s = 0.0;
            const std::size_t kmax = std::min(n, kernel_.size() - 1);
            for (std::size_t k = 0; k <= kmax; ++k)
                if (n - k < m) s += kernel_[k] * signal[n - k];
            out[n] = s;
        }
        return out;
    }
    FftwBuffers buf(fft_len_);
    std::fill(buf.real, buf.real + fft_len_, 0.0);
    std::copy(signal.begin(), signal.begin() + m, buf.real);
    fftw_execute(buf.forward);
    for (std::size_t i = 0; i < spectrum_.size(); ++i) {
        const std::complex<double> z = std::complex<double>(buf.spec[i][0], buf.spec[i][1]) * spectrum_[i];
        buf.spec[i][0] = z.real();
        buf.spec[i][1] = z.imag();
    }
    fftw_execute(buf.backward);
    const double scale = 1.0 / static_cast<double>(fft_len_);
    for (std::size_t n = 0; n < out_len_; ++n) out[n] = buf.real[n] * scale;
    return out;
}

}  // namespace sheetlab::detail
