#include "sel3d/fft.hpp"

#include <fftw3.h>

#include <stdexcept>

namespace sel3d {

FftEngine::FftEngine(int n) : n_(n) {
    if (n < 2) throw std::invalid_argument("FftEngine: n must be >= 2");
    size_ = static_cast<std::size_t>(n) * n * n;
    work_.resize(size_);
    auto* buf = reinterpret_cast<fftw_complex*>(work_.data());
    // Plans are created on the scratch buffer and executed on caller arrays
    // via the new-array interface. FFTW_ESTIMATE keeps planning deterministic.
    plan_fwd_ = fftw_plan_dft_3d(n, n, n, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
    plan_inv_ = fftw_plan_dft_3d(n, n, n, buf, buf, FFTW_BACKWARD, FFTW_ESTIMATE);
    if (!plan_fwd_ || !plan_inv_) throw std::runtime_error("FftEngine: planning failed");
}

FftEngine::~FftEngine() {
    fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
    fftw_destroy_plan(static_cast<fftw_plan>(plan_inv_));
}

void FftEngine::forward(std::complex<double>* data) const {
    auto* buf = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(static_cast<fftw_plan>(plan_fwd_), buf, buf);
    const double scale = 1.0 / static_cast<double>(size_);
    for (std::size_t i = 0; i < size_; ++i) data[i] *= scale;
}

void FftEngine::inverse(std::complex<double>* data) const {
    auto* buf = reinterpret_cast<fftw_complex*>(data);
    fftw_execute_dft(static_cast<fftw_plan>(plan_inv_), buf, buf);
}

} // namespace sel3d
