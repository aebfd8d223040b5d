#pragma once

#include <complex>
#include <vector>

namespace sel3d {

/// RAII wrapper around a pair of FFTW complex-to-complex 3D plans for one
/// cube size. Forward transforms divide by n^3 so spectral data holds mode
/// amplitudes: f(x) = sum_k c(k) exp(i k.x). One engine is shared per grid.
class FftEngine {
public:
    explicit FftEngine(int n);
    ~FftEngine();

    FftEngine(const FftEngine&) = delete;
    FftEngine& operator=(const FftEngine&) = delete;

    /// In-place physical -> spectral (amplitude-normalized).
    void forward(std::complex<double>* data) const;
    /// In-place spectral -> physical.
    void inverse(std::complex<double>* data) const;

    int n() const { return n_; }

private:
    int n_;
    std::size_t size_;
    void* plan_fwd_;
    void* plan_inv_;
    mutable std::vector<std::complex<double>> work_;
};

} // namespace sel3d
