#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "sel3d/noise.hpp"

namespace sel3d {

/// State of the linear stochastic Stokes field z, advanced per mode by the
/// exact Ornstein-Uhlenbeck update so the law carries no time-discretization
/// bias. Starts from z(0) = 0 and stays divergence-free.
///
/// Coordinates are stored per (half-lattice mode, polarization) as complex
/// L2-frame amplitudes; the grid field is materialized on demand.
class OUState {
public:
    explicit OUState(const NoiseModel& model);

    const NoiseModel& model() const { return model_; }
    double time() const { return t_; }
    std::uint64_t step_index() const { return step_; }

    /// Exact OU update over dt > 0: per mode with lambda = |k|^2 and
    /// L2 noise amplitude a^2 = gamma lambda^{-2 delta},
    ///   c <- exp(-lambda dt) c + eta,
    /// eta circular complex normal with per-real-coordinate variance
    /// a^2 (1 - exp(-2 lambda dt)) / (2 lambda). Rejects dt <= 0.
    void advance(double dt);

    /// Materialize z as a divergence-free Hermitian spectral field.
    SpectralField field() const;

    /// Direct access to the per-mode coordinates (2 per NoiseMode: pol 1, 2).
    const std::vector<std::complex<double>>& coordinates() const { return coords_; }
    std::vector<std::complex<double>>& coordinates() { return coords_; }

    /// ||z||^2_{D(A^alpha)} computed from the mode coordinates.
    double fractional_norm_squared(double alpha) const;

private:
    NoiseModel model_;
    double t_;
    std::uint64_t step_;
    std::vector<std::complex<double>> coords_;
};

struct SupNormStats {
    double mean_sup_fractional_sq = 0.0; ///< E sup_t ||z||^2_{D(A^alpha)}
    double se_sup_fractional_sq = 0.0;
    double mean_sup_linf = 0.0;          ///< E sup_t ||z||_{L^inf}
    double se_sup_linf = 0.0;
    int paths = 0;
    int steps = 0;
};

/// Monte-Carlo estimate of E sup_{0<=t<=T} ||z(t)||^2_{D(A^alpha)} and
/// E sup_t ||z||_{L^inf} over M independent OU paths on a uniform grid.
SupNormStats sup_norm_stats(const NoiseModel& model, int paths, double horizon,
                            double dt, double alpha);

} // namespace sel3d
