#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "sel3d/field.hpp"

namespace sel3d {

/// One retained wavevector of the noise expansion, sampled once per
/// Hermitian pair (only the canonical half-lattice is listed). Each
/// wavevector carries two divergence-free polarizations.
struct NoiseMode {
    std::array<int, 3> k;
    double lambda;            ///< Stokes eigenvalue |k|^2
    double gamma;             ///< covariance eigenvalue lambda^{-s}
    std::array<double, 3> pol1;
    std::array<double, 3> pol2;
    std::size_t grid_index;   ///< spectral index of k on the grid
};

/// Additive Q-Wiener noise for the velocity equation: W(t) takes values in
/// D(A^delta) with covariance eigenvalues gamma_i = lambda_i^{-s} on
/// divergence-free Fourier modes with 0 < |k| <= kmax. Only k != 0 modes
/// carry noise, so W has zero spatial mean. In the L2 frame the coordinate
/// of mode i evolves as a Brownian motion of variance rate gamma_i
/// lambda_i^{-2 delta}.
class NoiseModel {
public:
    NoiseModel(const TorusGrid& grid, double delta, double decay_s, double kmax,
               std::uint64_t seed);

    const TorusGrid& grid() const { return grid_; }
    double delta() const { return delta_; }
    double decay_s() const { return decay_s_; }
    double kmax() const { return kmax_; }
    std::uint64_t seed() const { return seed_; }

    /// Canonical half-lattice modes (one entry per Hermitian (k,-k) pair).
    const std::vector<NoiseMode>& modes() const { return modes_; }

    /// Number of (k, polarization) noise degrees of freedom over the full
    /// lattice: 2 polarizations x both half-lattices.
    std::size_t mode_count() const { return modes_.size() * 4; }

    /// Trace of the covariance operator, sum of gamma_i over mode_count() modes.
    double trace() const;

    /// L2-frame variance rate gamma lambda^{-2 delta} of one mode.
    double l2_variance_rate(const NoiseMode& mode) const;

    /// E ||W(t+h) - W(t)||^2_{D(A^delta)} / h = trace(); exact identity used
    /// by the Hoelder estimator as its analytic reference.
    double increment_second_moment_rate() const { return trace(); }

    bool empty() const { return modes_.empty(); }

private:
    TorusGrid grid_;
    double delta_;
    double decay_s_;
    double kmax_;
    std::uint64_t seed_;
    std::vector<NoiseMode> modes_;
};

/// Draw the Wiener increment W(t+dt) - W(t) for micro-step `step` as a
/// divergence-free Hermitian field. Deterministic in (model.seed, step).
/// Rejects dt <= 0.
SpectralField sample_increment(const NoiseModel& model, double dt, std::uint64_t step);

/// Per-mode L2-frame coordinates of one increment (2 complex coordinates per
/// half-lattice mode: polarizations 1 and 2). Same RNG stream as
/// sample_increment; used by the statistics paths that never need a grid field.
std::vector<std::complex<double>> sample_increment_coordinates(const NoiseModel& model,
                                                               double dt, std::uint64_t step);

struct HolderEstimate {
    double slope = 0.0;           ///< fitted log-RMS slope; theory: 1/2
    bool degenerate = false;      ///< all increments vanished; slope undefined
    std::vector<double> lags;
    std::vector<double> rms;      ///< sqrt(E ||W(t+h)-W(t)||^2_{D(A^delta)})
    double analytic_rate = 0.0;   ///< trace: E||dW||^2 = h * analytic_rate
};

/// Monte-Carlo Hoelder-regularity estimator for the Wiener path: simulates M
/// paths on the dyadic grid of the smallest lag, averages the squared
/// D(A^delta) increment norm per lag and fits the log-log slope of the RMS
/// curve. Requires at least 4 lags and M >= 100.
HolderEstimate estimate_holder_exponent(const NoiseModel& model, double horizon,
                                        const std::vector<double>& lags, int paths);

struct NoiseShellRow {
    double lambda;
    double gamma;
    double l2_amplitude;   ///< lambda^{-delta}
    std::size_t count;     ///< (k, polarization) modes in the shell
};

struct NoiseTraceReport {
    double trace = 0.0;
    std::size_t mode_count = 0;
    std::vector<NoiseShellRow> shells;
};

/// Trace, mode count and the per-shell D(A^delta) normalization table.
NoiseTraceReport trace_and_norm_report(const NoiseModel& model);

} // namespace sel3d
