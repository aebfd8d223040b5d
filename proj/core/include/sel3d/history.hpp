#pragma once

#include <vector>

#include "sel3d/field.hpp"
#include "sel3d/mollifier.hpp"

namespace sel3d {

/// One recorded instant of a simulation: spectral velocity perturbation,
/// director, stochastic Stokes field and diagnostic pressure.
struct HistoryFrame {
    double t = 0.0;
    SpectralField v;
    SpectralField d;
    SpectralField z;
    SpectralField pi;

    HistoryFrame(double time, SpectralField v_, SpectralField d_, SpectralField z_,
                 SpectralField pi_)
        : t(time), v(std::move(v_)), d(std::move(d_)), z(std::move(z_)), pi(std::move(pi_)) {}
};

/// A recorded run: uniform snapshot times plus the mollifier the run used.
struct SimHistory {
    TorusGrid grid;
    MollifierSpec mollifier;
    std::vector<HistoryFrame> frames;

    explicit SimHistory(TorusGrid g, MollifierSpec m = {}) : grid(std::move(g)), mollifier(m) {}

    double t_begin() const { return frames.front().t; }
    double t_end() const { return frames.back().t; }
    /// Snapshot spacing, taken from the first interval.
    double dt() const { return frames.size() > 1 ? frames[1].t - frames[0].t : 0.0; }
};

} // namespace sel3d
