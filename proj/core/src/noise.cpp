#include "sel3d/noise.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "sel3d/rng.hpp"
#include "sel3d/spectral.hpp"

namespace sel3d {
namespace {

constexpr double inv_sqrt2 = 0.70710678118654752440;

// RNG slot tags; keep the Wiener and OU streams disjoint.
constexpr std::uint64_t slot_wiener = 0;

bool canonical_half(int kx, int ky, int kz) {
    if (kx != 0) return kx > 0;
    if (ky != 0) return ky > 0;
    return kz > 0;
}

std::array<double, 3> normalize(std::array<double, 3> v) {
    const double n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
    return {v[0] / n, v[1] / n, v[2] / n};
}

std::array<double, 3> cross(const std::array<double, 3>& a, const std::array<double, 3>& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

// Deterministic orthonormal polarization pair perpendicular to k.
void polarizations(const std::array<int, 3>& k, std::array<double, 3>& p1,
                   std::array<double, 3>& p2) {
    const std::array<double, 3> kd = {static_cast<double>(k[0]), static_cast<double>(k[1]),
                                      static_cast<double>(k[2])};
    std::array<double, 3> helper = {1.0, 0.0, 0.0};
    if (k[1] == 0 && k[2] == 0) helper = {0.0, 1.0, 0.0};
    p1 = normalize(cross(kd, helper));
    p2 = normalize(cross(kd, p1));
}

double amplitude_frame_scale(const TorusGrid& grid) {
    // L2 real coordinate -> complex amplitude: (X_c - i X_s)/sqrt(2)/(2 pi)^{3/2}
    return inv_sqrt2 / std::sqrt(grid.volume());
}

} // namespace

NoiseModel::NoiseModel(const TorusGrid& grid, double delta, double decay_s, double kmax,
                       std::uint64_t seed)
    : grid_(grid), delta_(delta), decay_s_(decay_s), kmax_(kmax), seed_(seed) {
    if (decay_s < 0.0) throw std::invalid_argument("NoiseModel: decay_s must be >= 0");
    if (kmax >= grid.n() / 2.0)
        throw std::invalid_argument("NoiseModel: kmax must be below the grid Nyquist band");
    const int kcap = static_cast<int>(std::floor(kmax));
    const double kmax2 = kmax * kmax;
    for (int kx = -kcap; kx <= kcap; ++kx) {
        for (int ky = -kcap; ky <= kcap; ++ky) {
            for (int kz = -kcap; kz <= kcap; ++kz) {
                const double k2 = static_cast<double>(kx) * kx + static_cast<double>(ky) * ky +
                                  static_cast<double>(kz) * kz;
                if (k2 == 0.0 || k2 > kmax2) continue;
                if (!canonical_half(kx, ky, kz)) continue;
                NoiseMode mode;
                mode.k = {kx, ky, kz};
                mode.lambda = k2;
                mode.gamma = std::pow(k2, -decay_s);
                polarizations(mode.k, mode.pol1, mode.pol2);
                mode.grid_index = grid.index_of_wavevector(kx, ky, kz);
                modes_.push_back(mode);
            }
        }
    }
}

double NoiseModel::trace() const {
    double sum = 0.0;
    for (const auto& m : modes_) sum += m.gamma;
    return 4.0 * sum; // both half-lattices, two polarizations
}

double NoiseModel::l2_variance_rate(const NoiseMode& mode) const {
    return mode.gamma * std::pow(mode.lambda, -2.0 * delta_);
}

std::vector<std::complex<double>> sample_increment_coordinates(const NoiseModel& model,
                                                               double dt, std::uint64_t step) {
    if (dt <= 0.0) throw std::invalid_argument("sample_increment: dt must be > 0");
    const double scale = amplitude_frame_scale(model.grid());
    std::vector<std::complex<double>> coords(model.modes().size() * 2);
    for (std::size_t i = 0; i < model.modes().size(); ++i) {
        const double sd = std::sqrt(dt * model.l2_variance_rate(model.modes()[i]));
        for (int p = 0; p < 2; ++p) {
            const auto g = rng::normal_pair(model.seed(), 2 * i + p, step, slot_wiener);
            coords[2 * i + p] = scale * std::complex<double>(sd * g.first, -sd * g.second);
        }
    }
    return coords;
}

SpectralField sample_increment(const NoiseModel& model, double dt, std::uint64_t step) {
    const auto coords = sample_increment_coordinates(model, dt, step);
    SpectralField out(model.grid(), 3);
    const TorusGrid& grid = model.grid();
    for (std::size_t i = 0; i < model.modes().size(); ++i) {
        const NoiseMode& m = model.modes()[i];
        const std::size_t pos = m.grid_index;
        const std::size_t neg = grid.index_of_wavevector(-m.k[0], -m.k[1], -m.k[2]);
        for (int c = 0; c < 3; ++c) {
            const std::complex<double> amp =
                coords[2 * i] * m.pol1[c] + coords[2 * i + 1] * m.pol2[c];
            out.at(c, pos) = amp;
            out.at(c, neg) = std::conj(amp);
        }
    }
    return out;
}

namespace {

double coords_fractional_norm_sq(const NoiseModel& model,
                                 const std::vector<std::complex<double>>& coords, double alpha) {
    double sum = 0.0;
    for (std::size_t i = 0; i < model.modes().size(); ++i) {
        const double w = std::pow(model.modes()[i].lambda, 2.0 * alpha);
        sum += w * (std::norm(coords[2 * i]) + std::norm(coords[2 * i + 1]));
    }
    return 2.0 * model.grid().volume() * sum;
}

} // namespace

HolderEstimate estimate_holder_exponent(const NoiseModel& model, double horizon,
                                        const std::vector<double>& lags, int paths) {
    if (paths < 100) throw std::invalid_argument("estimate_holder_exponent: need >= 100 paths");
    if (lags.size() < 4) throw std::invalid_argument("estimate_holder_exponent: need >= 4 lags");

    HolderEstimate est;
    est.lags = lags;
    std::sort(est.lags.begin(), est.lags.end());
    const double dt0 = est.lags.front();
    if (dt0 <= 0.0) throw std::invalid_argument("estimate_holder_exponent: lags must be > 0");
    const int nsteps = static_cast<int>(std::llround(horizon / dt0));
    if (nsteps < 2) throw std::invalid_argument("estimate_holder_exponent: horizon too short");

    std::vector<int> strides;
    for (double lag : est.lags) {
        const int m = static_cast<int>(std::llround(lag / dt0));
        if (std::abs(m * dt0 - lag) > 1e-9 * dt0)
            throw std::invalid_argument("estimate_holder_exponent: lags must be multiples of the smallest lag");
        strides.push_back(m);
    }

    const double scale = amplitude_frame_scale(model.grid());
    const std::size_t ncoords = model.modes().size() * 2;
    est.rms.assign(est.lags.size(), 0.0);
    std::vector<double> sum_sq(est.lags.size(), 0.0);
    std::vector<std::size_t> counts(est.lags.size(), 0);

    std::vector<std::complex<double>> path((nsteps + 1) * ncoords);
    for (int p = 0; p < paths; ++p) {
        // cumulative Wiener path on the finest lag grid
        std::fill(path.begin(), path.begin() + ncoords, std::complex<double>(0.0, 0.0));
        for (int s = 0; s < nsteps; ++s) {
            for (std::size_t i = 0; i < model.modes().size(); ++i) {
                const double sd = std::sqrt(dt0 * model.l2_variance_rate(model.modes()[i]));
                for (int q = 0; q < 2; ++q) {
                    const auto g = rng::normal_pair(model.seed(), 2 * i + q, s,
                                                    (2ULL << 32) | static_cast<std::uint64_t>(p));
                    const std::complex<double> inc =
                        scale * std::complex<double>(sd * g.first, -sd * g.second);
                    path[(s + 1) * ncoords + 2 * i + q] = path[s * ncoords + 2 * i + q] + inc;
                }
            }
        }
        for (std::size_t l = 0; l < strides.size(); ++l) {
            const int m = strides[l];
            for (int s = 0; s + m <= nsteps; s += m) {
                double sq = 0.0;
                for (std::size_t i = 0; i < model.modes().size(); ++i) {
                    const double w = std::pow(model.modes()[i].lambda, 2.0 * model.delta());
                    sq += w * (std::norm(path[(s + m) * ncoords + 2 * i] - path[s * ncoords + 2 * i]) +
                               std::norm(path[(s + m) * ncoords + 2 * i + 1] -
                                         path[s * ncoords + 2 * i + 1]));
                }
                sum_sq[l] += 2.0 * model.grid().volume() * sq;
                counts[l] += 1;
            }
        }
    }

    est.analytic_rate = model.increment_second_moment_rate();
    double total = 0.0;
    for (std::size_t l = 0; l < est.lags.size(); ++l) {
        const double mean_sq = counts[l] ? sum_sq[l] / counts[l] : 0.0;
        est.rms[l] = std::sqrt(mean_sq);
        total += mean_sq;
    }
    if (total == 0.0) {
        est.degenerate = true;
        est.slope = std::numeric_limits<double>::quiet_NaN();
        return est;
    }

    // least-squares slope of log rms against log lag
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    const double n = static_cast<double>(est.lags.size());
    for (std::size_t l = 0; l < est.lags.size(); ++l) {
        const double x = std::log(est.lags[l]);
        const double y = std::log(est.rms[l]);
        sx += x; sy += y; sxx += x * x; sxy += x * y;
    }
    est.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    return est;
}

NoiseTraceReport trace_and_norm_report(const NoiseModel& model) {
    NoiseTraceReport report;
    report.trace = model.trace();
    report.mode_count = model.mode_count();
    std::map<double, std::size_t> shells;
    for (const auto& m : model.modes()) shells[m.lambda] += 4;
    for (const auto& [lambda, count] : shells) {
        NoiseShellRow row;
        row.lambda = lambda;
        row.gamma = std::pow(lambda, -model.decay_s());
        row.l2_amplitude = std::pow(lambda, -model.delta());
        row.count = count;
        report.shells.push_back(row);
    }
    return report;
}

} // namespace sel3d
