#include "sel3d/stokes_ou.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sel3d/rng.hpp"
#include "sel3d/spectral.hpp"

namespace sel3d {
namespace {

constexpr double inv_sqrt2 = 0.70710678118654752440;
constexpr std::uint64_t slot_ou = 1;

} // namespace

OUState::OUState(const NoiseModel& model)
    : model_(model), t_(0.0), step_(0), coords_(model.modes().size() * 2, {0.0, 0.0}) {}

void OUState::advance(double dt) {
    if (dt <= 0.0) throw std::invalid_argument("OUState::advance: dt must be > 0");
    const double scale = inv_sqrt2 / std::sqrt(model_.grid().volume());
    for (std::size_t i = 0; i < model_.modes().size(); ++i) {
        const NoiseMode& m = model_.modes()[i];
        const double lambda = m.lambda;
        const double decay = std::exp(-lambda * dt);
        const double a2 = model_.l2_variance_rate(m);
        // exact stochastic-convolution variance per real L2 coordinate
        const double q = a2 * (1.0 - decay * decay) / (2.0 * lambda);
        const double sd = std::sqrt(q);
        for (int p = 0; p < 2; ++p) {
            const auto g = rng::normal_pair(model_.seed(), 2 * i + p, step_, slot_ou);
            coords_[2 * i + p] = decay * coords_[2 * i + p] +
                                 scale * std::complex<double>(sd * g.first, -sd * g.second);
        }
    }
    t_ += dt;
    step_ += 1;
}

SpectralField OUState::field() const {
    SpectralField out(model_.grid(), 3);
    const TorusGrid& grid = model_.grid();
    for (std::size_t i = 0; i < model_.modes().size(); ++i) {
        const NoiseMode& m = model_.modes()[i];
        const std::size_t pos = m.grid_index;
        const std::size_t neg = grid.index_of_wavevector(-m.k[0], -m.k[1], -m.k[2]);
        for (int c = 0; c < 3; ++c) {
            const std::complex<double> amp =
                coords_[2 * i] * m.pol1[c] + coords_[2 * i + 1] * m.pol2[c];
            out.at(c, pos) = amp;
            out.at(c, neg) = std::conj(amp);
        }
    }
    return out;
}

double OUState::fractional_norm_squared(double alpha) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < model_.modes().size(); ++i) {
        const double w = std::pow(model_.modes()[i].lambda, 2.0 * alpha);
        sum += w * (std::norm(coords_[2 * i]) + std::norm(coords_[2 * i + 1]));
    }
    return 2.0 * model_.grid().volume() * sum;
}

SupNormStats sup_norm_stats(const NoiseModel& model, int paths, double horizon, double dt,
                            double alpha) {
    if (paths < 100) throw std::invalid_argument("sup_norm_stats: need >= 100 paths");
    if (dt <= 0.0 || horizon < dt) throw std::invalid_argument("sup_norm_stats: bad time grid");

    const int nsteps = static_cast<int>(std::llround(horizon / dt));
    const double scale = inv_sqrt2 / std::sqrt(model.grid().volume());

    double sum_frac = 0.0, sum_frac_sq = 0.0, sum_linf = 0.0, sum_linf_sq = 0.0;
    std::vector<std::complex<double>> coords(model.modes().size() * 2);

    for (int p = 0; p < paths; ++p) {
        std::fill(coords.begin(), coords.end(), std::complex<double>(0.0, 0.0));
        double sup_frac = 0.0, sup_linf = 0.0;
        for (int s = 0; s < nsteps; ++s) {
            for (std::size_t i = 0; i < model.modes().size(); ++i) {
                const NoiseMode& m = model.modes()[i];
                const double decay = std::exp(-m.lambda * dt);
                const double q =
                    model.l2_variance_rate(m) * (1.0 - decay * decay) / (2.0 * m.lambda);
                const double sd = std::sqrt(q);
                for (int q2 = 0; q2 < 2; ++q2) {
                    const auto g = rng::normal_pair(model.seed(), 2 * i + q2, s,
                                                    (3ULL << 32) | static_cast<std::uint64_t>(p));
                    coords[2 * i + q2] = decay * coords[2 * i + q2] +
                                         scale * std::complex<double>(sd * g.first, -sd * g.second);
                }
            }
            double frac = 0.0;
            for (std::size_t i = 0; i < model.modes().size(); ++i) {
                const double w = std::pow(model.modes()[i].lambda, 2.0 * alpha);
                frac += w * (std::norm(coords[2 * i]) + std::norm(coords[2 * i + 1]));
            }
            frac *= 2.0 * model.grid().volume();
            sup_frac = std::max(sup_frac, frac);

            // materialize the field for the sup norm
            SpectralField z(model.grid(), 3);
            for (std::size_t i = 0; i < model.modes().size(); ++i) {
                const NoiseMode& m = model.modes()[i];
                const std::size_t pos = m.grid_index;
                const std::size_t neg =
                    model.grid().index_of_wavevector(-m.k[0], -m.k[1], -m.k[2]);
                for (int c = 0; c < 3; ++c) {
                    const std::complex<double> amp =
                        coords[2 * i] * m.pol1[c] + coords[2 * i + 1] * m.pol2[c];
                    z.at(c, pos) = amp;
                    z.at(c, neg) = std::conj(amp);
                }
            }
            sup_linf = std::max(sup_linf, max_pointwise_norm(z));
        }
        sum_frac += sup_frac;
        sum_frac_sq += sup_frac * sup_frac;
        sum_linf += sup_linf;
        sum_linf_sq += sup_linf * sup_linf;
    }

    SupNormStats stats;
    stats.paths = paths;
    stats.steps = nsteps;
    const double n = static_cast<double>(paths);
    stats.mean_sup_fractional_sq = sum_frac / n;
    stats.mean_sup_linf = sum_linf / n;
    const double var_frac =
        std::max(0.0, sum_frac_sq / n - stats.mean_sup_fractional_sq * stats.mean_sup_fractional_sq);
    const double var_linf = std::max(0.0, sum_linf_sq / n - stats.mean_sup_linf * stats.mean_sup_linf);
    stats.se_sup_fractional_sq = std::sqrt(var_frac / n);
    stats.se_sup_linf = std::sqrt(var_linf / n);
    return stats;
}

} // namespace sel3d
