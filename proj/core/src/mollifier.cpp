#include "sel3d/mollifier.hpp"

#include <cmath>
#include <stdexcept>

#include "sel3d/fft.hpp"

namespace sel3d {
namespace {

// Standard bump profile, b(0) = 1, support (-1, 1).
double bump_profile(double s2) {
    if (s2 >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - s2));
}

std::vector<double> bump_multiplier(const TorusGrid& grid, double sigma) {
    const int n = grid.n();
    const std::size_t total = grid.point_count();
    std::vector<std::complex<double>> kernel(total);
    double mass = 0.0;
    for (int mz = 0; mz < n; ++mz) {
        const double z = TorusGrid::min_image(grid.coordinate(mz), 0.0);
        for (int my = 0; my < n; ++my) {
            const double y = TorusGrid::min_image(grid.coordinate(my), 0.0);
            for (int mx = 0; mx < n; ++mx) {
                const double x = TorusGrid::min_image(grid.coordinate(mx), 0.0);
                const double s2 = (x * x + y * y + z * z) / (sigma * sigma);
                const double v = bump_profile(s2);
                kernel[grid.index(mx, my, mz)] = {v, 0.0};
                mass += v;
            }
        }
    }
    // A kernel narrower than one cell degenerates to the identity.
    if (mass <= 0.0) return std::vector<double>(total, 1.0);
    const double norm = 1.0 / (mass * grid.cell_volume());
    for (auto& v : kernel) v *= norm;
    grid.fft().forward(kernel.data());
    // multiplier m(k) = (2 pi)^3 psihat(k); m(0) = 1 by the mass normalization
    std::vector<double> mult(total);
    for (std::size_t i = 0; i < total; ++i) mult[i] = grid.volume() * kernel[i].real();
    return mult;
}

std::vector<double> gaussian_multiplier(const TorusGrid& grid, double sigma) {
    const std::size_t total = grid.point_count();
    std::vector<double> mult(total);
    for (std::size_t i = 0; i < total; ++i)
        mult[i] = std::exp(-0.5 * sigma * sigma * grid.k_squared(i));
    return mult;
}

} // namespace

MollifierKind mollifier_kind_from_string(const std::string& name) {
    if (name == "bump-kernel" || name == "bump") return MollifierKind::BumpKernel;
    if (name == "gaussian-multiplier" || name == "gaussian") return MollifierKind::GaussianMultiplier;
    throw std::invalid_argument("unknown mollifier kind: " + name);
}

std::string to_string(MollifierKind kind) {
    return kind == MollifierKind::BumpKernel ? "bump-kernel" : "gaussian-multiplier";
}

Mollifier::Mollifier(const TorusGrid& grid, const MollifierSpec& spec) : spec_(spec) {
    if (spec.sigma <= 0.0) throw std::invalid_argument("Mollifier: sigma must be > 0");
    if (spec.kind == MollifierKind::BumpKernel) {
        if (spec.sigma > grid.length() / 2.0)
            throw std::invalid_argument(
                "Mollifier: bump-kernel sigma exceeds half the torus period");
        multiplier_ = bump_multiplier(grid, spec.sigma);
    } else {
        multiplier_ = gaussian_multiplier(grid, spec.sigma);
    }
}

SpectralField Mollifier::apply(const SpectralField& f) const {
    SpectralField out = f;
    apply_in_place(out);
    return out;
}

void Mollifier::apply_in_place(SpectralField& f) const {
    const std::size_t per = f.modes_per_component();
    if (per != multiplier_.size())
        throw std::invalid_argument("Mollifier: grid mismatch");
    for (int c = 0; c < f.components(); ++c) {
        std::complex<double>* a = f.data(c);
        for (std::size_t i = 0; i < per; ++i) a[i] *= multiplier_[i];
    }
}

SpectralField mollify(const SpectralField& f, const MollifierSpec& spec) {
    return Mollifier(f.grid(), spec).apply(f);
}

} // namespace sel3d
