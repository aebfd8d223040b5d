#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "sel3d/field.hpp"
#include "sel3d/history.hpp"

namespace sel3d::test {

constexpr double pi = 3.14159265358979323846;

/// Random Hermitian field with modes confined to |k_j| <= band.
inline SpectralField random_band_limited(const TorusGrid& grid, int components, int band,
                                         unsigned seed, double amplitude = 1.0) {
    std::mt19937 gen(seed);
    std::normal_distribution<double> normal(0.0, amplitude);
    SpectralField f(grid, components);
    for (int c = 0; c < components; ++c) {
        for (int kz = -band; kz <= band; ++kz)
            for (int ky = -band; ky <= band; ++ky)
                for (int kx = -band; kx <= band; ++kx)
                    f.at_wavevector(c, kx, ky, kz) = {normal(gen), normal(gen)};
    }
    f.enforce_hermitian();
    f.apply_dealias_mask();
    return f;
}

/// Sample a closed-form field component-by-component onto the grid.
inline SpectralField sample_field(const TorusGrid& grid, int components,
                                  const std::function<double(int, double, double, double)>& fn) {
    const int n = grid.n();
    const std::size_t per = grid.point_count();
    std::vector<double> values(per * components);
    for (int c = 0; c < components; ++c)
        for (int mz = 0; mz < n; ++mz)
            for (int my = 0; my < n; ++my)
                for (int mx = 0; mx < n; ++mx)
                    values[c * per + grid.index(mx, my, mz)] =
                        fn(c, grid.coordinate(mx), grid.coordinate(my), grid.coordinate(mz));
    return SpectralField::from_physical(grid, components, values);
}

inline double max_coeff_distance(const SpectralField& a, const SpectralField& b) {
    double worst = 0.0;
    for (int c = 0; c < a.components(); ++c)
        for (std::size_t i = 0; i < a.modes_per_component(); ++i)
            worst = std::max(worst, std::abs(a.at(c, i) - b.at(c, i)));
    return worst;
}

inline double max_coeff_abs(const SpectralField& a) {
    double worst = 0.0;
    for (int c = 0; c < a.components(); ++c)
        for (std::size_t i = 0; i < a.modes_per_component(); ++i)
            worst = std::max(worst, std::abs(a.at(c, i)));
    return worst;
}

} // namespace sel3d::test
