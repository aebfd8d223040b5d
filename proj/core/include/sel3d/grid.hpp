#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <vector>

namespace sel3d {

class FftEngine;

/// Uniform discretization of the periodic box [0, 2*pi)^3.
///
/// Wavenumbers follow the usual FFT layout: index m along an axis maps to
/// k = m for m <= n/2 and k = m - n otherwise, so k ranges over
/// {-n/2+1, ..., n/2}. The Nyquist row k = n/2 is always masked, as is every
/// mode with any |k_j| > n/3 (two-thirds dealiasing).
///
/// TorusGrid is a cheap shared handle; copies refer to the same tables and
/// FFT plans. Requires n even and >= 8.
class TorusGrid {
public:
    explicit TorusGrid(int n);

    int n() const { return impl_->n; }
    std::size_t point_count() const {
        const std::size_t n = impl_->n;
        return n * n * n;
    }
    double length() const { return two_pi; }
    double spacing() const { return two_pi / impl_->n; }
    /// Quadrature weight of a grid point, (2*pi/n)^3.
    double cell_volume() const { const double h = spacing(); return h * h * h; }
    double volume() const { return two_pi * two_pi * two_pi; }

    /// Signed wavenumber component for FFT index m.
    int wavenumber(int m) const { return m <= impl_->n / 2 ? m : m - impl_->n; }

    /// Wavenumber triple (kx, ky, kz) of a flattened spectral index.
    std::array<int, 3> wavevector(std::size_t idx) const {
        const int n = impl_->n;
        const int mx = static_cast<int>(idx % n);
        const int my = static_cast<int>((idx / n) % n);
        const int mz = static_cast<int>(idx / (static_cast<std::size_t>(n) * n));
        return {wavenumber(mx), wavenumber(my), wavenumber(mz)};
    }

    /// Flattened index of (mx, my, mz), x fastest.
    std::size_t index(int mx, int my, int mz) const {
        const std::size_t n = impl_->n;
        return (static_cast<std::size_t>(mz) * n + my) * n + mx;
    }
    /// Flattened index of a signed wavevector (components in {-n/2+1,...,n/2}).
    std::size_t index_of_wavevector(int kx, int ky, int kz) const {
        const int n = impl_->n;
        auto wrap = [n](int k) { return k >= 0 ? k : k + n; };
        return index(wrap(kx), wrap(ky), wrap(kz));
    }

    double k_squared(std::size_t idx) const { return impl_->k2[idx]; }
    bool dealias_keep(std::size_t idx) const { return impl_->mask[idx] != 0; }
    const std::vector<double>& k_squared_table() const { return impl_->k2; }
    const std::vector<std::uint8_t>& dealias_mask() const { return impl_->mask; }

    /// Physical coordinate of grid index m along one axis.
    double coordinate(int m) const { return spacing() * m; }

    /// Shortest signed displacement a-b on the circle of length 2*pi.
    static double min_image(double a, double b);
    /// Torus distance between two points.
    static double torus_distance(const std::array<double, 3>& a, const std::array<double, 3>& b);

    FftEngine& fft() const;

    bool operator==(const TorusGrid& other) const { return impl_->n == other.impl_->n; }

    static constexpr double two_pi = 6.283185307179586476925286766559;

private:
    struct Impl {
        int n = 0;
        std::vector<double> k2;
        std::vector<std::uint8_t> mask;
        std::shared_ptr<FftEngine> fft;
    };
    std::shared_ptr<Impl> impl_;
};

} // namespace sel3d
