#include "sel3d/grid.hpp"

#include <cmath>
#include <stdexcept>

#include "sel3d/fft.hpp"

namespace sel3d {

TorusGrid::TorusGrid(int n) {
    if (n < 8 || n % 2 != 0)
        throw std::invalid_argument("TorusGrid: n must be even and >= 8");
    impl_ = std::make_shared<Impl>();
    impl_->n = n;
    const std::size_t total = static_cast<std::size_t>(n) * n * n;
    impl_->k2.resize(total);
    impl_->mask.resize(total);
    const double cutoff = n / 3.0;
    for (int mz = 0; mz < n; ++mz) {
        const int kz = wavenumber(mz);
        for (int my = 0; my < n; ++my) {
            const int ky = wavenumber(my);
            for (int mx = 0; mx < n; ++mx) {
                const int kx = wavenumber(mx);
                const std::size_t idx = index(mx, my, mz);
                impl_->k2[idx] = static_cast<double>(kx) * kx +
                                 static_cast<double>(ky) * ky +
                                 static_cast<double>(kz) * kz;
                const bool nyquist = kx == n / 2 || ky == n / 2 || kz == n / 2;
                const bool high = std::abs(kx) > cutoff || std::abs(ky) > cutoff ||
                                  std::abs(kz) > cutoff;
                impl_->mask[idx] = (nyquist || high) ? 0 : 1;
            }
        }
    }
}

double TorusGrid::min_image(double a, double b) {
    double d = std::fmod(a - b, two_pi);
    if (d > two_pi / 2) d -= two_pi;
    if (d < -two_pi / 2) d += two_pi;
    return d;
}

double TorusGrid::torus_distance(const std::array<double, 3>& a, const std::array<double, 3>& b) {
    const double dx = min_image(a[0], b[0]);
    const double dy = min_image(a[1], b[1]);
    const double dz = min_image(a[2], b[2]);
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

FftEngine& TorusGrid::fft() const {
    if (!impl_->fft) {
        // Lazily built; single-threaded use per the concurrency contract.
        const_cast<Impl&>(*impl_).fft = std::make_shared<FftEngine>(impl_->n);
    }
    return *impl_->fft;
}

} // namespace sel3d
