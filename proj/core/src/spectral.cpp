#include "sel3d/spectral.hpp"

#include <cmath>
#include <stdexcept>

#include "sel3d/fft.hpp"

namespace sel3d {

SpectralField leray_project(const SpectralField& f) {
    if (f.components() != 3)
        throw std::invalid_argument("leray_project: expected a 3-component field");
    SpectralField out = f;
    const TorusGrid& grid = f.grid();
    const std::size_t per = f.modes_per_component();
    std::complex<double>* c0 = out.data(0);
    std::complex<double>* c1 = out.data(1);
    std::complex<double>* c2 = out.data(2);
    for (std::size_t i = 0; i < per; ++i) {
        const double k2 = grid.k_squared(i);
        if (k2 == 0.0) continue;
        const auto k = grid.wavevector(i);
        const std::complex<double> kdot =
            static_cast<double>(k[0]) * c0[i] + static_cast<double>(k[1]) * c1[i] +
            static_cast<double>(k[2]) * c2[i];
        const std::complex<double> s = kdot / k2;
        c0[i] -= static_cast<double>(k[0]) * s;
        c1[i] -= static_cast<double>(k[1]) * s;
        c2[i] -= static_cast<double>(k[2]) * s;
    }
    return out;
}

SpectralField derivative(const SpectralField& f, int axis) {
    if (axis < 0 || axis > 2) throw std::invalid_argument("derivative: axis must be 0, 1 or 2");
    SpectralField out = f;
    const TorusGrid& grid = f.grid();
    const std::size_t per = f.modes_per_component();
    for (int c = 0; c < f.components(); ++c) {
        std::complex<double>* a = out.data(c);
        for (std::size_t i = 0; i < per; ++i) {
            const auto k = grid.wavevector(i);
            a[i] *= std::complex<double>(0.0, static_cast<double>(k[axis]));
        }
    }
    // The Nyquist row has no faithful derivative; it is always masked.
    out.apply_dealias_mask();
    return out;
}

SpectralField gradient(const SpectralField& f) {
    if (f.components() != 1) throw std::invalid_argument("gradient: expected a scalar field");
    SpectralField out(f.grid(), 3);
    const TorusGrid& grid = f.grid();
    const std::size_t per = f.modes_per_component();
    const std::complex<double>* a = f.data(0);
    for (int axis = 0; axis < 3; ++axis) {
        std::complex<double>* g = out.data(axis);
        for (std::size_t i = 0; i < per; ++i) {
            const auto k = grid.wavevector(i);
            g[i] = a[i] * std::complex<double>(0.0, static_cast<double>(k[axis]));
        }
    }
    out.apply_dealias_mask();
    return out;
}

SpectralField laplacian(const SpectralField& f) {
    SpectralField out = f;
    const TorusGrid& grid = f.grid();
    const std::size_t per = f.modes_per_component();
    for (int c = 0; c < f.components(); ++c) {
        std::complex<double>* a = out.data(c);
        for (std::size_t i = 0; i < per; ++i) a[i] *= -grid.k_squared(i);
    }
    return out;
}

double divergence_defect(const SpectralField& f) {
    if (f.components() != 3)
        throw std::invalid_argument("divergence_defect: expected a 3-component field");
    const TorusGrid& grid = f.grid();
    const std::size_t per = f.modes_per_component();
    const std::complex<double>* c0 = f.data(0);
    const std::complex<double>* c1 = f.data(1);
    const std::complex<double>* c2 = f.data(2);
    double worst = 0.0;
    for (std::size_t i = 0; i < per; ++i) {
        const auto k = grid.wavevector(i);
        const std::complex<double> kdot =
            static_cast<double>(k[0]) * c0[i] + static_cast<double>(k[1]) * c1[i] +
            static_cast<double>(k[2]) * c2[i];
        worst = std::max(worst, std::abs(kdot));
    }
    return worst;
}

double fractional_norm(const SpectralField& f, double alpha) {
    if (alpha < 0.0) throw std::invalid_argument("fractional_norm: alpha must be >= 0");
    const TorusGrid& grid = f.grid();
    const std::size_t per = f.modes_per_component();
    double sum = 0.0;
    for (int c = 0; c < f.components(); ++c) {
        const std::complex<double>* a = f.data(c);
        for (std::size_t i = 0; i < per; ++i) {
            const double k2 = grid.k_squared(i);
            if (k2 == 0.0) continue;
            sum += std::pow(k2, 2.0 * alpha) * std::norm(a[i]);
        }
    }
    return std::sqrt(grid.volume() * sum);
}

SpectralField dealiased_product(const SpectralField& f, const SpectralField& g) {
    if (!(f.grid() == g.grid()))
        throw std::invalid_argument("dealiased_product: grid mismatch");
    const SpectralField* scalar = nullptr;
    const SpectralField* other = nullptr;
    if (f.components() == g.components()) {
        scalar = nullptr;
    } else if (f.components() == 1) {
        scalar = &f; other = &g;
    } else if (g.components() == 1) {
        scalar = &g; other = &f;
    } else {
        throw std::invalid_argument("dealiased_product: incompatible component counts");
    }

    const TorusGrid& grid = f.grid();
    const std::size_t per = grid.point_count();
    const int out_components = scalar ? other->components() : f.components();
    SpectralField out(grid, out_components);

    // both inputs are truncated to the retained band before multiplying
    SpectralField fm = scalar ? *other : f;
    SpectralField gm = scalar ? *scalar : g;
    fm.apply_dealias_mask();
    gm.apply_dealias_mask();

    std::vector<double> sphys;
    if (scalar) sphys = gm.to_physical(0);
    for (int c = 0; c < out_components; ++c) {
        const std::vector<double> a = fm.to_physical(c);
        const std::vector<double> b = scalar ? sphys : gm.to_physical(c);
        std::complex<double>* dst = out.data(c);
        for (std::size_t i = 0; i < per; ++i) dst[i] = {a[i] * b[i], 0.0};
        grid.fft().forward(dst);
    }
    out.apply_dealias_mask();
    return out;
}

double lp_norm(const SpectralField& f, double p) {
    if (p < 1.0) throw std::invalid_argument("lp_norm: p must be >= 1");
    const TorusGrid& grid = f.grid();
    const std::size_t per = grid.point_count();
    std::vector<std::vector<double>> phys;
    phys.reserve(f.components());
    for (int c = 0; c < f.components(); ++c) phys.push_back(f.to_physical(c));
    double sum = 0.0;
    for (std::size_t i = 0; i < per; ++i) {
        double mag2 = 0.0;
        for (const auto& comp : phys) mag2 += comp[i] * comp[i];
        sum += std::pow(mag2, 0.5 * p);
    }
    return std::pow(grid.cell_volume() * sum, 1.0 / p);
}

double max_pointwise_norm(const SpectralField& f) {
    const std::size_t per = f.grid().point_count();
    std::vector<std::vector<double>> phys;
    phys.reserve(f.components());
    for (int c = 0; c < f.components(); ++c) phys.push_back(f.to_physical(c));
    double worst = 0.0;
    for (std::size_t i = 0; i < per; ++i) {
        double mag2 = 0.0;
        for (const auto& comp : phys) mag2 += comp[i] * comp[i];
        worst = std::max(worst, mag2);
    }
    return std::sqrt(worst);
}

} // namespace sel3d
