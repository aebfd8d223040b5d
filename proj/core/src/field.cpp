#include "sel3d/field.hpp"

#include <cmath>
#include <stdexcept>

#include "sel3d/fft.hpp"

namespace sel3d {

SpectralField::SpectralField(TorusGrid grid, int components)
    : grid_(std::move(grid)), components_(components) {
    if (components < 1) throw std::invalid_argument("SpectralField: components must be >= 1");
    coeffs_.assign(static_cast<std::size_t>(components) * grid_.point_count(), {0.0, 0.0});
}

SpectralField SpectralField::from_physical(const TorusGrid& grid, int components,
                                           const std::vector<double>& values) {
    const std::size_t per = grid.point_count();
    if (values.size() != per * static_cast<std::size_t>(components))
        throw std::invalid_argument("SpectralField::from_physical: size mismatch");
    SpectralField f(grid, components);
    for (int c = 0; c < components; ++c) {
        std::complex<double>* dst = f.data(c);
        const double* src = values.data() + static_cast<std::size_t>(c) * per;
        for (std::size_t i = 0; i < per; ++i) dst[i] = {src[i], 0.0};
        grid.fft().forward(dst);
    }
    return f;
}

std::vector<double> SpectralField::to_physical(int component) const {
    const std::size_t per = modes_per_component();
    std::vector<std::complex<double>> tmp(data(component), data(component) + per);
    grid_.fft().inverse(tmp.data());
    std::vector<double> out(per);
    for (std::size_t i = 0; i < per; ++i) out[i] = tmp[i].real();
    return out;
}

std::vector<double> SpectralField::to_physical_all() const {
    const std::size_t per = modes_per_component();
    std::vector<double> out(per * static_cast<std::size_t>(components_));
    for (int c = 0; c < components_; ++c) {
        auto one = to_physical(c);
        std::copy(one.begin(), one.end(), out.begin() + static_cast<std::size_t>(c) * per);
    }
    return out;
}

double SpectralField::hermitian_defect() const {
    const int n = grid_.n();
    double max_amp = 0.0, max_defect = 0.0;
    for (int c = 0; c < components_; ++c) {
        const std::complex<double>* a = data(c);
        for (int mz = 0; mz < n; ++mz) {
            for (int my = 0; my < n; ++my) {
                for (int mx = 0; mx < n; ++mx) {
                    const std::size_t i = grid_.index(mx, my, mz);
                    const std::size_t j = grid_.index((n - mx) % n, (n - my) % n, (n - mz) % n);
                    max_amp = std::max(max_amp, std::abs(a[i]));
                    max_defect = std::max(max_defect, std::abs(a[i] - std::conj(a[j])));
                }
            }
        }
    }
    return max_amp > 0.0 ? max_defect / max_amp : 0.0;
}

void SpectralField::enforce_hermitian() {
    const int n = grid_.n();
    for (int c = 0; c < components_; ++c) {
        std::complex<double>* a = data(c);
        for (int mz = 0; mz < n; ++mz) {
            for (int my = 0; my < n; ++my) {
                for (int mx = 0; mx < n; ++mx) {
                    const std::size_t i = grid_.index(mx, my, mz);
                    const std::size_t j = grid_.index((n - mx) % n, (n - my) % n, (n - mz) % n);
                    if (j < i) continue;
                    const std::complex<double> avg = 0.5 * (a[i] + std::conj(a[j]));
                    a[i] = avg;
                    a[j] = std::conj(avg);
                }
            }
        }
    }
}

void SpectralField::apply_dealias_mask() {
    const auto& mask = grid_.dealias_mask();
    const std::size_t per = modes_per_component();
    for (int c = 0; c < components_; ++c) {
        std::complex<double>* a = data(c);
        for (std::size_t i = 0; i < per; ++i)
            if (!mask[i]) a[i] = {0.0, 0.0};
    }
}

double SpectralField::l2_norm() const {
    double sum = 0.0;
    for (const auto& c : coeffs_) sum += std::norm(c);
    return std::sqrt(grid_.volume() * sum);
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
    if (!(grid_ == other.grid_) || components_ != other.components_)
        throw std::invalid_argument("SpectralField: shape mismatch");
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
    return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
    if (!(grid_ == other.grid_) || components_ != other.components_)
        throw std::invalid_argument("SpectralField: shape mismatch");
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
    return *this;
}

SpectralField& SpectralField::operator*=(double s) {
    for (auto& c : coeffs_) c *= s;
    return *this;
}

} // namespace sel3d
