#pragma once

#include <complex>
#include <vector>

#include "sel3d/grid.hpp"

namespace sel3d {

/// Periodic field on a TorusGrid stored as complex Fourier amplitudes,
/// one cube of n^3 coefficients per component. Fields representing real
/// data satisfy the Hermitian symmetry c(-k) = conj(c(k)); the k = 0 mode
/// carries the spatial average.
class SpectralField {
public:
    SpectralField(TorusGrid grid, int components);

    static SpectralField zero(const TorusGrid& grid, int components) {
        return SpectralField(grid, components);
    }
    /// Build from physical-space samples laid out [component][z][y][x].
    static SpectralField from_physical(const TorusGrid& grid, int components,
                                       const std::vector<double>& values);

    const TorusGrid& grid() const { return grid_; }
    int components() const { return components_; }
    std::size_t modes_per_component() const { return grid_.point_count(); }

    std::complex<double>* data(int component) {
        return coeffs_.data() + static_cast<std::size_t>(component) * modes_per_component();
    }
    const std::complex<double>* data(int component) const {
        return coeffs_.data() + static_cast<std::size_t>(component) * modes_per_component();
    }
    std::complex<double>& at(int component, std::size_t idx) {
        return coeffs_[static_cast<std::size_t>(component) * modes_per_component() + idx];
    }
    const std::complex<double>& at(int component, std::size_t idx) const {
        return coeffs_[static_cast<std::size_t>(component) * modes_per_component() + idx];
    }
    std::complex<double>& at_wavevector(int component, int kx, int ky, int kz) {
        return at(component, grid_.index_of_wavevector(kx, ky, kz));
    }
    const std::complex<double>& at_wavevector(int component, int kx, int ky, int kz) const {
        return at(component, grid_.index_of_wavevector(kx, ky, kz));
    }

    /// Physical samples of one component (real part after inverse FFT).
    std::vector<double> to_physical(int component) const;
    /// Physical samples of all components, [component][z][y][x].
    std::vector<double> to_physical_all() const;

    /// Largest |imag/real| defect from Hermitian symmetry, relative to the
    /// largest amplitude; 0 for an exactly real-valued field.
    double hermitian_defect() const;
    /// Project onto the Hermitian-symmetric (real-valued) part.
    void enforce_hermitian();

    /// Zero every coefficient outside the two-thirds dealias mask.
    void apply_dealias_mask();

    /// sqrt((2*pi)^3 sum_k |c(k)|^2) over all components: the L2(T^3) norm.
    double l2_norm() const;

    SpectralField& operator+=(const SpectralField& other);
    SpectralField& operator-=(const SpectralField& other);
    SpectralField& operator*=(double s);

private:
    TorusGrid grid_;
    int components_;
    std::vector<std::complex<double>> coeffs_;
};

} // namespace sel3d
