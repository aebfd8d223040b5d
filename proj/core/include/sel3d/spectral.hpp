#pragma once

#include "sel3d/field.hpp"

namespace sel3d {

/// Helmholtz--Leray projection onto divergence-free fields: per mode k != 0,
/// c(k) <- c(k) - k (k.c(k)) / |k|^2. The mean mode is left unchanged.
SpectralField leray_project(const SpectralField& f);

/// Spectral derivative along one axis (multiplication by i k_axis).
SpectralField derivative(const SpectralField& f, int axis);

/// Gradient of a scalar field as a 3-component field.
SpectralField gradient(const SpectralField& f);

/// Laplacian (multiplication by -|k|^2).
SpectralField laplacian(const SpectralField& f);

/// max_k |k . c(k)| over modes, the absolute divergence defect.
double divergence_defect(const SpectralField& f);

/// Fractional Stokes norm: ((2*pi)^3 sum_{k!=0} |k|^{4 alpha} |c(k)|^2)^{1/2}.
/// alpha = 0 recovers the L2 norm of the zero-mean part. Rejects alpha < 0.
double fractional_norm(const SpectralField& f, double alpha);

/// Pointwise physical-space product brought back to spectral space and
/// masked by the two-thirds rule. Component counts must be equal, or one
/// operand must be scalar (which then multiplies every component).
SpectralField dealiased_product(const SpectralField& f, const SpectralField& g);

/// L^p(T^3) norm of the physical-space realization, grid quadrature.
double lp_norm(const SpectralField& f, double p);

/// Maximum pointwise Euclidean magnitude over the grid.
double max_pointwise_norm(const SpectralField& f);

} // namespace sel3d
