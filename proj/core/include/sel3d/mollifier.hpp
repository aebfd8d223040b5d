#pragma once

#include <string>
#include <vector>

#include "sel3d/field.hpp"

namespace sel3d {

enum class MollifierKind {
    BumpKernel,         ///< discretized compactly supported bump, applied as a multiplier
    GaussianMultiplier, ///< exp(-sigma^2 |k|^2 / 2) directly
};

struct MollifierSpec {
    double sigma = 0.1;
    MollifierKind kind = MollifierKind::BumpKernel;
};

MollifierKind mollifier_kind_from_string(const std::string& name);
std::string to_string(MollifierKind kind);

/// Precomputed Fourier multiplier for one (grid, spec) pair.
///
/// BumpKernel samples psi_sigma(x) = c b(|x|/sigma), b(s) = exp(1 - 1/(1-s^2)),
/// on the grid (minimum-image metric), normalizes its discrete mass to one and
/// takes the DFT. The physical kernel is nonnegative with unit mass, so the
/// induced circular convolution contracts every discrete L^p norm; the
/// multiplier itself satisfies m(0) = 1, |m(k)| <= 1 but can have small
/// negative tails. GaussianMultiplier satisfies 0 < m(k) <= 1 exactly.
///
/// Rejects sigma <= 0, and BumpKernel with sigma > pi (the kernel support
/// no longer fits the fundamental domain).
class Mollifier {
public:
    Mollifier(const TorusGrid& grid, const MollifierSpec& spec);

    const MollifierSpec& spec() const { return spec_; }
    double multiplier(std::size_t mode_idx) const { return multiplier_[mode_idx]; }
    const std::vector<double>& multipliers() const { return multiplier_; }

    SpectralField apply(const SpectralField& f) const;
    void apply_in_place(SpectralField& f) const;

private:
    MollifierSpec spec_;
    std::vector<double> multiplier_;
};

/// One-shot convenience wrapper around Mollifier.
SpectralField mollify(const SpectralField& f, const MollifierSpec& spec);

} // namespace sel3d
