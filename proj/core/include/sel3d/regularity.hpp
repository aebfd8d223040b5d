#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "sel3d/history.hpp"

namespace sel3d {

/// Parabolic cylinder Q_r(z0) = B_r(x0) x (t0 - r^2, t0], torus metric.
struct ParabolicCylinder {
    std::array<double, 3> x0{0.0, 0.0, 0.0};
    double t0 = 0.0;
    double r = 0.0;
};

struct CylinderQuantities {
    double theta = 0.0; ///< C + D^2
    double a = 0.0;     ///< sup_t r^-1 int_{B_r} (|v|^2 + |grad d|^2)
    double b = 0.0;     ///< r^-1 int_{Q_r} (|grad v|^2 + |grad^2 d|^2)
    double c = 0.0;     ///< r^-2 int_{Q_r} (|v|^3 + |grad d|^3)
    double d = 0.0;     ///< r^-2 int_{Q_r} |pi|^{3/2}
};

enum class Classification { RegularCertified, Unresolved };
std::string to_string(Classification c);

struct RegularityThresholds {
    double eps0 = 0.05;
    double eps1 = 0.1;
    double sup_bound = 10.0; ///< the bound M on |z| and |d| over the cylinder
};

struct CoverCylinder {
    ParabolicCylinder cyl;
    double density = 0.0;  ///< (1/r) int_{Q_r} (|grad v|^2 + |grad^2 d|^2)
    double integral = 0.0; ///< r * density
};

struct CoverResult {
    std::vector<CoverCylinder> selected; ///< pairwise disjoint Vitali selection
    std::vector<std::array<double, 4>> dropped; ///< candidates with no qualifying radius
    double sum_5r = 0.0;
    double window_integral = 0.0; ///< int_V (|grad v|^2 + |grad^2 d|^2)
    double bound = 0.0;           ///< (5 / eps1^2) window_integral
    bool inequality_holds = false;
};

/// Quadrature-based evaluation of the partial-regularity quantities on a
/// recorded history. Spatial integrals are sharp-ball grid sums; time
/// integrals are trapezoidal over the stored snapshots, with radii snapped
/// so t0 - r^2 lands on the snapshot grid (within half a step).
class RegularityScanner {
public:
    explicit RegularityScanner(const SimHistory& history);
    ~RegularityScanner();
    RegularityScanner(const RegularityScanner&) = delete;
    RegularityScanner& operator=(const RegularityScanner&) = delete;

    const SimHistory& history() const { return *history_; }

    /// Snap (t0, r) onto the snapshot grid; rejects cylinders that escape
    /// the window or have r >= pi.
    ParabolicCylinder snap(const ParabolicCylinder& cyl) const;

    CylinderQuantities quantities(const ParabolicCylinder& cyl) const;
    double theta(const ParabolicCylinder& cyl) const { return quantities(cyl).theta; }

    Classification classify(const ParabolicCylinder& cyl, const RegularityThresholds& thr) const;

    /// Finite-scale surrogate of the Theorem-2 density lim sup: the max over
    /// the supplied radii of (1/r) int_{Q_r} (|grad v|^2 + |grad^2 d|^2).
    double limsup_density(const std::array<double, 3>& x0, double t0,
                          const std::vector<double>& radii) const;

    /// Greedy Vitali selection over candidate points: each candidate
    /// receives its largest supplied radius of density >= eps1^2 (dropped
    /// with a warning entry when none qualifies); selected cylinders are
    /// pairwise disjoint and satisfy sum 5 r_i <= (5/eps1^2) int_V by
    /// construction.
    CoverResult hausdorff_cover(const std::vector<std::array<double, 4>>& candidates,
                                const std::vector<double>& radii, double eps1) const;

    /// sup over the cylinder of |z| and of |d| (grid samples).
    std::array<double, 2> sup_z_d(const ParabolicCylinder& cyl) const;

private:
    struct FrameCache;
    const SimHistory* history_;
    double dt_ = 0.0;
    std::vector<FrameCache> cache_;

    std::pair<std::size_t, std::size_t> frame_range(double t_lo, double t_hi) const;
    double cylinder_integral(const ParabolicCylinder& cyl,
                             const std::vector<double> FrameCache::*field) const;
};

struct RegularityRow {
    ParabolicCylinder cyl;
    CylinderQuantities q;
    Classification cls;
};

void write_regularity_csv(const std::string& path, const std::vector<RegularityRow>& rows,
                          const RegularityThresholds& thr);
void write_cover_csv(const std::string& path, const CoverResult& cover, double eps1);

} // namespace sel3d
