#include "sel3d/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "sel3d/spectral.hpp"

namespace sel3d {

std::string to_string(Classification c) {
    return c == Classification::RegularCertified ? "regular-certified" : "unresolved";
}

struct RegularityScanner::FrameCache {
    std::vector<double> cube_density; ///< |v|^3 + |grad d|^3
    std::vector<double> pi_pow;       ///< |pi|^{3/2}
    std::vector<double> grad_sq;      ///< |grad v|^2 + |grad^2 d|^2
    std::vector<double> en_sq;        ///< |v|^2 + |grad d|^2
    std::vector<double> z_mag;
    std::vector<double> d_mag;
};

RegularityScanner::~RegularityScanner() = default;

namespace {

using Buffer = std::vector<double>;

std::array<Buffer, 3> physical3(const SpectralField& f) {
    return {f.to_physical(0), f.to_physical(1), f.to_physical(2)};
}

} // namespace

RegularityScanner::RegularityScanner(const SimHistory& history) : history_(&history) {
    if (history.frames.size() < 2)
        throw std::invalid_argument("RegularityScanner: need at least 2 snapshots");
    dt_ = history.dt();
    for (std::size_t i = 2; i < history.frames.size(); ++i) {
        const double step = history.frames[i].t - history.frames[i - 1].t;
        if (std::abs(step - dt_) > 1e-9 * std::max(1.0, std::abs(dt_)))
            throw std::invalid_argument("RegularityScanner: snapshots must be uniform in time");
    }

    const TorusGrid& grid = history.grid;
    const std::size_t per = grid.point_count();
    cache_.reserve(history.frames.size());
    for (const auto& frame : history.frames) {
        FrameCache fc;
        fc.cube_density.assign(per, 0.0);
        fc.pi_pow.assign(per, 0.0);
        fc.grad_sq.assign(per, 0.0);
        fc.en_sq.assign(per, 0.0);
        fc.z_mag.assign(per, 0.0);
        fc.d_mag.assign(per, 0.0);

        const auto v = physical3(frame.v);
        const auto d = physical3(frame.d);
        const auto z = physical3(frame.z);
        const Buffer pi = frame.pi.to_physical(0);

        std::array<std::array<Buffer, 3>, 3> grad_v, grad_d;
        for (int axis = 0; axis < 3; ++axis) {
            const SpectralField dv = derivative(frame.v, axis);
            const SpectralField dd = derivative(frame.d, axis);
            for (int c = 0; c < 3; ++c) {
                grad_v[axis][c] = dv.to_physical(c);
                grad_d[axis][c] = dd.to_physical(c);
            }
        }
        // second derivatives of d: six distinct index pairs
        const std::array<std::array<int, 2>, 6> pairs = {
            {{0, 0}, {1, 1}, {2, 2}, {0, 1}, {0, 2}, {1, 2}}};
        std::array<std::array<Buffer, 3>, 6> hess_d;
        for (int e = 0; e < 6; ++e) {
            const SpectralField dd = derivative(derivative(frame.d, pairs[e][0]), pairs[e][1]);
            for (int c = 0; c < 3; ++c) hess_d[e][c] = dd.to_physical(c);
        }

        for (std::size_t i = 0; i < per; ++i) {
            const double v2 = v[0][i] * v[0][i] + v[1][i] * v[1][i] + v[2][i] * v[2][i];
            double gd2 = 0.0, gv2 = 0.0;
            for (int axis = 0; axis < 3; ++axis) {
                for (int c = 0; c < 3; ++c) {
                    gd2 += grad_d[axis][c][i] * grad_d[axis][c][i];
                    gv2 += grad_v[axis][c][i] * grad_v[axis][c][i];
                }
            }
            double h2 = 0.0;
            for (int e = 0; e < 6; ++e) {
                const double w = pairs[e][0] == pairs[e][1] ? 1.0 : 2.0;
                for (int c = 0; c < 3; ++c) h2 += w * hess_d[e][c][i] * hess_d[e][c][i];
            }
            fc.cube_density[i] = std::pow(v2, 1.5) + std::pow(gd2, 1.5);
            fc.pi_pow[i] = std::pow(std::abs(pi[i]), 1.5);
            fc.grad_sq[i] = gv2 + h2;
            fc.en_sq[i] = v2 + gd2;
            fc.z_mag[i] = std::sqrt(z[0][i] * z[0][i] + z[1][i] * z[1][i] + z[2][i] * z[2][i]);
            fc.d_mag[i] = std::sqrt(d[0][i] * d[0][i] + d[1][i] * d[1][i] + d[2][i] * d[2][i]);
        }
        cache_.push_back(std::move(fc));
    }
}

ParabolicCylinder RegularityScanner::snap(const ParabolicCylinder& cyl) const {
    if (cyl.r <= 0.0) throw std::invalid_argument("cylinder radius must be > 0");
    if (cyl.r >= history_->grid.length() / 2.0)
        throw std::invalid_argument("cylinder radius must be below half the torus period");
    ParabolicCylinder out = cyl;
    const double t_begin = history_->t_begin();
    // align t0 with the snapshot grid
    const double steps_t0 = std::round((cyl.t0 - t_begin) / dt_);
    out.t0 = t_begin + steps_t0 * dt_;
    // snap r so t0 - r^2 lands on the grid as well
    const long m = std::lround(cyl.r * cyl.r / dt_);
    if (m < 1) throw std::invalid_argument("cylinder too thin for the snapshot grid");
    out.r = std::sqrt(static_cast<double>(m) * dt_);
    if (out.t0 - out.r * out.r < t_begin - 0.5 * dt_ || out.t0 > history_->t_end() + 0.5 * dt_)
        throw std::invalid_argument("cylinder escapes the recorded window");
    return out;
}

std::pair<std::size_t, std::size_t> RegularityScanner::frame_range(double t_lo, double t_hi) const {
    const double t_begin = history_->t_begin();
    const long lo = std::lround((t_lo - t_begin) / dt_);
    const long hi = std::lround((t_hi - t_begin) / dt_);
    const long last = static_cast<long>(history_->frames.size()) - 1;
    return {static_cast<std::size_t>(std::clamp(lo, 0L, last)),
            static_cast<std::size_t>(std::clamp(hi, 0L, last))};
}

namespace {

// grid points inside the torus ball B_r(x0)
std::vector<std::size_t> ball_points(const TorusGrid& grid, const std::array<double, 3>& x0,
                                     double r) {
    std::vector<std::size_t> pts;
    const int n = grid.n();
    const double r2 = r * r;
    for (int mz = 0; mz < n; ++mz) {
        const double dz = TorusGrid::min_image(grid.coordinate(mz), x0[2]);
        if (dz * dz > r2) continue;
        for (int my = 0; my < n; ++my) {
            const double dy = TorusGrid::min_image(grid.coordinate(my), x0[1]);
            if (dz * dz + dy * dy > r2) continue;
            for (int mx = 0; mx < n; ++mx) {
                const double dx = TorusGrid::min_image(grid.coordinate(mx), x0[0]);
                if (dx * dx + dy * dy + dz * dz < r2) pts.push_back(grid.index(mx, my, mz));
            }
        }
    }
    return pts;
}

} // namespace

double RegularityScanner::cylinder_integral(const ParabolicCylinder& cyl,
                                            const std::vector<double> FrameCache::*field) const {
    const auto pts = ball_points(history_->grid, cyl.x0, cyl.r);
    const auto [lo, hi] = frame_range(cyl.t0 - cyl.r * cyl.r, cyl.t0);
    const double h3 = history_->grid.cell_volume();
    double total = 0.0;
    for (std::size_t fi = lo; fi <= hi; ++fi) {
        const auto& values = cache_[fi].*field;
        double s = 0.0;
        for (std::size_t p : pts) s += values[p];
        const double w = (fi == lo || fi == hi) ? 0.5 : 1.0; // trapezoid ends
        total += w * s;
    }
    return total * h3 * dt_;
}

CylinderQuantities RegularityScanner::quantities(const ParabolicCylinder& raw) const {
    const ParabolicCylinder cyl = snap(raw);
    CylinderQuantities q;
    const double r = cyl.r;
    q.b = cylinder_integral(cyl, &FrameCache::grad_sq) / r;
    q.c = cylinder_integral(cyl, &FrameCache::cube_density) / (r * r);
    q.d = cylinder_integral(cyl, &FrameCache::pi_pow) / (r * r);
    q.theta = q.c + q.d * q.d;

    const auto pts = ball_points(history_->grid, cyl.x0, r);
    const auto [lo, hi] = frame_range(cyl.t0 - r * r, cyl.t0);
    const double h3 = history_->grid.cell_volume();
    double sup = 0.0;
    for (std::size_t fi = lo; fi <= hi; ++fi) {
        double s = 0.0;
        for (std::size_t p : pts) s += cache_[fi].en_sq[p];
        sup = std::max(sup, s * h3 / r);
    }
    q.a = sup;
    return q;
}

std::array<double, 2> RegularityScanner::sup_z_d(const ParabolicCylinder& raw) const {
    const ParabolicCylinder cyl = snap(raw);
    const auto pts = ball_points(history_->grid, cyl.x0, cyl.r);
    const auto [lo, hi] = frame_range(cyl.t0 - cyl.r * cyl.r, cyl.t0);
    double sz = 0.0, sd = 0.0;
    for (std::size_t fi = lo; fi <= hi; ++fi) {
        for (std::size_t p : pts) {
            sz = std::max(sz, cache_[fi].z_mag[p]);
            sd = std::max(sd, cache_[fi].d_mag[p]);
        }
    }
    return {sz, sd};
}

Classification RegularityScanner::classify(const ParabolicCylinder& cyl,
                                           const RegularityThresholds& thr) const {
    const auto q = quantities(cyl);
    const auto sup = sup_z_d(cyl);
    const bool bounded = sup[0] <= thr.sup_bound && sup[1] <= thr.sup_bound;
    const bool small = q.theta <= thr.eps0 * thr.eps0 * thr.eps0;
    // one-sided criterion: never "singular"
    return (bounded && small) ? Classification::RegularCertified : Classification::Unresolved;
}

double RegularityScanner::limsup_density(const std::array<double, 3>& x0, double t0,
                                         const std::vector<double>& radii) const {
    double best = 0.0;
    for (double r : radii) {
        const ParabolicCylinder cyl = snap({x0, t0, r});
        best = std::max(best, cylinder_integral(cyl, &FrameCache::grad_sq) / cyl.r);
    }
    return best;
}

namespace {

bool cylinders_disjoint(const ParabolicCylinder& a, const ParabolicCylinder& b) {
    const double t_lo_a = a.t0 - a.r * a.r, t_lo_b = b.t0 - b.r * b.r;
    // (t_lo, t0] intervals disjoint, or torus balls disjoint
    if (a.t0 <= t_lo_b || b.t0 <= t_lo_a) return true;
    return TorusGrid::torus_distance(a.x0, b.x0) >= a.r + b.r;
}

} // namespace

CoverResult RegularityScanner::hausdorff_cover(const std::vector<std::array<double, 4>>& candidates,
                                               const std::vector<double>& radii,
                                               double eps1) const {
    if (eps1 <= 0.0) throw std::invalid_argument("hausdorff_cover: eps1 must be > 0");
    CoverResult out;

    // window integral over the full recorded space-time domain
    {
        const double h3 = history_->grid.cell_volume();
        double total = 0.0;
        for (std::size_t fi = 0; fi < cache_.size(); ++fi) {
            double s = 0.0;
            for (double v : cache_[fi].grad_sq) s += v;
            const double w = (fi == 0 || fi + 1 == cache_.size()) ? 0.5 : 1.0;
            total += w * s;
        }
        out.window_integral = total * h3 * dt_;
    }
    out.bound = 5.0 / (eps1 * eps1) * out.window_integral;

    std::vector<double> sorted_radii = radii;
    std::sort(sorted_radii.begin(), sorted_radii.end(), std::greater<>());

    std::vector<CoverCylinder> qualified;
    for (const auto& cand : candidates) {
        const std::array<double, 3> x0 = {cand[0], cand[1], cand[2]};
        const double t0 = cand[3];
        bool found = false;
        for (double r : sorted_radii) {
            ParabolicCylinder cyl;
            try {
                cyl = snap({x0, t0, r});
            } catch (const std::invalid_argument&) {
                continue; // radius does not fit the window
            }
            const double integral = cylinder_integral(cyl, &FrameCache::grad_sq);
            const double density = integral / cyl.r;
            if (density >= eps1 * eps1) {
                qualified.push_back({cyl, density, integral});
                found = true;
                break; // largest qualifying radius
            }
        }
        if (!found) out.dropped.push_back(cand);
    }

    std::sort(qualified.begin(), qualified.end(),
              [](const CoverCylinder& a, const CoverCylinder& b) { return a.cyl.r > b.cyl.r; });
    for (const auto& cand : qualified) {
        bool disjoint = true;
        for (const auto& sel : out.selected) {
            if (!cylinders_disjoint(cand.cyl, sel.cyl)) {
                disjoint = false;
                break;
            }
        }
        if (disjoint) {
            out.selected.push_back(cand);
            out.sum_5r += 5.0 * cand.cyl.r;
        }
    }
    out.inequality_holds = out.sum_5r <= out.bound * (1.0 + 1e-12);
    return out;
}

void write_regularity_csv(const std::string& path, const std::vector<RegularityRow>& rows,
                          const RegularityThresholds& thr) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("write_regularity_csv: cannot open " + path);
    std::fprintf(f, "# eps0=%.17g eps1=%.17g M=%.17g\n", thr.eps0, thr.eps1, thr.sup_bound);
    std::fprintf(f, "x0,y0,z0,t0,r,Theta,A,B,C,D,classification\n");
    for (const auto& row : rows) {
        std::fprintf(f, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%s\n",
                     row.cyl.x0[0], row.cyl.x0[1], row.cyl.x0[2], row.cyl.t0, row.cyl.r,
                     row.q.theta, row.q.a, row.q.b, row.q.c, row.q.d, to_string(row.cls).c_str());
    }
    std::fclose(f);
}

void write_cover_csv(const std::string& path, const CoverResult& cover, double eps1) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("write_cover_csv: cannot open " + path);
    std::fprintf(f, "record,x0,y0,z0,t0,r,density,integral\n");
    for (const auto& sel : cover.selected) {
        std::fprintf(f, "cylinder,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", sel.cyl.x0[0],
                     sel.cyl.x0[1], sel.cyl.x0[2], sel.cyl.t0, sel.cyl.r, sel.density,
                     sel.integral);
    }
    for (const auto& d : cover.dropped)
        std::fprintf(f, "dropped,%.17g,%.17g,%.17g,%.17g,,,\n", d[0], d[1], d[2], d[3]);
    std::fprintf(f, "summary,sum_5r=%.17g,window_integral=%.17g,bound=%.17g,eps1=%.17g,pass=%s,,\n",
                 cover.sum_5r, cover.window_integral, cover.bound, eps1,
                 cover.inequality_holds ? "yes" : "no");
    std::fclose(f);
}

} // namespace sel3d
