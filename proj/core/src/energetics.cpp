#include "sel3d/energetics.hpp"

#include <cfloat>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "sel3d/solver.hpp"

namespace sel3d {
namespace {

using Buffer = std::vector<double>;

std::array<Buffer, 3> physical3(const SpectralField& f) {
    return {f.to_physical(0), f.to_physical(1), f.to_physical(2)};
}

std::array<std::array<Buffer, 3>, 3> jacobian_physical(const SpectralField& f) {
    std::array<std::array<Buffer, 3>, 3> out;
    for (int axis = 0; axis < 3; ++axis) {
        const SpectralField df = derivative(f, axis);
        for (int c = 0; c < 3; ++c) out[axis][c] = df.to_physical(c);
    }
    return out;
}

double spectral_weighted_sq(const SpectralField& f, double power) {
    // (2 pi)^3 sum_k |k|^{2 power} |c(k)|^2
    const TorusGrid& grid = f.grid();
    double sum = 0.0;
    for (int c = 0; c < f.components(); ++c) {
        const std::complex<double>* a = f.data(c);
        for (std::size_t i = 0; i < f.modes_per_component(); ++i) {
            const double k2 = grid.k_squared(i);
            if (power > 0.0 && k2 == 0.0) continue;
            sum += std::pow(k2, power) * std::norm(a[i]);
        }
    }
    return grid.volume() * sum;
}

} // namespace

EnergySample energy_sample(double t, const SpectralField& vhat, const SpectralField& dhat,
                           const SpectralField* zhat, const Mollifier& mollifier) {
    const TorusGrid& grid = vhat.grid();
    const std::size_t per = grid.point_count();
    const double h3 = grid.cell_volume();

    EnergySample s;
    s.t = t;
    s.v_h_sq = spectral_weighted_sq(vhat, 0.0);
    const double grad_d_sq = spectral_weighted_sq(dhat, 1.0);
    s.d_h1_sq = spectral_weighted_sq(dhat, 0.0) + grad_d_sq;
    s.grad_v_sq = spectral_weighted_sq(vhat, 1.0);
    s.lap_d_sq = spectral_weighted_sq(dhat, 2.0);
    s.energy = 0.5 * s.v_h_sq + 0.5 * grad_d_sq + gl_potential_integral(dhat);
    s.diss_v = s.grad_v_sq;

    const SpectralField fM = gl_force(dhat);
    SpectralField lmf = laplacian(dhat);
    lmf -= fM;
    s.diss_d = lmf.l2_norm() * lmf.l2_norm();

    if (zhat != nullptr) {
        SpectralField ahat = mollifier.apply(vhat);
        ahat += *zhat;
        const auto a = physical3(ahat);
        const auto z = physical3(*zhat);
        const auto grad_v = jacobian_physical(vhat);
        const SpectralField phid = mollifier.apply(dhat);
        const auto grad_phid = jacobian_physical(phid);
        const auto lmfp = physical3(lmf);

        double w1 = 0.0, w2 = 0.0, l4 = 0.0;
        for (std::size_t i = 0; i < per; ++i) {
            for (int c = 0; c < 3; ++c) {
                const double adv =
                    a[0][i] * grad_v[0][c][i] + a[1][i] * grad_v[1][c][i] + a[2][i] * grad_v[2][c][i];
                w1 += adv * z[c][i];
                const double zdg = z[0][i] * grad_phid[0][c][i] + z[1][i] * grad_phid[1][c][i] +
                                   z[2][i] * grad_phid[2][c][i];
                w2 += zdg * lmfp[c][i];
            }
            const double zmag2 = z[0][i] * z[0][i] + z[1][i] * z[1][i] + z[2][i] * z[2][i];
            l4 += zmag2 * zmag2;
        }
        s.work_z1 = h3 * w1;
        s.work_z2 = h3 * w2;
        s.z_l4_4 = h3 * l4;
    }
    return s;
}

void EnergyLedger::push(const EnergySample& s) {
    if (!rows.empty()) {
        const EnergySample& p = rows.back();
        const double half = 0.5 * (s.t - p.t);
        const double res = (s.energy - p.energy) +
                           half * (s.diss_v + s.diss_d + p.diss_v + p.diss_d) -
                           half * (s.work_z1 + s.work_z2 + p.work_z1 + p.work_z2);
        residuals.push_back(res);
    } else {
        residuals.push_back(0.0);
    }
    rows.push_back(s);

    double cumulative = 0.0, max_abs = 0.0, max_cum = 0.0;
    double sup_e = 0.0, total_diss = 0.0, total_work = 0.0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        cumulative += residuals[i];
        max_abs = std::max(max_abs, std::abs(residuals[i]));
        max_cum = std::max(max_cum, cumulative);
        sup_e = std::max(sup_e, std::abs(rows[i].energy));
        if (i > 0) {
            const double half = 0.5 * (rows[i].t - rows[i - 1].t);
            total_diss += half * (rows[i].diss_v + rows[i].diss_d + rows[i - 1].diss_v +
                                  rows[i - 1].diss_d);
            total_work += std::abs(half * (rows[i].work_z1 + rows[i].work_z2 +
                                           rows[i - 1].work_z1 + rows[i - 1].work_z2));
        }
    }
    integrated_residual = std::abs(cumulative);
    max_interval_residual = max_abs;
    suitability_margin = max_cum;
    scale = std::max({sup_e, total_diss, total_work});
    const double denom = scale > 0.0 ? scale : 1.0;
    integrated_relative = integrated_residual / denom;
    max_interval_relative = max_interval_residual / denom;
    suitability_margin_relative = suitability_margin / denom;
}

void EnergyLedger::write_csv(const std::string& path) const {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("EnergyLedger: cannot open " + path);
    std::fprintf(f, "time,E,dissipation_v,dissipation_d,work_z1,work_z2,residual\n");
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const EnergySample& s = rows[i];
        std::fprintf(f, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", s.t, s.energy, s.diss_v,
                     s.diss_d, s.work_z1, s.work_z2, residuals[i]);
    }
    std::fclose(f);
}

// ---------------------------------------------------------------------------
// bump test function
// ---------------------------------------------------------------------------

double BumpTestFunction::b(double s) {
    const double s2 = s * s;
    if (s2 >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - s2));
}

double BumpTestFunction::b_prime(double s) {
    const double s2 = s * s;
    if (s2 >= 1.0) return 0.0;
    const double u = 1.0 - s2;
    return b(s) * (-2.0 * s / (u * u));
}

double BumpTestFunction::b_second(double s) {
    const double s2 = s * s;
    if (s2 >= 1.0) return 0.0;
    const double u = 1.0 - s2;
    const double w = -2.0 * s / (u * u);
    const double wp = -2.0 / (u * u) - 8.0 * s2 / (u * u * u);
    return b(s) * (w * w + wp);
}

double BumpTestFunction::value(const std::array<double, 3>& x, double t) const {
    return spatial(x) * time_factor(t);
}

double BumpTestFunction::spatial(const std::array<double, 3>& x) const {
    return b(TorusGrid::torus_distance(x, center) / rho);
}

std::array<double, 3> BumpTestFunction::spatial_gradient(const std::array<double, 3>& x) const {
    const double r = TorusGrid::torus_distance(x, center);
    if (r == 0.0 || r >= rho) return {0.0, 0.0, 0.0};
    const double f = b_prime(r / rho) / (rho * r);
    return {f * TorusGrid::min_image(x[0], center[0]), f * TorusGrid::min_image(x[1], center[1]),
            f * TorusGrid::min_image(x[2], center[2])};
}

std::array<double, 6> BumpTestFunction::spatial_hessian(const std::array<double, 3>& x) const {
    const double r = TorusGrid::torus_distance(x, center);
    if (r >= rho) return {0.0, 0.0, 0.0, 0.0, 0.0, 0.0};
    if (r == 0.0) {
        // b(s) = e * exp(-1/(1-s^2)) ~ 1 - s^2 + O(s^4) near 0, so the
        // Hessian at the center is -(2/rho^2) I.
        const double diag = -2.0 / (rho * rho);
        return {diag, diag, diag, 0.0, 0.0, 0.0};
    }
    const std::array<double, 3> dx = {TorusGrid::min_image(x[0], center[0]),
                                      TorusGrid::min_image(x[1], center[1]),
                                      TorusGrid::min_image(x[2], center[2])};
    const double s = r / rho;
    const double bp = b_prime(s);
    const double bpp = b_second(s);
    const double radial = bpp / (rho * rho);
    const double tangential = bp / (rho * r);
    std::array<double, 6> h;
    const std::array<std::array<int, 2>, 6> pairs = {{{0, 0}, {1, 1}, {2, 2}, {0, 1}, {0, 2}, {1, 2}}};
    for (int e = 0; e < 6; ++e) {
        const int i = pairs[e][0], j = pairs[e][1];
        const double ninj = dx[i] * dx[j] / (r * r);
        const double delta = i == j ? 1.0 : 0.0;
        h[e] = radial * ninj + tangential * (delta - ninj);
    }
    return h;
}

double BumpTestFunction::spatial_laplacian(const std::array<double, 3>& x) const {
    const auto h = spatial_hessian(x);
    return h[0] + h[1] + h[2];
}

// ---------------------------------------------------------------------------
// streaming probe
// ---------------------------------------------------------------------------

struct EnergyProbe::BumpState {
    // precomputed spatial tables over the grid
    Buffer B;
    std::array<Buffer, 3> gradB;
    std::array<Buffer, 6> hessB; // xx, yy, zz, xy, xz, yz
    Buffer lapB;

    bool has_prev = false;
    double t_prev = 0.0;
    double g_first = 0.0, g_last = 0.0; // G(t) at window ends
    double diss_prev = 0.0;
    std::array<double, 10> rhs_prev{};
    double diss_integral = 0.0;
    std::array<double, 10> rhs_integral{};
    double max_term_seen = 0.0;
};

EnergyProbe::EnergyProbe(const TorusGrid& grid, const MollifierSpec& mollifier,
                         std::vector<BumpTestFunction> bumps)
    : grid_(grid), mollifier_(grid, mollifier), bumps_(std::move(bumps)) {
    const int n = grid_.n();
    bump_states_.resize(bumps_.size());
    for (std::size_t b = 0; b < bumps_.size(); ++b) {
        BumpState& st = bump_states_[b];
        const std::size_t per = grid_.point_count();
        st.B.resize(per);
        for (auto& g : st.gradB) g.resize(per);
        for (auto& h : st.hessB) h.resize(per);
        st.lapB.resize(per);
        for (int mz = 0; mz < n; ++mz) {
            for (int my = 0; my < n; ++my) {
                for (int mx = 0; mx < n; ++mx) {
                    const std::array<double, 3> x = {grid_.coordinate(mx), grid_.coordinate(my),
                                                     grid_.coordinate(mz)};
                    const std::size_t i = grid_.index(mx, my, mz);
                    st.B[i] = bumps_[b].spatial(x);
                    const auto g = bumps_[b].spatial_gradient(x);
                    for (int a = 0; a < 3; ++a) st.gradB[a][i] = g[a];
                    const auto h = bumps_[b].spatial_hessian(x);
                    for (int e = 0; e < 6; ++e) st.hessB[e][i] = h[e];
                    st.lapB[i] = h[0] + h[1] + h[2];
                }
            }
        }
    }
}

void EnergyProbe::sample(double t, const SpectralField& vhat, const SpectralField& dhat,
                         const SpectralField* zhat, const SpectralField* pihat) {
    const EnergySample es = energy_sample(t, vhat, dhat, zhat, mollifier_);
    ledger_.push(es);

    // Psi(T) ingredients
    if (first_) {
        psi_.u0_h_sq = es.v_h_sq;
        psi_.d0_h1_sq = es.d_h1_sq;
        psi_.sup_state_sq = es.v_h_sq + es.d_h1_sq;
    } else {
        const double half = 0.5 * (t - t_last_);
        psi_.dissipation_integral += half * (es.grad_v_sq + es.lap_d_sq +
                                             ledger_.rows[ledger_.rows.size() - 2].grad_v_sq +
                                             ledger_.rows[ledger_.rows.size() - 2].lap_d_sq);
        psi_.z_l4_qt_4 += half * (es.z_l4_4 + z_l4_last_);
        psi_.gronwall_exponent += half * (1.0 + es.z_l4_4 + z_l4_last_);
        psi_.sup_state_sq = std::max(psi_.sup_state_sq, es.v_h_sq + es.d_h1_sq);
    }

    if (!bumps_.empty()) {
        const std::size_t per = grid_.point_count();
        const double h3 = grid_.cell_volume();

        // shared physical buffers
        const auto v = physical3(vhat);
        const auto d = physical3(dhat);
        const auto grad_v = jacobian_physical(vhat);
        const auto grad_d = jacobian_physical(dhat);
        const SpectralField fM = gl_force(dhat);
        const auto f = physical3(fM);
        const auto grad_f = jacobian_physical(fM);
        SpectralField laphat = laplacian(dhat);
        const auto lap_d = physical3(laphat);
        SpectralField ahat = mollifier_.apply(vhat);
        if (zhat) ahat += *zhat;
        const auto a = physical3(ahat);
        const SpectralField phid = mollifier_.apply(dhat);
        const auto grad_phid = jacobian_physical(phid);
        std::array<Buffer, 3> z, w;
        if (zhat) {
            z = physical3(*zhat);
            SpectralField what = *zhat;
            what += vhat;
            w = physical3(what);
        } else {
            w = v;
            for (auto& c : z) c.assign(per, 0.0);
        }
        Buffer pi(per, 0.0);
        if (pihat) pi = pihat->to_physical(0);

        for (std::size_t bi = 0; bi < bumps_.size(); ++bi) {
            BumpState& st = bump_states_[bi];
            const double g = bumps_[bi].time_factor(t);
            const double gp = bumps_[bi].time_factor_dt(t);

            double sum_e = 0.0, sum_diss = 0.0;
            std::array<double, 10> r{};
            for (std::size_t i = 0; i < per; ++i) {
                const double B = st.B[i];
                const bool inside = B != 0.0 || st.gradB[0][i] != 0.0 || st.gradB[1][i] != 0.0 ||
                                    st.gradB[2][i] != 0.0 || st.lapB[i] != 0.0;
                if (!inside) continue;

                const double v2 = v[0][i] * v[0][i] + v[1][i] * v[1][i] + v[2][i] * v[2][i];
                double gd2 = 0.0;
                for (int ax = 0; ax < 3; ++ax)
                    for (int c = 0; c < 3; ++c) gd2 += grad_d[ax][c][i] * grad_d[ax][c][i];
                const double dmag2 = d[0][i] * d[0][i] + d[1][i] * d[1][i] + d[2][i] * d[2][i];
                const double F = (dmag2 - 1.0) * (dmag2 - 1.0);
                const double density = 0.5 * v2 + 0.5 * gd2 + F;

                sum_e += density * B;
                r[0] += density * B; // scaled by gp below

                double gv2 = 0.0;
                for (int ax = 0; ax < 3; ++ax)
                    for (int c = 0; c < 3; ++c) gv2 += grad_v[ax][c][i] * grad_v[ax][c][i];
                const double lap2 = lap_d[0][i] * lap_d[0][i] + lap_d[1][i] * lap_d[1][i] +
                                    lap_d[2][i] * lap_d[2][i];
                const double f2 = f[0][i] * f[0][i] + f[1][i] * f[1][i] + f[2][i] * f[2][i];
                sum_diss += (gv2 + lap2 + f2) * B;

                // R2: [(z + Phi[v]).grad v].z phi
                double r2 = 0.0, r7 = 0.0, r8 = 0.0, r9 = 0.0, r10 = 0.0;
                for (int c = 0; c < 3; ++c) {
                    const double adv = a[0][i] * grad_v[0][c][i] + a[1][i] * grad_v[1][c][i] +
                                       a[2][i] * grad_v[2][c][i];
                    r2 += adv * z[c][i];
                    const double lmf = lap_d[c][i] - f[c][i];
                    const double zdg = z[0][i] * grad_phid[0][c][i] +
                                       z[1][i] * grad_phid[1][c][i] + z[2][i] * grad_phid[2][c][i];
                    r7 += zdg * lmf;
                    const double wdg = w[0][i] * grad_phid[0][c][i] +
                                       w[1][i] * grad_phid[1][c][i] + w[2][i] * grad_phid[2][c][i];
                    const double q = st.gradB[0][i] * grad_d[0][c][i] +
                                     st.gradB[1][i] * grad_d[1][c][i] +
                                     st.gradB[2][i] * grad_d[2][c][i];
                    r8 += wdg * q;
                    r9 -= f[c][i] * q;
                    for (int ax = 0; ax < 3; ++ax) r10 += grad_f[ax][c][i] * grad_d[ax][c][i];
                }
                r[1] += r2 * B;
                r[6] += r7 * B;
                r[7] += r8;
                r[8] += r9;
                r[9] += -2.0 * r10 * B;

                // R3: (|v|^2/2 + z.v) (z + Phi[v]) . grad phi
                const double zv = z[0][i] * v[0][i] + z[1][i] * v[1][i] + z[2][i] * v[2][i];
                const double a_gb =
                    a[0][i] * st.gradB[0][i] + a[1][i] * st.gradB[1][i] + a[2][i] * st.gradB[2][i];
                r[2] += (0.5 * v2 + zv) * a_gb;
                // R4: pi v . grad phi
                const double v_gb =
                    v[0][i] * st.gradB[0][i] + v[1][i] * st.gradB[1][i] + v[2][i] * st.gradB[2][i];
                r[3] += pi[i] * v_gb;
                // R5: (|v|^2/2 - |grad d|^2/2) lap phi
                r[4] += (0.5 * v2 - 0.5 * gd2) * st.lapB[i];
                // R6: (grad d (.) grad d) : hess phi
                const std::array<std::array<int, 2>, 6> pairs = {
                    {{0, 0}, {1, 1}, {2, 2}, {0, 1}, {0, 2}, {1, 2}}};
                for (int e = 0; e < 6; ++e) {
                    const int ii = pairs[e][0], jj = pairs[e][1];
                    double odot = 0.0;
                    for (int c = 0; c < 3; ++c) odot += grad_d[ii][c][i] * grad_d[jj][c][i];
                    r[5] += (ii == jj ? 1.0 : 2.0) * odot * st.hessB[e][i];
                }
            }

            const double g_now = h3 * sum_e * g;
            const double diss_now = h3 * sum_diss * g;
            std::array<double, 10> rhs_now;
            for (int k = 0; k < 10; ++k) rhs_now[k] = h3 * r[k] * g;
            rhs_now[0] = h3 * r[0] * gp; // the dt-phi group uses g'

            if (!st.has_prev) {
                st.g_first = g_now;
                st.has_prev = true;
            } else {
                const double half = 0.5 * (t - st.t_prev);
                st.diss_integral += half * (diss_now + st.diss_prev);
                for (int k = 0; k < 10; ++k)
                    st.rhs_integral[k] += half * (rhs_now[k] + st.rhs_prev[k]);
            }
            st.g_last = g_now;
            st.t_prev = t;
            st.diss_prev = diss_now;
            st.rhs_prev = rhs_now;
            st.max_term_seen = std::max(st.max_term_seen, std::abs(g_now));
        }
    }

    first_ = false;
    t_last_ = t;
    z_l4_last_ = ledger_.rows.back().z_l4_4;
}

EnergyProbe::Result EnergyProbe::finish() {
    Result out;
    out.ledger = ledger_;

    for (std::size_t bi = 0; bi < bumps_.size(); ++bi) {
        const BumpState& st = bump_states_[bi];
        LocalEnergyResult lr;
        lr.lhs_boundary = st.g_last - st.g_first;
        lr.lhs_dissipation = st.diss_integral;
        lr.rhs_groups = st.rhs_integral;
        double rhs_total = 0.0, max_term = std::max(st.max_term_seen, std::abs(st.diss_integral));
        for (double rk : st.rhs_integral) {
            rhs_total += rk;
            max_term = std::max(max_term, std::abs(rk));
        }
        lr.residual = lr.lhs_boundary + lr.lhs_dissipation - rhs_total;
        lr.scale = max_term;
        lr.normalized_residual = max_term > 0.0 ? std::abs(lr.residual) / max_term : 0.0;
        lr.suitability_margin = max_term > 0.0 ? lr.residual / max_term : 0.0;
        out.local.push_back(lr);
    }

    psi_.lhs_total = psi_.sup_state_sq + psi_.dissipation_integral;
    // the Gronwall trapezoid above accumulated (1 + z^4_now + z^4_prev)/2 per
    // interval, which is exactly int (1/2 + ||z||^4_{L4}) dt
    psi_.psi_ingredients = (psi_.u0_h_sq + psi_.d0_h1_sq + psi_.z_l4_qt_4) *
                           std::exp(psi_.gronwall_exponent);
    psi_.ratio = psi_.psi_ingredients > 0.0 ? psi_.lhs_total / psi_.psi_ingredients : 0.0;
    out.psi = psi_;
    return out;
}

EnergyProbe::Result evaluate_history(const SimHistory& history,
                                     const std::vector<BumpTestFunction>& bumps) {
    if (history.frames.size() < 2)
        throw std::invalid_argument("evaluate_history: need at least 2 snapshots");
    for (const auto& bump : bumps) {
        if (bump.t0 - bump.tau < history.t_begin() || bump.t0 + bump.tau > history.t_end())
            throw std::invalid_argument(
                "evaluate_history: bump support escapes the recorded window");
        if (bump.rho >= history.grid.length() / 2.0)
            throw std::invalid_argument("evaluate_history: bump radius exceeds half the period");
    }
    EnergyProbe probe(history.grid, history.mollifier, bumps);
    for (const auto& frame : history.frames)
        probe.sample(frame.t, frame.v, frame.d, &frame.z, &frame.pi);
    return probe.finish();
}

GlIdentityResult gl_identity_check(const SpectralField& dhat) {
    const TorusGrid& grid = dhat.grid();
    const std::size_t per = grid.point_count();
    const double h3 = grid.cell_volume();

    const auto d = physical3(dhat);
    const auto grad_d = jacobian_physical(dhat);
    const SpectralField laphat = laplacian(dhat);
    const auto lap = physical3(laphat);

    double direct = 0.0;
    double lap2 = 0.0, f2 = 0.0, cross_a = 0.0, cross_b = 0.0, gd2_total = 0.0;
    for (std::size_t i = 0; i < per; ++i) {
        const double dmag2 = d[0][i] * d[0][i] + d[1][i] * d[1][i] + d[2][i] * d[2][i];
        const double wgt = 4.0 * (dmag2 - 1.0);
        double gd2 = 0.0;
        for (int ax = 0; ax < 3; ++ax) {
            double q = 0.0;
            for (int c = 0; c < 3; ++c) {
                gd2 += grad_d[ax][c][i] * grad_d[ax][c][i];
                q += d[c][i] * grad_d[ax][c][i];
            }
            cross_b += q * q; // |(grad d) d|^2
        }
        gd2_total += gd2;
        cross_a += dmag2 * gd2;
        for (int c = 0; c < 3; ++c) {
            const double fc = wgt * d[c][i];
            const double diff = lap[c][i] - fc;
            direct += diff * diff;
            lap2 += lap[c][i] * lap[c][i];
            f2 += fc * fc;
        }
    }

    GlIdentityResult out;
    out.direct = h3 * direct;
    out.expanded = h3 * (lap2 + f2 + 8.0 * cross_a + 16.0 * cross_b - 8.0 * gd2_total);
    const double denom = std::max({std::abs(out.direct), std::abs(out.expanded), DBL_MIN});
    out.relative_gap = std::abs(out.direct - out.expanded) / denom;
    return out;
}

} // namespace sel3d
