#include "sel3d/solver.hpp"

#include <cmath>
#include <stdexcept>

#include "sel3d/fft.hpp"

namespace sel3d {
namespace {

using Buffer = std::vector<double>;

// physical samples of every component
std::array<Buffer, 3> physical3(const SpectralField& f) {
    return {f.to_physical(0), f.to_physical(1), f.to_physical(2)};
}

// physical samples of all nine first derivatives, D[i][j] = d_i f_j
std::array<std::array<Buffer, 3>, 3> jacobian_physical(const SpectralField& f) {
    std::array<std::array<Buffer, 3>, 3> out;
    for (int axis = 0; axis < 3; ++axis) {
        const SpectralField df = derivative(f, axis);
        for (int c = 0; c < 3; ++c) out[axis][c] = df.to_physical(c);
    }
    return out;
}

SpectralField from_physical3(const TorusGrid& grid, const std::array<Buffer, 3>& values) {
    SpectralField f(grid, 3);
    const std::size_t per = grid.point_count();
    for (int c = 0; c < 3; ++c) {
        std::complex<double>* dst = f.data(c);
        const double* src = values[c].data();
        for (std::size_t i = 0; i < per; ++i) dst[i] = {src[i], 0.0};
        grid.fft().forward(dst);
    }
    return f;
}

} // namespace

SpectralField gl_force(const SpectralField& d) {
    const TorusGrid& grid = d.grid();
    const std::size_t per = grid.point_count();
    const auto dp = physical3(d);
    std::array<Buffer, 3> f;
    for (auto& b : f) b.resize(per);
    for (std::size_t i = 0; i < per; ++i) {
        const double mag2 = dp[0][i] * dp[0][i] + dp[1][i] * dp[1][i] + dp[2][i] * dp[2][i];
        const double w = 4.0 * (mag2 - 1.0);
        f[0][i] = w * dp[0][i];
        f[1][i] = w * dp[1][i];
        f[2][i] = w * dp[2][i];
    }
    SpectralField out = from_physical3(grid, f);
    out.apply_dealias_mask();
    return out;
}

double gl_potential_integral(const SpectralField& d) {
    const TorusGrid& grid = d.grid();
    const std::size_t per = grid.point_count();
    const auto dp = physical3(d);
    double sum = 0.0;
    for (std::size_t i = 0; i < per; ++i) {
        const double mag2 = dp[0][i] * dp[0][i] + dp[1][i] * dp[1][i] + dp[2][i] * dp[2][i];
        const double dev = mag2 - 1.0;
        sum += dev * dev;
    }
    return grid.cell_volume() * sum;
}

NonlinearRhs nonlinear_rhs(const SpectralField& vhat, const SpectralField& dhat,
                           const SpectralField& zhat, const Mollifier& mollifier) {
    const TorusGrid& grid = vhat.grid();
    const std::size_t per = grid.point_count();

    // advecting field a = z + Phi[v]; advected field w = z + v
    SpectralField what = zhat;
    what += vhat;
    SpectralField ahat = mollifier.apply(vhat);
    ahat += zhat;

    const auto a = physical3(ahat);
    const auto w = physical3(what);
    const auto grad_w = jacobian_physical(what);

    // mollified director gradient and the elastic force factor
    SpectralField phid = mollifier.apply(dhat);
    const auto grad_phid = jacobian_physical(phid);
    const SpectralField fM = gl_force(dhat);
    SpectralField lap_minus_f = laplacian(dhat);
    lap_minus_f -= fM;
    const auto lmf = physical3(lap_minus_f);

    std::array<Buffer, 3> nv, nd;
    for (auto& b : nv) b.resize(per);
    for (auto& b : nd) b.resize(per);
    for (std::size_t i = 0; i < per; ++i) {
        for (int c = 0; c < 3; ++c) {
            // transport of the velocity sum: (a . grad) w_c
            const double adv =
                a[0][i] * grad_w[0][c][i] + a[1][i] * grad_w[1][c][i] + a[2][i] * grad_w[2][c][i];
            // Ericksen stress in reduced form: [grad Phi[d] . (lap d - f)]_c
            const double stress = grad_phid[c][0][i] * lmf[0][i] +
                                  grad_phid[c][1][i] * lmf[1][i] + grad_phid[c][2][i] * lmf[2][i];
            nv[c][i] = -adv - stress;
            // director transport: (w . grad) Phi[d]_c
            nd[c][i] = -(w[0][i] * grad_phid[0][c][i] + w[1][i] * grad_phid[1][c][i] +
                         w[2][i] * grad_phid[2][c][i]);
        }
    }

    NonlinearRhs rhs{from_physical3(grid, nv), from_physical3(grid, nd)};
    rhs.nv.apply_dealias_mask();
    rhs.nv = leray_project(rhs.nv);
    rhs.nd.apply_dealias_mask();
    rhs.nd -= fM;
    return rhs;
}

SpectralField pressure_solve(const SpectralField& vhat, const SpectralField& dhat,
                             const SpectralField& zhat, const Mollifier& mollifier) {
    const TorusGrid& grid = vhat.grid();
    const std::size_t per = grid.point_count();

    SpectralField what = zhat;
    what += vhat;
    SpectralField ahat = mollifier.apply(vhat);
    ahat += zhat;
    const auto a = physical3(ahat);
    const auto w = physical3(what);

    SpectralField phid = mollifier.apply(dhat);
    const auto grad_phid = jacobian_physical(phid);
    const SpectralField fM = gl_force(dhat);
    SpectralField lap_minus_f = laplacian(dhat);
    lap_minus_f -= fM;
    const auto lmf = physical3(lap_minus_f);

    // T_ij = a_i w_j, G_i = [grad Phi[d] . (lap d - f)]_i
    std::array<std::array<Buffer, 3>, 3> tensor;
    std::array<Buffer, 3> gvec;
    for (auto& row : tensor)
        for (auto& b : row) b.resize(per);
    for (auto& b : gvec) b.resize(per);
    for (std::size_t i = 0; i < per; ++i) {
        for (int r = 0; r < 3; ++r) {
            for (int c = 0; c < 3; ++c) tensor[r][c][i] = a[r][i] * w[c][i];
            gvec[r][i] = grad_phid[r][0][i] * lmf[0][i] + grad_phid[r][1][i] * lmf[1][i] +
                         grad_phid[r][2][i] * lmf[2][i];
        }
    }

    std::array<std::array<SpectralField, 3>, 3> that = {
        std::array<SpectralField, 3>{SpectralField(grid, 1), SpectralField(grid, 1), SpectralField(grid, 1)},
        std::array<SpectralField, 3>{SpectralField(grid, 1), SpectralField(grid, 1), SpectralField(grid, 1)},
        std::array<SpectralField, 3>{SpectralField(grid, 1), SpectralField(grid, 1), SpectralField(grid, 1)}};
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) {
            std::complex<double>* dst = that[r][c].data(0);
            for (std::size_t i = 0; i < per; ++i) dst[i] = {tensor[r][c][i], 0.0};
            grid.fft().forward(dst);
        }
    }
    SpectralField ghat(grid, 3);
    for (int c = 0; c < 3; ++c) {
        std::complex<double>* dst = ghat.data(c);
        for (std::size_t i = 0; i < per; ++i) dst[i] = {gvec[c][i], 0.0};
        grid.fft().forward(dst);
    }

    // pi(k) = [ -k_i k_j T_ij(k) + i k . G(k) ] / |k|^2, k != 0
    SpectralField pi(grid, 1);
    std::complex<double>* pdst = pi.data(0);
    for (std::size_t i = 0; i < per; ++i) {
        const double k2 = grid.k_squared(i);
        if (k2 == 0.0 || !grid.dealias_keep(i)) continue;
        const auto k = grid.wavevector(i);
        std::complex<double> rhs{0.0, 0.0};
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c)
                rhs -= static_cast<double>(k[r]) * static_cast<double>(k[c]) * that[r][c].at(0, i);
        const std::complex<double> kg =
            static_cast<double>(k[0]) * ghat.at(0, i) + static_cast<double>(k[1]) * ghat.at(1, i) +
            static_cast<double>(k[2]) * ghat.at(2, i);
        rhs += std::complex<double>(0.0, 1.0) * kg;
        pdst[i] = rhs / k2;
    }
    return pi;
}

SimState step(const SimState& state, double dt, const Mollifier& mollifier,
              const StepOptions& options) {
    if (dt <= 0.0) throw std::invalid_argument("step: dt must be > 0");
    const TorusGrid& grid = state.vhat.grid();
    const std::size_t per = grid.point_count();

    SimState next = state;
    if (options.advance_noise && !next.z.model().empty()) {
        const int m = std::max(1, options.noise_substeps);
        for (int s = 0; s < m; ++s) next.z.advance(dt / m);
    }
    // the nonlinear stages see z frozen at the step start
    const SpectralField z_frozen = state.z.field();

    std::vector<double> decay(per);
    for (std::size_t i = 0; i < per; ++i) decay[i] = std::exp(-grid.k_squared(i) * dt);

    auto apply_decay = [&](SpectralField& f) {
        for (int c = 0; c < f.components(); ++c) {
            std::complex<double>* a = f.data(c);
            for (std::size_t i = 0; i < per; ++i) a[i] *= decay[i];
        }
    };

    if (!options.nonlinearity) {
        apply_decay(next.vhat);
        apply_decay(next.dhat);
    } else {
        const NonlinearRhs n1 = nonlinear_rhs(state.vhat, state.dhat, z_frozen, mollifier);

        // stage 1: w* = E (w + dt N1)
        SpectralField vstar = n1.nv;
        vstar *= dt;
        vstar += state.vhat;
        apply_decay(vstar);
        SpectralField dstar = n1.nd;
        dstar *= dt;
        dstar += state.dhat;
        apply_decay(dstar);

        const NonlinearRhs n2 = nonlinear_rhs(vstar, dstar, z_frozen, mollifier);

        // stage 2: w+ = E w + dt/2 (E N1 + N2)
        auto corrector = [&](const SpectralField& w, const SpectralField& na,
                             const SpectralField& nb) {
            SpectralField out = w;
            apply_decay(out);
            for (int c = 0; c < 3; ++c) {
                std::complex<double>* o = out.data(c);
                const std::complex<double>* pa = na.data(c);
                const std::complex<double>* pb = nb.data(c);
                for (std::size_t i = 0; i < per; ++i)
                    o[i] += 0.5 * dt * (decay[i] * pa[i] + pb[i]);
            }
            return out;
        };
        next.vhat = corrector(state.vhat, n1.nv, n2.nv);
        next.dhat = corrector(state.dhat, n1.nd, n2.nd);
        next.vhat = leray_project(next.vhat);
    }
    next.t = state.t + dt;

    const double v0 = state.vhat.l2_norm(), v1 = next.vhat.l2_norm();
    const double d0 = state.dhat.l2_norm(), d1 = next.dhat.l2_norm();
    constexpr double growth_cap = 1e3;
    if ((v0 > 0.0 && v1 > growth_cap * v0) || (d0 > 0.0 && d1 > growth_cap * d0) ||
        !std::isfinite(v1) || !std::isfinite(d1)) {
        throw InstabilityError("step: field norm grew by more than 1e3x in one step at t = " +
                               std::to_string(next.t));
    }

    if (options.compute_pressure) {
        const SpectralField z_now = next.z.field();
        next.pihat = pressure_solve(next.vhat, next.dhat, z_now, mollifier);
    }
    return next;
}

bool maximum_principle_check(const SimState& state, double tol) {
    return max_pointwise_norm(state.dhat) <= 1.0 + tol;
}

SpectralField taylor_green_velocity(const TorusGrid& grid, double amplitude) {
    const int n = grid.n();
    std::vector<double> values(grid.point_count() * 3);
    const std::size_t per = grid.point_count();
    for (int mz = 0; mz < n; ++mz) {
        const double z = grid.coordinate(mz);
        for (int my = 0; my < n; ++my) {
            const double y = grid.coordinate(my);
            for (int mx = 0; mx < n; ++mx) {
                const double x = grid.coordinate(mx);
                const std::size_t i = grid.index(mx, my, mz);
                values[i] = amplitude * std::sin(x) * std::cos(y) * std::cos(z);
                values[per + i] = -amplitude * std::cos(x) * std::sin(y) * std::cos(z);
                values[2 * per + i] = 0.0;
            }
        }
    }
    SpectralField f = SpectralField::from_physical(grid, 3, values);
    f.apply_dealias_mask();
    return leray_project(f);
}

SpectralField quenched_director(const TorusGrid& grid) {
    const int n = grid.n();
    std::vector<double> values(grid.point_count() * 3);
    const std::size_t per = grid.point_count();
    for (int mz = 0; mz < n; ++mz) {
        const double z = grid.coordinate(mz);
        for (int my = 0; my < n; ++my) {
            const double y = grid.coordinate(my);
            for (int mx = 0; mx < n; ++mx) {
                const double x = grid.coordinate(mx);
                const std::size_t i = grid.index(mx, my, mz);
                const double phase = std::sin(x) * std::sin(y) * std::sin(z);
                values[i] = std::cos(phase);
                values[per + i] = std::sin(phase);
                values[2 * per + i] = 0.0;
            }
        }
    }
    SpectralField f = SpectralField::from_physical(grid, 3, values);
    f.apply_dealias_mask();
    return f;
}

SpectralField constant_director(const TorusGrid& grid, const std::array<double, 3>& value) {
    SpectralField f(grid, 3);
    for (int c = 0; c < 3; ++c) f.at(c, 0) = {value[c], 0.0};
    return f;
}

} // namespace sel3d
