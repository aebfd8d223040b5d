#include "sel3d/run.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "sel3d/snapshot.hpp"

namespace sel3d {
namespace fs = std::filesystem;

SpectralField initial_velocity(const TorusGrid& grid, const RunConfig::Init& init) {
    if (init.velocity_preset == "taylor-green")
        return taylor_green_velocity(grid, init.velocity_amplitude);
    return SpectralField::zero(grid, 3);
}

SpectralField initial_director(const TorusGrid& grid, const RunConfig::Init& init) {
    if (init.director_preset == "quenched") return quenched_director(grid);
    return constant_director(grid, {1.0, 0.0, 0.0});
}

namespace {

PhysicalSnapshot to_physical_snapshot(const SimState& state) {
    PhysicalSnapshot snap;
    snap.t = state.t;
    snap.n = state.vhat.grid().n();
    snap.fields["v"] = {3, state.vhat.to_physical_all()};
    snap.fields["d"] = {3, state.dhat.to_physical_all()};
    snap.fields["z"] = {3, state.z.field().to_physical_all()};
    snap.fields["pi"] = {1, state.pihat.to_physical_all()};
    return snap;
}

} // namespace

SimulateResult simulate(const RunConfig& config, const SimulateHooks& hooks) {
    config.validate();
    SimulateResult result;
    result.output_dir = config.output_dir;

    const TorusGrid grid(config.grid_n);
    const Mollifier mollifier(grid, config.mollifier);

    // a zero-cutoff model degenerates the solver to the deterministic system
    const double kmax = config.noise.enabled ? config.effective_kmax() : 0.0;
    const NoiseModel model(grid, config.noise.delta, config.noise.decay_s,
                           std::max(kmax, 0.0), config.noise.seed);

    SpectralField v0 = initial_velocity(grid, config.init);
    SpectralField d0 = initial_director(grid, config.init);
    v0.apply_dealias_mask();
    d0.apply_dealias_mask();
    v0 = leray_project(v0);
    SimState state(std::move(v0), std::move(d0), OUState(model));
    state.pihat = pressure_solve(state.vhat, state.dhat, state.z.field(), mollifier);

    const bool to_disk = hooks.write_to_disk && !config.output_dir.empty();
    EnergyLedger ledger;
    if (to_disk) {
        fs::create_directories(config.output_dir);
        std::ofstream cfg_out(fs::path(config.output_dir) / "run_config.cfg",
                              std::ios::binary | std::ios::trunc);
        if (!cfg_out) throw IoError("io error: cannot write run_config.cfg in " + config.output_dir);
        cfg_out << config.serialize();
    }

    auto track = [&](const SimState& s) {
        // coefficient-frame norm: max_k |k.v(k)| against sqrt(sum |v(k)|^2)
        const double vnorm = s.vhat.l2_norm() / std::sqrt(grid.volume());
        if (vnorm > 0.0)
            result.max_divergence_rel =
                std::max(result.max_divergence_rel, divergence_defect(s.vhat) / vnorm);
        const double dmax = max_pointwise_norm(s.dhat);
        result.max_director_norm = std::max(result.max_director_norm, dmax);
        if (dmax > 1.0 + config.thresholds.tol_mp) {
            result.max_principle_violations += 1;
            std::fprintf(stderr, "max-principle violation at t=%.6g: max|d| = %.12g\n", s.t, dmax);
        }
    };

    auto snapshot_out = [&](const SimState& s, int index) {
        const SpectralField zfield = s.z.field();
        const EnergySample sample =
            energy_sample(s.t, s.vhat, s.dhat, model.empty() ? nullptr : &zfield, mollifier);
        ledger.push(sample);
        if (to_disk) {
            const fs::path path = fs::path(config.output_dir) / snapshot::file_name(index);
            snapshot::write(path.string(), to_physical_snapshot(s));
        }
        result.snapshots_written += 1;
        if (hooks.on_snapshot) hooks.on_snapshot(s);
    };

    track(state);
    if (hooks.on_state) hooks.on_state(state);
    snapshot_out(state, 0);

    const int nsteps = config.steps();
    const int stride = config.snapshot_stride();
    StepOptions options;
    options.noise_substeps = config.noise.substeps;
    int snapshot_index = 1;
    for (int s = 1; s <= nsteps; ++s) {
        try {
            state = step(state, config.dt, mollifier, options);
        } catch (const InstabilityError& err) {
            result.instability = true;
            result.instability_message = err.what();
            break;
        }
        track(state);
        if (hooks.on_state) hooks.on_state(state);
        if (s % stride == 0 || s == nsteps) snapshot_out(state, snapshot_index++);
        result.steps_taken = s;
    }
    result.final_time = state.t;
    if (to_disk) ledger.write_csv((fs::path(config.output_dir) / "energy.csv").string());
    return result;
}

std::vector<BumpTestFunction> load_bump_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("io error: cannot open bump file: " + path);
    std::vector<BumpTestFunction> bumps;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream ss(line);
        BumpTestFunction b;
        if (ss >> b.center[0] >> b.center[1] >> b.center[2] >> b.t0 >> b.rho >> b.tau)
            bumps.push_back(b);
    }
    return bumps;
}

DiagnoseReport diagnose(const std::string& input_dir, const std::vector<BumpTestFunction>& bumps,
                        const std::string& out_csv) {
    const SimHistory history = snapshot::load_history(input_dir);
    if (history.frames.size() < 2)
        throw IoError("io error: need at least 2 snapshots in: " + input_dir);

    DiagnoseReport report;
    report.result = evaluate_history(history, bumps);
    report.csv_path = out_csv;

    std::FILE* f = std::fopen(out_csv.c_str(), "w");
    if (!f) throw IoError("io error: cannot write report: " + out_csv);
    std::fprintf(f, "# local identity convention: Delta-phi group (|v|^2-|grad d|^2)/2, "
                    "plain odot Hessian group, mollified director transport, "
                    "final term -2 int grad f : grad d phi\n");
    std::fprintf(f, "record,name,value\n");
    const EnergyLedger& led = report.result.ledger;
    std::fprintf(f, "global,integrated_relative_residual,%.17g\n", led.integrated_relative);
    std::fprintf(f, "global,max_interval_relative_residual,%.17g\n", led.max_interval_relative);
    std::fprintf(f, "global,scale,%.17g\n", led.scale);
    std::fprintf(f, "suitability,global_margin_relative,%.17g\n", led.suitability_margin_relative);
    for (std::size_t i = 0; i < report.result.local.size(); ++i) {
        const LocalEnergyResult& lr = report.result.local[i];
        std::fprintf(f, "local_%zu,normalized_residual,%.17g\n", i, lr.normalized_residual);
        std::fprintf(f, "local_%zu,signed_residual,%.17g\n", i, lr.residual);
        std::fprintf(f, "local_%zu,scale,%.17g\n", i, lr.scale);
        std::fprintf(f, "suitability,local_%zu_margin,%.17g\n", i, lr.suitability_margin);
        for (int k = 0; k < 10; ++k)
            std::fprintf(f, "local_%zu,rhs_group_%d,%.17g\n", i, k + 1, lr.rhs_groups[k]);
    }
    const auto& psi = report.result.psi;
    std::fprintf(f, "psi,sup_state_sq,%.17g\n", psi.sup_state_sq);
    std::fprintf(f, "psi,dissipation_integral,%.17g\n", psi.dissipation_integral);
    std::fprintf(f, "psi,lhs_total,%.17g\n", psi.lhs_total);
    std::fprintf(f, "psi,u0_h_sq,%.17g\n", psi.u0_h_sq);
    std::fprintf(f, "psi,d0_h1_sq,%.17g\n", psi.d0_h1_sq);
    std::fprintf(f, "psi,z_l4_qt_4,%.17g\n", psi.z_l4_qt_4);
    std::fprintf(f, "psi,gronwall_exponent,%.17g\n", psi.gronwall_exponent);
    std::fprintf(f, "psi,ratio,%.17g\n", psi.ratio);
    std::fclose(f);
    return report;
}

ScanReport scan(const std::string& input_dir, const RegularityThresholds& thresholds,
                const std::string& out_dir, const ScanOptions& options) {
    const SimHistory history = snapshot::load_history(input_dir);
    const RegularityScanner scanner(history);
    const TorusGrid& grid = history.grid;

    std::vector<double> radii = options.radii;
    if (radii.empty()) {
        const double span = history.t_end() - history.t_begin();
        double r_max = std::sqrt(0.9 * span);
        r_max = std::min(r_max, 0.45 * grid.length());
        radii = {r_max, r_max / 1.4142135623730951};
    }
    std::vector<double> times = options.times;
    if (times.empty()) times = {history.t_end()};
    const int stride = options.center_stride > 0 ? options.center_stride : std::max(1, grid.n() / 8);

    ScanReport report;
    std::vector<std::array<double, 4>> candidates;
    for (double t0 : times) {
        for (int mz = 0; mz < grid.n(); mz += stride) {
            for (int my = 0; my < grid.n(); my += stride) {
                for (int mx = 0; mx < grid.n(); mx += stride) {
                    const std::array<double, 3> x0 = {grid.coordinate(mx), grid.coordinate(my),
                                                      grid.coordinate(mz)};
                    for (double r : radii) {
                        ParabolicCylinder cyl{x0, t0, r};
                        ParabolicCylinder snapped;
                        try {
                            snapped = scanner.snap(cyl);
                        } catch (const std::invalid_argument&) {
                            continue;
                        }
                        RegularityRow row;
                        row.cyl = snapped;
                        row.q = scanner.quantities(snapped);
                        row.cls = scanner.classify(snapped, thresholds);
                        report.rows.push_back(row);
                    }
                    const double density = scanner.limsup_density(x0, t0, radii);
                    if (density >= thresholds.eps1 * thresholds.eps1)
                        candidates.push_back({x0[0], x0[1], x0[2], t0});
                }
            }
        }
    }
    report.cover = scanner.hausdorff_cover(candidates, radii, thresholds.eps1);

    fs::create_directories(out_dir);
    report.regularity_csv = (fs::path(out_dir) / "regularity.csv").string();
    report.cover_csv = (fs::path(out_dir) / "cover.csv").string();
    write_regularity_csv(report.regularity_csv, report.rows, thresholds);
    write_cover_csv(report.cover_csv, report.cover, thresholds.eps1);
    return report;
}

NoiseStatsReport noise_stats(const RunConfig& config, const std::string& out_csv) {
    config.validate();
    NoiseStatsReport report;
    const TorusGrid grid(config.grid_n);
    const double kmax = config.noise.enabled ? config.effective_kmax() : 0.0;
    const NoiseModel model(grid, config.noise.delta, config.noise.decay_s, kmax,
                           config.noise.seed);
    report.trace = trace_and_norm_report(model);

    if (!model.empty()) {
        std::vector<double> lags;
        for (int e = 8; e >= 3; --e) lags.push_back(std::pow(2.0, -e));
        report.holder = estimate_holder_exponent(model, 1.0, lags, 200);
        report.sup_stats = sup_norm_stats(model, 100, 0.25, 1.0 / 64.0, config.noise.delta);

        // stationary-variance table: one long OU trajectory per shell mode
        OUState ou(model);
        const double dt = 0.1;
        const int burn = 200, samples = 20000;
        std::vector<double> sum_sq(model.modes().size() * 2, 0.0);
        for (int s = 0; s < burn + samples; ++s) {
            ou.advance(dt);
            if (s < burn) continue;
            const auto& coords = ou.coordinates();
            for (std::size_t i = 0; i < coords.size(); ++i) sum_sq[i] += std::norm(coords[i]);
        }
        const std::size_t show = std::min<std::size_t>(model.modes().size(), 8);
        for (std::size_t i = 0; i < show; ++i) {
            const NoiseMode& m = model.modes()[i];
            // |c|^2 in the amplitude frame carries 2 real L2 coordinates / (2 (2 pi)^3)
            const double sampled =
                sum_sq[2 * i] / samples * grid.volume() * 2.0;
            const double exact = model.l2_variance_rate(m) / (2.0 * m.lambda) * 2.0;
            report.variance_rows.push_back({m.lambda, m.gamma, sampled, exact});
        }
    }

    report.csv_path = out_csv;
    std::FILE* f = std::fopen(out_csv.c_str(), "w");
    if (!f) throw IoError("io error: cannot write report: " + out_csv);
    std::fprintf(f, "record,name,value\n");
    std::fprintf(f, "trace,total,%.17g\n", report.trace.trace);
    std::fprintf(f, "trace,mode_count,%zu\n", report.trace.mode_count);
    for (const auto& shell : report.trace.shells)
        std::fprintf(f, "shell,lambda=%.17g gamma=%.17g l2_amplitude=%.17g,%zu\n", shell.lambda,
                     shell.gamma, shell.l2_amplitude, shell.count);
    if (!model.empty()) {
        std::fprintf(f, "holder,slope,%.17g\n", report.holder.slope);
        std::fprintf(f, "holder,analytic_rate,%.17g\n", report.holder.analytic_rate);
        std::fprintf(f, "supnorm,mean_sup_fractional_sq,%.17g\n",
                     report.sup_stats.mean_sup_fractional_sq);
        std::fprintf(f, "supnorm,se_sup_fractional_sq,%.17g\n", report.sup_stats.se_sup_fractional_sq);
        std::fprintf(f, "supnorm,mean_sup_linf,%.17g\n", report.sup_stats.mean_sup_linf);
        std::fprintf(f, "supnorm,se_sup_linf,%.17g\n", report.sup_stats.se_sup_linf);
        for (const auto& row : report.variance_rows)
            std::fprintf(f, "variance,lambda=%.17g gamma=%.17g sampled=%.17g,%.17g\n", row[0],
                         row[1], row[2], row[3]);
    }
    std::fclose(f);
    return report;
}

} // namespace sel3d
