// Command-line driver for the stochastic Ericksen-Leslie toolbox:
//   simulate    run the split-up scheme and record snapshots + energy ledger
//   diagnose    energy-identity residuals, suitability margins, Psi report
//   scan        partial-regularity quantities and the Vitali covering bound
//   noise-stats Q-Wiener / Ornstein-Uhlenbeck statistics
//
// Exit codes: 0 ok, 2 config error, 3 instability guard tripped, 4 I/O error.

#include <CLI11.hpp>

#include <cstdio>
#include <exception>

#include "sel3d/run.hpp"
#include "sel3d/snapshot.hpp"

namespace {

int run_simulate(const std::string& config_path, const std::string& out_dir) {
    sel3d::RunConfig config = sel3d::load_config_file(config_path);
    if (!out_dir.empty()) config.output_dir = out_dir;
    if (config.output_dir.empty())
        throw sel3d::ConfigError("config error: output.dir must be set (or pass --out)");
    const sel3d::SimulateResult result = sel3d::simulate(config);
    std::printf("steps=%d snapshots=%d final_time=%.6g max_div_rel=%.3e max|d|=%.12g\n",
                result.steps_taken, result.snapshots_written, result.final_time,
                result.max_divergence_rel, result.max_director_norm);
    if (result.instability) {
        std::fprintf(stderr, "instability: %s\n", result.instability_message.c_str());
        return 3;
    }
    return 0;
}

int run_diagnose(const std::string& in_dir, const std::string& bump_path,
                 const std::string& out_csv) {
    std::vector<sel3d::BumpTestFunction> bumps;
    if (!bump_path.empty()) bumps = sel3d::load_bump_file(bump_path);
    const sel3d::DiagnoseReport report = sel3d::diagnose(in_dir, bumps, out_csv);
    std::printf("global_residual=%.3e", report.result.ledger.integrated_relative);
    for (const auto& local : report.result.local)
        std::printf(" local_residual=%.3e", local.normalized_residual);
    std::printf(" psi_ratio=%.3e\n", report.result.psi.ratio);
    return 0;
}

int run_scan(const std::string& in_dir, const sel3d::RegularityThresholds& thresholds,
             const std::string& out_dir, int stride) {
    sel3d::ScanOptions options;
    options.center_stride = stride;
    const sel3d::ScanReport report = sel3d::scan(in_dir, thresholds, out_dir, options);
    std::size_t certified = 0;
    for (const auto& row : report.rows)
        if (row.cls == sel3d::Classification::RegularCertified) ++certified;
    std::printf("cylinders=%zu regular_certified=%zu cover_cylinders=%zu sum5r=%.6g bound=%.6g pass=%s\n",
                report.rows.size(), certified, report.cover.selected.size(), report.cover.sum_5r,
                report.cover.bound, report.cover.inequality_holds ? "yes" : "no");
    return 0;
}

int run_noise_stats(const std::string& config_path, const std::string& out_csv) {
    const sel3d::RunConfig config = sel3d::load_config_file(config_path);
    const sel3d::NoiseStatsReport report = sel3d::noise_stats(config, out_csv);
    std::printf("trace=%.6g modes=%zu holder_slope=%.4f sup_linf=%.6g\n", report.trace.trace,
                report.trace.mode_count, report.holder.slope, report.sup_stats.mean_sup_linf);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"pseudospectral simulator for the 3D stochastic Ericksen-Leslie system"};
    app.require_subcommand(1);

    std::string config_path, out_path, in_dir, bump_path;
    int stride = 0;
    sel3d::RegularityThresholds thresholds;

    auto* sim = app.add_subcommand("simulate", "run the solver");
    sim->add_option("--config", config_path, "run configuration file")->required();
    sim->add_option("--out", out_path, "output directory (overrides output.dir)");

    auto* diag = app.add_subcommand("diagnose", "energy-identity residual report");
    diag->add_option("--in", in_dir, "snapshot directory")->required();
    diag->add_option("--bumps", bump_path, "bump list file: x0 y0 z0 t0 rho tau per line");
    diag->add_option("--out", out_path, "report CSV path")->required();

    auto* scn = app.add_subcommand("scan", "partial-regularity scan");
    scn->add_option("--in", in_dir, "snapshot directory")->required();
    scn->add_option("--eps0", thresholds.eps0, "epsilon-regularity threshold");
    scn->add_option("--eps1", thresholds.eps1, "density threshold for the covering");
    scn->add_option("--M", thresholds.sup_bound, "sup bound on |z| and |d|");
    scn->add_option("--stride", stride, "grid stride between candidate centers");
    scn->add_option("--out", out_path, "output directory for the CSV reports")->required();

    auto* noise = app.add_subcommand("noise-stats", "noise and OU statistics");
    noise->add_option("--config", config_path, "run configuration file")->required();
    noise->add_option("--out", out_path, "report CSV path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) return run_simulate(config_path, out_path);
        if (diag->parsed()) return run_diagnose(in_dir, bump_path, out_path);
        if (scn->parsed()) return run_scan(in_dir, thresholds, out_path, stride);
        if (noise->parsed()) return run_noise_stats(config_path, out_path);
    } catch (const sel3d::ConfigError& err) {
        std::fprintf(stderr, "%s\n", err.what());
        return 2;
    } catch (const sel3d::IoError& err) {
        std::fprintf(stderr, "%s\n", err.what());
        return 4;
    } catch (const std::exception& err) {
        std::fprintf(stderr, "error: %s\n", err.what());
        return 1;
    }
    return 0;
}
