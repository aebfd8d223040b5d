#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "sel3d/config.hpp"
#include "sel3d/energetics.hpp"
#include "sel3d/regularity.hpp"
#include "sel3d/solver.hpp"

namespace sel3d {

struct SimulateResult {
    std::string output_dir;
    int steps_taken = 0;
    int snapshots_written = 0;
    double final_time = 0.0;
    bool instability = false;
    std::string instability_message;
    /// max over steps of max_k |k.v(k)| / ||v|| (relative divergence defect)
    double max_divergence_rel = 0.0;
    /// max over steps of max_x |d|
    double max_director_norm = 0.0;
    int max_principle_violations = 0;
};

struct SimulateHooks {
    bool write_to_disk = true;
    /// Called on every accepted step (and once for the initial state).
    std::function<void(const SimState&)> on_state;
    /// Called at snapshot cadence (and for the initial state).
    std::function<void(const SimState&)> on_snapshot;
};

/// Run the split-up scheme per the configuration: OU-advanced z plus the
/// integrating-factor Heun step for (v, d), pressure recovery, snapshot and
/// energy-ledger output. Deterministic for a fixed seed at thread count 1.
SimulateResult simulate(const RunConfig& config, const SimulateHooks& hooks = {});

struct DiagnoseReport {
    EnergyProbe::Result result;
    std::string csv_path;
};

/// Residual/suitability/Psi report over a recorded run directory.
DiagnoseReport diagnose(const std::string& input_dir, const std::vector<BumpTestFunction>& bumps,
                        const std::string& out_csv);

/// Parse a bump list file: one bump per line, `x0 y0 z0 t0 rho tau`.
std::vector<BumpTestFunction> load_bump_file(const std::string& path);

struct ScanOptions {
    int center_stride = 0;       ///< grid stride between candidate centers; 0 = n/8
    std::vector<double> radii;   ///< empty = auto (largest snappable and half)
    std::vector<double> times;   ///< empty = last snapshot time
};

struct ScanReport {
    std::vector<RegularityRow> rows;
    CoverResult cover;
    std::string regularity_csv;
    std::string cover_csv;
};

ScanReport scan(const std::string& input_dir, const RegularityThresholds& thresholds,
                const std::string& out_dir, const ScanOptions& options = {});

struct NoiseStatsReport {
    NoiseTraceReport trace;
    HolderEstimate holder;
    SupNormStats sup_stats;
    /// per-mode (lambda, gamma, sampled stationary variance, exact a^2/(2 lambda))
    std::vector<std::array<double, 4>> variance_rows;
    std::string csv_path;
};

NoiseStatsReport noise_stats(const RunConfig& config, const std::string& out_csv);

/// Build the initial condition fields named by the config presets.
SpectralField initial_velocity(const TorusGrid& grid, const RunConfig::Init& init);
SpectralField initial_director(const TorusGrid& grid, const RunConfig::Init& init);

} // namespace sel3d
