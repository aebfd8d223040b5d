#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "sel3d/mollifier.hpp"

namespace sel3d {

/// Raised on malformed or inconsistent run configuration; the message names
/// the offending key and is stable across releases.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Raised on snapshot/report I/O failures; the message names the file.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Flat key-value run configuration (dotted section keys, TOML-compatible
/// subset: `section.key = value`, '#' comments).
struct RunConfig {
    int grid_n = 32;

    double dt = 1e-3;
    double t_end = 0.1;
    double snapshot_every = 1e-2;

    MollifierSpec mollifier{0.1, MollifierKind::BumpKernel};

    struct Noise {
        bool enabled = true;
        double delta = 1.0;
        double decay_s = 2.0;
        double kmax = 0.0; ///< 0 selects the default n/3
        std::uint64_t seed = 1;
        int substeps = 1;  ///< OU micro-steps per solver step
    } noise;

    struct Init {
        std::string velocity_preset = "taylor-green"; ///< or "zero"
        std::string director_preset = "quenched";     ///< or "constant"
        double velocity_amplitude = 1.0;
    } init;

    struct Thresholds {
        double eps0 = 0.05;
        double eps1 = 0.1;
        double sup_bound = 10.0;
        double tol_mp = 1e-3;
    } thresholds;

    std::string output_dir;

    double effective_kmax() const { return noise.kmax > 0.0 ? noise.kmax : grid_n / 3.0; }
    int steps() const;
    int snapshot_stride() const;

    /// Validates invariants; throws ConfigError naming the offending key.
    void validate() const;

    std::string serialize() const;
};

RunConfig parse_config_text(const std::string& text);
RunConfig load_config_file(const std::string& path);

} // namespace sel3d
