#include "sel3d/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace sel3d {
namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::string unquote(const std::string& s) {
    if (s.size() >= 2 && ((s.front() == '"' && s.back() == '"') ||
                          (s.front() == '\'' && s.back() == '\'')))
        return s.substr(1, s.size() - 2);
    return s;
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (...) {
        throw ConfigError("config error: invalid value for " + key);
    }
}

long long parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const long long v = std::stoll(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (...) {
        throw ConfigError("config error: invalid value for " + key);
    }
}

std::uint64_t parse_uint(const std::string& key, const std::string& value) {
    try {
        std::size_t pos = 0;
        const unsigned long long v = std::stoull(value, &pos);
        if (pos != value.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (...) {
        throw ConfigError("config error: invalid value for " + key);
    }
}

bool parse_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw ConfigError("config error: invalid value for " + key);
}

} // namespace

int RunConfig::steps() const {
    return static_cast<int>(std::llround(t_end / dt));
}

int RunConfig::snapshot_stride() const {
    return static_cast<int>(std::llround(snapshot_every / dt));
}

void RunConfig::validate() const {
    if (grid_n < 8 || grid_n % 2 != 0)
        throw ConfigError("config error: grid.n must be even and >= 8");
    if (dt <= 0.0) throw ConfigError("config error: time.dt must be > 0");
    if (t_end < 0.0 || (t_end > 0.0 && t_end < dt - 1e-12 * dt))
        throw ConfigError("config error: time.t_end must be 0 or >= time.dt");
    const double ratio = snapshot_every / dt;
    if (snapshot_every <= 0.0 || std::abs(ratio - std::round(ratio)) > 1e-9)
        throw ConfigError("config error: time.snapshot_every must be a positive multiple of time.dt");
    if (mollifier.sigma <= 0.0) throw ConfigError("config error: mollifier.sigma must be > 0");
    if (noise.delta <= 0.0) throw ConfigError("config error: noise.delta must be > 0");
    if (noise.decay_s < 0.0) throw ConfigError("config error: noise.decay_s must be >= 0");
    if (noise.kmax < 0.0 || noise.kmax >= grid_n / 2.0)
        throw ConfigError("config error: noise.kmax must be in [0, grid.n/2)");
    if (noise.substeps < 1) throw ConfigError("config error: noise.substeps must be >= 1");
    if (init.velocity_preset != "taylor-green" && init.velocity_preset != "zero")
        throw ConfigError("config error: init.velocity_preset must be taylor-green or zero");
    if (init.director_preset != "quenched" && init.director_preset != "constant")
        throw ConfigError("config error: init.director_preset must be quenched or constant");
    if (thresholds.eps0 <= 0.0) throw ConfigError("config error: thresholds.eps0 must be > 0");
    if (thresholds.eps1 <= 0.0) throw ConfigError("config error: thresholds.eps1 must be > 0");
    if (thresholds.sup_bound <= 0.0) throw ConfigError("config error: thresholds.M must be > 0");
    if (thresholds.tol_mp < 0.0) throw ConfigError("config error: thresholds.tol_mp must be >= 0");
}

RunConfig parse_config_text(const std::string& text) {
    RunConfig cfg;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config error: expected key = value, got: " + line);
        const std::string key = trim(line.substr(0, eq));
        const std::string value = unquote(trim(line.substr(eq + 1)));

        if (key == "grid.n") cfg.grid_n = static_cast<int>(parse_int(key, value));
        else if (key == "time.dt") cfg.dt = parse_double(key, value);
        else if (key == "time.t_end") cfg.t_end = parse_double(key, value);
        else if (key == "time.snapshot_every") cfg.snapshot_every = parse_double(key, value);
        else if (key == "mollifier.sigma") cfg.mollifier.sigma = parse_double(key, value);
        else if (key == "mollifier.kind") {
            try {
                cfg.mollifier.kind = mollifier_kind_from_string(value);
            } catch (const std::invalid_argument&) {
                throw ConfigError("config error: invalid value for mollifier.kind");
            }
        }
        else if (key == "noise.enabled") cfg.noise.enabled = parse_bool(key, value);
        else if (key == "noise.delta") cfg.noise.delta = parse_double(key, value);
        else if (key == "noise.decay_s") cfg.noise.decay_s = parse_double(key, value);
        else if (key == "noise.kmax") cfg.noise.kmax = parse_double(key, value);
        else if (key == "noise.seed") cfg.noise.seed = parse_uint(key, value);
        else if (key == "noise.substeps") cfg.noise.substeps = static_cast<int>(parse_int(key, value));
        else if (key == "init.velocity_preset") cfg.init.velocity_preset = value;
        else if (key == "init.director_preset") cfg.init.director_preset = value;
        else if (key == "init.velocity_amplitude") cfg.init.velocity_amplitude = parse_double(key, value);
        else if (key == "thresholds.eps0") cfg.thresholds.eps0 = parse_double(key, value);
        else if (key == "thresholds.eps1") cfg.thresholds.eps1 = parse_double(key, value);
        else if (key == "thresholds.M") cfg.thresholds.sup_bound = parse_double(key, value);
        else if (key == "thresholds.tol_mp") cfg.thresholds.tol_mp = parse_double(key, value);
        else if (key == "output.dir") cfg.output_dir = value;
        else throw ConfigError("config error: unknown key: " + key);
    }
    cfg.validate();
    return cfg;
}

RunConfig load_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("io error: cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

std::string RunConfig::serialize() const {
    std::ostringstream out;
    out.precision(17);
    out << "grid.n = " << grid_n << "\n";
    out << "time.dt = " << dt << "\n";
    out << "time.t_end = " << t_end << "\n";
    out << "time.snapshot_every = " << snapshot_every << "\n";
    out << "mollifier.sigma = " << mollifier.sigma << "\n";
    out << "mollifier.kind = " << to_string(mollifier.kind) << "\n";
    out << "noise.enabled = " << (noise.enabled ? "true" : "false") << "\n";
    out << "noise.delta = " << noise.delta << "\n";
    out << "noise.decay_s = " << noise.decay_s << "\n";
    out << "noise.kmax = " << noise.kmax << "\n";
    out << "noise.seed = " << noise.seed << "\n";
    out << "noise.substeps = " << noise.substeps << "\n";
    out << "init.velocity_preset = " << init.velocity_preset << "\n";
    out << "init.director_preset = " << init.director_preset << "\n";
    out << "init.velocity_amplitude = " << init.velocity_amplitude << "\n";
    out << "thresholds.eps0 = " << thresholds.eps0 << "\n";
    out << "thresholds.eps1 = " << thresholds.eps1 << "\n";
    out << "thresholds.M = " << thresholds.sup_bound << "\n";
    out << "thresholds.tol_mp = " << thresholds.tol_mp << "\n";
    out << "output.dir = " << output_dir << "\n";
    return out.str();
}

} // namespace sel3d
