#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "sel3d/history.hpp"

namespace sel3d {

/// On-disk snapshot: header (magic "SEL3D", version, n, t, field list,
/// CRC32 checksum) followed by little-endian float64 payloads laid out
/// [component][z][y][x] in field-list order (v, d, z, pi).
struct PhysicalSnapshot {
    double t = 0.0;
    int n = 0;
    struct FieldData {
        int components = 0;
        std::vector<double> values;
    };
    std::map<std::string, FieldData> fields;
};

namespace snapshot {

constexpr std::uint32_t format_version = 1;

std::string file_name(int index);

void write(const std::string& path, const PhysicalSnapshot& snap);
PhysicalSnapshot read(const std::string& path);

/// Load every snap_*.sel file of a run directory (sorted) plus the recorded
/// run configuration into a SimHistory. Throws IoError naming missing or
/// corrupt files.
SimHistory load_history(const std::string& dir);

} // namespace snapshot
} // namespace sel3d
