#include "sel3d/snapshot.hpp"

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <optional>

#include "sel3d/config.hpp"

namespace sel3d {
namespace snapshot {
namespace {

constexpr char magic[5] = {'S', 'E', 'L', '3', 'D'};

std::uint32_t crc32(const std::uint8_t* data, std::size_t size) {
    static std::uint32_t table[256];
    static bool built = false;
    if (!built) {
        for (std::uint32_t i = 0; i < 256; ++i) {
            std::uint32_t c = i;
            for (int j = 0; j < 8; ++j) c = (c & 1) ? 0xedb88320u ^ (c >> 1) : c >> 1;
            table[i] = c;
        }
        built = true;
    }
    std::uint32_t crc = 0xffffffffu;
    for (std::size_t i = 0; i < size; ++i) crc = table[(crc ^ data[i]) & 0xffu] ^ (crc >> 8);
    return crc ^ 0xffffffffu;
}

template <typename T>
void put(std::vector<std::uint8_t>& out, const T& value) {
    const auto* p = reinterpret_cast<const std::uint8_t*>(&value);
    out.insert(out.end(), p, p + sizeof(T));
}

template <typename T>
T get(const std::uint8_t*& p, const std::uint8_t* end, const std::string& path) {
    if (p + sizeof(T) > end) throw IoError("io error: truncated snapshot: " + path);
    T value;
    std::memcpy(&value, p, sizeof(T));
    p += sizeof(T);
    return value;
}

} // namespace

std::string file_name(int index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "snap_%06d.sel", index);
    return buf;
}

void write(const std::string& path, const PhysicalSnapshot& snap) {
    std::vector<std::uint8_t> header;
    header.insert(header.end(), magic, magic + 5);
    put(header, format_version);
    put(header, static_cast<std::uint32_t>(snap.n));
    put(header, snap.t);
    put(header, static_cast<std::uint32_t>(snap.fields.size()));
    for (const auto& [name, field] : snap.fields) {
        put(header, static_cast<std::uint8_t>(name.size()));
        header.insert(header.end(), name.begin(), name.end());
        put(header, static_cast<std::uint32_t>(field.components));
    }
    const std::uint32_t checksum = crc32(header.data(), header.size());
    put(header, checksum);

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("io error: cannot write snapshot: " + path);
    out.write(reinterpret_cast<const char*>(header.data()),
              static_cast<std::streamsize>(header.size()));
    const std::size_t per = static_cast<std::size_t>(snap.n) * snap.n * snap.n;
    for (const auto& [name, field] : snap.fields) {
        if (field.values.size() != per * static_cast<std::size_t>(field.components))
            throw IoError("io error: payload size mismatch for field " + name + " in " + path);
        out.write(reinterpret_cast<const char*>(field.values.data()),
                  static_cast<std::streamsize>(field.values.size() * sizeof(double)));
    }
    if (!out) throw IoError("io error: short write: " + path);
}

PhysicalSnapshot read(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("io error: cannot open snapshot: " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    const std::uint8_t* p = bytes.data();
    const std::uint8_t* end = p + bytes.size();

    if (bytes.size() < 5 || std::memcmp(p, magic, 5) != 0)
        throw IoError("io error: bad magic in snapshot: " + path);
    p += 5;
    const auto version = get<std::uint32_t>(p, end, path);
    if (version != format_version)
        throw IoError("io error: unsupported snapshot version in: " + path);

    PhysicalSnapshot snap;
    snap.n = static_cast<int>(get<std::uint32_t>(p, end, path));
    snap.t = get<double>(p, end, path);
    const auto field_count = get<std::uint32_t>(p, end, path);
    std::vector<std::pair<std::string, int>> order;
    for (std::uint32_t f = 0; f < field_count; ++f) {
        const auto name_len = get<std::uint8_t>(p, end, path);
        if (p + name_len > end) throw IoError("io error: truncated snapshot: " + path);
        std::string name(reinterpret_cast<const char*>(p), name_len);
        p += name_len;
        const auto components = get<std::uint32_t>(p, end, path);
        order.emplace_back(name, static_cast<int>(components));
    }
    const std::size_t header_size = static_cast<std::size_t>(p - bytes.data());
    const auto stored_crc = get<std::uint32_t>(p, end, path);
    if (crc32(bytes.data(), header_size) != stored_crc)
        throw IoError("io error: header checksum mismatch in snapshot: " + path);

    const std::size_t per = static_cast<std::size_t>(snap.n) * snap.n * snap.n;
    for (const auto& [name, components] : order) {
        PhysicalSnapshot::FieldData field;
        field.components = components;
        field.values.resize(per * static_cast<std::size_t>(components));
        const std::size_t bytes_needed = field.values.size() * sizeof(double);
        if (p + bytes_needed > end) throw IoError("io error: truncated payload in: " + path);
        std::memcpy(field.values.data(), p, bytes_needed);
        p += bytes_needed;
        snap.fields.emplace(name, std::move(field));
    }
    return snap;
}

SimHistory load_history(const std::string& dir) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) throw IoError("io error: not a directory: " + dir);

    const fs::path cfg_path = fs::path(dir) / "run_config.cfg";
    MollifierSpec moll;
    if (fs::exists(cfg_path)) {
        const RunConfig cfg = load_config_file(cfg_path.string());
        moll = cfg.mollifier;
    }

    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir)) {
        const std::string name = entry.path().filename().string();
        if (name.rfind("snap_", 0) == 0 && name.size() > 4 &&
            name.substr(name.size() - 4) == ".sel")
            files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw IoError("io error: no snapshots found in: " + dir);

    std::optional<SimHistory> history;
    for (const auto& file : files) {
        const PhysicalSnapshot snap = read(file.string());
        if (!history) history.emplace(TorusGrid(snap.n), moll);
        const TorusGrid& grid = history->grid;
        if (snap.n != grid.n()) throw IoError("io error: grid size mismatch in: " + file.string());
        auto need = [&](const char* name, int components) -> const PhysicalSnapshot::FieldData& {
            const auto it = snap.fields.find(name);
            if (it == snap.fields.end() || it->second.components != components)
                throw IoError(std::string("io error: missing field ") + name + " in: " +
                              file.string());
            return it->second;
        };
        history->frames.emplace_back(
            snap.t, SpectralField::from_physical(grid, 3, need("v", 3).values),
            SpectralField::from_physical(grid, 3, need("d", 3).values),
            SpectralField::from_physical(grid, 3, need("z", 3).values),
            SpectralField::from_physical(grid, 1, need("pi", 1).values));
    }
    return *history;
}

} // namespace snapshot
} // namespace sel3d
