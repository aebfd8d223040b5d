#pragma once

#include <cstdint>

namespace sel3d {

/// Stateless counter-based Gaussian sampler. Every draw is keyed by
/// (seed, stream, step, slot), so samples are reproducible regardless of
/// evaluation order and safe to generate in parallel.
namespace rng {

/// SplitMix64-style avalanche of a 64-bit word.
std::uint64_t mix(std::uint64_t x);

/// Combine key words into a single well-mixed 64-bit value.
std::uint64_t key(std::uint64_t seed, std::uint64_t stream, std::uint64_t step, std::uint64_t slot);

/// Uniform double in (0, 1), never exactly 0 or 1.
double uniform(std::uint64_t key_value, std::uint64_t salt);

struct NormalPair {
    double first;
    double second;
};

/// Two independent standard normals via Box-Muller from one key.
NormalPair normal_pair(std::uint64_t seed, std::uint64_t stream, std::uint64_t step, std::uint64_t slot);

} // namespace rng
} // namespace sel3d
