#include "sel3d/rng.hpp"

#include <cmath>

namespace sel3d {
namespace rng {

std::uint64_t mix(std::uint64_t x) {
    // SplitMix64 finalizer (Steele, Lea, Flood 2014).
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t key(std::uint64_t seed, std::uint64_t stream, std::uint64_t step, std::uint64_t slot) {
    std::uint64_t k = mix(seed);
    k = mix(k ^ (stream + 0xd1b54a32d192ed03ULL));
    k = mix(k ^ (step + 0x2545f4914f6cdd1dULL));
    k = mix(k ^ (slot + 0x9e6c63d0876a6a4bULL));
    return k;
}

double uniform(std::uint64_t key_value, std::uint64_t salt) {
    const std::uint64_t bits = mix(key_value ^ mix(salt));
    // 53 significant bits, shifted into (0, 1).
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

NormalPair normal_pair(std::uint64_t seed, std::uint64_t stream, std::uint64_t step, std::uint64_t slot) {
    const std::uint64_t k = key(seed, stream, step, slot);
    const double u1 = uniform(k, 0x6a09e667f3bcc909ULL);
    const double u2 = uniform(k, 0xbb67ae8584caa73bULL);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 6.283185307179586476925286766559 * u2;
    return {r * std::cos(theta), r * std::sin(theta)};
}

} // namespace rng
} // namespace sel3d
