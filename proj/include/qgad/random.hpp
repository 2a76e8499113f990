#pragma once

#include <cstdint>

namespace qgad {

/// splitmix64. Used instead of <random> engines/distributions wherever
/// bit-for-bit reproducibility across platforms is part of the contract.
class SplitMix64 {
  public:
    explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

    constexpr std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [lo, hi) from the top 53 bits.
    double uniform(double lo, double hi) {
        const double u = static_cast<double>(next() >> 11) * 0x1.0p-53;
        return lo + (hi - lo) * u;
    }

    /// Uniform integer in [0, n). Modulo bias is negligible for small n.
    std::uint64_t uniform_index(std::uint64_t n) { return next() % n; }

  private:
    std::uint64_t state_;
};

/// Derives an independent stream seed from a base seed.
constexpr std::uint64_t mix_seed(std::uint64_t base, std::uint64_t stream) {
    SplitMix64 g(base ^ (0x632be59bd9b4e019ULL + stream * 0x9e3779b97f4a7c15ULL));
    return g.next();
}

/// FNV-1a over raw bytes; used for parameter snapshot hashes in trajectories.
inline std::uint64_t fnv1a(const void* data, std::size_t size) {
    const auto* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (std::size_t i = 0; i < size; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace qgad
