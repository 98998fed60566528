#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

#include "remixsig/geometry.hpp"

namespace remixsig {

/// 64-bit FNV-1a; stable across platforms, used to derive per-design seeds.
inline std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

/// One splitmix64 round; mixes a seed with a salt.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

/// Deterministic RNG. All value derivations are pinned here (no
/// std::*_distribution) so identical seeds give identical streams on
/// every platform.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform in [0, 1) with 53-bit mantissa.
    double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform in (0, 1]; safe as a log() argument.
    double uniform01_pos() { return static_cast<double>((next() >> 11) + 1) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    /// Uniform integer in [lo, hi], inclusive, by rejection.
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
        std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
        std::uint64_t v;
        do {
            v = next();
        } while (v >= limit);
        return lo + static_cast<std::int64_t>(v % span);
    }

    Vec3 unit_vector() {
        double z = uniform(-1.0, 1.0);
        double phi = uniform(0.0, 2.0 * M_PI);
        double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        return {r * std::cos(phi), r * std::sin(phi), z};
    }

    /// Negative binomial with integer dispersion r >= 1 and the given mean:
    /// a sum of r geometric draws. Variance is mean + mean^2/r.
    std::int64_t negative_binomial(int r, double mean) {
        if (mean <= 0.0) return 0;
        double p = static_cast<double>(r) / (static_cast<double>(r) + mean);
        double log_q = std::log1p(-p);
        std::int64_t total = 0;
        for (int i = 0; i < r; ++i)
            total += static_cast<std::int64_t>(std::floor(std::log(uniform01_pos()) / log_q));
        return total;
    }

  private:
    std::mt19937_64 engine_;
};

}  // namespace remixsig
