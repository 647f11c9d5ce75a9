#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace pansharp {

/// Seeded random source with a fixed Box-Muller normal transform.
///
/// std::normal_distribution is implementation-defined, so sampling goes
/// through explicit uniform draws to keep streams identical across
/// standard libraries. One Rng instance is not thread-safe; give each
/// worker its own stream (see split()).
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    std::uint64_t seed() const { return seed_; }

    /// Uniform in [0, 1).
    double uniform() {
        // 53-bit mantissa from the top bits of a 64-bit draw.
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Integer in [0, n).
    std::uint64_t below(std::uint64_t n) { return engine_() % n; }

    /// Standard normal via Box-Muller (both values used).
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        double u2 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double mag = std::sqrt(-2.0 * std::log(u1));
        const double ang = 2.0 * M_PI * u2;
        spare_ = mag * std::sin(ang);
        have_spare_ = true;
        return mag * std::cos(ang);
    }

    /// Derive an independent stream; deterministic in (seed, key).
    Rng split(std::uint64_t key) const {
        std::uint64_t h = seed_ ^ (0x9e3779b97f4a7c15ull + key * 0xff51afd7ed558ccdull);
        h ^= h >> 30;
        h *= 0xbf58476d1ce4e5b9ull;
        h ^= h >> 27;
        h *= 0x94d049bb133111ebull;
        h ^= h >> 31;
        return Rng(h);
    }

    /// Stable 64-bit hash of a byte string (FNV-1a).
    static std::uint64_t hash_bytes(const void* data, std::size_t n) {
        const auto* p = static_cast<const unsigned char*>(data);
        std::uint64_t h = 0xcbf29ce484222325ull;
        for (std::size_t i = 0; i < n; ++i) {
            h ^= p[i];
            h *= 0x100000001b3ull;
        }
        return h;
    }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace pansharp
