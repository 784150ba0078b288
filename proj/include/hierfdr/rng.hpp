#ifndef HIERFDR_RNG_HPP
#define HIERFDR_RNG_HPP

#include <cstdint>
#include <random>

#include "hierfdr/stats.hpp"

namespace hfdr::rng {

// splitmix64 step; used both for seed derivation and mixing.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Independent seed for one cell of an experimental grid. Mixes the sigma
/// bit pattern and the replicate index into the base seed so that every
/// (sigma, replicate) pair owns its own reproducible stream.
std::uint64_t derive_seed(std::uint64_t base_seed, double sigma, std::uint64_t replicate_index);

/// Seeded random stream with fixed uniform/normal mappings. Draws are
/// produced by explicit arithmetic on mt19937_64 output (not through
/// std::*_distribution), so sequences are identical across standard
/// library implementations.
class Stream {
public:
    explicit Stream(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on the open interval (0,1).
    double uniform01() {
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Normal draw via inverse-CDF transform.
    double normal(double mean, double sd) {
        return mean + sd * stats::normal_quantile(uniform01());
    }

    /// Unbiased integer in [0, n), n >= 1.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t limit = n * ((~std::uint64_t{0}) / n);
        std::uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % n;
    }

private:
    std::mt19937_64 engine_;
};

} // namespace hfdr::rng

#endif
