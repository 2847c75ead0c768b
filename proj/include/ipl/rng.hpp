#ifndef IPL_RNG_HPP
#define IPL_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

#include "ipl/common.hpp"

namespace ipl {

/// splitmix64 mixing step; used to derive independent sub-stream seeds.
inline std::uint64_t mix_seed(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Seed for sub-stream `stream` of a master seed (per-trial, per-column, ...).
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    return mix_seed(master ^ mix_seed(stream));
}

/// Seedable generator with fixed, portable output: mt19937_64 underneath,
/// with uniform and normal transforms implemented here rather than through
/// std::*_distribution (whose algorithms are implementation-defined).
/// Identical seeds therefore reproduce identical streams on any platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    /// Uniform on [0, 1): top 53 bits of one 64-bit draw.
    double uniform01() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Standard normal via Box-Muller; consumes exactly two draws.
    double normal() {
        double u1 = static_cast<double>((gen_() >> 11) + 1) * 0x1.0p-53; // (0, 1]
        double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    double normal(double mean, double sd) { return mean + sd * normal(); }

    /// Uniform integer in [0, n) by rejection (no modulo bias).
    std::uint64_t uniform_int(std::uint64_t n) {
        if (n == 0) throw ConfigError("uniform_int: n must be positive");
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = gen_();
        } while (x >= limit);
        return x % n;
    }

private:
    std::mt19937_64 gen_;
};

} // namespace ipl

#endif // IPL_RNG_HPP
