#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace matchscore {

/// splitmix64 finalizer, used to derive independent substream seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Deterministic RNG stream keyed by (seed, stream_index).
///
/// Every random quantity in the library flows through one of these streams so
/// that results are reproducible bit-for-bit given the seed, independent of
/// thread scheduling and of the platform's <random> distribution
/// implementations (the mt19937_64 engine itself is fully specified by the
/// standard; the distributions are not, so we roll the conversions by hand).
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream)
        : eng_(splitmix64(splitmix64(seed) ^ splitmix64(stream ^ 0xA5A5A5A5A5A5A5A5ULL))) {}

    std::uint64_t next_u64() { return eng_(); }

    /// Uniform double in [0, 1), 53 random bits.
    double uniform01() {
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + uniform01() * (hi - lo);
    }

    /// Uniform integer in [lo, hi] inclusive.
    int uniform_int(int lo, int hi) {
        const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<int>(eng_() % span);
    }

    /// Standard Box-Muller; consumes exactly two engine draws per variate so
    /// the stream layout stays predictable.
    double normal(double sd = 1.0) {
        const double u1 = static_cast<double>((eng_() >> 11) + 1) * 0x1.0p-53; // (0, 1]
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        return sd * r * std::cos(2.0 * 3.14159265358979323846 * u2);
    }

private:
    std::mt19937_64 eng_;
};

} // namespace matchscore
