#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace monotrend {

/// SplitMix64 finalizer: a bijective 64-bit mix with good avalanche.
inline std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Derived seed for one Monte Carlo replication: stream(seed, r) is a
/// SplitMix64 hash of the user seed and the replication index, so
/// replications are reproducible independently of scheduling order.
inline std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t replication) {
    return splitmix64(splitmix64(seed) ^ splitmix64(replication ^ 0xA5A5A5A5A5A5A5A5ULL));
}

/// Deterministic standard-normal generator: Mersenne Twister driving an
/// explicit Box-Muller transform, so output does not depend on the
/// standard library's normal_distribution implementation.
class GaussianRng {
public:
    explicit GaussianRng(std::uint64_t seed) : engine_(seed) {}

    double operator()() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        // u1 in (0,1] avoids log(0); u2 in [0,1).
        const double u1 =
            1.0 - static_cast<double>(engine_() >> 11) * 0x1.0p-53;
        const double u2 = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * 3.14159265358979323846 * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace monotrend
