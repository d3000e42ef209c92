#pragma once

#include <cmath>
#include <cstdint>

namespace charter::sim {

/// SplitMix64: tiny, splittable, byte-stable across platforms. Trials derive
/// independent streams from (seed, stream index) so a scenario's traces are
/// reproducible regardless of execution order.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return next_double() < p; }

    /// Uniform in [lo, hi].
    double uniform(double lo, double hi) { return lo + next_double() * (hi - lo); }

    /// Inverse-CDF triangular draw over [min, max] with the given mode,
    /// rounded to the nearest integer. Bounded support keeps every
    /// consumption draw provably within [min, max].
    std::int64_t triangular(std::int64_t min, std::int64_t mode, std::int64_t max) {
        if (min == max) return min;
        const double u = next_double();
        const double a = static_cast<double>(min);
        const double b = static_cast<double>(max);
        const double c = static_cast<double>(mode);
        const double pivot = (c - a) / (b - a);
        double x;
        if (u < pivot)
            x = a + std::sqrt(u * (b - a) * (c - a));
        else
            x = b - std::sqrt((1.0 - u) * (b - a) * (b - c));
        return static_cast<std::int64_t>(std::llround(x));
    }

private:
    std::uint64_t state_;
};

/// Stream derivation for per-trial sub-seeds.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
    SplitMix64 mixer(seed ^ (0x9e3779b97f4a7c15ULL * (stream + 1)));
    return mixer.next();
}

} // namespace charter::sim
