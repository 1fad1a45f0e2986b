#pragma once

#include <cstdint>

namespace lcp {

/// splitmix64 finalizer; full-period bijective mix on 64-bit words.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Stable combination of a seed with stream/counter indices. Used to derive
/// per-task seeds that do not depend on execution order.
inline std::uint64_t seed_combine(std::uint64_t seed, std::uint64_t a) {
    return mix64(seed ^ mix64(a ^ 0x5851f42d4c957f2dULL));
}

inline std::uint64_t seed_combine(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    return seed_combine(seed_combine(seed, a), b);
}

/// Counter-based uniform draw in [0,1). Stateless: the value depends only on
/// (seed, counter), so parallel repetitions are reproducible.
inline double counter_u01(std::uint64_t seed, std::uint64_t counter) {
    return static_cast<double>(mix64(seed ^ mix64(counter)) >> 11) * 0x1.0p-53;
}

/// Small sequential PRNG (splitmix64 stream) for start vectors and tests.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    double next_u01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform in [-1, 1).
    double next_symmetric() { return 2.0 * next_u01() - 1.0; }

    /// Uniform integer in [0, bound).
    std::uint64_t next_below(std::uint64_t bound) { return next_u64() % bound; }

private:
    std::uint64_t state_;
};

}  // namespace lcp
