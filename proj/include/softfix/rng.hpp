#pragma once

#include <cstdint>
#include <vector>

namespace softfix {

/// Deterministic splitmix64 stream. Sampling plans must reproduce bit-exactly
/// across platforms, so we avoid the implementation-defined std distributions.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1).
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

    /// Uniform index in [0, n). n must be positive.
    std::size_t index(std::size_t n) { return static_cast<std::size_t>(next_u64() % n); }

    bool coin() { return (next_u64() & 1u) != 0; }

    template <typename T>
    const T& pick(const std::vector<T>& xs) { return xs[index(xs.size())]; }

private:
    std::uint64_t state_;
};

} // namespace softfix
