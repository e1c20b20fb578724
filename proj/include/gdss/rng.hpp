#pragma once

#include <cstdint>
#include <random>

namespace gdss {

/**
 * Reproducible random source.
 *
 * The engine is std::mt19937_64, whose output sequence is fixed by the C++
 * standard. The standard library distributions are not, so the conversions
 * below are done by hand:
 *   - uniform01: top 53 bits of one draw scaled by 2^-53, in [0, 1)
 *   - uniform_int: rejection sampling on the raw 64-bit draw
 *   - normal: Box-Muller on two uniform01 draws, both outputs used
 * The same seed therefore gives the same numbers on every platform.
 */
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    double uniform01();

    /// Uniform on [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Uniform integer on the closed range [lo, hi].
    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi);

    /// Standard normal deviate.
    double normal();

    /// +1 or -1 with probability 1/2 each (highest bit of one draw).
    int sign() { return (next() >> 63) ? 1 : -1; }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

/// Seed for stream `index` derived from a base seed (base + index).
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) { return base + index; }

}  // namespace gdss
