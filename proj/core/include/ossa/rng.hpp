#pragma once

#include <cstdint>
#include <random>

namespace ossa {

/// Mixes two 64-bit values into a well-scrambled seed (splitmix64 finalizer).
/// Used to derive independent per-class / per-sample streams from one root seed.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b);

/// Deterministic random source. The generator is std::mt19937_64, whose output
/// sequence is fixed by the standard; all draws below are implemented on top of
/// its raw 64-bit output so that results are identical across compilers and
/// standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), gen_(seed) {}

    std::uint64_t seed() const noexcept { return seed_; }

    std::uint64_t next_u64() { return gen_(); }

    /// Uniform integer in [0, bound). Unbiased via rejection sampling.
    std::uint64_t below(std::uint64_t bound);

    /// Uniform double in [0, 1) with 53 random mantissa bits.
    double uniform01();

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Standard normal via Box-Muller. Draws two uniforms per call.
    double normal();

    double normal(double mean, double stddev) { return mean + stddev * normal(); }

    /// Derives an independent stream keyed by `stream`.
    Rng fork(std::uint64_t stream) const { return Rng(mix_seed(seed_, stream)); }

private:
    std::uint64_t seed_;
    std::mt19937_64 gen_;
};

}  // namespace ossa
