#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace ares {

/// SplitMix64 finalizer. Bijective on 64-bit words.
std::uint64_t mix64(std::uint64_t x) noexcept;

/**
 * Child-seed derivation used everywhere a component needs its own stream.
 *
 * derive_seed(s, a) = mix64(mix64(s) ^ mix64(mix64(a + 1))), and the two-index form
 * chains the rule: derive_seed(s, a, b) = derive_seed(derive_seed(s, a), b).
 * ARES uses (seed, member) for shared row sub-samples and
 * (seed, feature, member) for per-feature sub-samples; KMeans uses
 * (seed, restart); the harness uses (seed, grid index).
 */
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept;
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) noexcept;

/**
 * Portable random source: std::mt19937_64 (whose output sequence is fixed by
 * the standard) plus distribution code written here, so draws are identical
 * across standard library implementations.
 */
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform integer in [0, bound). bound must be positive.
    std::uint64_t below(std::uint64_t bound);

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform();

    /// Standard normal via Box-Muller (no cached second variate).
    double normal();
    double normal(double mean, double sd) { return mean + sd * normal(); }

private:
    std::mt19937_64 engine_;
};

/**
 * k distinct indices from [0, n), returned sorted ascending.
 * Floyd's algorithm: O(k) draws regardless of n.
 */
std::vector<std::size_t> sample_without_replacement(Rng& rng, std::size_t n, std::size_t k);

} // namespace ares
