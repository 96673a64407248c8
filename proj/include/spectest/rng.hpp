// Splittable random streams.  Every stochastic routine derives its own
// engine from (seed, purpose, indices...), so results never depend on
// evaluation order or on how work is divided across threads.
#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace spectest::rng {

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

/// SplitMix64 finalizer: bijective avalanche mix of a 64-bit word.
inline std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30; z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27; z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
}

/// Folds a path of ids into the seed, hash-combine style.  Distinct paths
/// give (for practical purposes) independent stream seeds.
inline std::uint64_t derive(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
    std::uint64_t h = mix64(seed + kGolden);
    for (std::uint64_t id : path)
        h = mix64(h ^ (id + kGolden + (h << 6) + (h >> 2)));
    return h;
}

/// Fresh engine for the given (seed, path) stream.
inline std::mt19937_64 stream(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
    return std::mt19937_64(derive(seed, path));
}

// Purpose tags used to keep streams for different jobs disjoint.
enum Purpose : std::uint64_t {
    kScenarioSample = 1,  // scenario X and noise draws
    kFitInit        = 2,  // harness fit-initialization perturbation
    kBootstrap      = 3,  // per-test bootstrap seed
    kWildWeights    = 4,  // per-replicate wild weight draws
    kDirections     = 5,  // projection directions (Monte Carlo statistics)
    kOraclePairs    = 6,  // oracle pair sampling
    kKernelCase     = 7,  // kernel validation case parameters
};

} // namespace spectest::rng
