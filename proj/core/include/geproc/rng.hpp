#pragma once

#include <cstdint>
#include <random>

namespace geproc {

/// Every stochastic routine in this library takes an explicit 64-bit seed and
/// constructs its own engine, so runs are bit-reproducible. Independent
/// streams (bootstrap replicates, null-band simulations, Monte Carlo paths)
/// are derived with derive_seed(master, k); the rule is fixed here and must
/// not change without bumping results that freeze simulated values.
using RngEngine = std::mt19937_64;

/// SplitMix64 finalizer over master + (stream+1) * golden-ratio increment.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    std::uint64_t z = master + (stream + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Uniform draw on the open interval (0,1): midpoints of the 2^53 grid,
/// so neither endpoint can ever be returned.
inline double uniform01(RngEngine& eng) {
    return (static_cast<double>(eng() >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace geproc
