#pragma once

#include <cstdint>
#include <random>

namespace retrobeam {

using Rng = std::mt19937_64;

/// What a random stream is used for inside one Monte Carlo trial.
enum class StreamPurpose : std::uint64_t {
    network = 1,
    channels = 2,
    policy = 3,
    noise = 4,
};

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z)
{
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Seed-splitting rule: the stream for (trial, purpose) is seeded with
/// mix64(mix64(master) ^ mix64(trial * 8 + purpose)). Streams depend only on
/// these three integers, so any assignment of trials to threads reproduces
/// the same draws.
constexpr std::uint64_t derive_seed(std::uint64_t master, std::uint64_t trial, StreamPurpose purpose)
{
    return mix64(mix64(master) ^ mix64(trial * 8 + static_cast<std::uint64_t>(purpose)));
}

inline Rng make_stream(std::uint64_t master, std::uint64_t trial, StreamPurpose purpose)
{
    return Rng(derive_seed(master, trial, purpose));
}

}  // namespace retrobeam
