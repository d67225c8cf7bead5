#pragma once

#include <cstdint>
#include <random>

namespace mixdist {

using Rng = std::mt19937_64;

/// splitmix64 finalizer; used to spread counters into well-mixed seeds.
constexpr std::uint64_t mix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Seed for replication `index` of stream `stream` under a root seed. Streams
/// keep unrelated experiments that share a root seed independent.
constexpr std::uint64_t derive_seed(std::uint64_t root, std::uint64_t stream, std::uint64_t index)
{
    return mix64(mix64(mix64(root) ^ stream) + index);
}

} // namespace mixdist
