#pragma once

#include <cstdint>
#include <random>

namespace sswm {

/// Per-run engine. Each run owns one; nothing is shared across threads.
using Rng = std::mt19937_64;

/// SplitMix64 finaliser: a bijective 64-bit mixer with full avalanche.
[[nodiscard]] constexpr std::uint64_t splitmix64(std::uint64_t z) noexcept {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Seed of sub-stream `index` of `master`:
///     stream(m, i) = splitmix64(splitmix64(m) ^ splitmix64(i + 0x632BE59BD9B4E019))
/// Depends only on (m, i), never on scheduling.
[[nodiscard]] constexpr std::uint64_t stream_seed(std::uint64_t master, std::uint64_t index) noexcept {
    return splitmix64(splitmix64(master) ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
}

/// Two-level stream used by sweeps: stream(stream(m, cell), trial).
[[nodiscard]] constexpr std::uint64_t stream_seed(std::uint64_t master, std::uint64_t cell,
                                                  std::uint64_t trial) noexcept {
    return stream_seed(stream_seed(master, cell), trial);
}

} // namespace sswm
