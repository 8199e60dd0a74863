#pragma once

// Brute-force references that share no code path with the library kernels.

#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace sswm::oracle {

/// Jump distribution of global mutation from the string 1^i 0^{n-i}, obtained by
/// enumerating all 2^n flip masks. Entry j is P(offspring has j ones). n <= 20.
[[nodiscard]] inline std::vector<double> enumerate_global_jumps(std::size_t n, std::size_t i) {
    std::vector<double> dist(n + 1, 0.0);
    const std::uint32_t x = i == 0 ? 0u : static_cast<std::uint32_t>((std::uint64_t{1} << i) - 1);
    const double p = 1.0 / static_cast<double>(n);
    for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << n); ++mask) {
        const int flips = std::popcount(mask);
        double prob = 1.0;
        for (int f = 0; f < flips; ++f) prob *= p;
        for (std::size_t f = static_cast<std::size_t>(flips); f < n; ++f) prob *= 1.0 - p;
        dist[static_cast<std::size_t>(std::popcount(x ^ mask))] += prob;
    }
    return dist;
}

/// (1 - e^{-2 b df}) / (1 - e^{-2 N b df}) in long double, straight from the formula.
[[nodiscard]] inline long double fixation_direct(long double df, long double N, long double beta) {
    if (df == 0.0L) return 1.0L / N;
    return (1.0L - std::exp(-2.0L * beta * df)) / (1.0L - std::exp(-2.0L * N * beta * df));
}

} // namespace sswm::oracle
