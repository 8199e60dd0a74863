#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "sswm/bitstring.hpp"
#include "sswm/mutation.hpp"
#include "sswm/oracles.hpp"
#include "sswm/random.hpp"
#include "sswm/verify.hpp"

using namespace sswm;

TEST(MutExact, FrozenSmallCases) {
    // From 100: masks 010 and 001 give (1/3)(2/3)^2 each, mask 111 gives (1/3)^3;
    // 8/27 + 1/27 = 1/3.
    const auto ref = oracle::enumerate_global_jumps(3, 1);
    EXPECT_NEAR(ref[2], 1.0 / 3.0, 1e-15);
    EXPECT_NEAR(mut_exact(3, 1, 2, MutationKind::global), 1.0 / 3.0, 1e-15);
    EXPECT_DOUBLE_EQ(mut_exact(10, 4, 5, MutationKind::local), 0.6);
    EXPECT_DOUBLE_EQ(mut_exact(10, 4, 3, MutationKind::local), 0.4);
    for (std::size_t i = 0; i <= 10; ++i) EXPECT_EQ(mut_exact(10, i, i, MutationKind::local), 0.0);
    EXPECT_NEAR(mut_exact(10, 0, 1, MutationKind::global), std::pow(0.9, 9.0), 1e-15);
}

TEST(MutExact, NoFlipProbability) {
    for (std::size_t n : {1u, 2u, 7u, 50u, 1000u})
        for (std::size_t i : {std::size_t{0}, n / 2, n}) {
            // mut(i,i) includes swaps; it is at least the no-flip mass
            EXPECT_GE(mut_exact(n, i, i, MutationKind::global),
                      std::pow(1.0 - 1.0 / static_cast<double>(n), static_cast<double>(n)) * (1.0 - 1e-12));
        }
    EXPECT_EQ(mut_exact(1, 0, 1, MutationKind::global), 1.0);
    EXPECT_EQ(mut_exact(1, 1, 0, MutationKind::global), 1.0);
}

TEST(MutExact, OutOfRangeThrows) {
    EXPECT_THROW((void)mut_exact(5, 6, 1, MutationKind::global), domain_error);
    EXPECT_THROW((void)mut_exact(5, 1, 6, MutationKind::local), domain_error);
}

TEST(MutExact, LargeNRowsStayStochastic) {
    for (std::size_t n : {1000u, 10000u}) {
        for (std::size_t i : {std::size_t{0}, n / 3, n - 1}) {
            const auto row = mut_row(n, i, MutationKind::global);
            detail::CompensatedSum s;
            for (double p : row) s.add(p);
            EXPECT_NEAR(s.value(), 1.0, 1e-10) << "n=" << n << " i=" << i;
        }
    }
}

TEST(MutBound, FrozenValues) {
    EXPECT_NEAR(mut_upper_bound(10, 0, 1), std::pow(0.9, 9.0) * 1.14, 1e-15);
    EXPECT_NEAR(mut_upper_bound(10, 0, 1), 0.441659, 1e-6);
    EXPECT_LE(mut_exact(10, 0, 1, MutationKind::global), mut_upper_bound(10, 0, 1));
    EXPECT_NEAR(mut_upper_bound(10, 5, 5), std::pow(0.5, 5.0) * std::pow(0.9, 5.0) * 1.14 / 120.0, 1e-18);
    EXPECT_NEAR(mut_upper_bound(10, 5, 5), 1.753017e-4, 1e-9);
    EXPECT_EQ(mut_upper_bound(10, 10, 1), 0.0);
    EXPECT_EQ(mut_upper_bound(10, 0, 2, JumpDirection::down), 0.0);
    EXPECT_THROW((void)mut_upper_bound(10, 3, 0), domain_error);
}

TEST(MutProperties, MutationSuitePasses) {
    const auto s = verify_mutation();
    for (const auto& c : s.checks) EXPECT_TRUE(c.passed) << c.name << ": " << c.detail;
}

namespace {

// Chi-style check: every bucket within 4 sigma of its expected count.
void expect_histogram(const std::vector<double>& expected, const std::vector<std::size_t>& counts, std::size_t draws) {
    for (std::size_t j = 0; j < expected.size(); ++j) {
        const double mu = expected[j] * static_cast<double>(draws);
        const double sigma = std::sqrt(static_cast<double>(draws) * expected[j] * (1.0 - expected[j]));
        EXPECT_LE(std::abs(static_cast<double>(counts[j]) - mu), 4.0 * sigma + 1e-9) << "bucket " << j;
    }
}

std::vector<std::size_t> jump_histogram(GlobalSampling sampling, std::size_t n, std::size_t i, std::size_t draws,
                                        std::uint64_t seed) {
    Rng rng(seed);
    const Mutator m(n, MutationKind::global, sampling);
    std::vector<std::size_t> flips, counts(n + 1, 0);
    BitString x(n);
    for (std::size_t k = 0; k < i; ++k) x.set(k, true);
    for (std::size_t t = 0; t < draws; ++t) {
        m.sample(rng, flips);
        long ones = static_cast<long>(i);
        for (auto f : flips) ones += x.test(f) ? -1 : 1;
        ++counts[static_cast<std::size_t>(ones)];
    }
    return counts;
}

} // namespace

TEST(MutSampling, HistogramMatchesExactKernel) {
    const std::size_t n = 20, i = 10, draws = 1000000;
    const auto expected = mut_row(n, i, MutationKind::global);
    expect_histogram(expected, jump_histogram(GlobalSampling::count_then_positions, n, i, draws, 101), draws);
    expect_histogram(expected, jump_histogram(GlobalSampling::per_bit, n, i, draws, 202), draws);
}

TEST(MutSampling, FlipPositionsAreUniformAndDistinct) {
    Rng rng(5);
    const std::size_t n = 9, draws = 200000;
    const Mutator m(n, MutationKind::global);
    std::vector<std::size_t> flips, per_position(n, 0);
    for (std::size_t t = 0; t < draws; ++t) {
        m.sample(rng, flips);
        std::vector<char> seen(n, 0);
        for (auto f : flips) {
            ASSERT_LT(f, n);
            ASSERT_FALSE(seen[f]);
            seen[f] = 1;
            ++per_position[f];
        }
    }
    const double p = 1.0 / static_cast<double>(n);
    std::vector<double> expected(n, p);
    expect_histogram(expected, per_position, draws);
}

TEST(MutSampling, LocalFlipsExactlyOneUniformBit) {
    Rng rng(17);
    const BitString x(3);
    std::vector<std::size_t> counts(3, 0);
    const std::size_t draws = 300000;
    for (std::size_t t = 0; t < draws; ++t) {
        const auto y = mutate(x, MutationKind::local, rng);
        ASSERT_EQ(hamming_distance(x, y), 1u);
        for (std::size_t k = 0; k < 3; ++k)
            if (y.test(k)) ++counts[k];
    }
    expect_histogram({1.0 / 3, 1.0 / 3, 1.0 / 3}, counts, draws);
}

TEST(MutSampling, GlobalUnchangedOffspringRate) {
    Rng rng(23);
    const std::size_t n = 8, draws = 400000;
    const auto x = BitString::from_string("10110010");
    std::size_t same = 0;
    for (std::size_t t = 0; t < draws; ++t) same += mutate(x, MutationKind::global, rng) == x;
    const double p = std::pow(1.0 - 1.0 / n, static_cast<double>(n));
    expect_histogram({p, 1.0 - p}, {same, draws - same}, draws);
}

TEST(MutSampling, SingleBitGlobalAlwaysFlips) {
    Rng rng(1);
    const auto x = BitString::from_string("0");
    for (int t = 0; t < 1000; ++t) EXPECT_EQ(mutate(x, MutationKind::global, rng).to_string(), "1");
}
