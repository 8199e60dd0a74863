#include <gtest/gtest.h>

#include <cmath>

#include "sswm/oracles.hpp"
#include "sswm/selection.hpp"
#include "sswm/verify.hpp"

using namespace sswm;

namespace {

double pf(double df, double N, double beta) { return p_fix(FitnessDelta{df}, SelectionParams{N, beta}); }

} // namespace

TEST(Fixation, NeutralMutationFixesWithProbabilityOneOverN) {
    EXPECT_DOUBLE_EQ(pf(0.0, 10.0, 0.3), 0.1);
    EXPECT_DOUBLE_EQ(pf(0.0, 2.5, 1.0), 0.4);
}

TEST(Fixation, SingleIndividualAcceptsEverything) {
    EXPECT_EQ(pf(-5.0, 1.0, 0.3), 1.0);
    EXPECT_EQ(pf(3.0, 1.0, 1.0), 1.0);
    EXPECT_EQ(pf(0.0, 1.0, 1.0), 1.0);
}

TEST(Fixation, MatchesDirectFormula) {
    for (double N : {1.5, 2.0, 10.0, 100.0})
        for (double beta : {1e-3, 0.1, 1.0})
            for (double df : {-7.0, -1.0, -0.5, -1e-3, 1e-3, 0.5, 1.0, 7.0}) {
                const long double ref = oracle::fixation_direct(df, N, beta);
                EXPECT_NEAR(pf(df, N, beta), static_cast<double>(ref), 1e-12 * static_cast<double>(ref) + 1e-300)
                    << "N=" << N << " beta=" << beta << " df=" << df;
            }
}

TEST(Fixation, FrozenValueAtUnitImprovement) {
    // (1 - e^-2)/(1 - e^-4) = 1/(1 + e^-2)
    const double oracle = static_cast<double>(oracle::fixation_direct(1.0L, 2.0L, 1.0L));
    EXPECT_NEAR(oracle, 1.0 / (1.0 + std::exp(-2.0)), 1e-15);
    EXPECT_NEAR(pf(1.0, 2.0, 1.0), 0.8807970779778823, 1e-15);
}

TEST(Fixation, HugeArgumentsDoNotOverflow) {
    EXPECT_EQ(pf(1e6, 100.0, 1.0), 1.0);
    const double tiny = pf(-1e4, 100.0, 1.0);
    EXPECT_GE(tiny, 0.0);
    EXPECT_LT(tiny, 1e-300);
    EXPECT_TRUE(std::isfinite(log_p_fix(FitnessDelta{-1e4}, SelectionParams{100.0, 1.0})));
}

TEST(Fixation, SmallArgumentsKeepRelativeAccuracy) {
    // 2 beta df = 2e-8: p ~ 1/N (1 + (N-1) beta df)
    const double N = 10.0, beta = 1.0, df = 1e-8;
    const double p = pf(df, N, beta);
    const double approx = (1.0 + (N - 1.0) * beta * df) / N;
    EXPECT_NEAR(p, approx, 1e-15);
}

TEST(Fixation, InvalidParametersThrow) {
    EXPECT_THROW((void)pf(1.0, 0.5, 1.0), domain_error);
    EXPECT_THROW((void)pf(1.0, 2.0, 0.0), domain_error);
    EXPECT_THROW((void)pf(1.0, 2.0, -1.0), domain_error);
    EXPECT_THROW((void)p_fix(FitnessDelta{1.0}, SelectionParams{2.0, 1.5, true}), domain_error);
    EXPECT_NO_THROW((void)p_fix(FitnessDelta{1.0}, SelectionParams{2.0, 1.5, false}));
    EXPECT_TRUE((SelectionParams{2.0, 1.5}).exceeds_nominal_beta());
}

TEST(FixationBounds, PositiveBranchFrozen) {
    const auto b = p_fix_bounds(FitnessDelta{1.0}, SelectionParams{2.0, 1.0});
    EXPECT_NEAR(b.lower, 2.0 / 3.0, 1e-15);
    EXPECT_NEAR(b.upper, 2.0 / (1.0 - std::exp(-4.0)), 1e-14);
    EXPECT_NEAR(b.upper, 2.0373, 1e-4);
    EXPECT_LE(b.lower, pf(1.0, 2.0, 1.0));
    EXPECT_GE(b.upper, pf(1.0, 2.0, 1.0));
}

TEST(FixationBounds, NegativeBranchFrozen) {
    const auto b = p_fix_bounds(FitnessDelta{-1.0}, SelectionParams{2.0, 1.0});
    EXPECT_NEAR(b.lower, 2.0 * std::exp(-4.0), 1e-16);
    EXPECT_NEAR(b.lower, 0.0366312777774684, 1e-15);
    EXPECT_NEAR(b.upper, std::exp(2.0) / (std::exp(4.0) - 1.0), 1e-15);
    EXPECT_NEAR(b.upper, 0.137860, 1e-6);
}

TEST(FixationBounds, ZeroDeltaLowerIsZero) {
    for (double N : {2.0, 10.0}) {
        const auto b = p_fix_bounds(FitnessDelta{0.0}, SelectionParams{N, 0.7});
        EXPECT_EQ(b.lower, 0.0);
        EXPECT_GE(b.upper, 1.0 / N);
    }
}

TEST(FixationProperties, SelectionSuitePasses) {
    const auto s = verify_selection();
    for (const auto& c : s.checks) EXPECT_TRUE(c.passed) << c.name << ": " << c.detail;
}

TEST(FixationProperties, ThresholdValue) {
    EXPECT_NEAR(threshold_n_beta(256.0), 0.5 * std::log(2816.0), 1e-15);
    EXPECT_NEAR(threshold_n_beta(256.0), 3.97, 0.01);
}
