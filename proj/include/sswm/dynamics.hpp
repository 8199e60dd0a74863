#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "sswm/bitstring.hpp"
#include "sswm/error.hpp"
#include "sswm/fitness.hpp"
#include "sswm/mutation.hpp"
#include "sswm/random.hpp"
#include "sswm/selection.hpp"

namespace sswm {

enum class Algorithm {
    sswm, // accept with probability p_fix(df)
    ea    // (1+1) EA: accept iff df >= 0
};

[[nodiscard]] inline std::string_view to_string(Algorithm a) noexcept { return a == Algorithm::sswm ? "sswm" : "ea"; }

[[nodiscard]] inline Algorithm parse_algorithm(std::string_view s) {
    if (s == "sswm") return Algorithm::sswm;
    if (s == "ea") return Algorithm::ea;
    throw parameter_error("unknown algorithm '" + std::string(s) + "' (expected sswm|ea)");
}

struct AlgorithmConfig {
    Algorithm algo = Algorithm::sswm;
    MutationKind mutation = MutationKind::global;
    SelectionParams selection{}; // ignored by the EA
    Problem problem = OneMax(1);

    void validate() const {
        if (algo == Algorithm::sswm) selection.validate();
    }
};

/// Instrumentation of one Balance run. Counts refer to generations of that run.
struct BalanceTrajectoryStats {
    std::uint64_t lo_decrease_events = 0;    // accepted steps with LO(a) dropping
    std::uint64_t lo_decrease_in_window = 0; // ... where parent and offspring both had n/16 < |b|_1 < 7n/16
    std::uint64_t relevant_steps = 0;        // steps flipping no leading one of a (every local step)
    std::size_t initial_ones_b = 0;
    bool initial_outside_window = false;
    std::size_t max_ones_b = 0;
    std::size_t min_ones_b = 0;
    bool hit_trap = false; // current point scored n^2 LO(a)
    bool hit_zero = false; // current point scored 0
};

struct RunResult {
    bool success = false;
    std::uint64_t generations = 0;
    FitnessValue final_fitness = 0.0;
    std::optional<BalanceTrajectoryStats> trajectory;
};

/// Selection step. Draws one uniform only when 0 < p_fix < 1, so that with
/// N == 1 the random stream is exactly that of an unfiltered mutation walk.
template <class Rng>
[[nodiscard]] bool accept(FitnessDelta delta, const AlgorithmConfig& config, Rng& rng) {
    if (config.algo == Algorithm::ea) return delta.value >= 0.0;
    const double p = p_fix(delta, config.selection);
    if (p >= 1.0) return true;
    if (p <= 0.0) return false;
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
}

/// One generation as seen by an observer.
struct StepEvent {
    std::uint64_t generation;
    FitnessValue current_fitness; // after the selection step
    bool accepted;
    std::size_t flips;
};

struct NoObserver {
    void operator()(const StepEvent&) const noexcept {}
};

namespace detail {

template <class Rng>
class Acceptor {
public:
    Acceptor(const AlgorithmConfig& c, std::size_t n) : sswm_(c.algo == Algorithm::sswm), sel_(c.selection) {
        if (sswm_) cache_.assign(4 * n + 1, -1.0);
        offset_ = static_cast<long>(2 * n);
    }

    // `cacheable` when 2*df is an integer in [-2n, 2n] (OneMax and Cliff).
    bool operator()(double df, bool cacheable, Rng& rng) {
        if (!sswm_) return df >= 0.0;
        double p;
        if (cacheable) {
            auto& slot = cache_[static_cast<std::size_t>(static_cast<long>(2.0 * df) + offset_)];
            if (slot < 0.0) slot = p_fix_unchecked(df, sel_.N, sel_.beta);
            p = slot;
        } else {
            p = p_fix_unchecked(df, sel_.N, sel_.beta);
        }
        if (p >= 1.0) return true;
        if (p <= 0.0) return false;
        return unit_(rng) < p;
    }

private:
    bool sswm_;
    SelectionParams sel_;
    std::vector<double> cache_;
    long offset_ = 0;
    std::uniform_real_distribution<double> unit_{0.0, 1.0};
};

inline void note_balance_point(BalanceTrajectoryStats& s, std::size_t n, const BalanceParts& p) {
    s.max_ones_b = std::max(s.max_ones_b, p.ones_b);
    s.min_ones_b = std::min(s.min_ones_b, p.ones_b);
    const auto br = balance_branch(n, p);
    if (br == BalanceBranch::trap) s.hit_trap = true;
    if (br == BalanceBranch::zero) s.hit_zero = true;
}

template <class P, class Observer>
RunResult run_on(const P& problem, const AlgorithmConfig& config, std::uint64_t budget, std::uint64_t seed,
                 const std::optional<BitString>& initial, Observer& observe) {
    config.validate();
    const std::size_t n = problem.size();
    Rng rng(seed);
    BitString x = initial ? *initial : BitString::random(n, rng);
    if (x.size() != n)
        throw parameter_error("initial point has length " + std::to_string(x.size()) + ", problem has n=" +
                              std::to_string(n));

    const Mutator mutator(n, config.mutation);
    Acceptor<Rng> acceptor(config, n);
    std::vector<std::size_t> flips;
    flips.reserve(16);
    const FitnessValue optimum = problem.optimum_value();

    RunResult result;
    if constexpr (LevelReducible<P>) {
        std::size_t ones = x.count();
        FitnessValue fx = problem.level(ones);
        if (fx == optimum) return {true, 0, fx, std::nullopt};
        for (std::uint64_t g = 1; g <= budget; ++g) {
            mutator.sample(rng, flips);
            bool accepted = false;
            if (!flips.empty()) {
                long delta_ones = 0;
                for (auto i : flips) delta_ones += x.test(i) ? -1 : 1;
                const std::size_t ones_y = static_cast<std::size_t>(static_cast<long>(ones) + delta_ones);
                const FitnessValue fy = problem.level(ones_y);
                accepted = acceptor(fy - fx, true, rng);
                if (accepted) {
                    for (auto i : flips) x.flip(i);
                    ones = ones_y;
                    fx = fy;
                }
            }
            observe(StepEvent{g, fx, accepted, flips.size()});
            if (accepted && fx == optimum) return {true, g, fx, std::nullopt};
        }
        return {false, budget, fx, std::nullopt};
    } else {
        BalanceParts parts = balance_parts(x);
        FitnessValue fx = balance_value(n, parts);
        BalanceTrajectoryStats stats;
        stats.initial_ones_b = stats.max_ones_b = stats.min_ones_b = parts.ones_b;
        stats.initial_outside_window = !balance_in_window(n, parts.ones_b);
        note_balance_point(stats, n, parts);
        if (fx == optimum) return {true, 0, fx, stats};
        for (std::uint64_t g = 1; g <= budget; ++g) {
            mutator.sample(rng, flips);
            bool relevant = true;
            if (config.mutation == MutationKind::global)
                for (auto i : flips)
                    if (i < parts.lo_a) relevant = false;
            if (relevant) ++stats.relevant_steps;

            bool accepted = false;
            if (!flips.empty()) {
                for (auto i : flips) x.flip(i);
                const BalanceParts next = balance_parts(x);
                const FitnessValue fy = balance_value(n, next);
                accepted = acceptor(fy - fx, false, rng);
                if (accepted) {
                    if (next.lo_a < parts.lo_a) {
                        ++stats.lo_decrease_events;
                        if (balance_in_window(n, parts.ones_b) && balance_in_window(n, next.ones_b))
                            ++stats.lo_decrease_in_window;
                    }
                    parts = next;
                    fx = fy;
                    note_balance_point(stats, n, parts);
                } else {
                    for (auto i : flips) x.flip(i);
                }
            }
            observe(StepEvent{g, fx, accepted, flips.size()});
            if (accepted && fx == optimum) return {true, g, fx, stats};
        }
        return {false, budget, fx, stats};
    }
}

} // namespace detail

/// One run of SSWM or the (1+1) EA.
///
/// Generation 0 is the initial point (uniform unless `initial` is given); every
/// mutate-then-select step is one generation. The run stops at the first
/// generation whose *accepted* point is a global optimum, or after `budget`
/// generations. An offspring identical to its parent still costs a generation.
template <class Observer = NoObserver>
[[nodiscard]] RunResult run(const AlgorithmConfig& config, std::uint64_t budget, std::uint64_t seed,
                            const std::optional<BitString>& initial = std::nullopt, Observer&& observe = {}) {
    return std::visit(
        [&](const auto& problem) { return detail::run_on(problem, config, budget, seed, initial, observe); },
        config.problem);
}

} // namespace sswm
