#pragma once

#include <concepts>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "sswm/bitstring.hpp"
#include "sswm/error.hpp"

namespace sswm {

/// Fitness in dimensionless units. Every value attainable by the three
/// benchmarks (integers, half-integers, n^3) is exact in a double.
using FitnessValue = double;

struct CliffParams {
    std::size_t d = 2;
};

inline void validate_cliff(std::size_t n, CliffParams p) {
    if (p.d < 2 || 2 * p.d > n)
        throw parameter_error("cliff: need 2 <= d <= n/2, got d=" + std::to_string(p.d) + " n=" + std::to_string(n));
}

inline void validate_balance(std::size_t n) {
    if (n == 0 || n % 2 != 0) throw parameter_error("balance: n must be even and positive, got " + std::to_string(n));
}

[[nodiscard]] inline FitnessValue onemax(const BitString& x) { return static_cast<double>(x.count()); }

[[nodiscard]] inline FitnessValue cliff_level(std::size_t n, std::size_t d, std::size_t ones) noexcept {
    if (ones + d <= n) return static_cast<double>(ones);
    return static_cast<double>(ones) - static_cast<double>(d) + 0.5;
}

[[nodiscard]] inline FitnessValue cliff(const BitString& x, CliffParams p) {
    validate_cliff(x.size(), p);
    return cliff_level(x.size(), p.d, x.count());
}

[[nodiscard]] inline std::size_t leading_ones(const BitString& a) { return a.leading_ones(0, a.size()); }

/// The four ordered cases of Balance. Order matters: the first match wins.
enum class BalanceBranch { optimum = 1, gradient = 2, trap = 3, zero = 4 };

/// Summary of x = ab that Balance depends on.
struct BalanceParts {
    std::size_t lo_a = 0;   // leading ones of a
    std::size_t zeros_a = 0;
    std::size_t ones_b = 0;
};

[[nodiscard]] inline BalanceParts balance_parts(const BitString& x) {
    const std::size_t h = x.size() / 2;
    return {x.leading_ones(0, h), h - x.count(0, h), x.count(h, x.size())};
}

/// n/16 < |b|_1 < 7n/16, evaluated exactly in integers.
[[nodiscard]] inline bool balance_in_window(std::size_t n, std::size_t ones_b) noexcept {
    return 16 * ones_b > n && 16 * ones_b < 7 * n;
}

[[nodiscard]] inline BalanceBranch balance_branch(std::size_t n, const BalanceParts& p) noexcept {
    if (2 * p.lo_a == n) return BalanceBranch::optimum;
    if (balance_in_window(n, p.ones_b)) return BalanceBranch::gradient;
    // zeros(a) > sqrt(n) <=> zeros(a)^2 > n; strict, so zeros == sqrt(n) is not a trap.
    if (p.zeros_a * p.zeros_a > n) return BalanceBranch::trap;
    return BalanceBranch::zero;
}

[[nodiscard]] inline FitnessValue balance_value(std::size_t n, const BalanceParts& p) noexcept {
    const double nd = static_cast<double>(n);
    switch (balance_branch(n, p)) {
    case BalanceBranch::optimum: return nd * nd * nd;
    case BalanceBranch::gradient: return static_cast<double>(p.ones_b) + nd * static_cast<double>(p.lo_a);
    case BalanceBranch::trap: return nd * nd * static_cast<double>(p.lo_a);
    case BalanceBranch::zero: break;
    }
    return 0.0;
}

[[nodiscard]] inline FitnessValue balance(const BitString& x) {
    validate_balance(x.size());
    return balance_value(x.size(), balance_parts(x));
}

// Problem bindings used by the dynamics and the exact chain.

class OneMax {
public:
    explicit OneMax(std::size_t n) : n_(n) {
        if (n == 0) throw parameter_error("onemax: n must be positive");
    }
    [[nodiscard]] std::size_t size() const noexcept { return n_; }
    [[nodiscard]] static constexpr std::string_view name() noexcept { return "onemax"; }
    [[nodiscard]] FitnessValue operator()(const BitString& x) const { return onemax(x); }
    [[nodiscard]] FitnessValue level(std::size_t ones) const noexcept { return static_cast<double>(ones); }
    [[nodiscard]] FitnessValue optimum_value() const noexcept { return static_cast<double>(n_); }

private:
    std::size_t n_;
};

class Cliff {
public:
    Cliff(std::size_t n, CliffParams p) : n_(n), d_(p.d) { validate_cliff(n, p); }
    [[nodiscard]] std::size_t size() const noexcept { return n_; }
    [[nodiscard]] std::size_t d() const noexcept { return d_; }
    [[nodiscard]] static constexpr std::string_view name() noexcept { return "cliff"; }
    [[nodiscard]] FitnessValue operator()(const BitString& x) const { return cliff_level(n_, d_, x.count()); }
    [[nodiscard]] FitnessValue level(std::size_t ones) const noexcept { return cliff_level(n_, d_, ones); }
    [[nodiscard]] FitnessValue optimum_value() const noexcept { return cliff_level(n_, d_, n_); }

private:
    std::size_t n_;
    std::size_t d_;
};

class Balance {
public:
    explicit Balance(std::size_t n) : n_(n) { validate_balance(n); }
    [[nodiscard]] std::size_t size() const noexcept { return n_; }
    [[nodiscard]] static constexpr std::string_view name() noexcept { return "balance"; }
    [[nodiscard]] FitnessValue operator()(const BitString& x) const { return balance_value(n_, balance_parts(x)); }
    [[nodiscard]] FitnessValue optimum_value() const noexcept {
        const double nd = static_cast<double>(n_);
        return nd * nd * nd;
    }

private:
    std::size_t n_;
};

/// Fitness depends on x only through |x|_1.
template <class P>
concept LevelReducible = requires(const P& p, std::size_t i) {
    { p.level(i) } -> std::convertible_to<FitnessValue>;
};

using Problem = std::variant<OneMax, Cliff, Balance>;

/// Binds a selector name (`onemax`, `cliff`, `balance`) to a problem of size n.
[[nodiscard]] inline Problem make_problem(std::string_view name, std::size_t n, std::optional<std::size_t> d = {}) {
    if (name == "onemax") return OneMax(n);
    if (name == "cliff") {
        if (!d) throw parameter_error("cliff requires d");
        return Cliff(n, CliffParams{*d});
    }
    if (name == "balance") return Balance(n);
    throw parameter_error("unknown fitness '" + std::string(name) + "'");
}

[[nodiscard]] inline std::string_view problem_name(const Problem& p) {
    return std::visit([](const auto& q) { return q.name(); }, p);
}
[[nodiscard]] inline std::size_t problem_size(const Problem& p) {
    return std::visit([](const auto& q) { return q.size(); }, p);
}
[[nodiscard]] inline std::size_t problem_d(const Problem& p) {
    if (const auto* c = std::get_if<Cliff>(&p)) return c->d();
    return 0;
}
[[nodiscard]] inline FitnessValue evaluate(const Problem& p, const BitString& x) {
    return std::visit([&](const auto& q) { return q(x); }, p);
}

} // namespace sswm
