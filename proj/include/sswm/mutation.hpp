#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "sswm/bitstring.hpp"
#include "sswm/error.hpp"

namespace sswm {

enum class MutationKind {
    local,  // flip exactly one uniformly chosen bit
    global  // flip each bit independently with probability 1/n
};

[[nodiscard]] inline std::string_view to_string(MutationKind k) noexcept {
    return k == MutationKind::local ? "local" : "global";
}

[[nodiscard]] inline MutationKind parse_mutation_kind(std::string_view s) {
    if (s == "local") return MutationKind::local;
    if (s == "global") return MutationKind::global;
    throw parameter_error("unknown mutation kind '" + std::string(s) + "' (expected local|global)");
}

namespace detail {

inline double log_factorial(std::size_t m) {
    static const std::vector<double> table = [] {
        std::vector<double> t(1u << 15);
        t[0] = 0.0;
        for (std::size_t i = 1; i < t.size(); ++i) t[i] = std::lgamma(static_cast<double>(i) + 1.0);
        return t;
    }();
    return m < table.size() ? table[m] : std::lgamma(static_cast<double>(m) + 1.0);
}

inline double log_binomial(std::size_t n, std::size_t k) {
    return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

/// Neumaier's compensated summation.
class CompensatedSum {
public:
    void add(double v) noexcept {
        const double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v)) comp_ += (sum_ - t) + v;
        else comp_ += (v - t) + sum_;
        sum_ = t;
    }
    [[nodiscard]] double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

inline void check_counts(std::size_t n, std::size_t i, std::size_t j) {
    if (n == 0) throw domain_error("mutation: n must be positive");
    if (i > n || j > n)
        throw domain_error("mutation: ones-counts must lie in [0, n], got i=" + std::to_string(i) +
                           " j=" + std::to_string(j) + " n=" + std::to_string(n));
}

// P(global mutation moves i ones to i + k ones), k >= 0.
//
// Sum over l >= 0 of C(i,l) C(n-i,k+l) (1/n)^{k+2l} (1-1/n)^{n-k-2l}: l one-bits and
// k+l zero-bits flip. The l = 0 term is evaluated in log space, later terms by the
// ratio term(l+1)/term(l) = (i-l)(n-i-k-l) / ((l+1)(k+l+1)(n-1)^2).
inline double global_up(std::size_t n, std::size_t i, std::size_t k) {
    if (k > n - i) return 0.0;
    if (n == 1) return k == 1 ? 1.0 : 0.0;
    const double nd = static_cast<double>(n);
    const double log_q = std::log1p(-1.0 / nd);
    double term = std::exp(log_binomial(n - i, k) - static_cast<double>(k) * std::log(nd) +
                           static_cast<double>(n - k) * log_q);
    const double inv_sq = 1.0 / ((nd - 1.0) * (nd - 1.0));
    const std::size_t lmax = std::min(i, n - i - k);
    CompensatedSum sum;
    sum.add(term);
    for (std::size_t l = 0; l < lmax && term > 0.0; ++l) {
        term *= static_cast<double>(i - l) * static_cast<double>(n - i - k - l) /
                (static_cast<double>(l + 1) * static_cast<double>(k + l + 1)) * inv_sq;
        sum.add(term);
    }
    return sum.value();
}

} // namespace detail

/// Exact probability that one mutation of a point with i ones yields j ones.
/// Downward jumps use the symmetry mut(i, i-k) = mut(n-i, n-i+k).
[[nodiscard]] inline double mut_exact(std::size_t n, std::size_t i, std::size_t j, MutationKind kind) {
    detail::check_counts(n, i, j);
    if (kind == MutationKind::local) {
        const double nd = static_cast<double>(n);
        if (j == i + 1) return static_cast<double>(n - i) / nd;
        if (j + 1 == i) return static_cast<double>(i) / nd;
        return 0.0;
    }
    if (j >= i) return detail::global_up(n, i, j - i);
    return detail::global_up(n, n - i, i - j);
}

/// Row i of the ones-count jump kernel, mut(i, 0..n).
[[nodiscard]] inline std::vector<double> mut_row(std::size_t n, std::size_t i, MutationKind kind) {
    std::vector<double> row(n + 1, 0.0);
    for (std::size_t j = 0; j <= n; ++j) row[j] = mut_exact(n, i, j, kind);
    return row;
}

/// (n+1) x (n+1) row-major jump kernel.
[[nodiscard]] inline std::vector<double> mutation_matrix(std::size_t n, MutationKind kind) {
    std::vector<double> m((n + 1) * (n + 1), 0.0);
    for (std::size_t i = 0; i <= n; ++i)
        for (std::size_t j = 0; j <= n; ++j) m[i * (n + 1) + j] = mut_exact(n, i, j, kind);
    return m;
}

enum class JumpDirection { up, down };

/// Closed-form upper bound on mut(i, i +/- k) for global mutation:
///     ((n-i)/n)^k (1-1/n)^{n-k} * 1.14 / k!      (upward; mirrored with i/n downward)
[[nodiscard]] inline double mut_upper_bound(std::size_t n, std::size_t i, std::size_t k,
                                            JumpDirection dir = JumpDirection::up) {
    if (k == 0) throw domain_error("mut_upper_bound: jump length k must be positive");
    detail::check_counts(n, i, 0);
    const std::size_t movable = dir == JumpDirection::up ? n - i : i;
    if (movable == 0) return 0.0;
    if (k > n) return 0.0;
    const double nd = static_cast<double>(n);
    double log_stay;
    if (n == 1) log_stay = 0.0; // (1 - 1/n)^{n-k} with n = k = 1
    else log_stay = static_cast<double>(n - k) * std::log1p(-1.0 / nd);
    return std::exp(static_cast<double>(k) * std::log(static_cast<double>(movable) / nd) + log_stay +
                    std::log(1.14) - detail::log_factorial(k));
}

/// How global mutation draws its flip set. Both are distribution-identical.
enum class GlobalSampling {
    per_bit,             // n independent Bernoulli(1/n) draws
    count_then_positions // K ~ Binomial(n, 1/n) by table inversion, then K distinct uniform positions
};

/// Draws flip positions for one mutation of a length-n string.
class Mutator {
public:
    Mutator(std::size_t n, MutationKind kind, GlobalSampling sampling = GlobalSampling::count_then_positions)
        : n_(n), kind_(kind), sampling_(sampling), pick_(0, n == 0 ? 0 : n - 1) {
        if (n == 0) throw domain_error("Mutator: n must be positive");
        if (kind == MutationKind::global && sampling == GlobalSampling::count_then_positions) build_count_table();
    }

    [[nodiscard]] std::size_t size() const noexcept { return n_; }
    [[nodiscard]] MutationKind kind() const noexcept { return kind_; }

    /// Replaces `out` with the positions to flip (distinct, unordered).
    template <class Rng>
    void sample(Rng& rng, std::vector<std::size_t>& out) const {
        out.clear();
        if (kind_ == MutationKind::local) {
            out.push_back(pick_(rng));
            return;
        }
        if (sampling_ == GlobalSampling::per_bit) {
            const double p = 1.0 / static_cast<double>(n_);
            for (std::size_t i = 0; i < n_; ++i)
                if (unit_(rng) < p) out.push_back(i);
            return;
        }
        const double u = unit_(rng);
        const auto k = static_cast<std::size_t>(std::upper_bound(cdf_.begin(), cdf_.end(), u) - cdf_.begin());
        // Floyd's algorithm: k distinct positions, uniform over subsets.
        for (std::size_t j = n_ - k; j < n_; ++j) {
            const std::size_t t = std::uniform_int_distribution<std::size_t>(0, j)(rng);
            if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
            else out.push_back(j);
        }
    }

private:
    void build_count_table() {
        cdf_.resize(n_ + 1);
        double acc = 0.0;
        for (std::size_t k = 0; k <= n_; ++k) {
            acc += detail::global_up(n_, 0, k); // P(K = k) = P(0 ones -> k ones)
            cdf_[k] = acc;
        }
        cdf_.back() = 1.0;
        // Guard against u landing past a cdf that summed to slightly under 1.
        for (auto& c : cdf_) c = std::min(c, 1.0);
    }

    std::size_t n_;
    MutationKind kind_;
    GlobalSampling sampling_;
    std::vector<double> cdf_;
    mutable std::uniform_int_distribution<std::size_t> pick_;
    mutable std::uniform_real_distribution<double> unit_{0.0, 1.0};
};

/// Offspring of x under one mutation.
template <class Rng>
[[nodiscard]] BitString mutate(const BitString& x, MutationKind kind, Rng& rng) {
    const Mutator m(x.size(), kind);
    std::vector<std::size_t> flips;
    m.sample(rng, flips);
    BitString y = x;
    for (auto i : flips) y.flip(i);
    return y;
}

} // namespace sswm
