#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <deque>
#include <limits>
#include <string>
#include <vector>

#include "sswm/dynamics.hpp"
#include "sswm/error.hpp"
#include "sswm/fitness.hpp"
#include "sswm/mutation.hpp"
#include "sswm/selection.hpp"

namespace sswm {

/// Exact transition structure of the ones-count for a level-reducible problem.
///
/// P[i][j] = mut(i, j) * accept(f(j) - f(i)) for j != i, P[i][i] takes the rest
/// (unchanged offspring plus rejections; the two are not distinguished).
/// Optimal states are absorbing.
struct OnesLatticeChain {
    std::size_t n = 0;
    AlgorithmConfig config;
    std::vector<double> P;             // (n+1) x (n+1), row-major
    std::vector<double> leave;         // sum_{j != i} P[i][j], kept separately to avoid 1 - P[i][i] cancellation
    std::vector<double> level_fitness; // f at each ones-count
    std::vector<char> absorbing;

    [[nodiscard]] std::size_t states() const noexcept { return n + 1; }
    [[nodiscard]] double operator()(std::size_t i, std::size_t j) const noexcept { return P[i * (n + 1) + j]; }
};

namespace detail {

inline double acceptance_probability(const AlgorithmConfig& c, double df) {
    if (c.algo == Algorithm::ea) return df >= 0.0 ? 1.0 : 0.0;
    return p_fix(FitnessDelta{df}, c.selection);
}

template <class P>
OnesLatticeChain assemble_chain(const P& problem, const AlgorithmConfig& config, const std::vector<double>& kernel) {
    const std::size_t n = problem.size();
    const std::size_t m = n + 1;
    if (kernel.size() != m * m) throw domain_error("build_chain: mutation kernel has wrong size");
    OnesLatticeChain c;
    c.n = n;
    c.config = config;
    c.P.assign(m * m, 0.0);
    c.leave.assign(m, 0.0);
    c.level_fitness.resize(m);
    c.absorbing.assign(m, 0);
    for (std::size_t i = 0; i < m; ++i) c.level_fitness[i] = problem.level(i);
    const double opt = problem.optimum_value();
    for (std::size_t i = 0; i < m; ++i) {
        if (c.level_fitness[i] == opt) {
            c.absorbing[i] = 1;
            c.P[i * m + i] = 1.0;
            continue;
        }
        CompensatedSum out;
        for (std::size_t j = 0; j < m; ++j) {
            if (j == i) continue;
            const double pj = kernel[i * m + j] * acceptance_probability(config, c.level_fitness[j] - c.level_fitness[i]);
            c.P[i * m + j] = pj;
            out.add(pj);
        }
        c.leave[i] = out.value();
        c.P[i * m + i] = 1.0 - c.leave[i];
    }
    return c;
}

} // namespace detail

/// Builds the chain from a precomputed mutation kernel (see mutation_matrix).
[[nodiscard]] inline OnesLatticeChain build_chain(const AlgorithmConfig& config, const std::vector<double>& kernel) {
    config.validate();
    return std::visit(
        [&](const auto& problem) -> OnesLatticeChain {
            using P = std::decay_t<decltype(problem)>;
            if constexpr (LevelReducible<P>) {
                return detail::assemble_chain(problem, config, kernel);
            } else {
                throw unsupported_problem(std::string(problem.name()) +
                                          " is not level-reducible; no exact ones-count chain");
            }
        },
        config.problem);
}

[[nodiscard]] inline OnesLatticeChain build_chain(const AlgorithmConfig& config) {
    if (std::holds_alternative<Balance>(config.problem))
        throw unsupported_problem("balance is not level-reducible; no exact ones-count chain");
    return build_chain(config, mutation_matrix(problem_size(config.problem), config.mutation));
}

/// Expected generations until absorption from every start state (0 on absorbing states).
///
/// Solves (I - Q) t = 1 over the transient states by Gaussian elimination with
/// partial pivoting, then checks ||(I - Q) t - 1||_inf <= 1e-8 ||t||_inf.
[[nodiscard]] inline std::vector<double> expected_hitting_times(const OnesLatticeChain& chain) {
    const std::size_t m = chain.states();

    // Every state must reach an absorbing one: reverse BFS from the absorbing set.
    std::vector<char> reaches(chain.absorbing.begin(), chain.absorbing.end());
    std::deque<std::size_t> queue;
    for (std::size_t i = 0; i < m; ++i)
        if (reaches[i]) queue.push_back(i);
    if (queue.empty()) throw structural_error("chain has no absorbing (optimal) state");
    while (!queue.empty()) {
        const std::size_t j = queue.front();
        queue.pop_front();
        for (std::size_t i = 0; i < m; ++i)
            if (!reaches[i] && i != j && chain(i, j) > 0.0) {
                reaches[i] = 1;
                queue.push_back(i);
            }
    }
    for (std::size_t i = 0; i < m; ++i)
        if (!reaches[i]) throw structural_error("optimum unreachable from state " + std::to_string(i));

    std::vector<std::size_t> transient;
    for (std::size_t i = 0; i < m; ++i)
        if (!chain.absorbing[i]) transient.push_back(i);
    const std::size_t k = transient.size();
    std::vector<double> t(m, 0.0);
    if (k == 0) return t;

    std::vector<double> A(k * k, 0.0);
    for (std::size_t a = 0; a < k; ++a) {
        const std::size_t i = transient[a];
        for (std::size_t b = 0; b < k; ++b) A[a * k + b] = a == b ? chain.leave[i] : -chain(i, transient[b]);
    }
    const std::vector<double> A0 = A;
    std::vector<double> rhs(k, 1.0);

    for (std::size_t col = 0; col < k; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < k; ++r)
            if (std::abs(A[r * k + col]) > std::abs(A[piv * k + col])) piv = r;
        if (!(std::abs(A[piv * k + col]) > std::numeric_limits<double>::min()))
            throw numerical_error("expected_hitting_times: singular system at column " + std::to_string(col));
        if (piv != col) {
            for (std::size_t c = 0; c < k; ++c) std::swap(A[col * k + c], A[piv * k + c]);
            std::swap(rhs[col], rhs[piv]);
        }
        const double d = A[col * k + col];
        for (std::size_t r = col + 1; r < k; ++r) {
            const double f = A[r * k + col] / d;
            if (f == 0.0) continue;
            for (std::size_t c = col; c < k; ++c) A[r * k + c] -= f * A[col * k + c];
            rhs[r] -= f * rhs[col];
        }
    }
    std::vector<double> sol(k, 0.0);
    for (std::size_t a = k; a-- > 0;) {
        detail::CompensatedSum s;
        s.add(rhs[a]);
        for (std::size_t c = a + 1; c < k; ++c) s.add(-A[a * k + c] * sol[c]);
        sol[a] = s.value() / A[a * k + a];
    }

    double resid = 0.0, norm = 0.0;
    for (std::size_t a = 0; a < k; ++a) {
        detail::CompensatedSum s;
        for (std::size_t b = 0; b < k; ++b) s.add(A0[a * k + b] * sol[b]);
        resid = std::max(resid, std::abs(s.value() - 1.0));
        norm = std::max(norm, std::abs(sol[a]));
    }
    if (!std::isfinite(norm) || resid > 1e-8 * norm)
        throw numerical_error("expected_hitting_times: residual " + std::to_string(resid) + " exceeds tolerance");

    for (std::size_t a = 0; a < k; ++a) t[transient[a]] = sol[a];
    return t;
}

/// Average of `times` under a uniformly random initial string (Binomial(n, 1/2) ones).
[[nodiscard]] inline double uniform_start_average(const std::vector<double>& times) {
    const std::size_t n = times.size() - 1;
    detail::CompensatedSum s;
    for (std::size_t i = 0; i <= n; ++i)
        s.add(std::exp(detail::log_binomial(n, i) - static_cast<double>(n) * std::log(2.0)) * times[i]);
    return s.value();
}

struct DriftProfile {
    std::vector<double> delta_plus;  // sum_{j > i} (j - i) P[i][j]
    std::vector<double> delta_minus; // sum_{j < i} (j - i) P[i][j], <= 0
    std::vector<double> delta;       // delta_plus + delta_minus
    std::vector<double> self_loop;   // P[i][i]
};

[[nodiscard]] inline DriftProfile drift_profile(const OnesLatticeChain& chain) {
    const std::size_t m = chain.states();
    DriftProfile d;
    d.delta_plus.assign(m, 0.0);
    d.delta_minus.assign(m, 0.0);
    d.delta.assign(m, 0.0);
    d.self_loop.assign(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        detail::CompensatedSum up, down;
        for (std::size_t j = i + 1; j < m; ++j) up.add(static_cast<double>(j - i) * chain(i, j));
        for (std::size_t j = 0; j < i; ++j) down.add(-static_cast<double>(i - j) * chain(i, j));
        d.delta_plus[i] = up.value();
        d.delta_minus[i] = down.value();
        d.delta[i] = d.delta_plus[i] + d.delta_minus[i];
        d.self_loop[i] = chain(i, i);
    }
    return d;
}

/// Per-state outcome of the forward/backward drift bounds on OneMax.
struct DriftBoundCheck {
    std::size_t state = 0;
    double delta_plus = 0.0;
    double delta_minus = 0.0;
    double forward_bound = 0.0;  // lower bound on delta_plus (equality for local mutation)
    double backward_bound = 0.0; // upper bound on |delta_minus|
    double forward_margin = 0.0; // >= 0 when satisfied (for local: -|delta_plus - bound|)
    double backward_margin = 0.0;
    bool pass = false;
};

struct DriftBoundsReport {
    bool applicable = false;
    std::string skip_reason;
    std::vector<DriftBoundCheck> states;
    // Smallest c with Delta(i) >= c * beta (n - i)/n over transient states; only
    // computed when N beta >= ln(11n)/2.
    bool constant_checked = false;
    double drift_constant = 0.0;
    bool all_pass = false;
};

/// Checks the SSWM-on-OneMax drift bounds at every transient state:
///   global: Delta+(i) >= (n-i)/n (1-1/n)^{n-1} p(1)
///           |Delta-(i)| <= 1.14 (1-1/n)^{n-1} (p(-1) + e p(-2))
///   local:  Delta+(i) == (n-i)/n p(1),  |Delta-(i)| <= p(-1)
[[nodiscard]] inline DriftBoundsReport check_drift_bounds(const OnesLatticeChain& chain) {
    DriftBoundsReport rep;
    const auto& cfg = chain.config;
    if (cfg.algo != Algorithm::sswm) {
        rep.skip_reason = "drift bounds concern SSWM only";
        rep.all_pass = true;
        return rep;
    }
    if (!std::holds_alternative<OneMax>(cfg.problem)) {
        rep.skip_reason = "drift bounds concern onemax only";
        rep.all_pass = true;
        return rep;
    }
    rep.applicable = true;
    const std::size_t n = chain.n;
    const double nd = static_cast<double>(n);
    const auto& sel = cfg.selection;
    const double p1 = p_fix(FitnessDelta{1.0}, sel);
    const double pm1 = p_fix(FitnessDelta{-1.0}, sel);
    const double pm2 = p_fix(FitnessDelta{-2.0}, sel);
    const double stay = std::pow(1.0 - 1.0 / nd, nd - 1.0);
    const bool global = cfg.mutation == MutationKind::global;
    const DriftProfile prof = drift_profile(chain);
    constexpr double rel_tol = 1e-12;

    rep.all_pass = true;
    const bool check_c = sel.n_beta() >= threshold_n_beta(nd) * (1.0 - 1e-12);
    double c_min = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i <= n; ++i) {
        if (chain.absorbing[i]) continue;
        DriftBoundCheck s;
        s.state = i;
        s.delta_plus = prof.delta_plus[i];
        s.delta_minus = prof.delta_minus[i];
        const double frac = static_cast<double>(n - i) / nd;
        s.forward_bound = global ? frac * stay * p1 : frac * p1;
        s.backward_bound = global ? 1.14 * stay * (pm1 + std::exp(1.0) * pm2) : pm1;
        const double ftol = rel_tol * std::max(std::abs(s.forward_bound), std::abs(s.delta_plus)) + 1e-300;
        const double btol = rel_tol * std::max(std::abs(s.backward_bound), std::abs(s.delta_minus)) + 1e-300;
        s.forward_margin = global ? s.delta_plus - s.forward_bound : -std::abs(s.delta_plus - s.forward_bound);
        s.backward_margin = s.backward_bound - std::abs(s.delta_minus);
        s.pass = s.forward_margin >= -ftol && s.backward_margin >= -btol;
        rep.all_pass = rep.all_pass && s.pass;
        if (check_c) c_min = std::min(c_min, prof.delta[i] / (sel.beta * frac));
        rep.states.push_back(s);
    }
    if (check_c) {
        rep.constant_checked = true;
        rep.drift_constant = c_min;
        rep.all_pass = rep.all_pass && c_min > 0.0;
    }
    return rep;
}

/// Distance function for negative-drift checks: zeros-count (distance to the
/// all-ones optimum) or ones-count.
enum class DriftOrientation { zeros, ones };

struct NegativeDriftQuery {
    std::size_t a = 1;
    std::size_t b = 2;
    double epsilon = 0.1;
    double r = 2.0;
    double delta = 1.0;
    DriftOrientation orientation = DriftOrientation::zeros;
};

struct NegativeDriftState {
    std::size_t distance = 0;
    std::size_t state = 0; // ones-count
    double self_loop = 0.0;
    double drift_toward_zero = 0.0; // E[k - X_{t+1} | X_t = k]
    double drift_margin = 0.0;      // -eps (1 - p_kk) - drift; > 0 when satisfied
    double jump_margin = 0.0;       // min_d r(1-p_kk)/(1+delta)^d - p_{k,k+-d}; >= 0 when satisfied
    bool drift_ok = false;
    bool jumps_ok = false;
};

struct NegativeDriftReport {
    std::vector<NegativeDriftState> states;
    bool drift_condition = false;
    bool jump_condition = false;
    [[nodiscard]] bool holds() const noexcept { return drift_condition && jump_condition; }
};

/// Tests the hypotheses of the negative-drift theorem with self-loops on the
/// distance interval [a, b]:
///   E[k - X_{t+1} | X_t = k] < -eps (1 - p_kk)
///   p_{k,k-d}, p_{k,k+d} <= r (1 - p_kk) / (1 + delta)^d    for all d >= 1.
/// Reports hypothesis satisfaction only, never a time bound.
[[nodiscard]] inline NegativeDriftReport check_negative_drift(const OnesLatticeChain& chain,
                                                              const NegativeDriftQuery& q) {
    if (!(q.epsilon > 0.0)) throw domain_error("check_negative_drift: epsilon must be > 0");
    if (!(q.r > 0.0)) throw domain_error("check_negative_drift: r must be > 0");
    if (!(q.delta > 0.0)) throw domain_error("check_negative_drift: delta must be > 0");
    if (!(0 < q.a && q.a < q.b && q.b <= chain.n))
        throw domain_error("check_negative_drift: need 0 < a < b <= n");

    const std::size_t n = chain.n;
    const bool zeros = q.orientation == DriftOrientation::zeros;
    auto state_of = [&](std::size_t dist) { return zeros ? n - dist : dist; };

    NegativeDriftReport rep;
    rep.drift_condition = rep.jump_condition = true;
    for (std::size_t k = q.a; k <= q.b; ++k) {
        NegativeDriftState s;
        s.distance = k;
        s.state = state_of(k);
        s.self_loop = chain(s.state, s.state);
        const double escape = chain.leave[s.state];
        detail::CompensatedSum drift;
        double jump_margin = std::numeric_limits<double>::infinity();
        for (std::size_t dist = 0; dist <= n; ++dist) {
            if (dist == k) continue;
            const double p = chain(s.state, state_of(dist));
            drift.add((static_cast<double>(k) - static_cast<double>(dist)) * p);
            const std::size_t d = dist > k ? dist - k : k - dist;
            const double cap = q.r * escape / std::pow(1.0 + q.delta, static_cast<double>(d));
            jump_margin = std::min(jump_margin, cap - p);
        }
        s.drift_toward_zero = drift.value();
        s.drift_margin = -q.epsilon * escape - s.drift_toward_zero;
        s.jump_margin = jump_margin;
        s.drift_ok = s.drift_margin > 0.0;
        s.jumps_ok = s.jump_margin >= 0.0;
        rep.drift_condition = rep.drift_condition && s.drift_ok;
        rep.jump_condition = rep.jump_condition && s.jumps_ok;
        rep.states.push_back(s);
    }
    return rep;
}

} // namespace sswm
