#pragma once

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "sswm/error.hpp"
#include "sswm/markov.hpp"
#include "sswm/mutation.hpp"
#include "sswm/oracles.hpp"
#include "sswm/selection.hpp"

namespace sswm {

struct CheckResult {
    std::string name;
    bool passed = true;
    std::size_t cases = 0;
    std::string detail; // first failing case
};

struct SuiteResult {
    std::string suite;
    std::vector<CheckResult> checks;
    [[nodiscard]] bool passed() const {
        return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
    }
};

namespace detail {

class CheckRecorder {
public:
    explicit CheckRecorder(std::string name) { r_.name = std::move(name); }
    template <class Describe>
    void expect(bool ok, Describe&& describe) {
        ++r_.cases;
        if (!ok && r_.passed) {
            r_.passed = false;
            r_.detail = describe();
        }
    }
    CheckResult done() { return std::move(r_); }

private:
    CheckResult r_;
};

inline std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

inline const std::vector<double>& beta_grid() {
    static const std::vector<double> g{1e-4, 1e-3, 1e-2, 1e-1, 1.0};
    return g;
}
inline const std::vector<double>& population_grid() {
    static const std::vector<double> g{1.0, 2.0, 10.0, 100.0, 1e4};
    return g;
}

} // namespace detail

/// Fixation-probability properties: bound sandwich, monotonicity, limits, continuity at 0.
[[nodiscard]] inline SuiteResult verify_selection() {
    using detail::fmt;
    SuiteResult suite{"selection", {}};
    constexpr double tol = 1e-12;

    detail::CheckRecorder sandwich("p_fix bound sandwich");
    detail::CheckRecorder monotone("p_fix strictly increasing for N>1");
    for (double beta : detail::beta_grid())
        for (double N : detail::population_grid()) {
            const SelectionParams sp{N, beta};
            double prev_p = -1.0, prev_log = -INFINITY;
            for (int k = -1000; k <= 1000; ++k) {
                const double df = k / 100.0;
                const double p = p_fix(FitnessDelta{df}, sp);
                const auto b = p_fix_bounds(FitnessDelta{df}, sp);
                const bool ok = b.lower - p <= tol * std::max(p, b.lower) && p - b.upper <= tol * std::max(p, b.upper);
                sandwich.expect(ok, [&] {
                    return "beta=" + fmt(beta) + " N=" + fmt(N) + " df=" + fmt(df) + ": " + fmt(b.lower) +
                           " <= " + fmt(p) + " <= " + fmt(b.upper);
                });
                if (N == 1.0) {
                    monotone.expect(p == 1.0, [&] { return "N=1 should give p=1 at df=" + fmt(df); });
                    continue;
                }
                // Strictness is checked on log p, which stays finite where p underflows.
                const double lp = log_p_fix(FitnessDelta{df}, sp);
                if (k > -1000) {
                    monotone.expect(p >= prev_p && lp > prev_log, [&] {
                        return "beta=" + fmt(beta) + " N=" + fmt(N) + " not increasing at df=" + fmt(df);
                    });
                }
                prev_p = p;
                prev_log = lp;
            }
        }
    suite.checks.push_back(sandwich.done());
    suite.checks.push_back(monotone.done());

    detail::CheckRecorder limits("p_fix limits at df=+-1000");
    const SelectionParams ten{10.0, 1.0};
    const double lo = p_fix(FitnessDelta{-1000.0}, ten), hi = p_fix(FitnessDelta{1000.0}, ten);
    limits.expect(lo >= 0.0 && lo < 1e-12, [&] { return "p(-1000)=" + fmt(lo); });
    limits.expect(hi <= 1.0 && 1.0 - hi < 1e-12, [&] { return "p(1000)=" + fmt(hi); });
    suite.checks.push_back(limits.done());

    detail::CheckRecorder cont("p_fix continuous at 0");
    for (double N : {2.0, 100.0})
        for (double df : {1e-9, -1e-9}) {
            const double p = p_fix(FitnessDelta{df}, SelectionParams{N, 1.0});
            cont.expect(std::abs(p - 1.0 / N) < 1e-6, [&] { return "N=" + fmt(N) + " df=" + fmt(df); });
        }
    suite.checks.push_back(cont.done());
    return suite;
}

/// Jump-kernel properties against mask enumeration and the closed-form bounds.
[[nodiscard]] inline SuiteResult verify_mutation() {
    using detail::fmt;
    SuiteResult suite{"mutation", {}};

    detail::CheckRecorder oracle("mut_exact == 2^n mask enumeration (n<=12)");
    for (std::size_t n = 1; n <= 12; ++n)
        for (std::size_t i = 0; i <= n; ++i) {
            const auto ref = oracle::enumerate_global_jumps(n, i);
            for (std::size_t j = 0; j <= n; ++j) {
                const double got = mut_exact(n, i, j, MutationKind::global);
                oracle.expect(std::abs(got - ref[j]) <= 1e-12, [&] {
                    return "n=" + std::to_string(n) + " i=" + std::to_string(i) + " j=" + std::to_string(j) +
                           ": " + fmt(got) + " vs " + fmt(ref[j]);
                });
            }
        }
    suite.checks.push_back(oracle.done());

    detail::CheckRecorder rows("rows sum to 1 (n<=200)");
    detail::CheckRecorder bound("upper bound 1.14/k! holds (n<=100)");
    detail::CheckRecorder decay("mut(i,i+k) >= 2 mut(i,i+k+1) (n<=100)");
    detail::CheckRecorder cond("conditional jump ratio >= 1/2 (n<=60)");
    for (std::size_t n = 1; n <= 200; ++n) {
        const std::size_t m = n + 1;
        for (MutationKind kind : {MutationKind::global, MutationKind::local}) {
            const auto K = mutation_matrix(n, kind);
            for (std::size_t i = 0; i <= n; ++i) {
                detail::CompensatedSum s;
                for (std::size_t j = 0; j <= n; ++j) s.add(K[i * m + j]);
                rows.expect(std::abs(s.value() - 1.0) <= 1e-10, [&] {
                    return std::string(to_string(kind)) + " n=" + std::to_string(n) + " i=" + std::to_string(i) +
                           " sum=" + fmt(s.value());
                });
            }
            if (kind != MutationKind::global || n > 100) continue;
            for (std::size_t i = 0; i <= n; ++i) {
                for (std::size_t k = 1; k <= n; ++k) {
                    const double up = i + k <= n ? K[i * m + i + k] : 0.0;
                    const double down = k <= i ? K[i * m + i - k] : 0.0;
                    const double bu = mut_upper_bound(n, i, k, JumpDirection::up);
                    const double bd = mut_upper_bound(n, i, k, JumpDirection::down);
                    bound.expect(up <= bu * (1.0 + 1e-12) && down <= bd * (1.0 + 1e-12), [&] {
                        return "n=" + std::to_string(n) + " i=" + std::to_string(i) + " k=" + std::to_string(k);
                    });
                    if (i + k <= n) {
                        const double next = i + k + 1 <= n ? K[i * m + i + k + 1] : 0.0;
                        decay.expect(up >= 2.0 * next * (1.0 - 1e-12), [&] {
                            return "n=" + std::to_string(n) + " i=" + std::to_string(i) + " k=" + std::to_string(k) +
                                   ": " + fmt(up) + " < 2*" + fmt(next);
                        });
                    }
                }
                if (n > 60) continue;
                for (std::size_t j = i + 1; j <= n; ++j) {
                    detail::CompensatedSum tail;
                    for (std::size_t t = j; t <= n; ++t) tail.add(K[i * m + t]);
                    const double ratio = K[i * m + j] / tail.value();
                    cond.expect(ratio >= 0.5 * (1.0 - 1e-12), [&] {
                        return "n=" + std::to_string(n) + " i=" + std::to_string(i) + " j=" + std::to_string(j) +
                               " ratio=" + fmt(ratio);
                    });
                }
            }
        }
    }
    suite.checks.push_back(rows.done());
    suite.checks.push_back(bound.done());
    suite.checks.push_back(decay.done());
    suite.checks.push_back(cond.done());
    return suite;
}

/// Forward/backward drift bounds of SSWM on OneMax for every n <= max_n, both
/// mutation kinds, over a grid of beta and N beta (including the ln(11n)/2 threshold).
[[nodiscard]] inline SuiteResult verify_drift(std::size_t max_n = 200) {
    using detail::fmt;
    SuiteResult suite{"drift", {}};
    detail::CheckRecorder bounds_check("SSWM OneMax drift bounds (n<=" + std::to_string(max_n) + ")");
    detail::CheckRecorder positive("positive drift at N beta >= ln(11n)/2");
    for (std::size_t n = 2; n <= max_n; ++n) {
        for (MutationKind kind : {MutationKind::global, MutationKind::local}) {
            const auto K = mutation_matrix(n, kind);
            for (double beta : {1e-3, 0.1, 0.5, 1.0}) {
                const double thr = threshold_n_beta(static_cast<double>(n));
                for (double nb : {beta, 1.0, thr}) {
                    if (nb < beta) continue; // N >= 1
                    AlgorithmConfig cfg;
                    cfg.algo = Algorithm::sswm;
                    cfg.mutation = kind;
                    cfg.selection = SelectionParams{nb / beta, beta};
                    cfg.problem = OneMax(n);
                    const auto rep = check_drift_bounds(build_chain(cfg, K));
                    const bool bounds_ok =
                        std::all_of(rep.states.begin(), rep.states.end(), [](const auto& s) { return s.pass; });
                    bounds_check.expect(bounds_ok, [&] {
                        for (const auto& s : rep.states)
                            if (!s.pass)
                                return std::string(to_string(kind)) + " n=" + std::to_string(n) + " beta=" + fmt(beta) +
                                       " Nbeta=" + fmt(nb) + " state " + std::to_string(s.state) +
                                       " fwd margin=" + fmt(s.forward_margin) + " bwd margin=" + fmt(s.backward_margin);
                        return std::string{};
                    });
                    if (rep.constant_checked)
                        positive.expect(rep.drift_constant > 0.0, [&] {
                            return std::string(to_string(kind)) + " n=" + std::to_string(n) + " beta=" + fmt(beta) +
                                   " c=" + fmt(rep.drift_constant);
                        });
                }
            }
        }
    }
    suite.checks.push_back(bounds_check.done());
    suite.checks.push_back(positive.done());
    return suite;
}

/// Suite names: selection, mutation, drift, all.
[[nodiscard]] inline std::vector<SuiteResult> run_verification(std::string_view which) {
    std::vector<SuiteResult> out;
    const bool all = which == "all";
    if (!all && which != "selection" && which != "mutation" && which != "drift")
        throw parameter_error("unknown verification suite '" + std::string(which) + "'");
    if (all || which == "selection") out.push_back(verify_selection());
    if (all || which == "mutation") out.push_back(verify_mutation());
    if (all || which == "drift") out.push_back(verify_drift());
    return out;
}

} // namespace sswm
