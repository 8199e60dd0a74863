// Acceptance gate: one line per criterion, non-zero exit if any fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "sswm/budget_expr.hpp"
#include "sswm/experiments.hpp"
#include "sswm/markov.hpp"
#include "sswm/stats.hpp"
#include "sswm/verify.hpp"

using namespace sswm;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

AlgorithmConfig make(Algorithm a, MutationKind m, Problem p, double nbeta = 1.0, double beta = 1.0) {
    AlgorithmConfig c;
    c.algo = a;
    c.mutation = m;
    c.problem = std::move(p);
    c.selection = SelectionParams{nbeta / beta, beta};
    return c;
}

double threshold(std::size_t n) { return threshold_n_beta(static_cast<double>(n)); }

double hitting_from_zero(const AlgorithmConfig& c) { return expected_hitting_times(build_chain(c))[0]; }

Outcome onemax_scaling() {
    std::vector<ScalingPoint> pts;
    std::ostringstream d;
    for (std::size_t n : {64u, 128u, 256u, 512u}) {
        const auto cfg = make(Algorithm::sswm, MutationKind::global, OneMax(n), threshold(n));
        const auto budget = BudgetExpression::parse("1000*n*ln(n)").budget(n);
        const auto s = summarize(run_trials(cfg, 200, budget, 1001 + n));
        if (s.successes != s.trials) d << "n=" << n << " successes=" << s.successes << "/200; ";
        pts.push_back({static_cast<double>(n), s.median});
    }
    const auto fit = scaling_fit(pts, GrowthModel::n_log_n());
    d << "slope=" << fit.slope << " r2=" << fit.r_squared;
    return {fit.slope >= 0.85 && fit.slope <= 1.15 && fit.r_squared >= 0.98, d.str()};
}

Outcome phase_transition() {
    const std::size_t n = 256, trials = 100;
    const auto budget = BudgetExpression::parse("50*n*ln(n)").budget(n);
    const auto above = summarize(
        run_trials(make(Algorithm::sswm, MutationKind::global, OneMax(n), threshold(n)), trials, budget, 2001));
    const auto below = summarize(run_trials(
        make(Algorithm::sswm, MutationKind::global, OneMax(n), 0.25 * std::log(static_cast<double>(n))), trials,
        budget, 2002));
    const std::size_t band = binomial_upper_band(trials, 0.05, 0.99);
    std::ostringstream d;
    d << "rate at threshold=" << above.success_rate << " successes below=" << below.successes << " (band " << band
      << ")";
    return {above.success_rate >= 0.95 && below.successes <= band, d.str()};
}

Outcome beta_dependence() {
    const std::size_t n = 64;
    const double nb = threshold(n);
    std::vector<double> t;
    for (double beta : {0.25, 0.5, 1.0})
        t.push_back(hitting_from_zero(make(Algorithm::sswm, MutationKind::global, OneMax(n), nb, beta)));
    const double ratio = t[1] / t[2];
    const bool monotone = t[0] >= t[1] && t[1] >= t[2];
    std::ostringstream d;
    d << "T(0.25)=" << t[0] << " T(0.5)=" << t[1] << " T(1)=" << t[2] << " ratio=" << ratio
      << (monotone ? " monotone" : " not monotone");
    return {ratio >= 1.5 && ratio <= 2.5 && monotone, d.str()};
}

std::vector<double> cliff_times(Algorithm a) {
    const std::size_t n = 30;
    std::vector<double> t;
    for (std::size_t d = 3; d <= 6; ++d)
        t.push_back(hitting_from_zero(make(a, MutationKind::global, Cliff(n, CliffParams{d}), threshold(n), 1.0)));
    return t;
}

Outcome cliff_ea_growth() {
    const double n = 30;
    const auto t = cliff_times(Algorithm::ea);
    bool ok = true;
    std::ostringstream d;
    d << "ratios";
    for (std::size_t i = 0; i + 1 < t.size(); ++i) {
        const double r = t[i + 1] / t[i];
        d << ' ' << r;
        ok = ok && r >= n / 5 && r <= 5 * n;
    }
    return {ok, d.str()};
}

Outcome cliff_sswm_speedup() {
    const auto ea = cliff_times(Algorithm::ea), ss = cliff_times(Algorithm::sswm);
    std::vector<double> sp;
    std::ostringstream d;
    d << "speedups d=3..6:";
    for (std::size_t i = 0; i < ea.size(); ++i) {
        sp.push_back(ea[i] / ss[i]);
        d << ' ' << sp.back();
    }
    return {sp[2] > 1 && sp[3] > 1 && sp[3] > sp[0], d.str()};
}

std::vector<TrialRecord> balance_sswm_runs;

Outcome balance_separation() {
    const std::size_t n = 64, trials = 50;
    const double nd = static_cast<double>(n);
    const auto budget = BudgetExpression::parse("10*n^2.5").budget(n);
    const double beta = std::pow(nd, -1.5);
    balance_sswm_runs =
        run_trials(make(Algorithm::sswm, MutationKind::global, Balance(n), std::log(nd), beta), trials, budget, 6001);
    const auto ss = summarize(balance_sswm_runs);
    const auto ea = summarize(run_trials(make(Algorithm::ea, MutationKind::global, Balance(n)), trials, budget, 6002));
    std::ostringstream d;
    d << "sswm rate=" << ss.success_rate << " ea rate=" << ea.success_rate;
    return {ss.success_rate >= 0.8 && ea.success_rate <= 0.2, d.str()};
}

Outcome property_suites() {
    const auto suites = run_verification("all");
    std::size_t checks = 0, failed = 0;
    std::ostringstream d;
    for (const auto& s : suites)
        for (const auto& c : s.checks) {
            ++checks;
            if (!c.passed) {
                ++failed;
                d << s.suite << ": " << c.name << " (" << c.detail << "); ";
            }
        }
    d << checks - failed << '/' << checks << " checks passed";
    return {failed == 0, d.str()};
}

Outcome monte_carlo_agreement() {
    const std::size_t n = 16, runs = 100000;
    bool ok = true;
    std::ostringstream d;
    std::uint64_t seed = 8001;
    for (const Problem& p : {Problem(OneMax(n)), Problem(Cliff(n, CliffParams{3}))})
        for (Algorithm a : {Algorithm::ea, Algorithm::sswm}) {
            const auto cfg = make(a, MutationKind::global, p, threshold(n), 1.0);
            const double exact = uniform_start_average(expected_hitting_times(build_chain(cfg)));
            const auto recs = run_trials(cfg, runs, 1000000000ull, seed++);
            std::vector<double> g;
            g.reserve(recs.size());
            bool all = true;
            for (const auto& r : recs) {
                all = all && r.success;
                g.push_back(static_cast<double>(r.generations));
            }
            const double mean = mean_of(g);
            double var = 0.0;
            for (double v : g) var += (v - mean) * (v - mean);
            const double se = std::sqrt(var / static_cast<double>(g.size() - 1) / static_cast<double>(g.size()));
            const double z = (mean - exact) / se;
            ok = ok && all && std::abs(z) <= 4.0;
            d << problem_name(p) << '/' << to_string(a) << " mc=" << mean << " exact=" << exact << " z=" << z << "; ";
        }
    return {ok, d.str()};
}

Outcome balance_trajectories() {
    if (balance_sswm_runs.empty()) return {false, "criterion 6 campaign missing"};
    std::uint64_t in_window = 0;
    std::size_t clean = 0;
    for (const auto& r : balance_sswm_runs) {
        in_window += r.balance->lo_decrease_in_window;
        clean += !r.balance->hit_trap && !r.balance->hit_zero;
    }
    const double frac = static_cast<double>(clean) / static_cast<double>(balance_sswm_runs.size());
    std::ostringstream d;
    d << "lo decreases in window=" << in_window << " runs avoiding trap and zero=" << frac;
    return {in_window == 0 && frac >= 0.9, d.str()};
}

} // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"C1 onemax scaling", onemax_scaling},
        {"C2 phase transition", phase_transition},
        {"C3 beta dependence", beta_dependence},
        {"C4 cliff EA growth", cliff_ea_growth},
        {"C5 cliff SSWM speedup", cliff_sswm_speedup},
        {"C6 balance separation", balance_separation},
        {"C7 property suites", property_suites},
        {"C8 oracle vs Monte Carlo", monte_carlo_agreement},
        {"C9 balance trajectories", balance_trajectories},
    };
    int failures = 0;
    for (const auto& [name, fn] : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("[%s] %s: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str(), secs);
        std::fflush(stdout);
        failures += !o.pass;
    }
    return failures == 0 ? 0 : 1;
}
