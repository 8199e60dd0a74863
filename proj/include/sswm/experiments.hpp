#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "sswm/budget_expr.hpp"
#include "sswm/dynamics.hpp"
#include "sswm/error.hpp"
#include "sswm/fitness.hpp"
#include "sswm/random.hpp"
#include "sswm/stats.hpp"

namespace sswm {

struct TrialRecord {
    std::uint64_t trial_id = 0;
    std::string fingerprint;
    std::uint64_t seed = 0;
    std::uint64_t generations = 0;
    bool success = false;
    FitnessValue final_fitness = 0.0;
    std::optional<BalanceTrajectoryStats> balance;
};

/// Stable text identifying a configuration, e.g. "sswm/onemax/n=64/d=0/beta=1/N=2.5/global".
[[nodiscard]] inline std::string config_fingerprint(const AlgorithmConfig& c) {
    std::ostringstream os;
    os.precision(17);
    os << to_string(c.algo) << '/' << problem_name(c.problem) << "/n=" << problem_size(c.problem)
       << "/d=" << problem_d(c.problem);
    if (c.algo == Algorithm::sswm) os << "/beta=" << c.selection.beta << "/N=" << c.selection.N;
    os << '/' << to_string(c.mutation);
    return os.str();
}

[[nodiscard]] inline unsigned default_workers() {
    const unsigned h = std::thread::hardware_concurrency();
    return h == 0 ? 1 : h;
}

namespace detail {

/// Runs body(i) for i in [0, count) on up to `workers` threads. Results must be
/// written to per-index slots; the first exception is rethrown.
template <class Body>
void parallel_for(std::size_t count, unsigned workers, Body&& body) {
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error) error = std::current_exception();
                    next.store(count);
                }
            }
        });
    }
    pool.clear();
    if (error) std::rethrow_exception(error);
}

} // namespace detail

struct TrialOptions {
    std::optional<BitString> initial;
    unsigned workers = default_workers();
};

/// Independent seeded runs; trial i uses stream_seed(master_seed, i).
/// The record list is ordered by trial_id and identical for any worker count.
[[nodiscard]] inline std::vector<TrialRecord> run_trials(const AlgorithmConfig& config, std::size_t trials,
                                                         std::uint64_t budget, std::uint64_t master_seed,
                                                         const TrialOptions& opts = {}) {
    if (trials == 0) throw domain_error("run_trials: need at least one trial");
    config.validate();
    const std::string fp = config_fingerprint(config);
    std::vector<TrialRecord> out(trials);
    detail::parallel_for(trials, opts.workers, [&](std::size_t i) {
        const std::uint64_t seed = stream_seed(master_seed, i);
        const RunResult r = run(config, budget, seed, opts.initial);
        out[i] = TrialRecord{i, fp, seed, r.generations, r.success, r.final_fitness, r.trajectory};
    });
    return out;
}

struct SummaryStats {
    std::size_t trials = 0;
    std::size_t successes = 0;
    double success_rate = 0.0;
    bool runtime_defined = false; // false when no run succeeded
    double mean = 0.0;
    double median = 0.0;
    double q10 = 0.0;
    double q90 = 0.0;
    std::optional<ConfidenceInterval> mean_ci; // 95% bootstrap, needs >= 10 successes
};

/// Runtime statistics over successful runs plus the overall success rate.
[[nodiscard]] inline SummaryStats summarize(const std::vector<TrialRecord>& records) {
    if (records.empty()) throw domain_error("summarize: no records");
    SummaryStats s;
    s.trials = records.size();
    std::vector<double> gens;
    for (const auto& r : records)
        if (r.success) gens.push_back(static_cast<double>(r.generations));
    s.successes = gens.size();
    s.success_rate = static_cast<double>(s.successes) / static_cast<double>(s.trials);
    if (gens.empty()) return s;
    s.runtime_defined = true;
    std::sort(gens.begin(), gens.end());
    s.mean = mean_of(gens);
    s.median = quantile_sorted(gens, 0.5);
    s.q10 = quantile_sorted(gens, 0.1);
    s.q90 = quantile_sorted(gens, 0.9);
    if (gens.size() >= 10) s.mean_ci = bootstrap_mean_ci(gens);
    return s;
}

/// How a sweep cell fixes the population size.
struct PopulationSetting {
    enum class Kind { n_beta, population, threshold } kind = Kind::threshold;
    double value = 0.0;

    static PopulationSetting n_beta(double v) { return {Kind::n_beta, v}; }
    static PopulationSetting population(double v) { return {Kind::population, v}; }
    /// N beta = ln(11 n)/2.
    static PopulationSetting threshold() { return {Kind::threshold, 0.0}; }

    [[nodiscard]] double resolve_N(std::size_t n, double beta) const {
        switch (kind) {
        case Kind::n_beta: return value / beta;
        case Kind::population: return value;
        case Kind::threshold: return threshold_n_beta(static_cast<double>(n)) / beta;
        }
        return value;
    }
};

struct SweepSpec {
    std::vector<std::string> fitness{"onemax"};
    std::vector<std::size_t> n;
    std::vector<std::size_t> d{3}; // used by cliff cells only
    std::vector<Algorithm> algo{Algorithm::sswm};
    std::vector<MutationKind> mutation{MutationKind::global};
    std::vector<double> beta{1.0};
    std::vector<PopulationSetting> population{PopulationSetting::threshold()};
    std::size_t trials = 10;
    BudgetExpression budget = BudgetExpression::parse("50*n*ln(n)");
    bool strict_beta = false;
};

struct SweepCell {
    std::size_t index = 0;
    std::string fitness;
    std::size_t n = 0;
    std::size_t d = 0;
    Algorithm algo = Algorithm::sswm;
    MutationKind mutation = MutationKind::global;
    double beta = 0.0;
    double N = 0.0;
    std::uint64_t budget = 0;
    std::optional<std::string> error; // invalid cell: reported, not run
    std::optional<AlgorithmConfig> config;
    SummaryStats stats;
    std::vector<TrialRecord> records;
};

/// Cells of the Cartesian product, in a fixed nesting order
/// (fitness, n, d, algo, mutation, beta, population). Non-cliff fitness
/// functions contribute one cell per combination regardless of the d grid.
[[nodiscard]] inline std::vector<SweepCell> enumerate_cells(const SweepSpec& spec) {
    auto need = [](bool empty, const char* what) {
        if (empty) throw parameter_error(std::string("sweep: grid '") + what + "' is empty");
    };
    need(spec.fitness.empty(), "fitness");
    need(spec.n.empty(), "n");
    need(spec.algo.empty(), "algo");
    need(spec.mutation.empty(), "mutation");
    need(spec.beta.empty(), "beta");
    need(spec.population.empty(), "N/nbeta");
    if (spec.trials == 0) throw parameter_error("sweep: trials must be positive");
    for (const auto& f : spec.fitness)
        if (f == "cliff") need(spec.d.empty(), "d");

    std::vector<SweepCell> cells;
    for (const auto& f : spec.fitness)
        for (std::size_t n : spec.n) {
            const std::vector<std::size_t> ds = f == "cliff" ? spec.d : std::vector<std::size_t>{0};
            for (std::size_t d : ds)
                for (Algorithm a : spec.algo)
                    for (MutationKind m : spec.mutation)
                        for (double b : spec.beta)
                            for (const auto& pop : spec.population) {
                                SweepCell c;
                                c.index = cells.size();
                                c.fitness = f;
                                c.n = n;
                                c.d = d;
                                c.algo = a;
                                c.mutation = m;
                                c.beta = b;
                                try {
                                    c.N = pop.resolve_N(n, b);
                                    c.budget = spec.budget.budget(n);
                                    AlgorithmConfig cfg;
                                    cfg.algo = a;
                                    cfg.mutation = m;
                                    cfg.selection = SelectionParams{c.N, b, spec.strict_beta};
                                    cfg.problem = make_problem(f, n, f == "cliff" ? std::optional(d) : std::nullopt);
                                    cfg.validate();
                                    c.config = cfg;
                                } catch (const std::exception& e) {
                                    c.error = e.what();
                                }
                                cells.push_back(std::move(c));
                            }
        }
    return cells;
}

/// Runs every valid cell; trial t of cell c uses stream_seed(master_seed, c, t).
[[nodiscard]] inline std::vector<SweepCell> sweep(const SweepSpec& spec, std::uint64_t master_seed,
                                                  unsigned workers = default_workers()) {
    auto cells = enumerate_cells(spec);
    for (auto& c : cells) {
        if (!c.config) continue;
        TrialOptions opts;
        opts.workers = workers;
        c.records = run_trials(*c.config, spec.trials, c.budget, stream_seed(master_seed, c.index), opts);
        c.stats = summarize(c.records);
    }
    return cells;
}

struct PhasePoint {
    double n_beta = 0.0;
    double N = 0.0;
    bool skipped = false; // N beta < 1 and not forced
    std::size_t trials = 0;
    std::size_t successes = 0;
    double success_rate = 0.0;
};

struct PhaseTransitionScan {
    std::vector<PhasePoint> points;
    std::optional<double> threshold; // smallest N beta with success rate >= 1/2
    std::vector<std::string> warnings;
};

/// SSWM success rate on OneMax within `budget` across a grid of N beta values.
/// Grid points below 1 lie outside the lower-bound regime and are skipped
/// (with a warning) unless `force` is set.
[[nodiscard]] inline PhaseTransitionScan phase_transition_scan(std::size_t n, double beta,
                                                               const std::vector<double>& n_beta_grid,
                                                               std::uint64_t budget, std::size_t trials,
                                                               std::uint64_t master_seed,
                                                               MutationKind mutation = MutationKind::global,
                                                               bool force = false,
                                                               unsigned workers = default_workers()) {
    if (n_beta_grid.empty()) throw parameter_error("phase_transition_scan: empty N*beta grid");
    PhaseTransitionScan scan;
    for (std::size_t g = 0; g < n_beta_grid.size(); ++g) {
        PhasePoint pt;
        pt.n_beta = n_beta_grid[g];
        pt.N = pt.n_beta / beta;
        if (pt.n_beta < 1.0) {
            scan.warnings.push_back("N*beta=" + std::to_string(pt.n_beta) + " is below 1" +
                                    (force ? " (forced)" : "; skipped"));
            if (!force) {
                pt.skipped = true;
                scan.points.push_back(pt);
                continue;
            }
        }
        AlgorithmConfig cfg;
        cfg.algo = Algorithm::sswm;
        cfg.mutation = mutation;
        cfg.selection = SelectionParams{pt.N, beta};
        cfg.problem = OneMax(n);
        TrialOptions opts;
        opts.workers = workers;
        const auto recs = run_trials(cfg, trials, budget, stream_seed(master_seed, g), opts);
        pt.trials = trials;
        pt.successes = static_cast<std::size_t>(std::count_if(recs.begin(), recs.end(), [](const auto& r) { return r.success; }));
        pt.success_rate = static_cast<double>(pt.successes) / static_cast<double>(trials);
        scan.points.push_back(pt);
    }
    for (const auto& pt : scan.points)
        if (!pt.skipped && pt.success_rate >= 0.5 && (!scan.threshold || pt.n_beta < *scan.threshold))
            scan.threshold = pt.n_beta;
    return scan;
}

} // namespace sswm
