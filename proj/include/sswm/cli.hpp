#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "sswm/budget_expr.hpp"
#include "sswm/dynamics.hpp"
#include "sswm/experiments.hpp"
#include "sswm/io.hpp"
#include "sswm/markov.hpp"
#include "sswm/verify.hpp"

namespace sswm::cli {

enum ExitCode : int { exit_ok = 0, exit_usage = 1, exit_verification = 2, exit_runtime = 3 };

/// Bad command line or config; the message names the offending flag.
class usage_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using json = nlohmann::ordered_json;

inline constexpr std::uint64_t default_seed = 1;

namespace detail {

// Merged flag/config values, all kept as text. Flags overwrite config entries.
using Settings = std::map<std::string, std::string>;

inline std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t");
    return std::string(s.substr(b, e - b + 1));
}

inline std::string scalar_text(const nlohmann::json& v, const std::string& key) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number()) return v.dump();
    throw usage_error("config key '" + key + "': expected a scalar or a list of scalars");
}

inline std::string value_text(const nlohmann::json& v, const std::string& key) {
    if (!v.is_array()) return scalar_text(v, key);
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ',';
        out += scalar_text(v[i], key);
    }
    return out;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw usage_error("--config: cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

/// A config file is a JSON object with flag names as keys. The echoed
/// "config: {...}" line is accepted verbatim.
inline Settings load_config(const std::string& path, std::string_view verb, const std::vector<std::string>& known) {
    std::string text = trim(read_file(path));
    if (text.rfind("config:", 0) == 0) text = text.substr(7);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const std::exception& e) {
        throw usage_error("--config: '" + path + "' is not valid JSON: " + e.what());
    }
    if (!j.is_object()) throw usage_error("--config: '" + path + "' must hold a JSON object");
    Settings s;
    for (const auto& [key, value] : j.items()) {
        if (key == "command") {
            if (!value.is_string() || value.get<std::string>() != verb)
                throw usage_error("--config: file was written for command '" + value_text(value, key) + "', not '" +
                                  std::string(verb) + "'");
            continue;
        }
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw usage_error("--config: unknown key '" + key + "' for command '" + std::string(verb) + "'");
        s[key] = value_text(value, key);
    }
    return s;
}

inline std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        const auto comma = text.find(',', start);
        out.push_back(trim(std::string_view(text).substr(start, comma == std::string::npos ? std::string::npos
                                                                                              : comma - start)));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

inline std::uint64_t parse_u64(const std::string& flag, const std::string& text) {
    std::uint64_t v = 0;
    const auto* end = text.data() + text.size();
    const auto r = std::from_chars(text.data(), end, v);
    if (text.empty() || r.ec != std::errc{} || r.ptr != end)
        throw usage_error("--" + flag + ": expected a non-negative integer, got '" + text + "'");
    return v;
}

inline double parse_double(const std::string& flag, const std::string& text) {
    double v = 0.0;
    const auto* end = text.data() + text.size();
    const auto r = std::from_chars(text.data(), end, v);
    if (text.empty() || r.ec != std::errc{} || r.ptr != end || !std::isfinite(v))
        throw usage_error("--" + flag + ": expected a number, got '" + text + "'");
    return v;
}

inline bool parse_bool(const std::string& flag, const std::string& text) {
    if (text == "true" || text == "1") return true;
    if (text == "false" || text == "0") return false;
    throw usage_error("--" + flag + ": expected true or false, got '" + text + "'");
}

/// Re-throws library argument errors as usage errors attributed to `flag`.
template <class F>
auto attributed(const std::string& flag, F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const usage_error&) {
        throw;
    } catch (const std::invalid_argument& e) {
        throw usage_error(flag + ": " + e.what());
    }
}

class Resolver {
public:
    explicit Resolver(const Settings& s) : s_(s) {}

    [[nodiscard]] bool has(const std::string& k) const { return s_.count(k) > 0; }

    [[nodiscard]] std::string text(const std::string& k, const std::string& fallback) const {
        const auto it = s_.find(k);
        return it == s_.end() ? fallback : it->second;
    }
    [[nodiscard]] std::string required(const std::string& k) const {
        const auto it = s_.find(k);
        if (it == s_.end()) throw usage_error("--" + k + " is required");
        return it->second;
    }
    [[nodiscard]] std::string scalar(const std::string& k, const std::string& fallback) const {
        const std::string t = text(k, fallback);
        if (t.find(',') != std::string::npos) throw usage_error("--" + k + ": expected a single value, got '" + t + "'");
        return t;
    }
    [[nodiscard]] std::size_t size(const std::string& k) const {
        const std::string t = required(k);
        if (t.find(',') != std::string::npos) throw usage_error("--" + k + ": expected a single value, got '" + t + "'");
        return static_cast<std::size_t>(parse_u64(k, t));
    }
    [[nodiscard]] std::vector<std::string> list(const std::string& k, const std::string& fallback) const {
        return split_list(text(k, fallback));
    }
    [[nodiscard]] bool flag(const std::string& k) const { return has(k) && parse_bool(k, s_.at(k)); }

private:
    const Settings& s_;
};

inline Algorithm algo_of(const std::string& t) {
    return attributed("--algo", [&] { return parse_algorithm(t); });
}
inline MutationKind mutation_of(const std::string& t) {
    return attributed("--mutation", [&] { return parse_mutation_kind(t); });
}
inline void check_fitness_name(const std::string& f) {
    if (f != "onemax" && f != "cliff" && f != "balance")
        throw usage_error("--fitness: unknown fitness '" + f + "' (expected onemax, cliff or balance)");
}

/// Problem from (fitness, n, d), with errors attributed to the responsible flag.
inline Problem problem_of(const std::string& fitness, std::size_t n, std::optional<std::size_t> d) {
    check_fitness_name(fitness);
    if (n == 0) throw usage_error("--n: n must be positive");
    if (fitness == "balance") attributed("--n", [&] { validate_balance(n); });
    if (fitness == "cliff") {
        if (!d) throw usage_error("--d is required for cliff");
        attributed("--d", [&] { validate_cliff(n, CliffParams{*d}); });
    }
    return attributed("--fitness", [&] { return make_problem(fitness, n, d); });
}

struct ScalarSetup {
    AlgorithmConfig config;
    json echo;
};

/// Single-configuration commands (run, exact, drift).
inline ScalarSetup resolve_scalar(const Resolver& r, const std::string& verb) {
    ScalarSetup out;
    json& e = out.echo;
    e["command"] = verb;
    auto& c = out.config;
    c.algo = algo_of(r.scalar("algo", "sswm"));
    const std::string fitness = r.scalar("fitness", "onemax");
    check_fitness_name(fitness);
    const std::size_t n = r.size("n");
    std::optional<std::size_t> d;
    if (fitness == "cliff" && r.has("d")) d = r.size("d");
    c.mutation = mutation_of(r.scalar("mutation", "global"));
    c.problem = problem_of(fitness, n, d);
    e["algo"] = to_string(c.algo);
    e["fitness"] = fitness;
    e["n"] = n;
    if (d) e["d"] = *d;
    e["mutation"] = to_string(c.mutation);
    if (c.algo == Algorithm::sswm) {
        const bool strict = r.flag("strict-beta");
        const double beta = parse_double("beta", r.scalar("beta", "1"));
        if (r.has("N") && r.has("nbeta")) throw usage_error("--N and --nbeta are mutually exclusive");
        double N = 0.0;
        if (r.has("N")) {
            N = parse_double("N", r.scalar("N", ""));
        } else {
            const std::string nb = r.scalar("nbeta", "auto");
            const double n_beta = nb == "auto" ? threshold_n_beta(static_cast<double>(n)) : parse_double("nbeta", nb);
            N = n_beta / beta;
        }
        c.selection = SelectionParams{N, beta, strict};
        attributed("--beta", [&] { SelectionParams{1.0, beta, strict}.validate(); });
        attributed(r.has("N") ? "--N" : "--nbeta", [&] { c.selection.validate(); });
        e["beta"] = beta;
        e["N"] = N;
        e["strict-beta"] = strict;
    }
    return out;
}

inline void warn_beta(double beta, std::ostream& err) {
    if (beta > 1.0)
        err << "warning: beta=" << io::format_double(beta)
            << " is above 1, outside the nominal range (use --strict-beta to reject)\n";
}

inline std::ofstream open_output(const std::string& path) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
    return f;
}

struct Outputs {
    std::optional<std::string> out;
    std::optional<std::string> summary;
    std::optional<std::string> save_config;
};

inline void emit_config(const json& echo, const Outputs& o, std::ostream& err) {
    err << "config: " << echo.dump() << '\n';
    if (o.save_config) {
        auto f = open_output(*o.save_config);
        f << echo.dump(2) << '\n';
    }
}

inline void write_report(const json& report, const Outputs& o, std::ostream& out, bool to_stdout) {
    if (to_stdout) out << report.dump(2) << '\n';
    if (o.summary) {
        auto f = open_output(*o.summary);
        f << report.dump(2) << '\n';
    }
}

inline std::uint64_t resolve_seed(const Resolver& r) {
    if (r.has("seed")) return parse_u64("seed", r.scalar("seed", ""));
    if (const char* env = std::getenv("EVOSIM_SEED"); env && *env) {
        try {
            return parse_u64("seed", env);
        } catch (const usage_error&) {
            throw usage_error("EVOSIM_SEED: expected a non-negative integer, got '" + std::string(env) + "'");
        }
    }
    return default_seed;
}

inline unsigned resolve_workers(const Resolver& r) {
    if (!r.has("workers")) return default_workers();
    const auto w = parse_u64("workers", r.scalar("workers", ""));
    if (w == 0) throw usage_error("--workers: must be at least 1");
    return static_cast<unsigned>(std::min<std::uint64_t>(w, 4096));
}

inline BudgetExpression budget_of(const Resolver& r) {
    return attributed("--budget", [&] { return BudgetExpression::parse(r.scalar("budget", "50*n*ln(n)")); });
}

inline int cmd_run(const Resolver& r, const Outputs& o, std::ostream& out, std::ostream& err) {
    auto setup = resolve_scalar(r, "run");
    const auto& cfg = setup.config;
    const std::size_t n = problem_size(cfg.problem);
    const std::size_t trials = r.has("trials") ? r.size("trials") : 10;
    if (trials == 0) throw usage_error("--trials: must be at least 1");
    const auto expr = budget_of(r);
    const std::uint64_t budget = attributed("--budget", [&] { return expr.budget(n); });
    const std::uint64_t seed = resolve_seed(r);
    TrialOptions opts;
    opts.workers = resolve_workers(r);
    if (r.has("initial")) {
        const std::string bits = r.scalar("initial", "");
        opts.initial = attributed("--initial", [&] { return BitString::from_string(bits); });
        if (opts.initial->size() != n)
            throw usage_error("--initial: length " + std::to_string(opts.initial->size()) + " does not match n=" +
                              std::to_string(n));
    }
    setup.echo["trials"] = trials;
    setup.echo["budget"] = expr.text();
    setup.echo["seed"] = seed;
    if (opts.initial) setup.echo["initial"] = opts.initial->to_string();
    emit_config(setup.echo, o, err);
    if (cfg.algo == Algorithm::sswm) warn_beta(cfg.selection.beta, err);

    const auto records = run_trials(cfg, trials, budget, seed, opts);
    if (o.out) {
        auto f = open_output(*o.out);
        io::CsvWriter w(f);
        w.row(io::trial_columns());
        io::write_trial_rows(w, cfg, records);
    }
    json report;
    report["config"] = setup.echo;
    report["budget_generations"] = budget;
    report["summary"] = io::to_json(summarize(records));
    if (std::holds_alternative<Balance>(cfg.problem)) report["balance"] = io::balance_summary(records);
    write_report(report, o, out, true);
    return exit_ok;
}

inline int cmd_sweep(const Resolver& r, const Outputs& o, std::ostream& out, std::ostream& err) {
    SweepSpec spec;
    json echo;
    echo["command"] = "sweep";
    spec.fitness = r.list("fitness", "onemax");
    for (const auto& f : spec.fitness) check_fitness_name(f);
    spec.n.clear();
    for (const auto& t : split_list(r.required("n"))) spec.n.push_back(static_cast<std::size_t>(parse_u64("n", t)));
    spec.d.clear();
    if (r.has("d"))
        for (const auto& t : r.list("d", "")) spec.d.push_back(static_cast<std::size_t>(parse_u64("d", t)));
    const bool any_cliff = std::find(spec.fitness.begin(), spec.fitness.end(), "cliff") != spec.fitness.end();
    if (any_cliff && spec.d.empty()) throw usage_error("--d is required for cliff");
    spec.algo.clear();
    for (const auto& t : r.list("algo", "sswm")) spec.algo.push_back(algo_of(t));
    spec.mutation.clear();
    for (const auto& t : r.list("mutation", "global")) spec.mutation.push_back(mutation_of(t));
    spec.beta.clear();
    for (const auto& t : r.list("beta", "1")) spec.beta.push_back(parse_double("beta", t));
    if (r.has("N") && r.has("nbeta")) throw usage_error("--N and --nbeta are mutually exclusive");
    spec.population.clear();
    json pop = json::array();
    if (r.has("N")) {
        for (const auto& t : r.list("N", "")) {
            spec.population.push_back(PopulationSetting::population(parse_double("N", t)));
            pop.push_back(spec.population.back().value);
        }
    } else {
        for (const auto& t : r.list("nbeta", "auto")) {
            if (t == "auto") {
                spec.population.push_back(PopulationSetting::threshold());
                pop.push_back("auto");
            } else {
                spec.population.push_back(PopulationSetting::n_beta(parse_double("nbeta", t)));
                pop.push_back(spec.population.back().value);
            }
        }
    }
    spec.trials = r.has("trials") ? r.size("trials") : 10;
    if (spec.trials == 0) throw usage_error("--trials: must be at least 1");
    spec.budget = budget_of(r);
    spec.strict_beta = r.flag("strict-beta");
    const std::uint64_t seed = resolve_seed(r);
    const unsigned workers = resolve_workers(r);

    echo["fitness"] = spec.fitness;
    echo["n"] = spec.n;
    if (any_cliff) echo["d"] = spec.d;
    json algos = json::array(), muts = json::array();
    for (auto a : spec.algo) algos.push_back(to_string(a));
    for (auto m : spec.mutation) muts.push_back(to_string(m));
    echo["algo"] = algos;
    echo["mutation"] = muts;
    echo["beta"] = spec.beta;
    echo[r.has("N") ? "N" : "nbeta"] = pop;
    echo["strict-beta"] = spec.strict_beta;
    echo["trials"] = spec.trials;
    echo["budget"] = spec.budget.text();
    echo["seed"] = seed;
    emit_config(echo, o, err);
    for (double b : spec.beta)
        if (!spec.strict_beta) warn_beta(b, err);

    const auto cells = attributed("sweep", [&] { return sweep(spec, seed, workers); });
    json report;
    report["config"] = echo;
    json jcells = json::array();
    std::optional<std::ofstream> csv_file;
    std::optional<io::CsvWriter> csv;
    if (o.out) {
        csv_file.emplace(open_output(*o.out));
        csv.emplace(*csv_file);
        csv->row(io::trial_columns());
    }
    for (const auto& c : cells) {
        json jc;
        jc["index"] = c.index;
        if (c.error) {
            jc["fitness"] = c.fitness;
            jc["n"] = c.n;
            jc["error"] = *c.error;
            err << "warning: cell " << c.index << " skipped: " << *c.error << '\n';
        } else {
            jc["config"] = io::to_json(*c.config);
            jc["budget_generations"] = c.budget;
            jc["summary"] = io::to_json(c.stats);
            if (std::holds_alternative<Balance>(c.config->problem)) jc["balance"] = io::balance_summary(c.records);
            if (csv) io::write_trial_rows(*csv, *c.config, c.records);
        }
        jcells.push_back(std::move(jc));
    }
    report["cells"] = std::move(jcells);
    write_report(report, o, out, true);
    return exit_ok;
}

inline OnesLatticeChain chain_of(const AlgorithmConfig& cfg) {
    return attributed("--fitness", [&] { return build_chain(cfg); });
}

inline int cmd_exact(const Resolver& r, const Outputs& o, std::ostream& out, std::ostream& err) {
    auto setup = resolve_scalar(r, "exact");
    emit_config(setup.echo, o, err);
    if (setup.config.algo == Algorithm::sswm) warn_beta(setup.config.selection.beta, err);
    const auto chain = chain_of(setup.config);
    const auto times = expected_hitting_times(chain);
    const auto prof = drift_profile(chain);
    if (o.out) {
        auto f = open_output(*o.out);
        io::write_state_table(f, prof, times);
    } else {
        io::write_state_table(out, prof, times);
    }
    json report;
    report["config"] = setup.echo;
    report["states"] = chain.states();
    report["hitting_time_from_zero"] = times.front();
    report["uniform_start_mean"] = uniform_start_average(times);
    write_report(report, o, out, o.out.has_value());
    return exit_ok;
}

inline int cmd_drift(const Resolver& r, const Outputs& o, std::ostream& out, std::ostream& err) {
    auto setup = resolve_scalar(r, "drift");
    const std::size_t n = problem_size(setup.config.problem);
    std::optional<NegativeDriftQuery> nq;
    if (r.has("nd-a") || r.has("nd-b")) {
        NegativeDriftQuery q;
        q.a = r.size("nd-a");
        q.b = r.size("nd-b");
        q.epsilon = parse_double("epsilon", r.scalar("epsilon", "0.1"));
        q.r = parse_double("r", r.scalar("r", "2"));
        q.delta = parse_double("delta", r.scalar("delta", "1"));
        const std::string orient = r.scalar("orientation", "zeros");
        if (orient == "zeros") q.orientation = DriftOrientation::zeros;
        else if (orient == "ones") q.orientation = DriftOrientation::ones;
        else throw usage_error("--orientation: expected zeros or ones, got '" + orient + "'");
        if (!(0 < q.a && q.a < q.b && q.b <= n)) throw usage_error("--nd-a/--nd-b: need 0 < a < b <= n");
        auto& e = setup.echo;
        e["nd-a"] = q.a;
        e["nd-b"] = q.b;
        e["epsilon"] = q.epsilon;
        e["r"] = q.r;
        e["delta"] = q.delta;
        e["orientation"] = orient;
        nq = q;
    }
    emit_config(setup.echo, o, err);
    if (setup.config.algo == Algorithm::sswm) warn_beta(setup.config.selection.beta, err);
    const auto chain = chain_of(setup.config);
    const auto times = expected_hitting_times(chain);
    const auto prof = drift_profile(chain);
    if (o.out) {
        auto f = open_output(*o.out);
        io::write_state_table(f, prof, times);
    } else {
        io::write_state_table(out, prof, times);
    }

    json report;
    report["config"] = setup.echo;
    const auto bounds = check_drift_bounds(chain);
    json jb;
    jb["applicable"] = bounds.applicable;
    if (!bounds.applicable) jb["skip_reason"] = bounds.skip_reason;
    jb["all_pass"] = bounds.all_pass;
    if (bounds.constant_checked) jb["drift_constant"] = bounds.drift_constant;
    json failing = json::array();
    for (const auto& s : bounds.states)
        if (!s.pass)
            failing.push_back({{"state", s.state},
                               {"forward_margin", s.forward_margin},
                               {"backward_margin", s.backward_margin}});
    jb["failing_states"] = failing;
    report["drift_bounds"] = jb;
    if (nq) {
        const auto nd = attributed("--nd-a", [&] { return check_negative_drift(chain, *nq); });
        json jn;
        jn["drift_condition"] = nd.drift_condition;
        jn["jump_condition"] = nd.jump_condition;
        jn["holds"] = nd.holds();
        json states = json::array();
        for (const auto& s : nd.states)
            states.push_back({{"distance", s.distance},
                              {"state", s.state},
                              {"self_loop", s.self_loop},
                              {"drift_toward_zero", s.drift_toward_zero},
                              {"drift_margin", s.drift_margin},
                              {"jump_margin", s.jump_margin}});
        jn["states"] = states;
        report["negative_drift"] = jn;
    }
    write_report(report, o, out, o.out.has_value());
    return exit_ok;
}

inline int cmd_verify(const Resolver& r, const Outputs& o, std::ostream& out, std::ostream& err) {
    const std::string suite = r.scalar("suite", "all");
    json echo;
    echo["command"] = "verify";
    echo["suite"] = suite;
    const auto results = attributed("--suite", [&] { return run_verification(suite); });
    emit_config(echo, o, err);
    bool ok = true;
    json report;
    report["config"] = echo;
    json checks = json::array();
    for (const auto& s : results)
        for (const auto& c : s.checks) {
            ok = ok && c.passed;
            out << (c.passed ? "[PASS] " : "[FAIL] ") << s.suite << ": " << c.name << " (" << c.cases << " cases)";
            if (!c.passed) out << " first failure: " << c.detail;
            out << '\n';
            json jc{{"suite", s.suite}, {"check", c.name}, {"passed", c.passed}, {"cases", c.cases}};
            if (!c.passed) jc["first_failure"] = c.detail;
            checks.push_back(std::move(jc));
        }
    report["checks"] = checks;
    report["passed"] = ok;
    write_report(report, o, out, false);
    return ok ? exit_ok : exit_verification;
}

struct VerbSpec {
    const char* name;
    const char* description;
    std::vector<std::string> keys;
};

inline const std::vector<VerbSpec>& verbs() {
    static const std::vector<std::string> chain{"algo", "fitness", "n", "d", "beta", "nbeta", "N", "mutation",
                                                "strict-beta"};
    auto with = [](std::vector<std::string> base, std::initializer_list<const char*> extra) {
        for (const char* e : extra) base.emplace_back(e);
        for (const char* e : {"out", "summary"}) base.emplace_back(e);
        return base;
    };
    static const std::vector<VerbSpec> v{
        {"run", "Run seeded trials of one configuration", with(chain, {"trials", "budget", "seed", "workers", "initial"})},
        {"sweep", "Run trials over a grid of configurations (comma-separated lists)",
         with(chain, {"trials", "budget", "seed", "workers"})},
        {"exact", "Exact expected optimisation times on the ones-count lattice", with(chain, {})},
        {"drift", "Drift profile, drift-bound check and optional negative-drift check",
         with(chain, {"nd-a", "nd-b", "epsilon", "r", "delta", "orientation"})},
        {"verify", "Run the property suites", with({}, {"suite"})},
    };
    return v;
}

inline const std::map<std::string, std::string>& flag_help() {
    static const std::map<std::string, std::string> h{
        {"algo", "sswm or ea"},
        {"fitness", "onemax, cliff or balance"},
        {"n", "problem size"},
        {"d", "cliff parameter d"},
        {"beta", "selection strength (0 < beta, nominally <= 1)"},
        {"nbeta", "N*beta, or 'auto' for ln(11n)/2 (default)"},
        {"N", "population size (real, >= 1); excludes --nbeta"},
        {"mutation", "local or global"},
        {"strict-beta", "reject beta > 1 instead of warning"},
        {"trials", "number of trials (default 10)"},
        {"budget", "generation budget as a formula of n, e.g. 50*n*ln(n)"},
        {"seed", "master seed (default: EVOSIM_SEED, else 1)"},
        {"workers", "parallel trials (default: hardware threads)"},
        {"initial", "initial bit string, e.g. 0000"},
        {"nd-a", "negative drift: interval start (distance)"},
        {"nd-b", "negative drift: interval end (distance)"},
        {"epsilon", "negative drift: epsilon (default 0.1)"},
        {"r", "negative drift: r (default 2)"},
        {"delta", "negative drift: delta (default 1)"},
        {"orientation", "negative drift distance: zeros (default) or ones"},
        {"suite", "selection, mutation, drift or all (default)"},
        {"out", "write the CSV table here"},
        {"summary", "write the JSON report here"},
    };
    return h;
}

} // namespace detail

/// Entry point of the evosim tool. Returns the process exit code.
inline int execute(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Simulation and exact analysis of SSWM and the (1+1) EA", "evosim"};
    app.require_subcommand(1);

    struct VerbState {
        CLI::App* app = nullptr;
        const detail::VerbSpec* spec = nullptr;
        std::map<std::string, std::string> values;
        std::map<std::string, CLI::Option*> options;
        std::string config_path;
        std::string save_config;
        CLI::Option* config_opt = nullptr;
        CLI::Option* save_opt = nullptr;
    };
    std::vector<VerbState> states(detail::verbs().size());
    for (std::size_t v = 0; v < states.size(); ++v) {
        auto& st = states[v];
        st.spec = &detail::verbs()[v];
        st.app = app.add_subcommand(st.spec->name, st.spec->description);
        for (const auto& key : st.spec->keys) {
            const auto& help = detail::flag_help().at(key);
            if (key == "strict-beta")
                st.options[key] = st.app->add_flag("--" + key, help);
            else
                st.options[key] = st.app->add_option("--" + key, st.values[key], help);
        }
        st.config_opt = st.app->add_option("--config", st.config_path, "JSON config file (flags win)");
        st.save_opt = st.app->add_option("--save-config", st.save_config, "write the resolved config here");
    }

    std::vector<const char*> argv;
    argv.push_back("evosim");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }

    try {
        for (auto& st : states) {
            if (!st.app->parsed()) continue;
            detail::Settings settings;
            if (st.config_opt->count()) settings = detail::load_config(st.config_path, st.spec->name, st.spec->keys);
            const bool population_flag = (st.options.count("N") && st.options["N"]->count()) ||
                                         (st.options.count("nbeta") && st.options["nbeta"]->count());
            if (population_flag) {
                settings.erase("N");
                settings.erase("nbeta");
            }
            for (const auto& key : st.spec->keys) {
                if (!st.options[key]->count()) continue;
                settings[key] = key == "strict-beta" ? "true" : st.values[key];
            }
            detail::Outputs o;
            if (settings.count("out")) o.out = settings["out"];
            if (settings.count("summary")) o.summary = settings["summary"];
            if (st.save_opt->count()) o.save_config = st.save_config;
            const detail::Resolver r(settings);
            const std::string verb = st.spec->name;
            if (verb == "run") return detail::cmd_run(r, o, out, err);
            if (verb == "sweep") return detail::cmd_sweep(r, o, out, err);
            if (verb == "exact") return detail::cmd_exact(r, o, out, err);
            if (verb == "drift") return detail::cmd_drift(r, o, out, err);
            return detail::cmd_verify(r, o, out, err);
        }
    } catch (const usage_error& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return exit_usage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_runtime;
    }
    return exit_usage;
}

inline int execute(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return execute(args, out, err);
}

} // namespace sswm::cli
