#pragma once

#include <charconv>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "json.hpp"

#include "sswm/experiments.hpp"
#include "sswm/markov.hpp"

namespace sswm::io {

/// Shortest decimal text that parses back to the same double.
[[nodiscard]] inline std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    if (res.ec != std::errc{}) return "nan";
    return std::string(buf, res.ptr);
}

/// RFC 4180 field: quoted only when it contains a comma, quote, CR or LF.
[[nodiscard]] inline std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

/// Writes CSV rows with LF line endings.
class CsvWriter {
public:
    explicit CsvWriter(std::ostream& os) : os_(os) {}

    void row(const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) os_ << ',';
            os_ << csv_field(fields[i]);
        }
        os_ << '\n';
    }

private:
    std::ostream& os_;
};

inline const std::vector<std::string>& trial_columns() {
    static const std::vector<std::string> c{"trial_id", "algo",       "fitness",       "n",
                                            "d",        "beta",       "N",             "mutation",
                                            "seed",     "generations", "success",      "final_fitness",
                                            "lo_decrease_events",      "hit_trap"};
    return c;
}

/// One CSV row per trial. Selection columns are empty for the EA, trajectory
/// columns are empty for problems other than balance.
inline void write_trial_rows(CsvWriter& w, const AlgorithmConfig& cfg, const std::vector<TrialRecord>& records) {
    const bool sswm = cfg.algo == Algorithm::sswm;
    for (const auto& r : records) {
        w.row({std::to_string(r.trial_id), std::string(to_string(cfg.algo)), std::string(problem_name(cfg.problem)),
               std::to_string(problem_size(cfg.problem)), std::to_string(problem_d(cfg.problem)),
               sswm ? format_double(cfg.selection.beta) : "", sswm ? format_double(cfg.selection.N) : "",
               std::string(to_string(cfg.mutation)), std::to_string(r.seed), std::to_string(r.generations),
               r.success ? "1" : "0", format_double(r.final_fitness),
               r.balance ? std::to_string(r.balance->lo_decrease_events) : "",
               r.balance ? (r.balance->hit_trap ? "1" : "0") : ""});
    }
}

[[nodiscard]] inline nlohmann::ordered_json to_json(const SummaryStats& s) {
    nlohmann::ordered_json j;
    j["trials"] = s.trials;
    j["successes"] = s.successes;
    j["success_rate"] = s.success_rate;
    j["runtime_defined"] = s.runtime_defined;
    if (s.runtime_defined) {
        j["mean"] = s.mean;
        j["median"] = s.median;
        j["q10"] = s.q10;
        j["q90"] = s.q90;
    } else {
        j["mean"] = j["median"] = j["q10"] = j["q90"] = nullptr;
    }
    if (s.mean_ci)
        j["mean_ci95"] = {s.mean_ci->low, s.mean_ci->high};
    else
        j["mean_ci95"] = nullptr;
    return j;
}

[[nodiscard]] inline nlohmann::ordered_json to_json(const AlgorithmConfig& c) {
    nlohmann::ordered_json j;
    j["algo"] = to_string(c.algo);
    j["fitness"] = problem_name(c.problem);
    j["n"] = problem_size(c.problem);
    if (std::holds_alternative<Cliff>(c.problem)) j["d"] = problem_d(c.problem);
    j["mutation"] = to_string(c.mutation);
    if (c.algo == Algorithm::sswm) {
        j["beta"] = c.selection.beta;
        j["N"] = c.selection.N;
        j["nbeta"] = c.selection.n_beta();
    }
    return j;
}

/// Aggregates over the balance trajectories of a batch (empty object otherwise).
[[nodiscard]] inline nlohmann::ordered_json balance_summary(const std::vector<TrialRecord>& records) {
    nlohmann::ordered_json j = nlohmann::ordered_json::object();
    std::uint64_t in_window = 0, total = 0, relevant = 0, gens = 0;
    std::size_t clean = 0, flagged = 0, with = 0;
    for (const auto& r : records) {
        if (!r.balance) continue;
        ++with;
        total += r.balance->lo_decrease_events;
        in_window += r.balance->lo_decrease_in_window;
        relevant += r.balance->relevant_steps;
        gens += r.generations;
        if (!r.balance->hit_trap && !r.balance->hit_zero) ++clean;
        if (r.balance->initial_outside_window) ++flagged;
    }
    if (with == 0) return j;
    j["lo_decrease_events"] = total;
    j["lo_decrease_in_window"] = in_window;
    j["runs_avoiding_trap_and_zero"] = clean;
    j["runs_started_outside_window"] = flagged;
    j["relevant_step_fraction"] = gens ? static_cast<double>(relevant) / static_cast<double>(gens) : 0.0;
    return j;
}

inline const std::vector<std::string>& state_columns() {
    static const std::vector<std::string> c{"state", "delta_plus", "delta_minus", "delta", "self_loop", "hitting_time"};
    return c;
}

/// Per-state table of a ones-lattice chain.
inline void write_state_table(std::ostream& os, const DriftProfile& prof, const std::vector<double>& times) {
    CsvWriter w(os);
    w.row(state_columns());
    for (std::size_t i = 0; i < times.size(); ++i)
        w.row({std::to_string(i), format_double(prof.delta_plus[i]), format_double(prof.delta_minus[i]),
               format_double(prof.delta[i]), format_double(prof.self_loop[i]), format_double(times[i])});
}

} // namespace sswm::io
