#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "sswm/cli.hpp"

using namespace sswm;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result call(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::execute(args, out, err);
    return {code, out.str(), err.str()};
}

std::string tmp(const std::string& name) { return std::string(EVOSIM_TEST_TMPDIR) + "/" + name; }

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> v;
    std::istringstream in(s);
    for (std::string l; std::getline(in, l);) v.push_back(l);
    return v;
}

std::string config_line(const std::string& err) {
    for (const auto& l : lines(err))
        if (l.rfind("config: ", 0) == 0) return l;
    return {};
}

} // namespace

TEST(Csv, Rfc4180Quoting) {
    EXPECT_EQ(io::csv_field("plain"), "plain");
    EXPECT_EQ(io::csv_field("a,b"), "\"a,b\"");
    EXPECT_EQ(io::csv_field("say \"hi\""), "\"say \"\"hi\"\"\"");
    EXPECT_EQ(io::csv_field("two\nlines"), "\"two\nlines\"");
    EXPECT_EQ(io::format_double(0.1), "0.1");
    EXPECT_EQ(io::format_double(5.5), "5.5");
}

TEST(Cli, RunWritesOneRowPerTrial) {
    const auto path = tmp("run.csv");
    const auto r = call({"run", "--algo", "sswm", "--fitness", "onemax", "--n", "128", "--beta", "1", "--nbeta", "auto",
                         "--mutation", "global", "--trials", "100", "--budget", "50*n*ln(n)", "--seed", "7", "--out",
                         path});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = lines(slurp(path));
    ASSERT_EQ(rows.size(), 101u);
    EXPECT_EQ(rows[0], "trial_id,algo,fitness,n,d,beta,N,mutation,seed,generations,success,final_fitness,"
                       "lo_decrease_events,hit_trap");
    EXPECT_EQ(rows[1].rfind("0,sswm,onemax,128,0,1,", 0), 0u) << rows[1];

    const auto cfg = nlohmann::json::parse(config_line(r.err).substr(8));
    EXPECT_DOUBLE_EQ(cfg["N"].get<double>(), 0.5 * std::log(11.0 * 128.0));
    const auto report = nlohmann::json::parse(r.out);
    EXPECT_EQ(report["summary"]["trials"].get<int>(), 100);
}

TEST(Cli, ExactCliffPeakRowIsTheDirectJump) {
    const auto r = call({"exact", "--fitness", "cliff", "--d", "3", "--n", "10", "--algo", "ea", "--mutation", "global"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rows = lines(r.out);
    ASSERT_EQ(rows.size(), 12u);
    EXPECT_EQ(rows[0], "state,delta_plus,delta_minus,delta,self_loop,hitting_time");
    std::vector<std::string> cols;
    std::istringstream row(rows[8]); // state 7 = n - d
    for (std::string c; std::getline(row, c, ',');) cols.push_back(c);
    ASSERT_EQ(cols.size(), 6u);
    EXPECT_EQ(cols[0], "7");
    const double t7 = std::stod(cols[5]);
    const double direct = 1.0 / mut_exact(10, 7, 10, MutationKind::global);
    EXPECT_NEAR(t7, direct, 1e-9 * direct);
}

TEST(Cli, VerifySucceeds) {
    const auto r = call({"verify", "--suite", "all"});
    EXPECT_EQ(r.code, 0) << r.out;
    EXPECT_EQ(r.out.find("[FAIL]"), std::string::npos);
}

TEST(Cli, UsageErrorsNameTheFlag) {
    auto r = call({"run", "--fitness", "twomax", "--n", "10"});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("--fitness"), std::string::npos) << r.err;

    r = call({"run", "--n", "10", "--budget", "50*n*"});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("--budget"), std::string::npos) << r.err;

    r = call({"run", "--fitness", "balance", "--n", "15"});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("--n"), std::string::npos) << r.err;

    r = call({"run", "--n", "10", "--algo", "ga"});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("--algo"), std::string::npos) << r.err;

    r = call({"exact", "--fitness", "cliff", "--n", "10"});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("--d"), std::string::npos) << r.err;

    r = call({"exact", "--fitness", "balance", "--n", "10"});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("--fitness"), std::string::npos) << r.err;

    r = call({"run", "--n", "10", "--N", "0.5"});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("--N"), std::string::npos) << r.err;

    EXPECT_EQ(call({"frobnicate"}).code, 1);
    EXPECT_EQ(call({}).code, 1);
    EXPECT_EQ(call({"verify", "--suite", "nope"}).code, 1);
}

TEST(Cli, HelpExitsZero) { EXPECT_EQ(call({"--help"}).code, 0); }

TEST(Cli, BetaAboveOneWarnsOrFailsInStrictMode) {
    auto r = call({"run", "--n", "8", "--beta", "2", "--trials", "2"});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.err.find("warning: beta=2"), std::string::npos) << r.err;
    r = call({"run", "--n", "8", "--beta", "2", "--trials", "2", "--strict-beta"});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("--beta"), std::string::npos) << r.err;
}

TEST(Cli, EchoedConfigReproducesOutput) {
    const auto first_csv = tmp("rt1.csv"), second_csv = tmp("rt2.csv"), cfg = tmp("rt.cfg");
    const auto a = call({"run", "--algo", "sswm", "--fitness", "cliff", "--n", "14", "--d", "3", "--beta", "0.7",
                         "--mutation", "local", "--trials", "12", "--budget", "100*n^2", "--seed", "99", "--out",
                         first_csv});
    ASSERT_EQ(a.code, 0) << a.err;
    {
        std::ofstream f(cfg, std::ios::binary);
        f << config_line(a.err) << '\n';
    }
    const auto b = call({"run", "--config", cfg, "--out", second_csv});
    ASSERT_EQ(b.code, 0) << b.err;
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(config_line(a.err), config_line(b.err));
    EXPECT_EQ(slurp(first_csv), slurp(second_csv));

    // exact and sweep as well
    for (const std::vector<std::string>& args :
         {std::vector<std::string>{"exact", "--fitness", "onemax", "--n", "9", "--nbeta", "2.5", "--beta", "0.5"},
          std::vector<std::string>{"sweep", "--n", "6,8", "--beta", "0.5,1", "--trials", "3", "--seed", "4"},
          std::vector<std::string>{"drift", "--n", "20", "--nd-a", "1", "--nd-b", "3"}}) {
        const auto x = call(args);
        ASSERT_EQ(x.code, 0) << x.err;
        {
            std::ofstream f(cfg, std::ios::binary);
            f << config_line(x.err) << '\n';
        }
        const auto y = call({args[0], "--config", cfg});
        ASSERT_EQ(y.code, 0) << y.err;
        EXPECT_EQ(x.out, y.out) << args[0];
    }
}

TEST(Cli, SaveConfigAndFlagsOverride) {
    const auto cfg = tmp("saved.json");
    const auto a = call({"run", "--n", "10", "--trials", "3", "--seed", "5", "--save-config", cfg});
    ASSERT_EQ(a.code, 0) << a.err;
    const auto saved = nlohmann::json::parse(slurp(cfg));
    EXPECT_EQ(saved["seed"].get<int>(), 5);
    const auto b = call({"run", "--config", cfg, "--seed", "6"});
    ASSERT_EQ(b.code, 0) << b.err;
    EXPECT_NE(config_line(b.err).find("\"seed\":6"), std::string::npos) << b.err;
    EXPECT_NE(a.out, b.out);

    std::ofstream(tmp("bad.json")) << "{\"colour\": 3}";
    EXPECT_EQ(call({"run", "--config", tmp("bad.json")}).code, 1);
}

TEST(Cli, SeedFromEnvironment) {
    ::setenv("EVOSIM_SEED", "31337", 1);
    const auto r = call({"run", "--n", "6", "--trials", "2"});
    ::unsetenv("EVOSIM_SEED");
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(config_line(r.err).find("\"seed\":31337"), std::string::npos) << r.err;
}

TEST(Cli, WorkerCountDoesNotChangeOutput) {
    const auto a = call({"sweep", "--n", "8,12", "--algo", "sswm,ea", "--trials", "7", "--seed", "3", "--workers", "1",
                         "--out", tmp("w1.csv")});
    const auto b = call({"sweep", "--n", "8,12", "--algo", "sswm,ea", "--trials", "7", "--seed", "3", "--workers", "5",
                         "--out", tmp("w5.csv")});
    ASSERT_EQ(a.code, 0) << a.err;
    ASSERT_EQ(b.code, 0) << b.err;
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(slurp(tmp("w1.csv")), slurp(tmp("w5.csv")));
    EXPECT_EQ(lines(slurp(tmp("w1.csv"))).size(), 1u + 4u * 7u);
}

TEST(Cli, SweepReportsInvalidCells) {
    const auto r = call({"sweep", "--fitness", "balance", "--n", "7,8", "--trials", "2", "--budget", "50"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rep = nlohmann::json::parse(r.out);
    ASSERT_EQ(rep["cells"].size(), 2u);
    EXPECT_TRUE(rep["cells"][0].contains("error"));
    EXPECT_FALSE(rep["cells"][1].contains("error"));
    EXPECT_NE(r.err.find("skipped"), std::string::npos);
}

TEST(Cli, DriftReportsBoundsAndNegativeDrift) {
    const auto rep_path = tmp("drift.json");
    const auto r = call({"drift", "--n", "100", "--nbeta", std::to_string(0.25 * std::log(100.0)), "--nd-a", "1",
                         "--nd-b", "3", "--summary", rep_path});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rep = nlohmann::json::parse(slurp(rep_path));
    EXPECT_TRUE(rep["drift_bounds"]["applicable"].get<bool>());
    EXPECT_TRUE(rep["drift_bounds"]["all_pass"].get<bool>());
    EXPECT_TRUE(rep["negative_drift"]["holds"].get<bool>());
    EXPECT_EQ(lines(r.out).size(), 102u);
}
