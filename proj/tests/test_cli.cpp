#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include <antcdm/commands.hpp>

using namespace antcdm;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream is(s);
    for (std::string l; std::getline(is, l);) out.push_back(l);
    return out;
}

struct Run {
    int code;
    std::string log;
    fs::path dir;
};

Run run(const std::string& sub, const std::string& tag, std::vector<std::string> overrides, std::size_t jobs = 1,
        std::optional<std::uint64_t> seed = {}) {
    const fs::path dir = fs::temp_directory_path() / ("antcdm_cli_" + tag);
    fs::remove_all(dir);
    Invocation inv;
    inv.subcommand = sub;
    inv.overrides = std::move(overrides);
    inv.out = dir.string();
    inv.jobs = jobs;
    inv.seed = seed;
    std::ostringstream log;
    const int code = run_command(inv, log);
    return {code, log.str(), dir};
}

} // namespace

TEST(Cli, SimulateRowCount) {
    const auto r = run("simulate", "sim", {"integrator.t_max=2.5", "integrator.dt=0.01"});
    ASSERT_EQ(r.code, kExitOk) << r.log;
    const auto rows = lines(slurp(r.dir / "trajectory.csv"));
    EXPECT_EQ(rows.front(), "t,y1,y2,s");
    EXPECT_EQ(rows.size(), 1u + 251u);
    const auto manifest = slurp(r.dir / "manifest.txt");
    EXPECT_NE(manifest.find("command=simulate"), std::string::npos);
    EXPECT_NE(manifest.find("started_at=unrecorded"), std::string::npos);
    EXPECT_TRUE(fs::exists(r.dir / "config.resolved"));
}

TEST(Cli, MissingConfigFileNamesPath) {
    Invocation inv;
    inv.subcommand = "simulate";
    inv.config_path = "/nonexistent/antcdm.cfg";
    std::ostringstream log;
    EXPECT_NE(run_command(inv, log), kExitOk);
    EXPECT_NE(log.str().find("/nonexistent/antcdm.cfg"), std::string::npos);
}

TEST(Cli, InvalidConfigIsValidationError) {
    const auto r = run("simulate", "bad", {"params.quorum_T=1.5"});
    EXPECT_EQ(r.code, kExitValidation);
    EXPECT_NE(r.log.find("params.quorum_T"), std::string::npos);
}

TEST(Cli, UnknownSubcommand) {
    EXPECT_EQ(run("frobnicate", "unknown", {}).code, kExitUsage);
}

TEST(Cli, SeedChangesValuesNotSchema) {
    const std::vector<std::string> ov{"integrator.t_max=3"};
    const auto a = run("simulate", "seed7", ov, 1, 7);
    const auto b = run("simulate", "seed6", ov, 1, 6);
    ASSERT_EQ(a.code, kExitOk);
    ASSERT_EQ(b.code, kExitOk);
    const auto la = lines(slurp(a.dir / "trajectory.csv")), lb = lines(slurp(b.dir / "trajectory.csv"));
    EXPECT_EQ(la.front(), lb.front());
    EXPECT_EQ(la.size(), lb.size());
    EXPECT_NE(la, lb);
    EXPECT_NE(slurp(a.dir / "manifest.txt").find("seed=7"), std::string::npos);
}

TEST(Cli, CompareRowsAndCommonRandomNumbers) {
    const std::vector<std::string> base{"sweep.thetas=0.3,0.5,0.7", "sweep.trials=20", "integrator.t_max=40"};
    auto ov = base;
    ov.push_back("compare.models=baseline,modified");
    const auto r = run("compare", "cmp", ov);
    ASSERT_EQ(r.code, kExitOk) << r.log;
    const auto rows = lines(slurp(r.dir / "compare.csv"));
    EXPECT_EQ(rows.size(), 7u);
    EXPECT_EQ(rows.front(), std::string("model,") + kSweepHeader);

    ov = base;
    ov.push_back("compare.models=baseline,baseline");
    const auto same = run("compare", "cmp_same", ov);
    ASSERT_EQ(same.code, kExitOk);
    const auto srows = lines(slurp(same.dir / "compare.csv"));
    for (int i = 1; i <= 3; ++i) EXPECT_EQ(srows[i], srows[i + 3]);
}

TEST(Cli, EmptyThresholdListWritesEmptyManifest) {
    const auto r = run("sweep", "empty", {"sweep.thetas="});
    ASSERT_EQ(r.code, kExitOk) << r.log;
    EXPECT_NE(slurp(r.dir / "manifest.txt").find("empty=true"), std::string::npos);
    EXPECT_FALSE(fs::exists(r.dir / "sweep.csv"));
}

TEST(Cli, SweepAllTimeoutFails) {
    const auto r = run("sweep", "timeout", {"sweep.thetas=1.0", "sweep.trials=3", "integrator.t_max=1"});
    EXPECT_EQ(r.code, kExitRuntime);
    EXPECT_NE(r.log.find("theta=1"), std::string::npos);
}

TEST(Cli, FitReportsPublishedCurves) {
    const auto r = run("fit", "fit", {});
    ASSERT_EQ(r.code, kExitOk) << r.log;
    const auto rows = lines(slurp(r.dir / "fit_curves.csv"));
    ASSERT_EQ(rows.size(), 202u);
    EXPECT_EQ(rows.front(), "u,target,refit,published_fit,published_gain");
    EXPECT_EQ(rows[1], "0.000000000000,0.000000000000," + rows[1].substr(30, rows[1].find(',', 30) - 30) +
                           ",-0.110000000000,0.900000000000");
    EXPECT_EQ(lines(slurp(r.dir / "fit_coefficients.csv")).size(), 1u);
    EXPECT_NE(slurp(r.dir / "manifest.txt").find("fit_rmse="), std::string::npos);
}

TEST(Cli, AgentsParallelMatchesSerial) {
    const std::vector<std::string> ov{"params.n=30", "integrator.t_max=5", "integrator.dt=0.05", "agents.replicates=5"};
    const auto a = run("agents", "ag1", ov, 1);
    const auto b = run("agents", "ag3", ov, 3);
    ASSERT_EQ(a.code, kExitOk) << a.log;
    ASSERT_EQ(b.code, kExitOk) << b.log;
    for (const char* f : {"agents_trajectory.csv", "agents_outcomes.jsonl", "manifest.txt"})
        EXPECT_EQ(slurp(a.dir / f), slurp(b.dir / f)) << f;
    EXPECT_EQ(lines(slurp(a.dir / "agents_outcomes.jsonl")).size(), 5u);
}

TEST(Cli, DriftReportsDiagnostics) {
    const auto r = run("drift", "drift", {"drift.replicates=20", "drift.x1_points=41"});
    ASSERT_EQ(r.code, kExitOk) << r.log;
    const auto rows = lines(slurp(r.dir / "drift.csv"));
    EXPECT_EQ(rows.front(), "x1,x2,mean_dx1,var_dx1");
    EXPECT_EQ(rows.size(), 42u);
    EXPECT_NE(slurp(r.dir / "manifest.txt").find("drift_constancy="), std::string::npos);
}
