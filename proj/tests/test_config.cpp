#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include <antcdm/config.hpp>
#include <antcdm/results.hpp>

using namespace antcdm;

namespace {

bool mentions(const ConfigError& e, const std::string& needle) {
    for (const auto& p : e.problems())
        if (p.find(needle) != std::string::npos) return true;
    return false;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream is(p, std::ios::binary);
    std::ostringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

std::filesystem::path scratch_dir(const std::string& name) {
    auto d = std::filesystem::temp_directory_path() / ("antcdm_test_" + name);
    std::filesystem::remove_all(d);
    return d;
}

} // namespace

TEST(Config, Defaults) {
    const auto c = parse_config("");
    EXPECT_EQ(c.integrator.dt, 0.01);
    EXPECT_EQ(c.integrator.t_max, 1000.0);
    EXPECT_EQ(c.integrator.seed, 1u);
    EXPECT_DOUBLE_EQ(c.hold_duration(), 0.1);
    EXPECT_EQ(c.trials, 1000u);
    EXPECT_EQ(c.thetas, (std::vector<double>{0.3, 0.4, 0.5, 0.6, 0.7}));
    EXPECT_EQ(c.model, ModelKind::baseline);
    EXPECT_EQ(c.params.n, 100.0);
}

TEST(Config, HoldFollowsDtUnlessSet) {
    EXPECT_DOUBLE_EQ(parse_config("integrator.dt = 0.05").hold_duration(), 0.5);
    EXPECT_DOUBLE_EQ(parse_config("decision.hold = 0.25").hold_duration(), 0.25);
}

TEST(Config, QuorumOutOfRangeNamesTheField) {
    try {
        parse_config("params.quorum_T = 1.5\n");
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_TRUE(mentions(e, "params.quorum_T"));
    }
}

TEST(Config, ThresholdsMustAscend) {
    try {
        parse_config("sweep.thetas = 0.5, 0.3\n");
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_TRUE(mentions(e, "sweep.thetas"));
        EXPECT_TRUE(mentions(e, "ascending"));
    }
}

TEST(Config, AllValidationProblemsReported) {
    try {
        parse_config("params.quorum_T = 1.5\nintegrator.dt = -1\nparams.q1 = -0.2\n");
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_GE(e.problems().size(), 3u);
        EXPECT_TRUE(mentions(e, "params.quorum_T"));
        EXPECT_TRUE(mentions(e, "integrator.dt"));
        EXPECT_TRUE(mentions(e, "params.q1"));
    }
}

TEST(Config, SyntaxErrorsCarryLineNumbers) {
    try {
        parse_config("# comment\nparams.n = 50\nnot a pair\nparams.bogus = 1\nparams.n = 60\nparams.c = abc\n");
        FAIL();
    } catch (const ConfigError& e) {
        EXPECT_TRUE(mentions(e, "line 3"));
        EXPECT_TRUE(mentions(e, "line 4: unknown key 'params.bogus'"));
        EXPECT_TRUE(mentions(e, "line 5: duplicate key 'params.n'"));
        EXPECT_TRUE(mentions(e, "line 6"));
    }
}

TEST(Config, OverridesApplyAfterFile) {
    const auto c = parse_config("params.n = 50\n", {parse_override("params.n=80"), parse_override("model.selector = modified")});
    EXPECT_EQ(c.params.n, 80.0);
    EXPECT_EQ(c.model, ModelKind::modified);
    EXPECT_THROW(parse_override("no_equals"), ConfigError);
    EXPECT_THROW(parse_config("", {parse_override("nope=1")}), ConfigError);
}

TEST(Config, RenderRoundTrips) {
    const auto c = parse_config("params.q1 = 0.137\nsweep.thetas = 0.35, 0.45\nmodel.gain = refit_polynomial\n"
                                "model.gain_coefficients = 0.1, -0.2, 0.3\ndecision.hold = 0.3\nintegrator.seed = 99\n");
    EXPECT_EQ(parse_config(render_config(c)), c);
    const auto d = parse_config("");
    EXPECT_EQ(parse_config(render_config(d)), d);
}

TEST(Config, HashIgnoresFieldOrder) {
    const auto a = parse_config("params.q1 = 0.2\nparams.q2 = 0.1\n");
    const auto b = parse_config("params.q2 = 0.1\nparams.q1 = 0.2\n");
    EXPECT_EQ(config_hash(a), config_hash(b));
    EXPECT_NE(config_hash(a), config_hash(parse_config("")));
    EXPECT_EQ(config_hash(a).size(), 16u);
    EXPECT_EQ(config_hash(a), config_hash(parse_config("params.q1 = 0.2\nparams.q2 = 0.1\noutput.dir = elsewhere\n")));
}

TEST(Config, EveryKeyHasHelp) {
    const auto help = defaults_help();
    for (const auto& f : field_table()) {
        EXPECT_FALSE(f.help.empty()) << f.key;
        EXPECT_NE(help.find(f.key), std::string::npos);
    }
}

TEST(Results, EmptyRunIsMarked) {
    const auto dir = scratch_dir("empty");
    RunManifest m;
    m.command = "sweep";
    write_results(dir, m, {{"config.resolved", "x = 1\n", false}});
    const auto text = slurp(dir / "manifest.txt");
    EXPECT_NE(text.find("empty=true"), std::string::npos);
    EXPECT_NE(text.find("tables=0"), std::string::npos);
    std::filesystem::remove_all(dir);
}

TEST(Results, RerunsAreByteIdentical) {
    const auto dir = scratch_dir("rerun");
    RunManifest m;
    m.command = "simulate";
    m.seed = 3;
    m.config_hash = "0123456789abcdef";
    const std::vector<Table> tables{{"a.csv", "t,y\n0,1\n"}};
    write_results(dir / "one", m, tables);
    write_results(dir / "two", m, tables);
    EXPECT_EQ(slurp(dir / "one" / "manifest.txt"), slurp(dir / "two" / "manifest.txt"));
    EXPECT_EQ(slurp(dir / "one" / "a.csv"), slurp(dir / "two" / "a.csv"));
    const auto text = slurp(dir / "one" / "manifest.txt");
    EXPECT_NE(text.find("empty=false"), std::string::npos);
    EXPECT_NE(text.find("outputs=a.csv"), std::string::npos);
    std::filesystem::remove_all(dir);
}

TEST(Results, UnwritableDirectoryThrows) {
    const auto dir = scratch_dir("blocker");
    std::filesystem::create_directories(dir);
    std::ofstream(dir / "file") << "x";
    EXPECT_THROW(write_results(dir / "file" / "sub", RunManifest{}, {}), IoError);
    std::filesystem::remove_all(dir);
}
