#include "commands.hpp"
#include "scenarios.hpp"

#include "tempdir.hpp"

#include "ltvcomm/commute.hpp"
#include "ltvcomm/sim.hpp"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace ltvcomm;
using nlohmann::json;

namespace {

namespace fs = std::filesystem;

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        save_system(cli::example_system_a(), path("A.json"));
        save_system(synthesize_pair(cli::example_system_a(), {1, -2, 0}), path("B.json"));
    }

    std::string path(const std::string& name) const { return (dir_.path() / name).string(); }

    void write(const std::string& name, const std::string& text) const {
        std::ofstream f(path(name));
        f << text;
    }

    ltvcomm::testing::TempDir dir_;
};

double max_abs_diff_column(const std::string& csv) {
    std::istringstream is(csv);
    std::string line;
    std::getline(is, line);
    double m = 0.0;
    while (std::getline(is, line)) m = std::max(m, std::stod(line.substr(line.rfind(',') + 1)));
    return m;
}

}  // namespace

TEST_F(CliTest, NoArgumentsIsUsageError) { EXPECT_EQ(run({}).code, cli::kUsageError); }

TEST_F(CliTest, UnknownFlagIsUsageError) { EXPECT_EQ(run({"check", "--bogus"}).code, cli::kUsageError); }

TEST_F(CliTest, HelpSucceeds) {
    const Result r = run({"--help"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("simulate"), std::string::npos);
}

TEST_F(CliTest, CheckWorkedPair) {
    const Result r = run({"check", "--a", path("A.json"), "--b", path("B.json")});
    EXPECT_EQ(r.code, cli::kSuccess) << r.err;
    const json j = json::parse(r.out);
    EXPECT_EQ(j["verdict"], "CommutativeZeroIC");
    EXPECT_NEAR(j["constants"][0].get<double>(), 1.0, 1e-12);
    EXPECT_NEAR(j["constants"][1].get<double>(), -2.0, 1e-12);
    EXPECT_NEAR(j["constants"][2].get<double>(), 0.0, 1e-12);
    EXPECT_NEAR(j["invariant_a"].get<double>(), 1.0, 1e-12);
    EXPECT_TRUE(j["failed_condition"].is_null());
}

TEST_F(CliTest, CheckSelfPairIsFeedthrough) {
    const Result r = run({"check", "--a", path("A.json"), "--b", path("A.json")});
    EXPECT_EQ(r.code, cli::kCheckFailed);
    EXPECT_EQ(json::parse(r.out)["failed_condition"], "feedthrough-derivable pair, excluded");
}

TEST_F(CliTest, CheckPerturbedPartner) {
    LTVSystem b = load_system(path("B.json"));
    b.a0 = b.a0 + 0.01 * CoeffExpr::time();
    save_system(b, path("Bp.json"));
    const Result r = run({"check", "--a", path("A.json"), "--b", path("Bp.json")});
    EXPECT_EQ(r.code, cli::kCheckFailed);
    EXPECT_EQ(json::parse(r.out)["failed_condition"], "k0 not constant");
}

TEST_F(CliTest, CheckLoadErrors) {
    write("bad.json", R"json({"a2":"0","a1":"1","a0":"1","t0":0})json");
    EXPECT_EQ(run({"check", "--a", path("bad.json"), "--b", path("B.json")}).code, cli::kUsageError);
    EXPECT_EQ(run({"check", "--a", path("missing.json"), "--b", path("B.json")}).code, cli::kUsageError);
    write("garbage.json", "not json");
    EXPECT_EQ(run({"check", "--a", path("garbage.json"), "--b", path("B.json")}).code, cli::kUsageError);
}

TEST_F(CliTest, CheckGridFlags) {
    const Result r = run({"check", "--a", path("A.json"), "--b", path("B.json"), "--t0", "2", "--tf", "3", "--grid",
                          "11", "--tol", "1e-6"});
    EXPECT_EQ(r.code, cli::kSuccess) << r.err;
    EXPECT_EQ(run({"check", "--a", path("A.json"), "--b", path("B.json"), "--grid", "1"}).code, cli::kUsageError);
    EXPECT_EQ(run({"check", "--a", path("A.json"), "--b", path("B.json"), "--tol", "-1"}).code, cli::kUsageError);
    EXPECT_EQ(run({"check", "--a", path("A.json"), "--b", path("B.json"), "--t0", "3", "--tf", "2"}).code,
              cli::kUsageError);
}

TEST_F(CliTest, SynthesizeWithInitialOutput) {
    const Result r = run({"synthesize", "--a", path("A.json"), "--k", "1,-2,0", "--y0", "1", "-o", path("Bs.json")});
    ASSERT_EQ(r.code, cli::kSuccess) << r.err;
    const LTVSystem b = load_system(path("Bs.json"));
    ASSERT_TRUE(b.ic.has_value());
    EXPECT_EQ(b.ic->y0, 1.0);
    EXPECT_NEAR(b.ic->dy0, -1.5, 1e-15);
    EXPECT_EQ(json::parse(r.out)["ic"]["y0"], 1.0);
}

TEST_F(CliTest, SynthesizeRejectsZeroK1) {
    EXPECT_EQ(run({"synthesize", "--a", path("A.json"), "--k", "1,0,0", "-o", path("x.json")}).code, cli::kUsageError);
    EXPECT_FALSE(fs::exists(path("x.json")));
    EXPECT_EQ(run({"synthesize", "--a", path("A.json"), "--k", "1,2", "-o", path("x.json")}).code, cli::kUsageError);
    EXPECT_EQ(run({"synthesize", "--a", path("A.json"), "--k", "-1,2,0", "-o", path("x.json")}).code,
              cli::kUsageError);
}

TEST_F(CliTest, SynthesizeInfeasibleInitialState) {
    const Result r = run({"synthesize", "--a", path("A.json"), "--k", "1,-2,1", "--y0", "1", "-o", path("x.json")});
    EXPECT_EQ(r.code, cli::kCheckFailed);
    EXPECT_NE(r.err.find("no commuting nonzero initial state"), std::string::npos);
}

TEST_F(CliTest, SynthesizeIneligibleSource) {
    write("sin.json", R"json({"a2":"1","a1":"0","a0":"sin(t)","t0":0})json");
    EXPECT_EQ(run({"synthesize", "--a", path("sin.json"), "--k", "1,1,0", "-o", path("x.json")}).code,
              cli::kCheckFailed);
}

TEST_F(CliTest, SynthesizeRoundTripsThroughCheck) {
    ltvcomm::testing::TempDir scratch;
    const std::vector<std::pair<std::string, std::string>> sources = {
        {"exp(0.1*t)", "cos(t)"}, {"2 + sin(t)", "0.5 - 0.3*cos(2*t)"}, {"(1 + 0.1*t)^2", "1"}};
    for (std::size_t i = 0; i < sources.size(); ++i) {
        const auto a = (scratch.path() / ("a" + std::to_string(i) + ".json")).string();
        const auto b = (scratch.path() / ("b" + std::to_string(i) + ".json")).string();
        save_system(generate(parse(sources[i].first), parse(sources[i].second), 0.5), a);
        ASSERT_EQ(run({"synthesize", "--a", a, "--k", "2.5,-0.75,1.25", "-o", b}).code, cli::kSuccess);
        const Result r = run({"check", "--a", a, "--b", b});
        ASSERT_EQ(r.code, cli::kSuccess) << r.out;
        const json j = json::parse(r.out);
        EXPECT_NEAR(j["constants"][0].get<double>(), 2.5, 1e-10);
        EXPECT_NEAR(j["constants"][1].get<double>(), -0.75, 1e-10);
        EXPECT_NEAR(j["constants"][2].get<double>(), 1.25, 1e-10);
    }
}

class CliScenario : public CliTest {
protected:
    void write_scenario(int figure) {
        const auto& s = cli::builtin_scenario(figure);
        save_system(s.a, path("sa.json"));
        save_system(s.b, path("sb.json"));
        save_system(s.c, path("sc.json"));
    }
};

TEST_F(CliScenario, TransitivityFig2) {
    write_scenario(2);
    const Result r = run({"transitivity", "--a", path("sa.json"), "--b", path("sb.json"), "--c", path("sc.json")});
    EXPECT_EQ(r.code, cli::kSuccess) << r.err;
    const json j = json::parse(r.out);
    EXPECT_TRUE(j["holds"].get<bool>());
    EXPECT_NEAR(j["composed_p"][0].get<double>(), 1.0, 1e-12);
    EXPECT_NEAR(j["composed_p"][1].get<double>(), 1.0, 1e-12);
    EXPECT_NEAR(j["composed_p"][2].get<double>(), 0.0, 1e-12);
    EXPECT_EQ(j["ac"]["verdict"], "CommutativeNonzeroIC");
}

TEST_F(CliScenario, TransitivityFig3) {
    write_scenario(3);
    const Result r = run({"transitivity", "--a", path("sa.json"), "--b", path("sb.json"), "--c", path("sc.json")});
    EXPECT_EQ(r.code, cli::kSuccess) << r.err;
    EXPECT_EQ(json::parse(r.out)["ac"]["verdict"], "CommutativeZeroIC");
}

TEST_F(CliScenario, TransitivityFig4) {
    write_scenario(4);
    const Result r = run({"transitivity", "--a", path("sa.json"), "--b", path("sb.json"), "--c", path("sc.json")});
    EXPECT_EQ(r.code, cli::kCheckFailed);
    EXPECT_FALSE(json::parse(r.out)["holds"].get<bool>());
}

TEST_F(CliTest, SimulateSingleSystemToStdout) {
    const Result r = run({"simulate", "--chain", path("A.json"), "--input", "1", "--step", "0.5", "--tf", "2"});
    ASSERT_EQ(r.code, cli::kSuccess) << r.err;
    std::istringstream is(r.out);
    std::string line;
    std::getline(is, line);
    EXPECT_EQ(line, "t,y");
    int rows = 0;
    while (std::getline(is, line)) ++rows;
    EXPECT_EQ(rows, 5);
    EXPECT_EQ(json::parse(r.err)["samples"], 5);
}

TEST_F(CliTest, SimulateCompareFig2Parameters) {
    LTVSystem a = load_system(path("A.json"));
    LTVSystem b = load_system(path("B.json"));
    a.ic = b.ic = InitialState{1.0, -1.5};
    save_system(a, path("Ai.json"));
    save_system(b, path("Bi.json"));
    const Result r = run({"simulate", "--chain", path("Ai.json") + "," + path("Bi.json"), "--input",
                          "40*sin(10*pi*t)", "--step", "0.02", "--tf", "10", "--compare", "-o", path("ab.csv")});
    ASSERT_EQ(r.code, cli::kSuccess) << r.err;
    const std::string csv = slurp(path("ab.csv"));
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "t,y_first,y_second,abs_diff");
    // tol_sim for (A,B), frozen in the acceptance suite.
    EXPECT_LE(max_abs_diff_column(csv), 5.32e-5);
    EXPECT_EQ(json::parse(r.out)["csv"], path("ab.csv"));
}

TEST_F(CliTest, SimulateCompareFig4Windows) {
    const auto& s = cli::builtin_scenario(4);
    save_system(s.a, path("fa.json"));
    save_system(s.b, path("fb.json"));
    const Result r = run({"simulate", "--chain", path("fa.json") + "," + path("fb.json"), "--input",
                          "40*sin(10*pi*t)", "--compare", "--window", "0,1", "--window", "9,10", "-o", path("f4.csv")});
    ASSERT_EQ(r.code, cli::kSuccess) << r.err;
    const json w = json::parse(r.out)["comparison"]["windows"];
    ASSERT_EQ(w.size(), 2u);
    EXPECT_GT(w[0]["max_abs_diff"].get<double>(), 0.15);
    EXPECT_LT(w[1]["max_abs_diff"].get<double>(), 0.01);
}

TEST_F(CliTest, SimulateMaxDiffGate) {
    const auto& s = cli::builtin_scenario(4);
    save_system(s.a, path("fa.json"));
    save_system(s.b, path("fb.json"));
    const Result r = run({"simulate", "--chain", path("fa.json") + "," + path("fb.json"), "--input",
                          "40*sin(10*pi*t)", "--compare", "--max-diff", "1e-3", "-o", path("f4.csv")});
    EXPECT_EQ(r.code, cli::kCheckFailed);
}

TEST_F(CliTest, SimulateReverseMatchesSwappedChain) {
    const std::string chain = path("A.json") + "," + path("B.json");
    const std::string swapped = path("B.json") + "," + path("A.json");
    const Result r1 = run({"simulate", "--chain", chain, "--reverse", "--input", "sin(t)", "--tf", "1"});
    const Result r2 = run({"simulate", "--chain", swapped, "--input", "sin(t)", "--tf", "1"});
    ASSERT_EQ(r1.code, 0);
    EXPECT_EQ(r1.out, r2.out);
}

TEST_F(CliTest, SimulateUsageErrors) {
    EXPECT_EQ(run({"simulate", "--chain", path("A.json"), "--step", "0.03", "--tf", "1"}).code, cli::kUsageError);
    EXPECT_EQ(run({"simulate", "--chain", path("A.json"), "--integrator", "euler"}).code, cli::kUsageError);
    EXPECT_EQ(run({"simulate", "--chain", path("A.json"), "--input", "foo(t)"}).code, cli::kUsageError);
    EXPECT_EQ(run({"simulate", "--chain", path("A.json"), "--compare", "--window", "1"}).code, cli::kUsageError);
}

TEST_F(CliTest, SimulateDivergenceIsCheckFailure) {
    write("unstable.json", R"json({"a2":"1","a1":"-50","a0":"0","t0":0,"ic":{"y0":1,"dy0":1}})json");
    EXPECT_EQ(run({"simulate", "--chain", path("unstable.json"), "--step", "0.1", "--tf", "100"}).code,
              cli::kCheckFailed);
}

TEST_F(CliTest, WorkedFigure2Summary) {
    const Result r = run({"paper", "--figure", "2", "-o", path("fig2")});
    ASSERT_EQ(r.code, cli::kSuccess) << r.err;
    for (const char* f : {"A.json", "B.json", "C.json", "AB_BA.csv", "BC_CB.csv", "CA_AC.csv", "summary.json"}) {
        EXPECT_TRUE(fs::exists(fs::path(path("fig2")) / f)) << f;
    }
    const json j = json::parse(slurp(fs::path(path("fig2")) / "summary.json"));
    EXPECT_NEAR(j["invariants"]["A0"].get<double>(), 1.0, 1e-12);
    EXPECT_NEAR(j["invariants"]["B0"].get<double>(), 0.0, 1e-12);
    EXPECT_NEAR(j["invariants"]["C0"].get<double>(), 0.75, 1e-12);
    EXPECT_NEAR(j["constants"]["p"][0].get<double>(), 1.0, 1e-15);
    EXPECT_NEAR(j["constants"]["p"][1].get<double>(), 1.0, 1e-15);
    EXPECT_NEAR(j["constants"]["p"][2].get<double>(), 0.0, 1e-15);
    EXPECT_NEAR(j["initial_state_conditions"]["ratio_ab"].get<double>(), -1.5, 1e-15);
    EXPECT_NEAR(j["initial_state_conditions"]["ratio_bc"].get<double>(), -1.5, 1e-15);
    EXPECT_LE(j["initial_state_conditions"]["composed_quadratic_residual"].get<double>(), 1e-12);
    EXPECT_TRUE(j["transitivity"]["holds"].get<bool>());
    EXPECT_LE(j["simulation"]["pairs"]["AB_BA"]["max_abs_diff"].get<double>(), 5.32e-5);
}

TEST_F(CliTest, WorkedFigure3IsRelaxed) {
    const Result r = run({"paper", "--figure", "3", "-o", path("fig3")});
    ASSERT_EQ(r.code, cli::kSuccess) << r.err;
    const json j = json::parse(r.out);
    EXPECT_EQ(j["transitivity"]["ab"]["verdict"], "CommutativeZeroIC");
    EXPECT_EQ(j["transitivity"]["ac"]["verdict"], "CommutativeZeroIC");
    EXPECT_NEAR(j["constants"]["p"][1].get<double>(), -3.0, 1e-15);
}

TEST_F(CliTest, WorkedFigure4ReportsMismatch) {
    const Result r = run({"paper", "--figure", "4", "-o", path("fig4")});
    ASSERT_EQ(r.code, cli::kSuccess) << r.err;
    const json j = json::parse(r.out);
    EXPECT_FALSE(j["transitivity"]["holds"].get<bool>());
    EXPECT_EQ(j["transitivity"]["ab"]["failed_condition"], "initial states differ");
    EXPECT_GT(j["simulation"]["pairs"]["AB_BA"]["windows"][0]["max_abs_diff"].get<double>(), 0.15);
}

TEST_F(CliTest, WorkedOutputsAreDeterministic) {
    ASSERT_EQ(run({"paper", "--figure", "2", "-o", path("r1")}).code, 0);
    ASSERT_EQ(run({"paper", "--figure", "2", "-o", path("r2")}).code, 0);
    for (const char* f : {"A.json", "B.json", "C.json", "AB_BA.csv", "BC_CB.csv", "CA_AC.csv", "summary.json"}) {
        EXPECT_EQ(slurp(fs::path(path("r1")) / f), slurp(fs::path(path("r2")) / f)) << f;
    }
}

TEST_F(CliTest, WorkedRejectsUnknownFigure) {
    EXPECT_EQ(run({"paper", "--figure", "5", "-o", path("x")}).code, cli::kUsageError);
}
