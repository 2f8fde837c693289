#include "plap/cli/config.hpp"
#include "plap/cli/emit.hpp"
#include "plap/cli/run.hpp"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

using namespace plap;
using namespace plap::cli;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        dir_ = fs::temp_directory_path() / ("plap-cli-" + std::string(info->name()) + "-" + std::to_string(::getpid()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    RunConfig config(json j) {
        j["output"]["directory"] = (dir_ / "out").string();
        return parseConfig(j.dump());
    }

    fs::path writeConfig(const json& j, const std::string& name = "config.json") {
        const fs::path p = dir_ / name;
        std::ofstream(p) << j.dump(2);
        return p;
    }

    int runBinary(const std::string& args) {
        const std::string cmd = std::string(PLAP_BINARY) + " " + args + " > " + (dir_ / "stdout.txt").string() +
                                " 2> " + (dir_ / "stderr.txt").string();
        const int status = std::system(cmd.c_str());
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    }

    fs::path dir_;
};

json cubicSlab() {
    return {{"command", "solve"},
            {"problem", {{"p", 2.0}, {"n", 1}, {"lambda", 2.0}, {"nonlinearity", {{"type", "autonomous"}, {"f", {-1.0, 0.0, 0.0, 1.0}}}}}}};
}

json radialModel(int n, double q) {
    return {{"command", "check"},
            {"problem",
             {{"p", 2.0},
              {"n", n},
              {"lambda", 1.0},
              {"nonlinearity", {{"type", "model_ab"}, {"a", {1.0}}, {"b", {1.0}}, {"q", q}}}}}};
}

std::string configErrorField(const std::string& text) {
    try {
        parseConfig(text);
    } catch (const ConfigError& e) {
        return e.field();
    }
    return "<accepted>";
}

}  // namespace

TEST(Config, ReportsSyntaxErrorsWithPosition) {
    const std::string field = configErrorField("{\n  \"command\": \"solve\",\n  \"problem\": {\n}");
    EXPECT_NE(field.find("line"), std::string::npos) << field;
}

TEST(Config, PointsAtTheOffendingField) {
    json j = cubicSlab();
    j["problem"]["typo"] = 1;
    EXPECT_EQ(configErrorField(j.dump()), "problem.typo");
    j = cubicSlab();
    j["problem"].erase("p");
    EXPECT_EQ(configErrorField(j.dump()), "problem.p");
    j = cubicSlab();
    j["problem"]["p"] = 0.5;
    EXPECT_EQ(configErrorField(j.dump()), "problem.p");
    j = cubicSlab();
    j["problem"]["lambda"] = -1.0;
    EXPECT_EQ(configErrorField(j.dump()), "problem.lambda");
    j = cubicSlab();
    j["solve"] = {{"method", "newton"}};
    EXPECT_EQ(configErrorField(j.dump()), "solve.method");
    j = cubicSlab();
    j["command"] = "curve";
    EXPECT_EQ(configErrorField(j.dump()), "curve.lambda_range");
    j = cubicSlab();
    j["command"] = "timemap";
    j["problem"]["n"] = 3;
    j["timemap"] = {{"alphas", {2.0}}};
    EXPECT_EQ(configErrorField(j.dump()), "problem.n");
    j = cubicSlab();
    j["command"] = "homotopy";
    j["homotopy"] = {{"kind", "coefficient_power"}};
    EXPECT_EQ(configErrorField(j.dump()), "problem.nonlinearity.type");
}

TEST(Config, SupercriticalOnlyForCheck) {
    json j = radialModel(3, 7.0);
    EXPECT_EQ(configErrorField(j.dump()), "<accepted>");
    j["command"] = "solve";
    EXPECT_EQ(configErrorField(j.dump()), "problem.nonlinearity.q");
}

TEST(Config, ResolvedEchoFillsDefaults) {
    const RunConfig c = parseConfig(cubicSlab().dump());
    EXPECT_EQ(c.resolved["tolerances"]["integrator_rel"], 1e-10);
    EXPECT_EQ(c.resolved["tolerances"]["root"], 1e-13);
    EXPECT_EQ(c.resolved["solve"]["method"], "automatic");
    EXPECT_EQ(c.resolved["output"]["formats"], json({"csv", "json"}));
    // Resolving the echo again is a fixed point.
    EXPECT_EQ(parseConfig(c.resolved.dump()).resolved, c.resolved);
    EXPECT_EQ(c.shootOptions().integrator.relTol, 1e-10);
}

TEST(Config, CommandOverride) {
    const RunConfig c = parseConfig(radialModel(3, 3.0).dump(), Command::Solve);
    EXPECT_EQ(c.command, Command::Solve);
    EXPECT_EQ(parseCommand("identities"), Command::Identities);
    EXPECT_FALSE(parseCommand("bogus"));
}

TEST(Emit, NumbersRoundTripAtSeventeenDigits) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> mant(-1.0, 1.0);
    std::uniform_int_distribution<int> ex(-300, 300);
    Table t{{"x"}, {}};
    for (int i = 0; i < 2000; ++i) t.rows.push_back({std::ldexp(mant(rng), ex(rng))});
    t.rows.push_back({NAN});
    t.rows.push_back({INFINITY});
    const Table back = parseCsv(renderCsv(t, json::object()));
    ASSERT_EQ(back.rows.size(), t.rows.size());
    for (std::size_t i = 0; i + 2 < t.rows.size(); ++i) ASSERT_EQ(back.rows[i][0], t.rows[i][0]);
    EXPECT_TRUE(std::isnan(back.rows[t.rows.size() - 2][0]));
    EXPECT_EQ(formatNumber(0.1), "0.10000000000000001");
}

TEST_F(Cli, SolveWritesTheCsvContract) {
    const RunOutcome out = runCommand(config(cubicSlab()));
    ASSERT_EQ(out.exitCode, kOk) << out.summary;
    const std::string text = slurp(dir_ / "out" / "solution.csv");
    EXPECT_EQ(text.find('\r'), std::string::npos);
    EXPECT_EQ(text.rfind("# config: ", 0), 0u);
    const Table t = parseCsv(text);
    EXPECT_EQ(t.columns, (std::vector<std::string>{"r", "u", "uPrime", "v", "w", "wPrime"}));
    EXPECT_DOUBLE_EQ(t.rows.front()[0], 1e-6);
    EXPECT_DOUBLE_EQ(t.rows.back()[0], 1.0);
    EXPECT_LT(std::abs(t.rows.back()[1]), 1e-9);
    const json j = json::parse(slurp(dir_ / "out" / "solution.json"));
    EXPECT_EQ(j["metadata"]["config"]["command"], "solve");
    EXPECT_TRUE(j["metadata"]["versions"].contains("plap"));
    EXPECT_NEAR(j["alpha"].get<double>(), t.rows.front()[1], 1e-9);
    // No temporary files are left behind.
    for (const auto& e : fs::directory_iterator(dir_ / "out")) EXPECT_NE(e.path().filename().string()[0], '.');
}

TEST_F(Cli, OutputIsDeterministic) {
    const RunConfig c = config(cubicSlab());
    runCommand(c);
    const std::string first = slurp(dir_ / "out" / "solution.csv");
    const std::string firstJson = slurp(dir_ / "out" / "solution.json");
    runCommand(c);
    EXPECT_EQ(first, slurp(dir_ / "out" / "solution.csv"));
    EXPECT_EQ(firstJson, slurp(dir_ / "out" / "solution.json"));
}

TEST_F(Cli, CheckReportsFailuresWithExitTwo) {
    const RunOutcome out = runCommand(config(radialModel(3, 7.0)));
    EXPECT_EQ(out.exitCode, kHypothesisFail);
    const json j = json::parse(slurp(dir_ / "out" / "report.json"));
    EXPECT_FALSE(j["allPass"].get<bool>());
    bool found = false;
    for (const auto& e : j["entries"]) {
        for (const char* key : {"name", "pass", "verdict", "witness", "value", "detail"}) EXPECT_TRUE(e.contains(key)) << key;
        if (e["name"] == "subcritical growth") {
            found = true;
            EXPECT_FALSE(e["pass"].get<bool>());
            EXPECT_EQ(e["value"].get<double>(), 5.0);
        }
    }
    EXPECT_TRUE(found);
    const std::string csv = slurp(dir_ / "out" / "report.csv");
    EXPECT_NE(csv.find("\"subcritical growth\",FAIL"), std::string::npos);
}

TEST_F(Cli, CheckPassesWithSolutionAudit) {
    json j = radialModel(3, 3.0);
    j["check"] = {{"solution", true}};
    const RunOutcome out = runCommand(config(j));
    EXPECT_EQ(out.exitCode, kOk) << out.summary;
}

TEST_F(Cli, SolverFailureWritesErrorJson) {
    json j = cubicSlab();
    j["solve"] = {{"alpha_bracket", {1.6, 1.7}}, {"method", "amplitude"}};
    const RunOutcome out = runCommand(config(j));
    EXPECT_EQ(out.exitCode, kSolverFailure);
    const json e = json::parse(slurp(dir_ / "out" / "error.json"));
    EXPECT_EQ(e["error"]["kind"], "bracket-failure");
    EXPECT_TRUE(e["error"]["message"].is_string());
    EXPECT_TRUE(e.contains("metadata"));
}

TEST_F(Cli, CurveAndClassify) {
    json j = cubicSlab();
    j["command"] = "classify";
    j["curve"] = {{"lambda_range", {0.1, 5.0}}, {"steps", 10}};
    const RunOutcome out = runCommand(config(j));
    ASSERT_EQ(out.exitCode, kOk) << out.summary;
    const json c = json::parse(slurp(dir_ / "out" / "classify.json"));
    EXPECT_EQ(c["stopReason"], "lambda0");
    EXPECT_EQ(c["shape"]["template"], "f(0)<0");
    EXPECT_EQ(c["shape"]["foldsDetected"], 0);
    const Table t = parseCsv(slurp(dir_ / "out" / "classify.csv"));
    EXPECT_EQ(t.columns.front(), "parameter");
}

TEST_F(Cli, HomotopyEndpoint) {
    json j = {{"command", "homotopy"},
              {"problem",
               {{"p", 2.0},
                {"n", 2},
                {"lambda", 1.0},
                {"nonlinearity", {{"type", "model_ab"}, {"a", {1.0, 1.0}}, {"b", {2.0, 0.0, -1.0}}, {"q", 3.0}}}}},
              {"homotopy", {{"kind", "linear_term_switch"}, {"steps", 5}}}};
    const RunOutcome out = runCommand(config(j));
    ASSERT_EQ(out.exitCode, kOk) << out.summary;
    const json h = json::parse(slurp(dir_ / "out" / "homotopy.json"));
    EXPECT_EQ(h["endpoint"]["theta"], 1.0);
    EXPECT_LT(std::abs(h["endpoint"]["uAtOne"].get<double>()), 1e-9);
}

TEST_F(Cli, TimemapCrossCheck) {
    json j = cubicSlab();
    j["command"] = "timemap";
    j["timemap"] = {{"alphas", {1.7, 2.5, 4.0}}};
    const RunOutcome out = runCommand(config(j));
    ASSERT_EQ(out.exitCode, kOk) << out.summary;
    const Table t = parseCsv(slurp(dir_ / "out" / "timemap.csv"));
    ASSERT_EQ(t.rows.size(), 3u);
    for (const auto& row : t.rows) EXPECT_LT(row[4], 1e-8);
}

TEST_F(Cli, IdentitiesResiduals) {
    json j = cubicSlab();
    j["command"] = "identities";
    const RunOutcome out = runCommand(config(j));
    ASSERT_EQ(out.exitCode, kOk) << out.summary;
    const json r = json::parse(slurp(dir_ / "out" / "identities.json"));
    EXPECT_LT(r["T"]["relative"].get<double>(), 1e-6);
    EXPECT_TRUE(r.contains("oneDim"));
}

TEST_F(Cli, BinaryEndToEnd) {
    const fs::path cfg = writeConfig(cubicSlab());
    const fs::path out = dir_ / "bin-out";
    EXPECT_EQ(runBinary("solve --config " + cfg.string() + " --out " + out.string() + " --format csv"), 0)
        << slurp(dir_ / "stderr.txt");
    EXPECT_TRUE(fs::exists(out / "solution.csv"));
    EXPECT_FALSE(fs::exists(out / "solution.json"));

    const fs::path bad = writeConfig(radialModel(3, 7.0), "bad.json");
    EXPECT_EQ(runBinary("check --config " + bad.string() + " --out " + out.string()), 2);
    EXPECT_EQ(runBinary("solve --config " + bad.string() + " --out " + out.string()), 1);
    EXPECT_NE(slurp(dir_ / "stderr.txt").find("problem.nonlinearity.q"), std::string::npos);
    EXPECT_EQ(runBinary("solve --config " + (dir_ / "missing.json").string()), 1);
    EXPECT_EQ(runBinary("frobnicate --config " + cfg.string()), 1);
}

TEST(Config, DocumentedExamplesParse) {
    const fs::path dir = fs::path(PLAP_DOCS_DIR) / "examples";
    const std::pair<const char*, Command> examples[] = {
        {"solve.json", Command::Solve}, {"curve.json", Command::Curve}, {"check.json", Command::Check}};
    for (const auto& [name, command] : examples) {
        const RunConfig c = loadConfig(dir / name);
        EXPECT_EQ(c.command, command) << name;
    }
}
