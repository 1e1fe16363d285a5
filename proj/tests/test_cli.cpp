#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::string kCli = GARDING_CLI;
const std::string kSamples = GARDING_SAMPLES;

struct Run {
    int code;
    std::string out;
};

Run run(const std::string& args) {
    const auto tmp = fs::temp_directory_path() / ("garding_cli_" + std::to_string(::getpid()) + ".txt");
    const std::string cmd = "\"" + kCli + "\" " + args + " > \"" + tmp.string() + "\" 2>/dev/null";
    const int status = std::system(cmd.c_str());
    std::ifstream in(tmp);
    std::stringstream ss;
    ss << in.rdbuf();
    fs::remove(tmp);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, ss.str()};
}

std::string sample(const std::string& name) { return "\"" + kSamples + "/" + name + "\""; }

fs::path scratch(const std::string& name) {
    auto dir = fs::temp_directory_path() / ("garding_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    return dir / name;
}

}  // namespace

TEST(Cli, ConeInfo) {
    auto r = run("cone-info --spec " + sample("cone_garding_2_4.json"));
    ASSERT_EQ(r.code, 0);
    auto j = json::parse(r.out);
    EXPECT_EQ(j.at("kappa"), 2);
    EXPECT_EQ(j.at("rho"), 2.0);
    EXPECT_EQ(j.at("type"), "1");
    r = run("cone-info --spec " + sample("cone_halfspace_3.json"));
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(json::parse(r.out).at("type"), "2");
}

TEST(Cli, OpReportLinear) {
    const auto r = run("op-report --spec " + sample("op_linear_3.json") + " --samples 200 --restarts 2");
    ASSERT_EQ(r.code, 0);
    const auto j = json::parse(r.out);
    for (const auto& rep : j.at("reports")) EXPECT_NEAR(rep.at("theta").get<double>(), 1.0 / 3.0, 1e-15);
    EXPECT_EQ(j.at("pue_index"), 3);
}

TEST(Cli, TransformReport) {
    const auto r = run("transform-report --spec " + sample("cone_garding_2_4.json") + " --rho -1");
    ASSERT_EQ(r.code, 0);
    const auto j = json::parse(r.out);
    EXPECT_EQ(j.at("rho_param"), -1.0);
    EXPECT_TRUE(j.contains("transformed"));
}

TEST(Cli, SolveWritesProfileAndSummary) {
    const auto csv = scratch("trivial.csv");
    const auto r = run("solve --spec " + sample("problem_trivial.json") + " --out \"" + csv.string() + "\"");
    ASSERT_EQ(r.code, 0);
    ASSERT_TRUE(fs::exists(csv));
    std::ifstream in(csv.string() + ".json");
    const auto summary = json::parse(in);
    EXPECT_TRUE(summary.at("converged").get<bool>());
    EXPECT_LE(summary.at("residual_inf").get<double>(), 1e-12);
    EXPECT_LE(std::abs(summary.at("B1").get<double>()), 1e-9);
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(run("solve --spec " + sample("problem_below_floor.json") + " --out \"" + scratch("a.csv").string() + "\"").code, 2);
    const auto stuck = scratch("stuck.csv");
    EXPECT_EQ(run("solve --spec " + sample("problem_nonconvergent.json") + " --out \"" + stuck.string() + "\"").code, 3);
    EXPECT_TRUE(fs::exists(stuck));
    EXPECT_EQ(run("solve --spec " + sample("problem_unknown_key.json") + " --out \"" + scratch("b.csv").string() + "\"").code, 4);
    EXPECT_EQ(run("op-report --spec " + sample("op_guan_zhang_degenerate.json")).code, 4);
    EXPECT_EQ(run("op-report --spec " + sample("op_sigma_root_2_4.json") + " --sigma -1 --samples 100").code, 3);
    EXPECT_EQ(run("cone-info").code, 4);
    EXPECT_EQ(run("cone-info --spec /nonexistent/cone.json").code, 4);
}

TEST(Cli, VerifyPasses) {
    const auto out = scratch("verify.json");
    const auto r = run("verify --seed 3 --out \"" + out.string() + "\"");
    EXPECT_EQ(r.code, 0) << r.out;
    std::ifstream in(out);
    const auto report = json::parse(in);
    EXPECT_TRUE(report.at("passed").get<bool>());
    EXPECT_EQ(report.at("checks").size(), 11u);
}
