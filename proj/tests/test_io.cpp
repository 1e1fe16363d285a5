#include <gtest/gtest.h>

#include <cstdlib>
#include <sstream>

#include "support.hpp"

using namespace garding;
using io::json;

TEST(Io, OperatorRoundTrip) {
    for (int n = 2; n <= 5; ++n)
        for (const auto& op : testing_support::all_operators(n)) EXPECT_EQ(io::operator_from_json(io::to_json(op)), op);
}

TEST(Io, OperatorRejectsBadInput) {
    EXPECT_THROW(io::operator_from_json(json{{"family", "SigmaRoot"}, {"k", 2}, {"n", 3}, {"extra", 1}}), ConfigError);
    EXPECT_THROW(io::operator_from_json(json{{"family", "Hessian"}, {"k", 2}, {"n", 3}}), ConfigError);
    EXPECT_THROW(io::operator_from_json(json{{"family", "SigmaRoot"}, {"k", 5}, {"n", 3}}), ConfigError);
    EXPECT_THROW(io::operator_from_json(json{{"family", "SigmaRoot"}, {"n", 3}}), ConfigError);
    EXPECT_THROW(io::operator_from_json(json{{"family", "SigmaRoot"}, {"k", "two"}, {"n", 3}}), ConfigError);
    EXPECT_THROW(io::operator_from_json(json::array()), ConfigError);
}

TEST(Io, ConeRoundTrip) {
    const std::vector<ConeDescriptor> cones{ConeDescriptor::garding(2, 4), ConeDescriptor::pk(3, 5),
                                            transform(ConeDescriptor::garding(3, 3), -1.0),
                                            projection(ConeDescriptor::garding(3, 4))};
    for (const auto& c : cones) {
        const auto back = io::cone_from_json(io::to_json(c));
        EXPECT_EQ(io::to_json(back), io::to_json(c));
        EXPECT_EQ(io::invariants_json(back), io::invariants_json(c));
    }
    EXPECT_THROW(io::cone_from_json(json{{"kind", "Garding"}, {"k", 2}, {"n", 4}, {"rho", 1}}), ConfigError);
    EXPECT_THROW(io::cone_from_json(json{{"kind", "Transformed"}, {"rho", 0.0}, {"base", {{"kind", "Garding"}, {"k", 2}, {"n", 3}}}}),
                 ConfigError);
    EXPECT_THROW(io::cone_from_json(json{{"kind", "Cylinder"}}), ConfigError);
}

namespace {

json base_problem() {
    return json{{"n", 3}, {"op", {{"family", "Linear"}, {"n", 3}, {"k", 1}}}, {"psi", 1.5}, {"boundary", {{"phi", 0.0}}},
                {"grid", 256}};
}

}  // namespace

TEST(Io, ProblemDefaultsAndBackgrounds) {
    auto cfg = io::problem_from_json(base_problem());
    EXPECT_EQ(cfg.problem.grid, 256);
    EXPECT_EQ(cfg.problem.tol, 1e-9);
    EXPECT_EQ(cfg.problem.max_newton, 60);
    EXPECT_EQ(cfg.background.kind, io::Background::Kind::Hyperbolic);
    EXPECT_EQ(cfg.background.value, 2.0);
    EXPECT_FALSE(cfg.d_o.has_value());

    auto j = base_problem();
    j["chi_scale"] = 1.0;
    EXPECT_EQ(io::problem_from_json(j).background.kind, io::Background::Kind::Constant);
    j = base_problem();
    j["boundary"] = {{"k_schedule", {2, 4, 8}}};
    j["D_o"] = 0.5;
    cfg = io::problem_from_json(j);
    EXPECT_EQ(cfg.background.kind, io::Background::Kind::FirstIterate);
    EXPECT_EQ(*cfg.d_o, 0.5);
    j = base_problem();
    j["psi"] = {{"table", {{0.0, 1.0}, {1.0, 2.0}}}};
    EXPECT_FALSE(io::problem_from_json(j).problem.psi.is_constant());
}

TEST(Io, ProblemRejectsBadInput) {
    auto j = base_problem();
    j["grdi"] = 128;
    EXPECT_THROW(io::problem_from_json(j), ConfigError);
    j = base_problem();
    j["boundary"] = {{"phi", 0.0}, {"k_schedule", {2}}};
    EXPECT_THROW(io::problem_from_json(j), ConfigError);
    j = base_problem();
    j["grid"] = 16;
    EXPECT_THROW(io::problem_from_json(j), ConfigError);
    j = base_problem();
    j["psi"] = {{"table", {{0.0, 1.0}, {0.5, 2.0}}}};
    EXPECT_THROW(io::problem_from_json(j), ConfigError);
    j = base_problem();
    j["background"] = {{"kind", "hyperbolic"}, {"radius", 0.5}};
    EXPECT_THROW(io::problem_from_json(j), ConfigError);
    j = base_problem();
    j["op"] = {{"family", "SigmaRoot"}, {"n", 3}, {"k", 2}};
    j["psi"] = -1.0;
    EXPECT_THROW(io::problem_from_json(j), RangeError);
}

TEST(Io, FormattedDoublesRoundTrip) {
    std::mt19937_64 rng(101);
    for (int s = 0; s < 2000; ++s) {
        const double x = std::ldexp(uniform(rng, -1, 1), static_cast<int>(rng() % 200) - 100);
        EXPECT_EQ(std::strtod(io::fmt17(x).c_str(), nullptr), x);
    }
}

TEST(Io, ProfileCsvLayout) {
    RadialProblem p;
    p.grid = 64;
    p.op = OperatorSpec::sigma_root(2, 3);
    p.chi_scale = 2.0;
    p.psi = PsiProfile::constant(p.op.value(EigenTuple::constant(3, 2.0)));
    const std::vector<double> u(65, 0.0);
    auto sol = make_solution(p, u, residual(p, u), 0, true);
    std::ostringstream out;
    io::write_profile_csv(out, sol);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "r,u,u_prime,lambda_rad,lambda_tan,residual");
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    EXPECT_EQ(rows, 65);

    const auto summary = io::summary_json(sol);
    EXPECT_TRUE(summary.at("B1").is_null());
    sol.B1 = 0.5;
    EXPECT_EQ(io::summary_json(sol).at("B1"), 0.5);
    EXPECT_EQ(summary.at("converged"), true);
}

TEST(Io, VerifyExitStatus) {
    std::vector<verify::CheckResult> results{{"C1", "a", true, json::object()}, {"C2", "b", true, json::object()}};
    EXPECT_EQ(verify::exit_status(results), 0);
    results.push_back({"C3", "c", false, json::object()});
    results.push_back({"C5", "e", false, json::object()});
    EXPECT_EQ(verify::exit_status(results), 1);
    EXPECT_EQ(verify::failed_ids(results), "C3 C5");
}
