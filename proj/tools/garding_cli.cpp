// garding: cone invariants, ellipticity reports, radial solves and the
// acceptance suite from the command line.
//
// Exit codes: 0 ok, 1 verify failure, 2 infeasible input, 3 nonconvergence
// or sampler starvation, 4 bad configuration.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "garding/garding.hpp"

namespace {

using nlohmann::json;
using namespace garding;

enum Exit { kOk = 0, kVerifyFailed = 1, kInfeasible = 2, kNonConvergence = 3, kBadConfig = 4 };

void print(const json& j) { std::cout << j.dump(2) << '\n'; }

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path);
    out << text;
}

int cone_info(const std::string& spec) {
    const auto cone = io::cone_from_json(io::read_json_file(spec));
    print(io::invariants_json(cone));
    return kOk;
}

int op_report(const std::string& spec, double sigma, int samples, std::uint64_t seed, std::optional<int> m,
              int restarts) {
    const auto op = io::operator_from_json(io::read_json_file(spec));
    if (samples < 1) throw ConfigError("--samples must be positive");
    if (restarts < 0) throw ConfigError("--restarts must be >= 0");
    if (m && (*m < 1 || *m > op.dimension())) throw ConfigError("--m must lie in [1, n]");
    LevelSetSampler s{op, sigma, seed, samples};
    const auto pts = sample_level_set(s);
    json reports = json::array();
    int index = 0;
    for (int mm = 1; mm <= op.dimension(); ++mm) {
        if (m && mm != *m) continue;
        const auto r = pue_report(op, sigma, mm, pts, restarts);
        if (r.theta > kStableTheta) index = mm;
        reports.push_back({{"m", r.m},
                           {"theta", r.theta},
                           {"theta_sampled", r.theta_sampled},
                           {"stable", r.theta > kStableTheta},
                           {"violations", r.violations}});
    }
    const auto cone = op.asymptotic_cone();
    json out = {{"operator", io::to_json(op)},
                {"sigma", sigma},
                {"seed", seed},
                {"samples", static_cast<int>(pts.size())},
                {"restarts", restarts},
                {"K0", measured_k0(pts)},
                {"asymptotic_cone", io::invariants_json(cone)},
                {"reports", reports}};
    if (!m) out["pue_index"] = index;
    print(out);
    return kOk;
}

int transform_report(const std::string& spec, double rho_param) {
    const auto base = io::cone_from_json(io::read_json_file(spec));
    ConeDescriptor t = base;
    try {
        t = transform(base, rho_param);
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
    const int n = base.dim();
    const double rb = rho(base);
    json predicted = nullptr;
    if (rho_param < 0.0)
        predicted = rb + rb * (n - rb) / (rb - rho_param);
    else if (type_of(base) == ConeType::Type1 && rho_param <= rb)
        predicted = n - rho_param;
    print({{"rho_param", rho_param},
           {"base", io::invariants_json(base)},
           {"transformed", io::invariants_json(t)},
           {"predicted_rho", predicted}});
    return kOk;
}

std::vector<double> initial_guess(const RadialProblem& p) {
    const double phi = p.boundary_value();
    if (p.chi_scale > 0.0) return std::vector<double>(static_cast<std::size_t>(p.grid + 1), phi);
    return exhaustion_guess(p, std::exp(phi));
}

void annotate(RadialSolution& sol, const RadialProblem& p, const std::vector<double>& background) {
    try {
        const auto b = c0_bounds(p, sol, background);
        sol.B1 = b.B1;
        sol.B2 = b.B2;
    } catch (const Error&) {
        // background not admissible for this problem: bounds left absent
    }
}

int solve(const std::string& spec, const std::string& out_path, std::optional<std::string> summary_path) {
    const auto cfg = io::problem_from_json(io::read_json_file(spec));
    const auto& p = cfg.problem;
    const std::string summary_file = summary_path.value_or(out_path + ".json");

    auto emit = [&](const RadialSolution& sol, const RadialProblem& solved) {
        std::ostringstream csv;
        io::write_profile_csv(csv, sol);
        write_file(out_path, csv.str());
        auto summary = io::summary_json(sol);
        summary["asymptotic_rate_applies"] = asymptotic_rate_applies(solved.op);
        write_file(summary_file, summary.dump(2) + "\n");
        print(summary);
    };

    if (std::holds_alternative<Exhaustion>(p.boundary)) {
        ExhaustionResult result;
        try {
            result = exhaustion_solve(p);
        } catch (const NonConvergence& e) {
            emit(e.last_iterate(), p);
            std::cerr << "error: " << e.what() << '\n';
            return kNonConvergence;
        }
        auto sol = result.limit();
        const auto limit_problem = p.with_boundary(std::log(result.levels.back()));
        const auto background = cfg.background.kind == io::Background::Kind::FirstIterate
                                    ? result.iterates.front().u
                                    : cfg.background.on_grid(limit_problem);
        annotate(sol, limit_problem, background);
        const double d_o = cfg.d_o.value_or(c_tilde(p.op, p.psi(1.0)));
        try {
            sol.asymptotic_offset = asymptotic_estimate(sol, d_o);
        } catch (const EstimateUnavailable&) {
        }
        emit(sol, limit_problem);
        return kOk;
    }

    RadialSolution sol;
    try {
        sol = newton_solve(p, initial_guess(p));
    } catch (const NonConvergence& e) {
        emit(e.last_iterate(), p);
        std::cerr << "error: " << e.what() << '\n';
        return kNonConvergence;
    }
    if (cfg.background.kind != io::Background::Kind::FirstIterate) annotate(sol, p, cfg.background.on_grid(p));
    emit(sol, p);
    return kOk;
}

int run_verify(std::uint64_t seed, bool full, std::optional<std::string> out) {
    verify::Options opts{seed, full};
    const auto results = verify::run_all(opts, [](const verify::CheckResult& r) {
        std::cout << (r.passed ? "PASS " : "FAIL ") << r.id << ' ' << r.name << '\n' << std::flush;
    });
    const auto report = verify::report_json(opts, results);
    if (out)
        write_file(*out, report.dump(2) + "\n");
    else
        print(report);
    if (verify::exit_status(results) != 0) {
        std::cerr << "failed checks: " << verify::failed_ids(results) << '\n';
        return kVerifyFailed;
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Garding-cone operators, ellipticity reports and radial conformal solves"};
    app.require_subcommand(1);

    std::string spec, out;
    std::optional<std::string> summary, verify_out;
    double sigma = 1.0, rho_param = 0.0;
    int samples = kDefaultSampleCount, restarts = kDefaultRestarts;
    std::uint64_t seed = kDefaultSeed;
    std::optional<int> m;
    bool full = false;

    auto* cone_cmd = app.add_subcommand("cone-info", "kappa, rho and type of a cone");
    cone_cmd->add_option("--spec", spec, "cone JSON")->required();

    auto* op_cmd = app.add_subcommand("op-report", "partial uniform ellipticity report");
    op_cmd->add_option("--spec", spec, "operator JSON")->required();
    op_cmd->add_option("--sigma", sigma, "level");
    op_cmd->add_option("--samples", samples, "level-set samples");
    op_cmd->add_option("--seed", seed, "sampler seed");
    op_cmd->add_option("--m", m, "single index m");
    op_cmd->add_option("--restarts", restarts, "adversarial restarts");

    auto* tr_cmd = app.add_subcommand("transform-report", "invariants of a rho-transformed cone");
    tr_cmd->add_option("--spec", spec, "base cone JSON")->required();
    tr_cmd->add_option("--rho", rho_param, "transform parameter")->required();

    auto* solve_cmd = app.add_subcommand("solve", "radial solve to CSV and summary JSON");
    solve_cmd->add_option("--spec", spec, "problem JSON")->required();
    solve_cmd->add_option("--out", out, "profile CSV path")->required();
    solve_cmd->add_option("--summary", summary, "summary JSON path (default: <out>.json)");

    auto* verify_cmd = app.add_subcommand("verify", "run the acceptance suite");
    verify_cmd->add_option("--seed", seed, "base seed");
    verify_cmd->add_flag("--full", full, "full sample counts");
    verify_cmd->add_option("--out", verify_out, "JSON report path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kBadConfig;
    }

    try {
        if (*cone_cmd) return cone_info(spec);
        if (*op_cmd) return op_report(spec, sigma, samples, seed, m, restarts);
        if (*tr_cmd) return transform_report(spec, rho_param);
        if (*solve_cmd) return solve(spec, out, summary);
        if (*verify_cmd) return run_verify(seed, full, verify_out);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kBadConfig;
    } catch (const DomainError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kBadConfig;
    } catch (const RangeError& e) {
        std::cerr << "infeasible: " << e.what() << '\n';
        return kInfeasible;
    } catch (const InfeasiblePoint& e) {
        std::cerr << "infeasible: " << e.what() << '\n';
        return kInfeasible;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kNonConvergence;
    }
    return kBadConfig;
}
