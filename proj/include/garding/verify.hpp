#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "garding/conformal.hpp"
#include "garding/cones.hpp"
#include "garding/ellipticity.hpp"
#include "garding/operators.hpp"
#include "garding/radial_solver.hpp"
#include "garding/sampling.hpp"

namespace garding::verify {

using nlohmann::json;

struct Options {
    std::uint64_t seed = kDefaultSeed;
    /// Full sample counts; the reduced run uses a fifth of the samples and probes.
    bool full = false;
};

struct CheckResult {
    std::string id;
    std::string name;
    bool passed = false;
    json detail;
    /// Wall time; never serialized.
    double seconds = 0.0;
};

struct Scale {
    int samples;
    int restarts;
    int probes;
    int jets;
};

inline Scale scale_for(const Options& o) {
    return o.full ? Scale{10000, kDefaultRestarts, 1000, 1000} : Scale{2000, 10, 200, 200};
}

/// A converged solve kept for the C0 check.
struct SolverRun {
    std::string label;
    RadialProblem problem;
    RadialSolution solution;
    std::vector<double> background;
};

struct Context {
    Options options;
    Scale scale;
    std::vector<SolverRun> runs;
};

inline std::vector<OperatorSpec> builtin_operators(int n) {
    std::vector<OperatorSpec> ops{OperatorSpec::linear(n)};
    for (int k = 1; k <= n; ++k) ops.push_back(OperatorSpec::sigma_root(k, n));
    for (int k = 1; k <= n; ++k) ops.push_back(OperatorSpec::sigma_quotient(k, n));
    for (int k = 2; k <= n; ++k) {
        ops.push_back(OperatorSpec::guan_zhang(k, n, std::vector<double>(k - 1, 1.0), std::vector<double>(k - 1, 0.5)));
        ops.push_back(OperatorSpec::guan_zhang(k, n, std::vector<double>(k - 1, 1.0), std::vector<double>(k - 1, 0.0)));
    }
    return ops;
}

inline std::string fmt_level(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", x);
    return buf;
}

inline std::string label(const OperatorSpec& op) {
    return to_string(op.family()) + "(k=" + std::to_string(op.k()) + ",n=" + std::to_string(op.dimension()) +
           (op.family() == Family::GuanZhang ? (op.has_beta() ? ",beta>0" : ",beta=0") : "") + ")";
}

// ---------------------------------------------------------------------------

inline CheckResult check_cone_invariants(Context&) {
    CheckResult c{"C1", "cone_invariants", true, json::object()};
    double max_err = 0.0;
    int mismatches = 0, checked = 0;
    for (int n = 2; n <= 10; ++n) {
        for (int k = 1; k <= n; ++k) {
            const auto g = ConeDescriptor::garding(k, n);
            const auto p = ConeDescriptor::pk(k, n);
            const double eg = std::abs(rho(g) - static_cast<double>(n) / k);
            const double ep = std::abs(rho(p) - k);
            max_err = std::max({max_err, eg, ep});
            if (kappa(g) != n - k || kappa(p) != k - 1) ++mismatches;
            if (eg > 1e-8 || ep > 1e-8) c.passed = false;
            checked += 2;
        }
    }
    if (mismatches) c.passed = false;
    c.detail = {{"cones", checked}, {"max_rho_error", max_err}, {"kappa_mismatches", mismatches}};
    return c;
}

inline CheckResult check_transform_formulas(Context& ctx) {
    CheckResult c{"C2", "transform_formulas", true, json::object()};
    double max_neg = 0.0, max_pos = 0.0;
    for (int n = 3; n <= 5; ++n) {
        const auto base = ConeDescriptor::garding(n, n);
        const double rg = rho(base);
        for (double r : {-2.0, -1.0, -0.5}) {
            const double predicted = rg + rg * (n - rg) / (rg - r);
            max_neg = std::max(max_neg, std::abs(rho(transform(base, r)) - predicted));
        }
        if (type_of(base) != ConeType::Type1) c.passed = false;
        for (double r : {0.25, 0.5, 0.75, 1.0}) {
            if (r > rg) continue;
            max_pos = std::max(max_pos, std::abs(rho(transform(base, r)) - (n - r)));
        }
    }
    if (max_neg > 1e-6 || max_pos > 1e-6) c.passed = false;

    std::mt19937_64 rng(ctx.options.seed ^ 0x7A11);
    int probes = 0, disagreements = 0;
    double max_map_err = 0.0;
    while (probes < 1000) {
        const int n = 3 + static_cast<int>(rng() % 4);
        const int k = 1 + static_cast<int>(rng() % static_cast<unsigned>(n));
        const double r = uniform(rng, 0.05, n - 0.05);
        const auto base = ConeDescriptor::garding(k, n);
        const auto round_trip = transform(transform(base, r), n - r);
        std::vector<double> x(static_cast<std::size_t>(n));
        for (double& v : x) v = uniform(rng, -1.0, 1.0);
        // map identity: (S - (n - rho) x_i)/rho, then (S - rho y_i)/(n - rho)
        double s = 0.0;
        for (double v : x) s += v;
        std::vector<double> y(x.size()), z(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) y[i] = (s - (n - r) * x[i]) / r;
        double sy = 0.0;
        for (double v : y) sy += v;
        for (std::size_t i = 0; i < x.size(); ++i) {
            z[i] = (sy - r * y[i]) / (n - r);
            max_map_err = std::max(max_map_err, std::abs(z[i] - x[i]) / (1.0 + std::abs(x[i])));
        }
        // membership, skipping probes within 1e-6 of the boundary
        std::vector<double> up(x), down(x);
        for (std::size_t i = 0; i < x.size(); ++i) {
            up[i] += 1e-6;
            down[i] -= 1e-6;
        }
        if (base.contains_raw(up) != base.contains_raw(down)) continue;
        ++probes;
        if (round_trip.contains_raw(x) != base.contains_raw(x)) ++disagreements;
    }
    if (disagreements || max_map_err > 1e-10) c.passed = false;
    c.detail = {{"max_error_negative_rho", max_neg},
                {"max_error_type1_positive_rho", max_pos},
                {"involution_probes", probes},
                {"involution_disagreements", disagreements},
                {"involution_map_error", max_map_err}};
    return c;
}

inline CheckResult check_partial_uniform_ellipticity(Context& ctx) {
    CheckResult c{"C3", "partial_uniform_ellipticity", true, json::array()};
    for (int n = 3; n <= 6; ++n) {
        for (int k = 1; k <= n; ++k) {
            const auto op = OperatorSpec::sigma_root(k, n);
            LevelSetSampler s{op, 1.0, ctx.options.seed + 17 * n + k, ctx.scale.samples};
            const auto samples = sample_level_set(s);
            const auto stable = pue_report(op, 1.0, n - k + 1, samples, ctx.scale.restarts);
            json row = {{"n", n}, {"k", k}, {"m", n - k + 1}, {"theta", stable.theta}};
            bool ok = stable.theta > kStableTheta;
            // m = n-k+2 exists only for k >= 2
            if (k >= 2) {
                const auto sharp = pue_report(op, 1.0, n - k + 2, samples, ctx.scale.restarts);
                row["theta_next"] = sharp.theta;
                ok = ok && sharp.theta < 1e-2;
            }
            row["passed"] = ok;
            c.passed = c.passed && ok;
            c.detail.push_back(row);
        }
    }
    return c;
}

inline CheckResult check_max_test_cone(Context& ctx) {
    CheckResult c{"C4", "max_test_cone_identity", true, json::array()};
    const double margin = 1e-2;
    for (int k = 2; k <= 3; ++k) {
        for (int n = 3; n <= 4; ++n) {
            if (k > n) continue;
            for (double beta : {0.5, 0.0}) {
                const auto op = OperatorSpec::guan_zhang(k, n, std::vector<double>(k - 1, 1.0),
                                                         std::vector<double>(k - 1, beta));
                LevelSetSampler s{op, 1.0, ctx.options.seed + 31 * n + k, ctx.scale.samples};
                const auto samples = sample_level_set(s);
                const auto cone = ConeDescriptor::garding(k, n);
                std::mt19937_64 rng(ctx.options.seed ^ (0xC4u + 8u * static_cast<unsigned>(n) + static_cast<unsigned>(k)));
                int in_n = 0, out_n = 0, in_fail = 0, out_fail = 0;
                while (in_n < ctx.scale.probes || out_n < ctx.scale.probes) {
                    std::vector<double> x(static_cast<std::size_t>(n));
                    for (double& v : x) v = uniform(rng, -1.0, 1.0);
                    const EigenTuple mu(x);
                    if (cone.contains(mu.shifted(-margin))) {
                        if (in_n >= ctx.scale.probes) continue;
                        ++in_n;
                        if (!max_test_cone_contains(op, 1.0, mu, samples).contains) ++in_fail;
                    } else if (!cone.contains(mu.shifted(margin))) {
                        if (out_n >= ctx.scale.probes) continue;
                        ++out_n;
                        const auto v = max_test_cone_contains(op, 1.0, mu, samples);
                        bool ok = !v.contains && v.witness.has_value();
                        if (ok) {
                            const auto g = op.gradient(*v.witness);
                            ok = dot(g, mu) < 0.0 && std::abs(op.value(*v.witness) - 1.0) <= 1e-6;
                        }
                        if (!ok) ++out_fail;
                    }
                }
                const bool ok = in_fail == 0 && out_fail == 0;
                c.passed = c.passed && ok;
                c.detail.push_back({{"operator", label(op)},
                                    {"inside_probes", in_n},
                                    {"inside_failures", in_fail},
                                    {"outside_probes", out_n},
                                    {"outside_failures", out_fail},
                                    {"passed", ok}});
            }
        }
    }
    return c;
}

inline CheckResult check_laplace_bound(Context& ctx) {
    CheckResult c{"C5", "laplace_bound_sharpness", true, json::array()};
    for (int n = 3; n <= 4; ++n) {
        for (const auto& op : builtin_operators(n)) {
            LevelSetSampler s{op, 1.0, ctx.options.seed + 53 * n + op.k(), ctx.scale.samples};
            const auto r = laplace_bound_check(s, ctx.scale.restarts);
            c.passed = c.passed && r.ok();
            c.detail.push_back({{"operator", label(op)},
                                {"rho_G", r.rho_g},
                                {"max_share", r.max_ratio},
                                {"bound_holds", r.bound_holds},
                                {"sharp", r.sharp}});
        }
    }
    return c;
}

inline CheckResult check_conformal_identity(Context& ctx) {
    CheckResult c{"C6", "conformal_identity", true, json::object()};
    std::mt19937_64 rng(ctx.options.seed ^ 0xC6);
    double worst = 0.0;
    long evaluated = 0;
    const std::vector<double> taus{-3.0, -1.0, 0.0, 0.5, 0.9, 1.1, 1.5, 2.0, 3.0, 6.0};
    for (int j = 0; j < ctx.scale.jets; ++j) {
        // smooth radial jets have u' = O(r)
        const double r = j % 50 == 0 ? 0.0 : uniform(rng, 0.0, 1.0);
        RadialJet jet{r, uniform(rng, -1.0, 1.0), r * uniform(rng, -2.0, 2.0), uniform(rng, -3.0, 3.0)};
        const int n = 3 + j % 4;
        for (double tau : taus) {
            for (double alpha : {1.0, -1.0}) {
                worst = std::max(worst, check2_identity(jet, ConformalParams(tau, alpha, n)));
                ++evaluated;
            }
        }
    }
    c.passed = worst <= 1e-11;
    c.detail = {{"evaluations", evaluated}, {"max_gap", worst}};
    return c;
}

inline CheckResult check_trivial_solver(Context& ctx) {
    CheckResult c{"C7", "trivial_solver", true, json::array()};
    const double chi = 2.0;
    const std::vector<OperatorSpec> ops{OperatorSpec::linear(3), OperatorSpec::sigma_root(2, 4),
                                        OperatorSpec::sigma_quotient(3, 3),
                                        OperatorSpec::guan_zhang(2, 3, {1.0}, {0.5})};
    std::mt19937_64 rng(ctx.options.seed ^ 0xC7);
    for (const auto& op : ops) {
        RadialProblem p;
        p.n = op.dimension();
        p.op = op;
        p.psi = PsiProfile::constant(diagonal_value(op, chi));
        p.chi_scale = chi;
        p.boundary = FiniteValue{0.0};
        p.grid = 2048;
        p.tol = 1e-12;
        p.max_newton = 8;
        std::vector<double> init(static_cast<std::size_t>(p.grid + 1));
        for (double& v : init) v = 0.1 * uniform(rng, -1.0, 1.0);
        json row = {{"operator", label(op)}};
        try {
            auto sol = newton_solve(p, init);
            double umax = 0.0;
            for (double v : sol.u) umax = std::max(umax, std::abs(v));
            const bool ok = umax <= 1e-10 && sol.newton_iters <= 8;
            row["u_inf"] = umax;
            row["newton_iters"] = sol.newton_iters;
            row["passed"] = ok;
            c.passed = c.passed && ok;
            ctx.runs.push_back({"trivial " + label(op), p, std::move(sol),
                                std::vector<double>(static_cast<std::size_t>(p.grid + 1), 0.0)});
        } catch (const Error& e) {
            row["error"] = e.what();
            row["passed"] = false;
            c.passed = false;
        }
        c.detail.push_back(row);
    }
    return c;
}

inline std::vector<double> power_schedule(int first, int last) {
    std::vector<double> ks;
    for (int e = first; e <= last; ++e) ks.push_back(std::ldexp(1.0, e));
    return ks;
}

inline CheckResult check_hyperbolic_oracle(Context& ctx) {
    CheckResult c{"C8", "hyperbolic_oracle", true, json::array()};
    const std::vector<OperatorSpec> ops{OperatorSpec::linear(3), OperatorSpec::sigma_root(2, 4),
                                        OperatorSpec::sigma_quotient(4, 4)};
    for (const auto& op : ops) {
        RadialProblem p;
        p.n = op.dimension();
        p.op = op;
        p.psi = PsiProfile::constant(diagonal_value(op, 0.5));
        p.grid = 4096;
        p.tol = 1e-8;
        p.boundary = Exhaustion{power_schedule(1, 14)};
        json row = {{"operator", label(op)}};
        try {
            auto ex = exhaustion_solve(p);
            const auto& sol = ex.limit();
            double err = 0.0;
            for (std::size_t i = 0; i < sol.r.size(); ++i) {
                if (sol.r[i] > 0.9 + 1e-12) break;
                err = std::max(err, std::abs(sol.u[i] - std::log(2.0 / (1.0 - sol.r[i] * sol.r[i]))));
            }
            const double offset = asymptotic_estimate(sol, 0.5);
            const bool ok = err <= 2e-3 && std::abs(offset) <= 2e-2;
            row["max_error_0_0.9"] = err;
            row["asymptotic_offset"] = offset;
            row["rate_hypothesis_holds"] = asymptotic_rate_applies(op);
            row["iterates"] = ex.iterates.size();
            row["passed"] = ok;
            c.passed = c.passed && ok;
            const auto background = ex.iterates.front().u;
            for (std::size_t j = 0; j < ex.iterates.size(); ++j)
                ctx.runs.push_back({"hyperbolic " + label(op) + " k=" + fmt_level(ex.levels[j]),
                                    p.with_boundary(std::log(ex.levels[j])), ex.iterates[j], background});
        } catch (const Error& e) {
            row["error"] = e.what();
            row["passed"] = false;
            c.passed = false;
        }
        c.detail.push_back(row);
    }
    return c;
}

inline CheckResult check_monotonicity_barriers(Context& ctx) {
    CheckResult c{"C9", "monotonicity_barriers_comparison", true, json::object()};
    const int n = 3;
    const auto op = OperatorSpec::linear(n);
    RadialProblem p;
    p.n = n;
    p.op = op;
    p.psi = PsiProfile::constant(n / 2.0);
    p.grid = 2048;
    p.tol = 1e-9;
    p.boundary = Exhaustion{power_schedule(1, 12)};
    try {
        // exhaustion_solve throws InvariantBreach on a monotonicity failure
        auto ex = exhaustion_solve(p);
        double min_step = std::numeric_limits<double>::infinity();
        for (std::size_t j = 1; j < ex.iterates.size(); ++j)
            for (std::size_t i = 0; i < ex.iterates[j].u.size(); ++i)
                min_step = std::min(min_step, ex.iterates[j].u[i] - ex.iterates[j - 1].u[i]);
        const bool monotone = min_step >= -10.0 * p.tol;
        json barriers = json::array();
        bool barrier_ok = true;
        for (double delta : {0.05, 0.1, 0.2}) {
            bool all = true;
            for (std::size_t j = 0; j < ex.iterates.size(); ++j)
                all = all && lower_barrier_respected(ex.iterates[j], ex.levels[j], delta, 10.0 * p.tol);
            barriers.push_back({{"delta", delta}, {"respected", all}});
            barrier_ok = barrier_ok && all;
        }
        c.detail["iterates"] = ex.iterates.size();
        c.detail["min_increment"] = min_step;
        c.detail["monotone"] = monotone;
        c.detail["lower_barrier"] = barriers;
        c.passed = monotone && barrier_ok;
        const auto background = ex.iterates.front().u;
        for (std::size_t j = 0; j < ex.iterates.size(); ++j)
            ctx.runs.push_back({"exhaustion k=" + fmt_level(ex.levels[j]), p.with_boundary(std::log(ex.levels[j])),
                                ex.iterates[j], background});
    } catch (const Error& e) {
        c.detail["exhaustion_error"] = e.what();
        c.passed = false;
    }

    json comparisons = json::array();
    for (double phi : {0.0, std::log(16.0)}) {
        RadialProblem lo = p.with_boundary(phi), hi = p.with_boundary(phi);
        hi.psi = PsiProfile::constant(static_cast<double>(n));
        try {
            auto guess = exhaustion_guess(lo, std::exp(phi));
            auto s_lo = newton_solve(lo, guess);
            auto s_hi = newton_solve(hi, guess);
            const bool ok = comparison_check(lo, s_lo, hi, s_hi);
            comparisons.push_back({{"phi", phi}, {"ordered", ok}});
            c.passed = c.passed && ok;
            std::vector<double> bg(static_cast<std::size_t>(lo.grid + 1));
            for (int i = 0; i <= lo.grid; ++i) bg[static_cast<std::size_t>(i)] = hyperbolic_jet(lo.r(i), 2.0, 0.5).u;
            ctx.runs.push_back({"comparison psi=n/2 phi=" + fmt_level(phi), lo, std::move(s_lo), bg});
            ctx.runs.push_back({"comparison psi=n phi=" + fmt_level(phi), hi, std::move(s_hi), bg});
        } catch (const Error& e) {
            comparisons.push_back({{"phi", phi}, {"error", e.what()}});
            c.passed = false;
        }
    }
    c.detail["comparison"] = comparisons;
    return c;
}

inline CheckResult check_c0_sandwich(Context& ctx) {
    CheckResult c{"C10", "c0_sandwich", true, json::object()};
    int failures = 0;
    json failed = json::array();
    double trivial_gap = 0.0;
    for (const auto& run : ctx.runs) {
        try {
            const auto b = c0_bounds(run.problem, run.solution, run.background);
            bool ok = b.holds;
            if (run.label.rfind("trivial", 0) == 0) {
                trivial_gap = std::max({trivial_gap, std::abs(b.B1), std::abs(b.B2)});
                ok = ok && std::abs(b.B1) <= 1e-9 && std::abs(b.B2) <= 1e-9;
            }
            if (!ok) {
                ++failures;
                failed.push_back(run.label);
            }
        } catch (const Error& e) {
            ++failures;
            failed.push_back(run.label + ": " + e.what());
        }
    }
    c.passed = failures == 0 && !ctx.runs.empty();
    c.detail = {{"runs", ctx.runs.size()}, {"failures", failures}, {"failed", failed}, {"trivial_max_B", trivial_gap}};
    return c;
}

/// In-process repeat of a seeded sampling report; the byte-level CLI repeat
/// lives in the acceptance driver.
inline CheckResult check_determinism(Context& ctx) {
    CheckResult c{"C11", "determinism", true, json::object()};
    auto report = [&] {
        const auto op = OperatorSpec::sigma_root(2, 4);
        LevelSetSampler s{op, 1.0, ctx.options.seed, 500};
        const auto r = pue_report(op, 1.0, 3, sample_level_set(s), 5);
        return json{{"theta", r.theta}, {"theta_sampled", r.theta_sampled}, {"K0", r.K0}}.dump();
    };
    const auto a = report(), b = report();
    c.passed = a == b;
    c.detail = {{"identical", a == b}};
    return c;
}

inline std::vector<CheckResult> run_all(const Options& options,
                                        const std::function<void(const CheckResult&)>& on_result = {}) {
    Context ctx{options, scale_for(options), {}};
    using Fn = CheckResult (*)(Context&);
    const Fn checks[] = {check_cone_invariants,         check_transform_formulas, check_partial_uniform_ellipticity,
                         check_max_test_cone,           check_laplace_bound,      check_conformal_identity,
                         check_trivial_solver,          check_hyperbolic_oracle,  check_monotonicity_barriers,
                         check_c0_sandwich,             check_determinism};
    std::vector<CheckResult> out;
    for (Fn fn : checks) {
        const auto t0 = std::chrono::steady_clock::now();
        auto r = fn(ctx);
        r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (on_result) on_result(r);
        out.push_back(std::move(r));
    }
    return out;
}

inline json report_json(const Options& options, const std::vector<CheckResult>& results) {
    json checks = json::array();
    bool all = true;
    for (const auto& r : results) {
        checks.push_back({{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"detail", r.detail}});
        all = all && r.passed;
    }
    return {{"seed", options.seed}, {"mode", options.full ? "full" : "reduced"}, {"checks", checks}, {"passed", all}};
}

/// Space-separated ids of the failed checks.
inline std::string failed_ids(const std::vector<CheckResult>& results) {
    std::string failed;
    for (const auto& r : results)
        if (!r.passed) failed += (failed.empty() ? "" : " ") + r.id;
    return failed;
}

/// Process exit status of a verify run: 0 when every check passed, else 1.
inline int exit_status(const std::vector<CheckResult>& results) { return failed_ids(results).empty() ? 0 : 1; }

}  // namespace garding::verify
