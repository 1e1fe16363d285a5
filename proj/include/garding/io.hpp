#pragma once

#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "garding/cones.hpp"
#include "garding/errors.hpp"
#include "garding/operators.hpp"
#include "garding/radial_solver.hpp"

namespace garding::io {

using nlohmann::json;

inline void require_object(const json& j, const std::string& what) {
    if (!j.is_object()) throw ConfigError(what + " must be a JSON object");
}

/// Rejects keys outside the allowed set.
inline void reject_unknown(const json& j, std::initializer_list<const char*> allowed, const std::string& what) {
    for (const auto& [key, value] : j.items()) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || key == a;
        if (!ok) throw ConfigError("unknown key '" + key + "' in " + what);
    }
}

template <class T>
T get_required(const json& j, const char* key, const std::string& what) {
    if (!j.contains(key)) throw ConfigError("missing key '" + std::string(key) + "' in " + what);
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError("bad value for '" + std::string(key) + "' in " + what + ": " + e.what());
    }
}

template <class T>
T get_optional(const json& j, const char* key, T fallback, const std::string& what) {
    if (!j.contains(key)) return fallback;
    return get_required<T>(j, key, what);
}

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError("invalid JSON in " + path + ": " + e.what());
    }
}

// ---------------------------------------------------------------------------
// Operators

inline Family family_from_string(const std::string& s) {
    if (s == "SigmaRoot") return Family::SigmaRoot;
    if (s == "SigmaQuotient") return Family::SigmaQuotient;
    if (s == "GuanZhang") return Family::GuanZhang;
    if (s == "Linear") return Family::Linear;
    throw ConfigError("unknown operator family '" + s + "'");
}

/// {"family": ..., "n": int, "k": int, "alphas": [...], "betas": [...]}
inline OperatorSpec operator_from_json(const json& j) {
    const std::string what = "operator";
    require_object(j, what);
    reject_unknown(j, {"family", "n", "k", "alphas", "betas"}, what);
    const auto family = family_from_string(get_required<std::string>(j, "family", what));
    const int n = get_required<int>(j, "n", what);
    try {
        switch (family) {
            case Family::Linear:
                if (j.contains("k") && get_required<int>(j, "k", what) != 1) throw ConfigError("Linear has k = 1");
                return OperatorSpec::linear(n);
            case Family::SigmaRoot: return OperatorSpec::sigma_root(get_required<int>(j, "k", what), n);
            case Family::SigmaQuotient: return OperatorSpec::sigma_quotient(get_required<int>(j, "k", what), n);
            case Family::GuanZhang:
                return OperatorSpec::guan_zhang(get_required<int>(j, "k", what), n,
                                                get_required<std::vector<double>>(j, "alphas", what),
                                                get_required<std::vector<double>>(j, "betas", what));
        }
    } catch (const DomainError& e) {
        throw ConfigError(std::string("invalid operator: ") + e.what());
    }
    throw ConfigError("unreachable operator family");
}

inline json to_json(const OperatorSpec& op) {
    json j = {{"family", to_string(op.family())}, {"n", op.dimension()}, {"k", op.k()}};
    if (op.family() == Family::GuanZhang) {
        j["alphas"] = op.alphas();
        j["betas"] = op.betas();
    }
    return j;
}

// ---------------------------------------------------------------------------
// Cones

/// {"kind": "Garding"|"Pk", "k", "n"} | {"kind": "Transformed", "rho", "base"}
/// | {"kind": "Projection", "base"}
inline ConeDescriptor cone_from_json(const json& j) {
    const std::string what = "cone";
    require_object(j, what);
    const auto kind = get_required<std::string>(j, "kind", what);
    try {
        if (kind == "Garding" || kind == "Pk") {
            reject_unknown(j, {"kind", "k", "n"}, what);
            const int k = get_required<int>(j, "k", what), n = get_required<int>(j, "n", what);
            return kind == "Garding" ? ConeDescriptor::garding(k, n) : ConeDescriptor::pk(k, n);
        }
        if (kind == "Transformed") {
            reject_unknown(j, {"kind", "rho", "base"}, what);
            if (!j.contains("base")) throw ConfigError("missing key 'base' in cone");
            return transform(cone_from_json(j.at("base")), get_required<double>(j, "rho", what));
        }
        if (kind == "Projection") {
            reject_unknown(j, {"kind", "base"}, what);
            if (!j.contains("base")) throw ConfigError("missing key 'base' in cone");
            return projection(cone_from_json(j.at("base")));
        }
    } catch (const DomainError& e) {
        throw ConfigError(std::string("invalid cone: ") + e.what());
    }
    throw ConfigError("unknown cone kind '" + kind + "'");
}

inline json to_json(const ConeDescriptor& c) {
    json j = {{"kind", to_string(c.kind())}};
    switch (c.kind()) {
        case ConeKind::Garding:
        case ConeKind::Pk:
            j["k"] = c.k();
            j["n"] = c.dim();
            break;
        case ConeKind::Transformed:
            j["rho"] = c.rho_param();
            j["base"] = to_json(*c.base());
            break;
        case ConeKind::Projection: j["base"] = to_json(*c.base()); break;
    }
    return j;
}

inline json invariants_json(const ConeDescriptor& c) {
    return {{"kappa", kappa(c)}, {"rho", rho(c)}, {"type", to_string(type_of(c))}};
}

// ---------------------------------------------------------------------------
// Radial problems

/// Background for the C0 comparison: a hyperbolic profile of radius R or a constant.
struct Background {
    enum class Kind { Hyperbolic, Constant, FirstIterate } kind = Kind::Hyperbolic;
    double value = 2.0;

    std::vector<double> on_grid(const RadialProblem& p) const {
        std::vector<double> u(static_cast<std::size_t>(p.grid + 1));
        for (int i = 0; i <= p.grid; ++i) {
            const double r = p.r(i);
            u[static_cast<std::size_t>(i)] =
                kind == Kind::Constant ? value : std::log(2.0 * value / (value * value - r * r));
        }
        return u;
    }
};

struct ProblemConfig {
    RadialProblem problem;
    Background background;
    /// D_o for the asymptotic estimate; defaults to c_tilde of the boundary psi.
    std::optional<double> d_o;
};

/// {"n", "op", "psi": number | {"table": [[r, v], ...]}, "chi_scale",
///  "boundary": {"phi": x} | {"k_schedule": [...]}, "grid", "tol", "max_newton",
///  "background": {"kind": "hyperbolic", "radius": R} | {"kind": "constant", "value": c}
///                | {"kind": "first_iterate"}, "D_o"}
inline ProblemConfig problem_from_json(const json& j) {
    const std::string what = "problem";
    require_object(j, what);
    reject_unknown(j, {"n", "op", "psi", "chi_scale", "boundary", "grid", "tol", "max_newton", "background", "D_o"},
                   what);
    ProblemConfig cfg;
    auto& p = cfg.problem;
    p.n = get_required<int>(j, "n", what);
    if (!j.contains("op")) throw ConfigError("missing key 'op' in problem");
    p.op = operator_from_json(j.at("op"));

    if (!j.contains("psi")) throw ConfigError("missing key 'psi' in problem");
    const auto& psi = j.at("psi");
    try {
        if (psi.is_number()) {
            p.psi = PsiProfile::constant(psi.get<double>());
        } else {
            require_object(psi, "psi");
            reject_unknown(psi, {"table"}, "psi");
            auto rows = get_required<std::vector<std::vector<double>>>(psi, "table", "psi");
            std::vector<std::pair<double, double>> knots;
            for (const auto& row : rows) {
                if (row.size() != 2) throw ConfigError("psi table rows are [r, value] pairs");
                knots.emplace_back(row[0], row[1]);
            }
            p.psi = PsiProfile::table(std::move(knots));
        }
    } catch (const DomainError& e) {
        throw ConfigError(std::string("invalid psi: ") + e.what());
    }

    p.chi_scale = get_optional<double>(j, "chi_scale", 0.0, what);
    p.grid = get_optional<int>(j, "grid", 2048, what);
    p.tol = get_optional<double>(j, "tol", 1e-9, what);
    p.max_newton = get_optional<int>(j, "max_newton", 60, what);

    if (!j.contains("boundary")) throw ConfigError("missing key 'boundary' in problem");
    const auto& b = j.at("boundary");
    require_object(b, "boundary");
    reject_unknown(b, {"phi", "k_schedule"}, "boundary");
    if (b.contains("phi") == b.contains("k_schedule"))
        throw ConfigError("boundary needs exactly one of 'phi' and 'k_schedule'");
    if (b.contains("phi"))
        p.boundary = FiniteValue{get_required<double>(b, "phi", "boundary")};
    else
        p.boundary = Exhaustion{get_required<std::vector<double>>(b, "k_schedule", "boundary")};

    if (j.contains("background")) {
        const auto& bg = j.at("background");
        require_object(bg, "background");
        const auto kind = get_required<std::string>(bg, "kind", "background");
        if (kind == "hyperbolic") {
            reject_unknown(bg, {"kind", "radius"}, "background");
            cfg.background = {Background::Kind::Hyperbolic, get_optional<double>(bg, "radius", 2.0, "background")};
            if (!(cfg.background.value > 1.0)) throw ConfigError("hyperbolic background needs radius > 1");
        } else if (kind == "constant") {
            reject_unknown(bg, {"kind", "value"}, "background");
            cfg.background = {Background::Kind::Constant, get_optional<double>(bg, "value", 0.0, "background")};
        } else if (kind == "first_iterate") {
            reject_unknown(bg, {"kind"}, "background");
            cfg.background = {Background::Kind::FirstIterate, 0.0};
        } else {
            throw ConfigError("unknown background kind '" + kind + "'");
        }
    } else if (std::holds_alternative<Exhaustion>(p.boundary)) {
        cfg.background = {Background::Kind::FirstIterate, 0.0};
    } else if (p.chi_scale > 0.0) {
        cfg.background = {Background::Kind::Constant, 0.0};
    }
    if (j.contains("D_o")) cfg.d_o = get_required<double>(j, "D_o", what);

    try {
        p.validate();
    } catch (const DomainError& e) {
        throw ConfigError(std::string("invalid problem: ") + e.what());
    }
    return cfg;
}

// ---------------------------------------------------------------------------
// Output

/// %.17g, the shortest format that round-trips every double.
inline std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline void write_profile_csv(std::ostream& out, const RadialSolution& sol) {
    out << "r,u,u_prime,lambda_rad,lambda_tan,residual\n";
    for (std::size_t i = 0; i < sol.r.size(); ++i) {
        out << fmt17(sol.r[i]) << ',' << fmt17(sol.u[i]) << ',' << fmt17(sol.u_prime[i]) << ','
            << fmt17(sol.lam_rad[i]) << ',' << fmt17(sol.lam_tan[i]) << ',' << fmt17(sol.residual[i]) << '\n';
    }
}

inline json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

inline json summary_json(const RadialSolution& sol) {
    return {{"residual_inf", sol.residual_inf},
            {"B1", optional_number(sol.B1)},
            {"B2", optional_number(sol.B2)},
            {"asymptotic_offset", optional_number(sol.asymptotic_offset)},
            {"newton_iters", sol.newton_iters},
            {"converged", sol.converged}};
}

}  // namespace garding::io
