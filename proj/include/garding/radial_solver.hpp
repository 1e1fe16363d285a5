#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "garding/conformal.hpp"
#include "garding/errors.hpp"
#include "garding/operators.hpp"
#include "garding/tridiagonal.hpp"

namespace garding {

/// Right-hand side psi(r): a constant or a piecewise-linear table in r.
class PsiProfile {
public:
    static PsiProfile constant(double value) { return PsiProfile({{0.0, value}, {1.0, value}}, true); }

    /// Knots (r, psi) with strictly increasing r covering [0, 1].
    static PsiProfile table(std::vector<std::pair<double, double>> knots) {
        if (knots.size() < 2) throw DomainError("psi table needs at least two knots");
        for (std::size_t i = 1; i < knots.size(); ++i)
            if (!(knots[i].first > knots[i - 1].first)) throw DomainError("psi table radii must increase");
        if (knots.front().first > 0.0 || knots.back().first < 1.0)
            throw DomainError("psi table must cover [0, 1]");
        for (const auto& [r, v] : knots)
            if (!std::isfinite(r) || !std::isfinite(v)) throw DomainError("psi table entries must be finite");
        return PsiProfile(std::move(knots), false);
    }

    double operator()(double r) const {
        if (r <= knots_.front().first) return knots_.front().second;
        for (std::size_t i = 1; i < knots_.size(); ++i) {
            if (r <= knots_[i].first) {
                const auto& [r0, v0] = knots_[i - 1];
                const auto& [r1, v1] = knots_[i];
                return v0 + (v1 - v0) * (r - r0) / (r1 - r0);
            }
        }
        return knots_.back().second;
    }

    bool is_constant() const { return constant_; }
    const std::vector<std::pair<double, double>>& knots() const { return knots_; }

private:
    PsiProfile(std::vector<std::pair<double, double>> knots, bool constant)
        : knots_(std::move(knots)), constant_(constant) {}

    std::vector<std::pair<double, double>> knots_;
    bool constant_;
};

struct FiniteValue {
    double phi;
};
struct Exhaustion {
    std::vector<double> k_schedule;
};
using BoundaryMode = std::variant<FiniteValue, Exhaustion>;

/// f(lambda(g_u^{-1} W[u])) = psi on the unit ball for radial u, with
/// W[u] = Hess u + |du|^2 g / 2 - du (x) du + chi_scale g.
struct RadialProblem {
    int n = 3;
    OperatorSpec op = OperatorSpec::linear(3);
    PsiProfile psi = PsiProfile::constant(1.5);
    double chi_scale = 0.0;
    BoundaryMode boundary = FiniteValue{0.0};
    int grid = 2048;
    double tol = 1e-9;
    int max_newton = 60;

    double h() const { return 1.0 / grid; }
    double r(int i) const { return static_cast<double>(i) / grid; }

    /// Structural checks throw DomainError; an unattainable psi throws RangeError.
    void validate() const {
        if (n < 3) throw DomainError("radial problem needs n >= 3");
        if (op.dimension() != n) throw DomainError("operator dimension differs from n");
        if (grid < 64) throw DomainError("grid must have N >= 64");
        if (!(tol > 0.0 && tol <= 1e-4)) throw DomainError("tol must lie in (0, 1e-4]");
        if (max_newton < 1) throw DomainError("max_newton must be positive");
        if (!std::isfinite(chi_scale)) throw DomainError("chi_scale must be finite");
        if (const auto* ex = std::get_if<Exhaustion>(&boundary)) {
            if (ex->k_schedule.empty()) throw DomainError("exhaustion schedule is empty");
            for (std::size_t i = 0; i < ex->k_schedule.size(); ++i) {
                if (!(ex->k_schedule[i] > 0.0) || !std::isfinite(ex->k_schedule[i]))
                    throw DomainError("exhaustion levels must be positive");
                if (i > 0 && !(ex->k_schedule[i] > ex->k_schedule[i - 1]))
                    throw DomainError("exhaustion schedule must increase strictly");
            }
        } else if (!std::isfinite(std::get<FiniteValue>(boundary).phi)) {
            throw DomainError("boundary value must be finite");
        }
        for (const auto& [r, v] : psi.knots()) c_tilde(op, v);  // RangeError outside the diagonal range
    }

    RadialProblem with_boundary(double phi) const {
        RadialProblem p = *this;
        p.boundary = FiniteValue{phi};
        return p;
    }

    double boundary_value() const {
        if (const auto* fv = std::get_if<FiniteValue>(&boundary)) return fv->phi;
        throw PreconditionError("finite boundary data required");
    }
};

struct RadialSolution {
    std::vector<double> r;
    std::vector<double> u;
    std::vector<double> u_prime;
    std::vector<double> lam_rad;
    std::vector<double> lam_tan;
    std::vector<double> residual;
    std::vector<char> admissible;
    double residual_inf = std::numeric_limits<double>::infinity();
    int newton_iters = 0;
    bool converged = false;
    double boundary_value = 0.0;
    std::optional<double> B1, B2, asymptotic_offset;

    bool all_admissible() const {
        return std::all_of(admissible.begin(), admissible.end(), [](char c) { return c != 0; });
    }
    EigenTuple eigs(int i, int n) const {
        std::vector<double> v(static_cast<std::size_t>(n), lam_tan[static_cast<std::size_t>(i)]);
        v[0] = lam_rad[static_cast<std::size_t>(i)];
        return EigenTuple(std::move(v));
    }
};

class NonConvergence : public Error {
public:
    NonConvergence(const std::string& what, RadialSolution last) : Error(what), last_(std::move(last)) {}
    const RadialSolution& last_iterate() const { return last_; }

private:
    RadialSolution last_;
};

class SolverStall : public NonConvergence {
public:
    using NonConvergence::NonConvergence;
};

/// Discrete residual and per-node eigenvalue data.
struct ResidualEval {
    std::vector<double> F;
    std::vector<char> admissible;
    std::vector<double> lam_rad, lam_tan, up;
    bool all_admissible = true;
    /// max |F|; +inf when any node is inadmissible.
    double inf_norm = 0.0;
};

/// Central-difference jet at node i; the centre uses the ghost u_{-1} = u_1.
inline RadialJet node_jet(std::span<const double> u, int i, double h) {
    if (i == 0) return {0.0, u[0], 0.0, 2.0 * (u[1] - u[0]) / (h * h)};
    const auto s = static_cast<std::size_t>(i);
    return {i * h, u[s], (u[s + 1] - u[s - 1]) / (2.0 * h), (u[s + 1] - 2.0 * u[s] + u[s - 1]) / (h * h)};
}

/// F_i = f(lambda_i) - psi(r_i) on nodes 0..N-1, F_N = u_N - phi.
inline ResidualEval residual(const RadialProblem& p, std::span<const double> u) {
    const int N = p.grid;
    if (static_cast<int>(u.size()) != N + 1) throw DomainError("grid function has the wrong length");
    const double phi = p.boundary_value();
    const double h = p.h();
    ResidualEval out;
    out.F.assign(static_cast<std::size_t>(N + 1), 0.0);
    out.admissible.assign(static_cast<std::size_t>(N + 1), 1);
    out.lam_rad.assign(static_cast<std::size_t>(N + 1), 0.0);
    out.lam_tan.assign(static_cast<std::size_t>(N + 1), 0.0);
    out.up.assign(static_cast<std::size_t>(N + 1), 0.0);
    for (int i = 0; i < N; ++i) {
        const auto s = static_cast<std::size_t>(i);
        for (int j = std::max(0, i - 1); j <= i + 1; ++j)
            if (!std::isfinite(u[static_cast<std::size_t>(j)])) throw DomainError("grid function must be finite");
        const auto jet = node_jet(u, i, h);
        const auto lam = schouten_eigs(jet, p.n, p.chi_scale);
        out.lam_rad[s] = lam[0];
        out.lam_tan[s] = lam[1];
        out.up[s] = jet.up;
        if (p.op.in_domain(lam)) {
            out.F[s] = p.op.value(lam) - p.psi(jet.r);
            out.inf_norm = std::max(out.inf_norm, std::abs(out.F[s]));
        } else {
            out.admissible[s] = 0;
            out.all_admissible = false;
            out.F[s] = std::numeric_limits<double>::quiet_NaN();
        }
    }
    const auto last = static_cast<std::size_t>(N);
    out.F[last] = u[last] - phi;
    out.inf_norm = std::max(out.inf_norm, std::abs(out.F[last]));
    // one-sided derivative at the boundary, for output only
    out.up[last] = (3.0 * u[last] - 4.0 * u[last - 1] + u[last - 2]) / (2.0 * h);
    out.lam_rad[last] = out.lam_rad[last - 1];
    out.lam_tan[last] = out.lam_tan[last - 1];
    if (!out.all_admissible) out.inf_norm = std::numeric_limits<double>::infinity();
    return out;
}

/// Tridiagonal Jacobian dF/du; requires every interior node admissible.
inline Tridiagonal jacobian(const RadialProblem& p, std::span<const double> u, const ResidualEval& res) {
    const int N = p.grid;
    const double h = p.h(), h2 = h * h;
    Tridiagonal J(static_cast<std::size_t>(N + 1));
    for (int i = 0; i < N; ++i) {
        const auto s = static_cast<std::size_t>(i);
        const auto lam = EigenTuple([&] {
            std::vector<double> v(static_cast<std::size_t>(p.n), res.lam_tan[s]);
            v[0] = res.lam_rad[s];
            return v;
        }());
        const auto g = p.op.gradient(lam);
        const double w = std::exp(-2.0 * u[s]);
        const double a = res.lam_rad[s], b = res.lam_tan[s];
        if (i == 0) {
            const double S = g.sum();
            J.diag[s] = S * (-2.0 * w / h2 - 2.0 * a);
            J.super[s] = S * 2.0 * w / h2;
            continue;
        }
        const double A = g[0];
        const double B = g.sum() - g[0];
        const double up = res.up[s];
        const double r = i * h;
        J.sub[s] = A * w * (1.0 / h2 + up / (2.0 * h)) + B * w * (-1.0 / (2.0 * h * r) - up / (2.0 * h));
        J.super[s] = A * w * (1.0 / h2 - up / (2.0 * h)) + B * w * (1.0 / (2.0 * h * r) + up / (2.0 * h));
        J.diag[s] = A * (-2.0 * w / h2 - 2.0 * a) + B * (-2.0 * b);
    }
    J.diag[static_cast<std::size_t>(N)] = 1.0;
    return J;
}

inline RadialSolution make_solution(const RadialProblem& p, std::span<const double> u, const ResidualEval& res,
                                    int iters, bool converged) {
    RadialSolution sol;
    const int N = p.grid;
    sol.r.resize(static_cast<std::size_t>(N + 1));
    for (int i = 0; i <= N; ++i) sol.r[static_cast<std::size_t>(i)] = p.r(i);
    sol.u.assign(u.begin(), u.end());
    sol.u_prime = res.up;
    sol.lam_rad = res.lam_rad;
    sol.lam_tan = res.lam_tan;
    sol.residual = res.F;
    sol.admissible = res.admissible;
    sol.residual_inf = res.inf_norm;
    sol.newton_iters = iters;
    sol.converged = converged;
    sol.boundary_value = p.boundary_value();
    return sol;
}

/// Share of interior nodes whose eigenvalues lie in the operator domain.
inline double admissible_fraction(const ResidualEval& res) {
    const std::size_t interior = res.admissible.size() - 1;
    std::size_t good = 0;
    for (std::size_t i = 0; i < interior; ++i) good += res.admissible[i] ? 1 : 0;
    return static_cast<double>(good) / static_cast<double>(interior);
}

/// Damped Newton on the tridiagonal system. A step is accepted when the max
/// residual decreases and every node stays admissible; otherwise it is
/// halved, up to 30 times. An initial guess with inadmissible nodes is
/// smoothed first by implicit diffusion of growing strength.
inline RadialSolution newton_solve(const RadialProblem& p, std::vector<double> u) {
    p.validate();
    const int N = p.grid;
    if (static_cast<int>(u.size()) != N + 1) throw DomainError("initial guess has the wrong length");
    u.back() = p.boundary_value();

    auto res = residual(p, u);
    // implicit diffusion (I - s D2) v = u, mirrored at the centre, u_N held
    double s = 1.0;
    for (int pass = 0; !res.all_admissible && pass < 40; ++pass, s *= 4.0) {
        Tridiagonal A(static_cast<std::size_t>(N + 1));
        A.diag[0] = 1.0 + 2.0 * s;
        A.super[0] = -2.0 * s;
        for (int i = 1; i < N; ++i) {
            const auto k = static_cast<std::size_t>(i);
            A.sub[k] = -s;
            A.diag[k] = 1.0 + 2.0 * s;
            A.super[k] = -s;
        }
        A.diag[static_cast<std::size_t>(N)] = 1.0;
        u = solve_tridiagonal(A, u);
        res = residual(p, u);
    }
    if (!res.all_admissible)
        throw InfeasiblePoint("initial guess remains inadmissible after pre-smoothing");

    int full_backtracks = 0;
    for (int iter = 0; iter < p.max_newton; ++iter) {
        if (res.inf_norm <= p.tol) return make_solution(p, u, res, iter, true);
        const auto J = jacobian(p, u, res);
        std::vector<double> rhs(res.F.size());
        for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] = -res.F[i];
        const auto delta = solve_tridiagonal(J, rhs);

        double step = 1.0;
        bool accepted = false;
        std::optional<std::pair<std::vector<double>, ResidualEval>> fallback;
        for (int halving = 0; halving <= 30; ++halving, step *= 0.5) {
            std::vector<double> trial(u);
            for (std::size_t i = 0; i < trial.size(); ++i) trial[i] += step * delta[i];
            auto tres = residual(p, trial);
            if (!tres.all_admissible) continue;
            if (tres.inf_norm < res.inf_norm) {
                u = std::move(trial);
                res = std::move(tres);
                accepted = true;
                break;
            }
            fallback = std::make_pair(std::move(trial), std::move(tres));
        }
        if (accepted) {
            full_backtracks = 0;
            continue;
        }
        if (++full_backtracks >= 30)
            throw SolverStall("Newton stalled after 30 consecutive full backtracks",
                              make_solution(p, u, res, iter + 1, false));
        if (fallback) {
            u = std::move(fallback->first);
            res = std::move(fallback->second);
        }
    }
    if (res.inf_norm <= p.tol) return make_solution(p, u, res, p.max_newton, true);
    throw NonConvergence("Newton iteration limit reached", make_solution(p, u, res, p.max_newton, false));
}

/// Hyperbolic-shaped initial guess with boundary value log k.
inline std::vector<double> exhaustion_guess(const RadialProblem& p, double k) {
    std::vector<double> u(static_cast<std::size_t>(p.grid + 1));
    for (int i = 0; i <= p.grid; ++i) {
        const double r = p.r(i);
        u[static_cast<std::size_t>(i)] = std::log(k) - std::log(1.0 + k * (1.0 - r * r) / 2.0);
    }
    return u;
}

struct ExhaustionResult {
    std::vector<double> levels;
    std::vector<RadialSolution> iterates;
    bool limit_declared = false;

    const RadialSolution& limit() const { return iterates.back(); }
};

/// Finite problems with boundary data log k over the schedule, each warm
/// started from its predecessor shifted by the change of the analytic guess.
/// Successive iterates must increase pointwise (comparison principle).
inline ExhaustionResult exhaustion_solve(const RadialProblem& p) {
    p.validate();
    const auto* ex = std::get_if<Exhaustion>(&p.boundary);
    if (!ex) throw PreconditionError("exhaustion_solve needs an exhaustion schedule");
    ExhaustionResult out;
    const double band = 10.0 * p.tol;
    for (std::size_t j = 0; j < ex->k_schedule.size(); ++j) {
        const double k = ex->k_schedule[j];
        const RadialProblem sub = p.with_boundary(std::log(k));
        std::vector<double> guess = exhaustion_guess(sub, k);
        if (j > 0) {
            const auto prev_guess = exhaustion_guess(sub, ex->k_schedule[j - 1]);
            const auto& prev = out.iterates.back().u;
            std::vector<double> warm(guess.size());
            for (std::size_t i = 0; i < warm.size(); ++i) warm[i] = prev[i] + guess[i] - prev_guess[i];
            auto wres = residual(sub, warm);
            if (wres.all_admissible) guess = std::move(warm);
        }
        auto sol = newton_solve(sub, std::move(guess));
        if (j > 0) {
            const auto& prev = out.iterates.back();
            double diff = 0.0;
            for (std::size_t i = 0; i < sol.u.size(); ++i) {
                if (sol.u[i] < prev.u[i] - band)
                    throw InvariantBreach("exhaustion iterates decreased at r = " + std::to_string(sol.r[i]));
                if (sol.r[i] <= 0.95) diff = std::max(diff, std::abs(sol.u[i] - prev.u[i]));
            }
            out.levels.push_back(k);
            out.iterates.push_back(std::move(sol));
            if (diff < p.tol) {
                out.limit_declared = true;
                break;
            }
            continue;
        }
        out.levels.push_back(k);
        out.iterates.push_back(std::move(sol));
    }
    return out;
}

/// Boundary offset: intercept c of u(r) + log(1-r) fitted linearly in (1-r)
/// over r in [0.8, 0.97], minus log(1/(2 D_o))/2.
inline double asymptotic_estimate(const RadialSolution& sol, double d_o) {
    if (!(d_o > 0.0)) throw DomainError("D_o must be positive");
    double s1 = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < sol.r.size(); ++i) {
        const double r = sol.r[i];
        if (r < 0.8 - 1e-12 || r > 0.97 + 1e-12) continue;
        if (!sol.admissible[i]) throw EstimateUnavailable("inadmissible node in the fit window");
        const double x = 1.0 - r, y = sol.u[i] + std::log(1.0 - r);
        s1 += 1;
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    if (s1 < 2) throw EstimateUnavailable("fit window has fewer than two nodes");
    const double slope = (s1 * sxy - sx * sy) / (s1 * sxx - sx * sx);
    const double intercept = (sy - slope * sx) / s1;
    return intercept - 0.5 * std::log(1.0 / (2.0 * d_o));
}

struct C0Bounds {
    double B1;
    double B2;
    bool holds;
};

inline constexpr double kC0Slack = 1e-6;

/// B1 = min, B2 = max over nodes of the shift c solving
/// f(e^{-2c} lambda(background)) = psi, then the sandwich
/// min(B1, bdry) <= u - background <= max(B2, bdry) on every node.
inline C0Bounds c0_bounds(const RadialProblem& p, const RadialSolution& sol, std::span<const double> background) {
    const int N = p.grid;
    if (static_cast<int>(background.size()) != N + 1 || sol.u.size() != background.size())
        throw PreconditionError("background and solution grids differ");
    const auto cone = p.op.asymptotic_cone();
    double B1 = std::numeric_limits<double>::infinity(), B2 = -B1;
    for (int i = 0; i < N; ++i) {
        const auto lam = schouten_eigs(node_jet(background, i, p.h()), p.n, p.chi_scale);
        if (!cone.contains(lam) || !p.op.in_domain(lam))
            throw PreconditionError("background is not strictly admissible at r = " + std::to_string(p.r(i)));
        const double target = p.psi(p.r(i));
        // f(e^{-2c} lam) decreases in c
        auto f = [&](double c) { return p.op.value(lam.scaled(std::exp(-2.0 * c))); };
        double lo = -1.0, hi = 1.0;
        for (int g = 0; f(lo) < target; ++g) {
            if (g > 100) throw RangeError("c0_bounds: no bracket");
            lo -= 2.0 * (hi - lo);
        }
        for (int g = 0; f(hi) > target; ++g) {
            if (g > 100) throw RangeError("c0_bounds: no bracket");
            hi += 2.0 * (hi - lo);
        }
        for (int it = 0; it < 200 && hi - lo > 1e-14; ++it) {
            const double mid = 0.5 * (lo + hi);
            (f(mid) > target ? lo : hi) = mid;
        }
        const double c = 0.5 * (lo + hi);
        B1 = std::min(B1, c);
        B2 = std::max(B2, c);
    }
    const double bdry = sol.u.back() - background.back();
    const double lower = std::min(B1, bdry) - kC0Slack, upper = std::max(B2, bdry) + kC0Slack;
    bool holds = true;
    for (std::size_t i = 0; i < sol.u.size(); ++i) {
        const double d = sol.u[i] - background[i];
        if (d < lower || d > upper) holds = false;
    }
    return {B1, B2, holds};
}

/// Larger psi gives a pointwise smaller solution: u_hi <= u_lo + 10 tol.
inline bool comparison_check(const RadialProblem& p_lo, const RadialSolution& lo, const RadialProblem& p_hi,
                             const RadialSolution& hi) {
    if (!(p_lo.op == p_hi.op) || p_lo.n != p_hi.n) throw PreconditionError("comparison needs the same operator");
    if (p_lo.grid != p_hi.grid || lo.u.size() != hi.u.size()) throw PreconditionError("comparison needs the same grid");
    if (std::abs(lo.boundary_value - hi.boundary_value) > 1e-12)
        throw PreconditionError("comparison needs the same boundary data");
    if (p_lo.chi_scale != p_hi.chi_scale) throw PreconditionError("comparison needs the same chi");
    for (int i = 0; i <= p_lo.grid; ++i)
        if (p_hi.psi(p_lo.r(i)) < p_lo.psi(p_lo.r(i))) throw PreconditionError("psi_hi must dominate psi_lo");
    const auto cone = p_lo.op.asymptotic_cone();
    auto strictly = [&](const RadialSolution& s) {
        for (int i = 0; i < p_lo.grid; ++i)
            if (!cone.contains(s.eigs(i, p_lo.n))) return false;
        return true;
    };
    if (!strictly(lo) && !strictly(hi)) throw PreconditionError("neither solution is strictly admissible");
    const double band = 10.0 * std::max(p_lo.tol, p_hi.tol);
    for (std::size_t i = 0; i < lo.u.size(); ++i)
        if (hi.u[i] > lo.u[i] + band) return false;
    return true;
}

/// Lower barrier log(k delta^2/(delta^2 + k sig)) respected on sig = 1 - r <= delta.
inline bool lower_barrier_respected(const RadialSolution& sol, double k, double delta, double slack) {
    for (std::size_t i = 0; i < sol.r.size(); ++i) {
        const double sig = 1.0 - sol.r[i];
        if (sig > delta) continue;
        if (sol.u[i] < barrier_lower(sig, k, delta, std::log(k)) - slack) return false;
    }
    return true;
}

/// Whether (1,...,1,-1) lies in the closed asymptotic cone; the boundary
/// rate is only asserted when it does.
inline bool asymptotic_rate_applies(const OperatorSpec& op) {
    std::vector<double> probe(static_cast<std::size_t>(op.dimension()), 1.0);
    probe.back() = -1.0;
    const auto cone = op.asymptotic_cone();
    for (double& v : probe) v += 1e-9;
    return cone.contains_raw(probe);
}

}  // namespace garding
