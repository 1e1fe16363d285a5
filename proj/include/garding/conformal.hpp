#pragma once

#include <cmath>
#include <vector>

#include "garding/eigen_tuple.hpp"
#include "garding/errors.hpp"
#include "garding/operators.hpp"

namespace garding {

/// Parameters of the modified Schouten tensor
/// A^{tau,alpha} = alpha/(n-2) (Ric - tau R / (2(n-1)) g).
struct ConformalParams {
    double tau;
    double alpha;  ///< +1 or -1
    int n;

    ConformalParams(double tau_, double alpha_, int n_) : tau(tau_), alpha(alpha_), n(n_) {
        if (n < 3) throw DomainError("conformal parameters need n >= 3");
        if (alpha != 1.0 && alpha != -1.0) throw DomainError("alpha must be +1 or -1");
        if (!std::isfinite(tau) || std::abs(tau - 1.0) < 1e-3) throw DomainError("|tau - 1| must be >= 1e-3");
    }

    double rho() const { return (n - 2) / (tau - 1.0); }
    double gamma() const { return (tau - 2.0) * (n - 2) / (2.0 * (tau - 1.0)); }

    /// tau < 1 for alpha = -1; tau > 1 + (n-2)/rho_G for alpha = +1.
    bool sharp_condition(double rho_g) const {
        return alpha < 0.0 ? tau < 1.0 : tau > 1.0 + (n - 2) / rho_g;
    }
};

/// Radial 2-jet (u, u', u'') at radius r.
struct RadialJet {
    double r;
    double u;
    double up;
    double upp;

    void validate() const {
        if (!(r >= 0.0) || !std::isfinite(r) || !std::isfinite(u) || !std::isfinite(up) || !std::isfinite(upp))
            throw DomainError("radial jet must be finite with r >= 0");
    }
};

/// u'/r, replaced by its limit u'' at the centre.
inline double tangential_slope(const RadialJet& j) { return j.r == 0.0 ? j.upp : j.up / j.r; }

/// Eigenvalues of g_u^{-1} W[u] for W = Hess u + |du|^2 g / 2 - du (x) du + c g
/// on the flat ball: one radial entry, n-1 tangential ones.
inline EigenTuple schouten_eigs(const RadialJet& j, int n, double chi_scale) {
    j.validate();
    if (n < 2) throw DomainError("n must be >= 2");
    const double w = std::exp(-2.0 * j.u);
    const double rad = w * (j.upp - 0.5 * j.up * j.up + chi_scale);
    const double tan = w * (tangential_slope(j) + 0.5 * j.up * j.up + chi_scale);
    std::vector<double> v(static_cast<std::size_t>(n), tan);
    v[0] = rad;
    return EigenTuple(std::move(v));
}

/// Eigenvalues of g_u^{-1} A^{tau,alpha}_{g_u} for a radial u on flat space.
inline EigenTuple modified_schouten_eigs(const RadialJet& j, const ConformalParams& p) {
    j.validate();
    const double w = std::exp(-2.0 * j.u);
    const double slope = tangential_slope(j);
    const double laplacian = j.upp + (p.n - 1) * slope;
    const double common = p.alpha * (p.tau - 1.0) / (p.n - 2) * laplacian + p.alpha * (p.tau - 2.0) / 2.0 * j.up * j.up;
    const double rad = w * (common - p.alpha * j.upp + p.alpha * j.up * j.up);
    const double tan = w * (common - p.alpha * slope);
    std::vector<double> v(static_cast<std::size_t>(p.n), tan);
    v[0] = rad;
    return EigenTuple(std::move(v));
}

/// sum(nu) 1 - rho nu.
inline EigenTuple tilde_map(const EigenTuple& nu, double rho) {
    const double total = nu.sum();
    std::vector<double> out(static_cast<std::size_t>(nu.size()));
    for (int i = 0; i < nu.size(); ++i) out[static_cast<std::size_t>(i)] = total - rho * nu[i];
    return EigenTuple(std::move(out));
}

/// Max-norm gap between the tilde map of the Schouten eigenvalues and the
/// rescaled modified-Schouten eigenvalues; zero up to rounding.
inline double check2_identity(const RadialJet& j, const ConformalParams& p) {
    const auto lhs = tilde_map(schouten_eigs(j, p.n, 0.0), p.rho());
    const auto rhs = modified_schouten_eigs(j, p).scaled((p.n - 2) / (p.alpha * (p.tau - 1.0)));
    return (lhs - rhs).max_abs();
}

/// Eigenvalues of g^{-1} G_g = (n-2)(sum(nu) - nu_i) for nu = lambda(-g^{-1} A_g).
inline EigenTuple einstein_eigs(const EigenTuple& nu) {
    const int n = nu.size();
    if (n < 3) throw DomainError("Einstein tensor relation needs n >= 3");
    const double total = nu.sum();
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = (n - 2) * (total - nu[i]);
    return EigenTuple(std::move(out));
}

/// Hyperbolic metric of the unit ball, u = log(2/(1-r^2)).
inline RadialJet hyperbolic_jet(double r) {
    const double q = 1.0 - r * r;
    return {r, std::log(2.0 / q), 2.0 * r / q, (2.0 + 2.0 * r * r) / (q * q)};
}

/// Hyperbolic metric of the ball of radius R, rescaled so that its
/// eigenvalue tuple is c 1: u = log(2R/(R^2-r^2)) - log(2c)/2.
inline RadialJet hyperbolic_jet(double r, double radius, double c) {
    const double q = radius * radius - r * r;
    return {r, std::log(2.0 * radius / q) - 0.5 * std::log(2.0 * c), 2.0 * r / q,
            2.0 * (radius * radius + r * r) / (q * q)};
}

// ---------------------------------------------------------------------------
// Barriers, in terms of the boundary distance sig.

/// log(delta^2/(delta^2 + k sig)) + phi.
inline double barrier_lower(double sig, double k, double delta, double phi) {
    if (!(k > 0.0) || !(delta > 0.0)) throw DomainError("barrier_lower needs k, delta > 0");
    if (!(sig >= 0.0)) throw DomainError("barrier_lower needs sig >= 0");
    return std::log(delta * delta / (delta * delta + k * sig)) + phi;
}

/// log(1 + sig/delta^2) / (2(n-2)) + phi.
inline double barrier_upper(double sig, double delta, double phi, int n) {
    if (n < 3) throw DomainError("barrier_upper needs n >= 3");
    if (!(delta > 0.0)) throw DomainError("barrier_upper needs delta > 0");
    return std::log1p(sig / (delta * delta)) / (2.0 * (n - 2)) + phi;
}

/// Root C of f(C 1) = sigma by bisection to 1e-10 absolute; f(t 1) is
/// strictly increasing in t.
template <SymmetricOperator Op>
double c_tilde(const Op& op, double sigma) {
    auto f = [&](double t) { return diagonal_value(op, t); };
    double lo = 1.0, hi = 1.0;
    for (int guard = 0; f(lo) >= sigma; ++guard) {
        if (guard > 200) throw RangeError("c_tilde: level below the diagonal range");
        lo *= 0.5;
    }
    hi = std::max(lo, 1.0);
    for (int guard = 0; f(hi) <= sigma; ++guard) {
        if (guard > 200) throw RangeError("c_tilde: level above the diagonal range");
        hi *= 2.0;
    }
    while (hi - lo > 1e-12 * std::max(1.0, hi)) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) < sigma ? lo : hi) = mid;
        if (mid == lo && mid == hi) break;
    }
    return 0.5 * (lo + hi);
}

/// log(k/(k sig + 1)) + log((1-eps)^2/(2 C))/2 + 1/(sig + delta) - 1/delta with
/// C = c_tilde(op, psi_bdry + eps).
template <SymmetricOperator Op>
double barrier_asymptotic(double sig, double k, double eps, double delta, const Op& op, double psi_bdry) {
    if (!(eps > 0.0 && eps < 1.0)) throw DomainError("barrier_asymptotic needs 0 < eps < 1");
    if (!(k > 0.0) || !(delta > 0.0) || !(sig >= 0.0)) throw DomainError("barrier_asymptotic needs k, delta > 0");
    const double c = c_tilde(op, psi_bdry + eps);
    return std::log(k / (k * sig + 1.0)) + 0.5 * std::log((1.0 - eps) * (1.0 - eps) / (2.0 * c)) +
           1.0 / (sig + delta) - 1.0 / delta;
}

}  // namespace garding
