#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <vector>

#include "garding/cones.hpp"
#include "garding/operators.hpp"
#include "garding/sampling.hpp"

namespace garding {

inline constexpr double kLevelTolerance = 1e-9;
inline constexpr double kTestConeSlack = 1e-9;
inline constexpr double kStableTheta = 1e-4;
inline constexpr double kBoundaryBand = 1e-3;
inline constexpr int kDefaultRestarts = 50;
inline constexpr int kDefaultSampleCount = 10000;

/// f~(lambda) = f(sum(lambda) 1 - rho lambda), with gradient
/// f~_i = sum_j f_j - rho f_i evaluated at the mapped point.
template <SymmetricOperator Op>
class TildeOperator {
public:
    TildeOperator(Op base, double rho) : base_(std::move(base)), rho_(rho) {
        if (!std::isfinite(rho) || rho == 0.0 || rho >= base_.dimension())
            throw DomainError("tilde transform needs rho != 0 and rho < n");
    }

    int dimension() const { return base_.dimension(); }
    double rho() const { return rho_; }
    const Op& base() const { return base_; }

    EigenTuple map(const EigenTuple& lambda) const {
        const double total = lambda.sum();
        std::vector<double> mu(static_cast<std::size_t>(lambda.size()));
        for (int i = 0; i < lambda.size(); ++i) mu[static_cast<std::size_t>(i)] = total - rho_ * lambda[i];
        return EigenTuple(std::move(mu));
    }

    bool in_domain(const EigenTuple& lambda) const { return base_.in_domain(map(lambda)); }
    double value(const EigenTuple& lambda) const { return base_.value(map(lambda)); }

    EigenTuple gradient(const EigenTuple& lambda) const {
        auto g = base_.gradient(map(lambda));
        const double total = g.sum();
        std::vector<double> out(static_cast<std::size_t>(g.size()));
        for (int i = 0; i < g.size(); ++i) out[static_cast<std::size_t>(i)] = total - rho_ * g[i];
        return EigenTuple(std::move(out));
    }

    ConeDescriptor asymptotic_cone() const { return transform(base_.asymptotic_cone(), rho_); }
    ConeDescriptor domain() const { return transform(base_.domain(), rho_); }
    bool homogeneous() const { return base_.homogeneous(); }

private:
    Op base_;
    double rho_;
};

template <SymmetricOperator Op>
TildeOperator<Op> tilde_transform(const Op& op, double rho) {
    return TildeOperator<Op>(op, rho);
}

template <SymmetricOperator Op>
bool is_homogeneous(const Op& op) {
    if constexpr (requires { op.homogeneous(); })
        return op.homogeneous();
    else
        return false;
}

/// Configuration of a level-set sampler for {f = sigma}.
template <SymmetricOperator Op>
struct LevelSetSampler {
    Op op;
    double sigma;
    std::uint64_t seed = kDefaultSeed;
    int count = kDefaultSampleCount;
};

template <SymmetricOperator Op>
LevelSetSampler(Op, double, std::uint64_t, int) -> LevelSetSampler<Op>;

/// Level-set points with their gradients.
struct LevelSample {
    EigenTuple lambda;
    EigenTuple gradient;
};

/// Scales a direction of the asymptotic cone onto {f = sigma}. f(t d) is
/// strictly increasing in t there; homogeneous operators use t = sigma/f(d).
template <SymmetricOperator Op>
std::optional<EigenTuple> scale_to_level(const Op& op, const EigenTuple& dir, double sigma) {
    const double tol = kLevelTolerance * (1.0 + std::abs(sigma));
    if (is_homogeneous(op)) {
        const double f1 = op.value(dir);
        if (!(f1 > 0.0) || !(sigma > 0.0)) return std::nullopt;
        auto lambda = dir.scaled(sigma / f1);
        if (std::abs(op.value(lambda) - sigma) <= tol) return lambda;
        // fall through to bisection if rounding bit us
    }
    auto f = [&](double t) { return op.value(dir.scaled(t)); };
    double lo = 1.0, hi = 1.0;
    double flo = f(lo);
    for (int guard = 0; flo > sigma; ++guard) {
        if (guard > 200) return std::nullopt;
        lo *= 0.5;
        flo = f(lo);
    }
    hi = lo;
    double fhi = flo;
    for (int guard = 0; fhi < sigma; ++guard) {
        if (guard > 200) return std::nullopt;
        lo = hi;
        hi *= 2.0;
        fhi = f(hi);
    }
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (std::abs(fm - sigma) <= 0.01 * tol) return dir.scaled(mid);
        (fm < sigma ? lo : hi) = mid;
        if (hi - lo <= 1e-16 * hi) break;
    }
    const double t = 0.5 * (lo + hi);
    if (std::abs(f(t) - sigma) <= tol) return dir.scaled(t);
    return std::nullopt;
}

/// Smallest s >= 0 with x + s 1 strictly inside the cone (bisection to 1e-14 relative).
inline double shift_to_cone(const ConeDescriptor& cone, std::span<const double> x) {
    std::vector<double> y(x.begin(), x.end());
    auto inside = [&](double s) {
        for (std::size_t i = 0; i < y.size(); ++i) y[i] = x[i] + s;
        return cone.contains_raw(y);
    };
    if (inside(0.0)) return 0.0;
    double scale = 1.0;
    for (double v : x) scale = std::max(scale, std::abs(v));
    double lo = 0.0, hi = scale;
    while (!inside(hi)) {
        lo = hi;
        hi *= 2.0;
    }
    while (hi - lo > 1e-14 * scale) {
        const double mid = 0.5 * (lo + hi);
        (inside(mid) ? hi : lo) = mid;
    }
    return hi;
}

/// Points of {f = sigma} inside the asymptotic cone. Directions come from a
/// seeded Halton sequence on [-1,1]^n; those outside the cone are blended
/// toward the diagonal past the cone boundary by a further Halton-drawn
/// fraction, then scaled onto the level set.
template <SymmetricOperator Op>
std::vector<LevelSample> sample_level_set(const LevelSetSampler<Op>& s) {
    const Op& op = s.op;
    const int n = op.dimension();
    const ConeDescriptor cone = op.asymptotic_cone();
    ScrambledHalton halton(n + 1, s.seed);
    std::vector<LevelSample> out;
    out.reserve(static_cast<std::size_t>(std::max(s.count, 0)));
    long rejections = 0;
    const long max_rejections = 10L * std::max(s.count, 1);
    while (static_cast<int>(out.size()) < s.count) {
        auto x = halton.next();
        std::vector<double> d(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) d[static_cast<std::size_t>(i)] = 2.0 * x[static_cast<std::size_t>(i)] - 1.0;
        if (!cone.contains_raw(d)) {
            // blend (1-b) d + b 1 with b past the boundary value b*
            std::vector<double> y(d.size());
            auto blended_inside = [&](double b) {
                for (std::size_t i = 0; i < d.size(); ++i) y[i] = (1.0 - b) * d[i] + b;
                return cone.contains_raw(y);
            };
            double lo = 0.0, hi = 1.0;
            for (int it = 0; it < 60; ++it) {
                const double mid = 0.5 * (lo + hi);
                (blended_inside(mid) ? hi : lo) = mid;
            }
            const double w = x[static_cast<std::size_t>(n)];
            double b = hi + (1.0 - hi) * w * w;
            if (!blended_inside(b)) b = hi;
            if (!blended_inside(b)) {
                if (++rejections > max_rejections) throw SamplerStarved("level-set sampler starved");
                continue;
            }
            d = y;
        }
        auto lambda = scale_to_level(op, EigenTuple(d), s.sigma);
        if (!lambda || !op.in_domain(*lambda)) {
            if (++rejections > max_rejections) throw SamplerStarved("level-set sampler starved");
            continue;
        }
        auto g = op.gradient(*lambda);
        out.push_back({std::move(*lambda), std::move(g)});
    }
    return out;
}

/// Coordinate-descent over directions of the asymptotic cone, each direction
/// projected onto {f = sigma}; minimizes `objective(point, gradient)`.
template <SymmetricOperator Op, class Objective>
LevelSample refine_on_level(const Op& op, double sigma, const LevelSample& start, Objective&& objective,
                            int max_sweeps = 400) {
    const ConeDescriptor cone = op.asymptotic_cone();
    const int n = op.dimension();
    LevelSample best = start;
    double best_val = objective(best.lambda, best.gradient);
    std::vector<double> d(best.lambda.vector());
    double norm = 0.0;
    for (double v : d) norm = std::max(norm, std::abs(v));
    for (double& v : d) v /= norm;
    double step = 0.25;
    for (int sweep = 0; sweep < max_sweeps && step > 1e-9; ++sweep) {
        bool improved = false;
        for (int i = 0; i < n; ++i) {
            for (double sgn : {1.0, -1.0}) {
                auto trial = d;
                trial[static_cast<std::size_t>(i)] += sgn * step;
                if (!cone.contains_raw(trial)) continue;
                std::optional<EigenTuple> lam;
                try {
                    lam = scale_to_level(op, EigenTuple(trial), sigma);
                } catch (const Error&) {
                    continue;
                }
                if (!lam || !op.in_domain(*lam)) continue;
                auto g = op.gradient(*lam);
                const double val = objective(*lam, g);
                if (val < best_val) {
                    best_val = val;
                    best = {std::move(*lam), std::move(g)};
                    double m = 0.0;
                    for (double v : trial) m = std::max(m, std::abs(v));
                    for (double& v : trial) v /= m;
                    d = std::move(trial);
                    improved = true;
                    break;
                }
            }
        }
        if (!improved) step *= 0.5;
    }
    return best;
}

/// Minimizes `objective` over the samples and then refines the `restarts`
/// lowest samples by coordinate descent. Returns the best point found.
template <SymmetricOperator Op, class Objective>
LevelSample adversarial_minimum(const Op& op, double sigma, const std::vector<LevelSample>& samples,
                                Objective&& objective, int restarts) {
    if (samples.empty()) throw SamplerStarved("no samples to refine");
    std::vector<std::size_t> order(samples.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<double> vals(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) vals[i] = objective(samples[i].lambda, samples[i].gradient);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
    LevelSample best = samples[order.front()];
    double best_val = vals[order.front()];
    const std::size_t starts = std::min<std::size_t>(static_cast<std::size_t>(std::max(restarts, 0)), order.size());
    for (std::size_t r = 0; r < starts; ++r) {
        auto cand = refine_on_level(op, sigma, samples[order[r]], objective);
        const double v = objective(cand.lambda, cand.gradient);
        if (v < best_val) {
            best_val = v;
            best = std::move(cand);
        }
    }
    return best;
}

// ---------------------------------------------------------------------------
// Partial uniform ellipticity

/// f at the position of the m-th smallest eigenvalue divided by sum(f).
inline double pue_ratio(const EigenTuple& lambda, const EigenTuple& g, int m) {
    std::vector<int> idx(static_cast<std::size_t>(lambda.size()));
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return lambda[a] < lambda[b]; });
    return g[idx[static_cast<std::size_t>(m - 1)]] / g.sum();
}

/// Gradient ordering or sign failure beyond 1e-10 relative to sum(f).
inline bool gradient_violation(const EigenTuple& lambda, const EigenTuple& g) {
    const double total = g.sum();
    const double slack = 1e-10 * std::max(1.0, std::abs(total));
    for (int i = 0; i < g.size(); ++i) {
        if (g[i] < -slack) return true;
        for (int j = 0; j < g.size(); ++j)
            if (lambda[i] < lambda[j] && g[i] < g[j] - slack) return true;
    }
    return false;
}

struct EllipticityReport {
    int m = 0;
    double theta = 0.0;
    int samples = 0;
    int violations = 0;
    double sigma = 0.0;
    double K0 = 0.0;
    /// theta before adversarial refinement.
    double theta_sampled = 0.0;
    int restarts = 0;
};

/// max(0, sup over samples of -sum(f_i lambda_i) / sum(f_i)).
inline double measured_k0(const std::vector<LevelSample>& samples) {
    double k0 = 0.0;
    for (const auto& s : samples) k0 = std::max(k0, -dot(s.gradient, s.lambda) / s.gradient.sum());
    return k0;
}

template <SymmetricOperator Op>
EllipticityReport pue_report(const Op& op, double sigma, int m, const std::vector<LevelSample>& samples,
                             int restarts = kDefaultRestarts) {
    if (m < 1 || m > op.dimension()) throw DomainError("pue_report needs 1 <= m <= n");
    EllipticityReport rep;
    rep.m = m;
    rep.sigma = sigma;
    rep.samples = static_cast<int>(samples.size());
    rep.restarts = restarts;
    double theta = std::numeric_limits<double>::infinity();
    for (const auto& s : samples) {
        theta = std::min(theta, pue_ratio(s.lambda, s.gradient, m));
        if (gradient_violation(s.lambda, s.gradient)) ++rep.violations;
    }
    rep.theta_sampled = theta;
    if (restarts > 0 && !samples.empty()) {
        auto obj = [m](const EigenTuple& l, const EigenTuple& g) { return pue_ratio(l, g, m); };
        auto worst = adversarial_minimum(op, sigma, samples, obj, restarts);
        theta = std::min(theta, obj(worst.lambda, worst.gradient));
    }
    rep.theta = std::clamp(theta, 0.0, 1.0 / m);
    rep.K0 = measured_k0(samples);
    return rep;
}

template <SymmetricOperator Op>
EllipticityReport pue_report(const Op& op, double sigma, int m, const LevelSetSampler<Op>& s,
                             int restarts = kDefaultRestarts) {
    LevelSetSampler<Op> at{s.op, sigma, s.seed, s.count};
    return pue_report(op, sigma, m, sample_level_set(at), restarts);
}

/// Largest m whose refined theta stays above 1e-4 (0 if none).
template <SymmetricOperator Op>
int pue_index(const Op& op, double sigma, const std::vector<LevelSample>& samples, int restarts = kDefaultRestarts) {
    int best = 0;
    for (int m = 1; m <= op.dimension(); ++m)
        if (pue_report(op, sigma, m, samples, restarts).theta > kStableTheta) best = m;
    return best;
}

struct UniformityFinding {
    bool uniform_by_theta = false;
    bool type2 = false;
    double theta = 0.0;
    bool agree() const { return uniform_by_theta == type2; }
    bool fully_uniform() const { return uniform_by_theta && type2; }
};

/// Full uniform ellipticity (theta at m = n) against the type-2 criterion;
/// a disagreement is returned as a finding, not thrown.
template <SymmetricOperator Op>
UniformityFinding fully_uniform_check(const Op& op, double sigma, const LevelSetSampler<Op>& s,
                                      int restarts = kDefaultRestarts) {
    UniformityFinding out;
    auto rep = pue_report(op, sigma, op.dimension(), s, restarts);
    out.theta = rep.theta;
    out.uniform_by_theta = rep.theta >= kStableTheta;
    out.type2 = type_of(op.asymptotic_cone()) == ConeType::Type2;
    return out;
}

// ---------------------------------------------------------------------------
// Test cones

struct TestConeVerdict {
    bool contains = true;
    /// Level-set point with sum f_i(lambda) mu_i < -1e-9 sum f_i(lambda).
    std::optional<EigenTuple> witness;
    /// min over inspected points of sum f_i mu_i / sum f_i.
    double min_normalized = std::numeric_limits<double>::infinity();
};

inline double normalized_pairing(const EigenTuple& g, const EigenTuple& mu) { return dot(g, mu) / g.sum(); }

/// Searches {f = sigma} for lambda with sum f_i(lambda) mu_i < 0: scan the
/// samples, then walk in along mu + s 1 from the asymptotic-cone boundary
/// (far level-set points there carry gradients close to the boundary normal),
/// then coordinate descent from the best candidate.
template <SymmetricOperator Op>
TestConeVerdict test_cone_verdict(const Op& op, double sigma, const EigenTuple& mu,
                                  const std::vector<LevelSample>& samples, bool refine = true) {
    TestConeVerdict v;
    const LevelSample* best = nullptr;
    for (const auto& s : samples) {
        const double p = normalized_pairing(s.gradient, mu);
        if (p < v.min_normalized) {
            v.min_normalized = p;
            best = &s;
        }
    }
    auto violates = [](double p) { return p < -kTestConeSlack; };
    if (best && violates(v.min_normalized)) {
        v.contains = false;
        v.witness = best->lambda;
        return v;
    }
    const ConeDescriptor cone = op.asymptotic_cone();
    std::optional<LevelSample> cand;
    const double s_star = shift_to_cone(cone, mu.values());
    if (s_star > 0.0) {
        const double scale = 1.0 + mu.max_abs();
        for (double eps = 1e-1; eps >= 1e-10; eps *= 0.1) {
            auto d = mu.shifted(s_star + eps * scale);
            if (!cone.contains(d)) continue;
            std::optional<EigenTuple> lam;
            try {
                lam = scale_to_level(op, d, sigma);
            } catch (const Error&) {
                continue;
            }
            if (!lam || !op.in_domain(*lam)) continue;
            auto g = op.gradient(*lam);
            const double p = normalized_pairing(g, mu);
            if (p < v.min_normalized) {
                v.min_normalized = p;
                cand = LevelSample{*lam, g};
            }
            if (violates(p)) {
                v.contains = false;
                v.witness = std::move(*lam);
                return v;
            }
        }
    }
    if (refine) {
        const LevelSample* start = cand ? &*cand : best;
        if (start) {
            auto obj = [&mu](const EigenTuple&, const EigenTuple& g) { return normalized_pairing(g, mu); };
            auto r = refine_on_level(op, sigma, *start, obj, 200);
            const double p = obj(r.lambda, r.gradient);
            v.min_normalized = std::min(v.min_normalized, p);
            if (violates(p)) {
                v.contains = false;
                v.witness = r.lambda;
            }
        }
    }
    return v;
}

/// Sampled maximal test cone of {f = sigma}.
template <SymmetricOperator Op>
TestConeVerdict max_test_cone_contains(const Op& op, double sigma, const EigenTuple& mu,
                                       const std::vector<LevelSample>& level_samples) {
    return test_cone_verdict(op, sigma, mu, level_samples);
}

template <SymmetricOperator Op>
TestConeVerdict max_test_cone_contains(const Op& op, double sigma, const EigenTuple& mu,
                                       const LevelSetSampler<Op>& s) {
    LevelSetSampler<Op> at{s.op, sigma, s.seed, s.count};
    return test_cone_verdict(op, sigma, mu, sample_level_set(at));
}

struct AsymptoticVerdict {
    bool contains = true;
    std::optional<EigenTuple> witness;
    /// Ray test f(2^j mu), j = 0..20, run only when mu lies in the domain.
    bool ray_checked = false;
    bool ray_nondecreasing = true;
    bool consistent() const { return !ray_checked || ray_nondecreasing == contains; }
};

/// Samples for the asymptotic-cone test: levels sigma 2^j, j = -3..3, for
/// positive sigma; sigma + j (1 + |sigma|) otherwise.
template <SymmetricOperator Op>
std::vector<std::vector<LevelSample>> multilevel_samples(const LevelSetSampler<Op>& s) {
    std::vector<std::vector<LevelSample>> levels;
    for (int j = -3; j <= 3; ++j) {
        const double level = s.sigma > 0.0 ? std::ldexp(s.sigma, j) : s.sigma + j * (1.0 + std::abs(s.sigma));
        LevelSetSampler<Op> at{s.op, level, s.seed + static_cast<std::uint64_t>(j + 3), s.count};
        levels.push_back(sample_level_set(at));
    }
    return levels;
}

template <SymmetricOperator Op>
double multilevel_value(const LevelSetSampler<Op>& s, int j) {
    return s.sigma > 0.0 ? std::ldexp(s.sigma, j) : s.sigma + j * (1.0 + std::abs(s.sigma));
}

/// mu in the closed asymptotic cone, characterized by sum f_i(lambda) mu_i >= 0
/// on sampled level sets across scales.
template <SymmetricOperator Op>
AsymptoticVerdict asymptotic_contains(const Op& op, const EigenTuple& mu, const LevelSetSampler<Op>& s,
                                      const std::vector<std::vector<LevelSample>>& levels) {
    AsymptoticVerdict out;
    for (std::size_t j = 0; j < levels.size() && out.contains; ++j) {
        auto v = test_cone_verdict(op, multilevel_value(s, static_cast<int>(j) - 3), mu, levels[j]);
        if (!v.contains) {
            out.contains = false;
            out.witness = v.witness;
        }
    }
    if (op.in_domain(mu)) {
        out.ray_checked = true;
        double prev = op.value(mu);
        for (int j = 1; j <= 20; ++j) {
            const double cur = op.value(mu.scaled(std::ldexp(1.0, j)));
            if (cur < prev - 1e-12 * (1.0 + std::abs(prev))) {
                out.ray_nondecreasing = false;
                break;
            }
            prev = cur;
        }
    }
    return out;
}

template <SymmetricOperator Op>
AsymptoticVerdict asymptotic_contains(const Op& op, const EigenTuple& mu, const LevelSetSampler<Op>& s) {
    return asymptotic_contains(op, mu, s, multilevel_samples(s));
}

// ---------------------------------------------------------------------------
// Structural inequalities

struct LaplaceBoundResult {
    double rho_g = 0.0;
    /// max over samples of max_i f_i / sum f.
    double max_ratio = 0.0;
    bool bound_holds = true;
    bool sharp = false;
    std::optional<EigenTuple> sharpness_witness;
    bool ok() const { return bound_holds && sharp; }
};

inline double max_share(const EigenTuple& g) {
    double m = g[0];
    for (int i = 1; i < g.size(); ++i) m = std::max(m, g[i]);
    return m / g.sum();
}

/// max_i f_i <= sum f / rho_G on every sample, and a sample beating
/// sum f / (1.05 rho_G) exists (sampled, then adversarially maximized).
template <SymmetricOperator Op>
LaplaceBoundResult laplace_bound_check(const Op& op, double sigma, const std::vector<LevelSample>& samples,
                                       int restarts = kDefaultRestarts) {
    LaplaceBoundResult out;
    out.rho_g = rho(op.asymptotic_cone());
    const double bound = 1.0 / out.rho_g;
    const double sharp_bound = 1.0 / (1.05 * out.rho_g);
    for (const auto& s : samples) {
        const double r = max_share(s.gradient);
        if (r > bound + 1e-9) out.bound_holds = false;
        if (r > out.max_ratio) {
            out.max_ratio = r;
            if (r > sharp_bound) {
                out.sharp = true;
                out.sharpness_witness = s.lambda;
            }
        }
    }
    if (!out.sharp && restarts > 0 && !samples.empty()) {
        auto obj = [](const EigenTuple&, const EigenTuple& g) { return -max_share(g); };
        auto best = adversarial_minimum(op, sigma, samples, obj, restarts);
        const double r = max_share(best.gradient);
        if (r > bound + 1e-9) out.bound_holds = false;
        out.max_ratio = std::max(out.max_ratio, r);
        if (r > sharp_bound) {
            out.sharp = true;
            out.sharpness_witness = best.lambda;
        }
    }
    return out;
}

template <SymmetricOperator Op>
LaplaceBoundResult laplace_bound_check(const LevelSetSampler<Op>& s, int restarts = kDefaultRestarts) {
    return laplace_bound_check(s.op, s.sigma, sample_level_set(s), restarts);
}

struct K0Propagation {
    double K0 = 0.0;
    bool holds = true;
    /// levels checked, including sigma itself
    std::vector<double> levels;
};

/// K0 measured on {f = sigma}; then sum f_i lambda_i >= -(K0 + 1e-6) sum f_i is
/// checked on higher level sets.
template <SymmetricOperator Op>
K0Propagation k0_propagation_check(const Op& op, double sigma, const LevelSetSampler<Op>& s) {
    K0Propagation out;
    LevelSetSampler<Op> at{op, sigma, s.seed, s.count};
    out.K0 = measured_k0(sample_level_set(at));
    if (sigma > 0.0)
        out.levels = {sigma, 2.0 * sigma, 4.0 * sigma};
    else
        out.levels = {sigma, sigma + (std::abs(sigma) + 1.0), sigma + 3.0 * (std::abs(sigma) + 1.0)};
    for (std::size_t j = 0; j < out.levels.size(); ++j) {
        LevelSetSampler<Op> lv{op, out.levels[j], s.seed + 101 + j, s.count};
        for (const auto& p : sample_level_set(lv))
            if (dot(p.gradient, p.lambda) < -(out.K0 + 1e-6) * p.gradient.sum()) out.holds = false;
    }
    return out;
}

}  // namespace garding
