#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "garding/eigen_tuple.hpp"
#include "garding/sampling.hpp"
#include "garding/sigma.hpp"

namespace garding {

enum class ConeKind { Garding, Pk, Transformed, Projection };
enum class ConeType { Type1, Type2 };

inline constexpr int kMaxConeDepth = 4;
inline constexpr double kInteriorNudge = 1e-9;
inline constexpr double kProjectionCap = 1e12;

struct ConeInvariants {
    int kappa;
    double rho;
};

/// Open symmetric convex cone in R^n, described by one of four constructions.
///
/// Garding(k):  sigma_1..sigma_k > 0.
/// Pk(k):       every sum of k entries is positive.
/// Transformed: image of a base cone under
///              lambda_i = (sum(mu) - (n - rho) mu_i) / rho.
/// Projection:  first n-1 coordinates of a base cone in R^n.
///
/// Descriptors are immutable values; the base is shared.
class ConeDescriptor {
public:
    static ConeDescriptor garding(int k, int n) {
        check_dim(n);
        if (k < 1 || k > n) throw DomainError("Garding cone needs 1 <= k <= n");
        return ConeDescriptor(ConeKind::Garding, n, k, 0.0, nullptr);
    }
    static ConeDescriptor pk(int k, int n) {
        check_dim(n);
        if (k < 1 || k > n) throw DomainError("P_k cone needs 1 <= k <= n");
        return ConeDescriptor(ConeKind::Pk, n, k, 0.0, nullptr);
    }

    ConeKind kind() const { return kind_; }
    int dim() const { return n_; }
    int k() const { return k_; }
    /// Parameter of a Transformed cone (0 for other kinds).
    double rho_param() const { return rho_; }
    const ConeDescriptor* base() const { return base_.get(); }
    int depth() const { return base_ ? base_->depth() + 1 : 0; }
    const std::optional<ConeInvariants>& cache() const { return cache_; }

    /// Membership of a raw n-vector; no finiteness validation.
    bool contains_raw(std::span<const double> x) const {
        if (static_cast<int>(x.size()) != n_) throw DomainError("cone dimension mismatch");
        switch (kind_) {
            case ConeKind::Garding: {
                auto e = sigma_all(x, k_);
                for (int j = 1; j <= k_; ++j)
                    if (!(e[static_cast<std::size_t>(j)] > 0.0)) return false;
                return true;
            }
            case ConeKind::Pk: {
                std::vector<double> s(x.begin(), x.end());
                std::partial_sort(s.begin(), s.begin() + k_, s.end());
                double acc = 0.0;
                for (int j = 0; j < k_; ++j) acc += s[static_cast<std::size_t>(j)];
                return acc > 0.0;
            }
            case ConeKind::Transformed: {
                double total = 0.0;
                for (double v : x) total += v;
                std::vector<double> mu(x.size());
                for (std::size_t i = 0; i < x.size(); ++i) mu[i] = (total - rho_ * x[i]) / (n_ - rho_);
                return base_->contains_raw(mu);
            }
            case ConeKind::Projection: {
                std::vector<double> y(x.begin(), x.end());
                y.push_back(1.0);
                for (double r = 1.0; r <= kProjectionCap; r *= 2.0) {
                    y.back() = r;
                    if (base_->contains_raw(y)) return true;
                }
                return false;
            }
        }
        return false;
    }

    bool contains(const EigenTuple& lambda) const {
        if (lambda.size() != n_) throw DomainError("cone dimension mismatch");
        return contains_raw(lambda.values());
    }

    /// Membership after pulling every entry toward -1 by 1e-9 (1 + |x|_inf);
    /// decides strict interiority deterministically for boundary probes.
    bool contains_strictly(std::span<const double> x) const {
        double m = 0.0;
        for (double v : x) m = std::max(m, std::abs(v));
        const double eps = kInteriorNudge * (1.0 + m);
        std::vector<double> y(x.begin(), x.end());
        for (double& v : y) v -= eps;
        return contains_raw(y);
    }

    ConeDescriptor with_cache(ConeInvariants inv) const {
        ConeDescriptor copy = *this;
        copy.cache_ = inv;
        return copy;
    }

    friend ConeDescriptor transform(const ConeDescriptor& cone, double rho);
    friend ConeDescriptor projection(const ConeDescriptor& cone);

private:
    ConeDescriptor(ConeKind kind, int n, int k, double rho, std::shared_ptr<const ConeDescriptor> base)
        : kind_(kind), n_(n), k_(k), rho_(rho), base_(std::move(base)) {}

    static void check_dim(int n) {
        if (n < 2) throw DomainError("cone dimension must be >= 2");
    }

    ConeKind kind_;
    int n_;
    int k_;
    double rho_;
    std::shared_ptr<const ConeDescriptor> base_;
    std::optional<ConeInvariants> cache_;
};

inline bool contains(const ConeDescriptor& cone, const EigenTuple& lambda) {
    return cone.contains(lambda);
}

/// Cone {lambda : (sum(lambda) - rho lambda_i)/(n - rho) in base}. Requires rho != 0, rho < n.
inline ConeDescriptor transform(const ConeDescriptor& cone, double rho) {
    if (!std::isfinite(rho) || rho == 0.0 || rho >= cone.dim())
        throw DomainError("transform needs rho != 0 and rho < n");
    if (cone.depth() + 1 > kMaxConeDepth) throw DomainError("cone nesting deeper than 4");
    ConeDescriptor plain = cone;
    plain.cache_.reset();
    return ConeDescriptor(ConeKind::Transformed, cone.dim(), 0, rho,
                          std::make_shared<const ConeDescriptor>(std::move(plain)));
}

inline int kappa(const ConeDescriptor& cone);

/// Projection onto the first n-1 coordinates. Requires a type-1 base.
inline ConeDescriptor projection(const ConeDescriptor& cone) {
    if (cone.dim() < 3) throw DomainError("projection needs n >= 3");
    if (cone.depth() + 1 > kMaxConeDepth) throw DomainError("cone nesting deeper than 4");
    if (kappa(cone) > cone.dim() - 2)
        throw DomainError("projection of a type-2 cone is all of R^{n-1}");
    ConeDescriptor plain = cone;
    plain.cache_.reset();
    return ConeDescriptor(ConeKind::Projection, cone.dim() - 1, 0, 0.0,
                          std::make_shared<const ConeDescriptor>(std::move(plain)));
}

/// Largest k with (0,...,0 [k times], 1,...,1) strictly inside; in [0, n-1].
inline int kappa(const ConeDescriptor& cone) {
    if (cone.cache()) return cone.cache()->kappa;
    const int n = cone.dim();
    int best = -1;
    for (int k = 0; k <= n - 1; ++k) {
        std::vector<double> probe(static_cast<std::size_t>(n), 1.0);
        for (int i = 0; i < k; ++i) probe[static_cast<std::size_t>(i)] = 0.0;
        if (cone.contains_strictly(probe)) best = k;
    }
    if (best < 0) throw InternalConsistencyError("cone does not contain the positive diagonal");
    return best;
}

inline ConeType type_of(const ConeDescriptor& cone) {
    return kappa(cone) == cone.dim() - 1 ? ConeType::Type2 : ConeType::Type1;
}

/// sup{rho >= 0 : (1,...,1,1-rho) in cone}, bisected on [0, n] down to adjacent doubles.
inline double rho(const ConeDescriptor& cone) {
    if (cone.cache()) return cone.cache()->rho;
    const int n = cone.dim();
    std::vector<double> probe(static_cast<std::size_t>(n), 1.0);
    auto inside = [&](double r) {
        probe.back() = 1.0 - r;
        return cone.contains_raw(probe);
    };
    double lo = 0.0, hi = static_cast<double>(n);
    if (!inside(lo)) throw InternalConsistencyError("rho: the diagonal (1,...,1) is not inside");
    if (inside(hi)) throw InternalConsistencyError("rho: (1,...,1,1-n) reported inside");
    for (;;) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        (inside(mid) ? lo : hi) = mid;
    }
    return hi;
}

inline ConeDescriptor with_invariants(const ConeDescriptor& cone) {
    return cone.with_cache({kappa(cone), rho(cone)});
}

/// Random point of the cone: uniform direction in [-1,1]^n blended toward
/// the diagonal until it enters the cone.
inline std::vector<double> random_cone_point(const ConeDescriptor& cone, std::mt19937_64& rng) {
    const int n = cone.dim();
    std::vector<double> x(static_cast<std::size_t>(n));
    for (double& v : x) v = uniform(rng, -1.0, 1.0);
    if (cone.contains_raw(x)) return x;
    const double step = uniform(rng, 0.02, 0.3);
    for (;;) {
        for (double& v : x) v += step;
        if (cone.contains_raw(x)) return x;
    }
}

/// Sampled containment check inner ⊆ outer. Returns a point of `inner`
/// not in `outer`, if any sample finds one. No claim is made either way.
inline std::optional<std::vector<double>> find_containment_counterexample(const ConeDescriptor& inner,
                                                                          const ConeDescriptor& outer,
                                                                          std::uint64_t seed, int count) {
    if (inner.dim() != outer.dim()) throw DomainError("cone dimension mismatch");
    std::mt19937_64 rng(seed);
    for (int s = 0; s < count; ++s) {
        auto x = random_cone_point(inner, rng);
        if (!outer.contains_raw(x)) return x;
    }
    return std::nullopt;
}

inline std::string to_string(ConeType t) { return t == ConeType::Type1 ? "1" : "2"; }

inline std::string to_string(ConeKind k) {
    switch (k) {
        case ConeKind::Garding: return "Garding";
        case ConeKind::Pk: return "Pk";
        case ConeKind::Transformed: return "Transformed";
        case ConeKind::Projection: return "Projection";
    }
    return "?";
}

}  // namespace garding
