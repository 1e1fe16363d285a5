#pragma once

#include <cmath>
#include <concepts>
#include <string>
#include <utility>
#include <vector>

#include "garding/cones.hpp"
#include "garding/eigen_tuple.hpp"
#include "garding/sigma.hpp"

namespace garding {

enum class Family { SigmaRoot, SigmaQuotient, GuanZhang, Linear };

/// |sigma_k| below this is treated as a singular point of a GuanZhang operator.
inline constexpr double kSigmaSingularFloor = 1e-30;

/// A concave symmetric operator f(lambda) from one of the built-in families.
///
///   SigmaRoot(k)      sigma_k^{1/k}                          on Gamma_k
///   SigmaQuotient(k)  sigma_k / sigma_{k-1}                  on Gamma_k
///   GuanZhang(k)      sigma_k/sigma_{k-1} - sum_{j=1}^{k-1} alpha_j / sigma_j
///                     - sum_{j=0}^{k-2} beta_j sigma_j / sigma_k
///   Linear            sigma_1                                on Gamma_1
///
/// GuanZhang lives on Gamma_{k-1} when every beta vanishes; a nonzero beta
/// puts sigma_k in a denominator and restricts the domain to Gamma_k.
/// Coefficients are raw reals: rescaling f rescales every derived level.
class OperatorSpec {
public:
    static OperatorSpec sigma_root(int k, int n) { return OperatorSpec(Family::SigmaRoot, k, n, {}, {}); }
    static OperatorSpec sigma_quotient(int k, int n) { return OperatorSpec(Family::SigmaQuotient, k, n, {}, {}); }
    static OperatorSpec linear(int n) { return OperatorSpec(Family::Linear, 1, n, {}, {}); }
    /// alphas[j-1] multiplies 1/sigma_j (j = 1..k-1); betas[j] multiplies sigma_j/sigma_k (j = 0..k-2).
    static OperatorSpec guan_zhang(int k, int n, std::vector<double> alphas, std::vector<double> betas) {
        return OperatorSpec(Family::GuanZhang, k, n, std::move(alphas), std::move(betas));
    }

    Family family() const { return family_; }
    int k() const { return k_; }
    int dimension() const { return n_; }
    const std::vector<double>& alphas() const { return alphas_; }
    const std::vector<double>& betas() const { return betas_; }

    bool has_beta() const {
        for (double b : betas_)
            if (b != 0.0) return true;
        return false;
    }

    /// Natural domain cone.
    ConeDescriptor domain() const {
        if (family_ == Family::GuanZhang && !has_beta()) return ConeDescriptor::garding(k_ - 1, n_);
        return ConeDescriptor::garding(k_, n_);
    }

    /// Interior of the asymptotic cone: Gamma_k for every built-in family.
    ConeDescriptor asymptotic_cone() const { return ConeDescriptor::garding(k_, n_); }

    bool in_domain(const EigenTuple& lambda) const {
        if (lambda.size() != n_) throw DomainError("operator dimension mismatch");
        if (!domain().contains(lambda)) return false;
        if (family_ == Family::GuanZhang && has_beta() && std::abs(sigma(lambda, k_)) < kSigmaSingularFloor)
            return false;
        return true;
    }

    double value(const EigenTuple& lambda) const {
        require_domain(lambda);
        auto e = sigma_all(lambda.values(), k_);
        auto s = [&](int j) { return e[static_cast<std::size_t>(j)]; };
        switch (family_) {
            case Family::Linear: return s(1);
            case Family::SigmaRoot: return std::pow(s(k_), 1.0 / k_);
            case Family::SigmaQuotient: return s(k_) / s(k_ - 1);
            case Family::GuanZhang: {
                double f = s(k_) / s(k_ - 1);
                for (int j = 1; j <= k_ - 1; ++j) f -= alpha(j) / s(j);
                if (has_beta())
                    for (int j = 0; j <= k_ - 2; ++j) f -= beta(j) * s(j) / s(k_);
                return f;
            }
        }
        return 0.0;
    }

    /// Closed-form gradient (f_1, ..., f_n).
    EigenTuple gradient(const EigenTuple& lambda) const {
        require_domain(lambda);
        const int n = n_;
        std::vector<double> g(static_cast<std::size_t>(n), 0.0);
        if (family_ == Family::Linear) {
            std::fill(g.begin(), g.end(), 1.0);
            return EigenTuple(std::move(g));
        }
        auto e = sigma_all(lambda.values(), k_);
        auto s = [&](int j) { return j < 0 ? 0.0 : e[static_cast<std::size_t>(j)]; };
        auto del = sigma_deleted_table(lambda, k_);
        for (int i = 0; i < n; ++i) {
            const auto& d = del[static_cast<std::size_t>(i)];
            auto sd = [&](int j) { return j < 0 ? 0.0 : d[static_cast<std::size_t>(j)]; };
            double gi = 0.0;
            switch (family_) {
                case Family::SigmaRoot:
                    gi = std::pow(s(k_), 1.0 / k_ - 1.0) * sd(k_ - 1) / k_;
                    break;
                case Family::SigmaQuotient:
                    gi = quotient_partial(s(k_), s(k_ - 1), sd(k_ - 1), sd(k_ - 2));
                    break;
                case Family::GuanZhang: {
                    gi = quotient_partial(s(k_), s(k_ - 1), sd(k_ - 1), sd(k_ - 2));
                    for (int j = 1; j <= k_ - 1; ++j) gi += alpha(j) * sd(j - 1) / (s(j) * s(j));
                    if (has_beta())
                        for (int j = 0; j <= k_ - 2; ++j)
                            gi += beta(j) * (s(j) * sd(k_ - 1) - sd(j - 1) * s(k_)) / (s(k_) * s(k_));
                    break;
                }
                case Family::Linear: break;
            }
            g[static_cast<std::size_t>(i)] = gi;
        }
        return EigenTuple(std::move(g));
    }

    /// Validates the family invariants; throws DomainError.
    void validate() const {
        if (n_ < 2) throw DomainError("operator dimension must be >= 2");
        switch (family_) {
            case Family::Linear:
                if (k_ != 1) throw DomainError("Linear has k = 1");
                break;
            case Family::SigmaRoot:
            case Family::SigmaQuotient:
                if (k_ < 1 || k_ > n_) throw DomainError("k must satisfy 1 <= k <= n");
                break;
            case Family::GuanZhang: {
                if (k_ < 2 || k_ > n_) throw DomainError("GuanZhang needs 2 <= k <= n");
                if (static_cast<int>(alphas_.size()) != k_ - 1 || static_cast<int>(betas_.size()) != k_ - 1)
                    throw DomainError("GuanZhang needs k-1 alphas and k-1 betas");
                double total = 0.0;
                for (double a : alphas_) {
                    if (!(a >= 0.0) || !std::isfinite(a)) throw DomainError("GuanZhang alphas must be >= 0");
                    total += a;
                }
                for (double b : betas_) {
                    if (!(b >= 0.0) || !std::isfinite(b)) throw DomainError("GuanZhang betas must be >= 0");
                    total += b;
                }
                if (!(total > 0.0)) throw DomainError("GuanZhang needs sum(alphas) + sum(betas) > 0");
                break;
            }
        }
    }

    /// Degree-1 homogeneous families.
    bool homogeneous() const { return family_ != Family::GuanZhang; }

    friend bool operator==(const OperatorSpec&, const OperatorSpec&) = default;

private:
    OperatorSpec(Family family, int k, int n, std::vector<double> alphas, std::vector<double> betas)
        : family_(family), k_(k), n_(n), alphas_(std::move(alphas)), betas_(std::move(betas)) {
        validate();
    }

    double alpha(int j) const { return alphas_[static_cast<std::size_t>(j - 1)]; }
    double beta(int j) const { return betas_[static_cast<std::size_t>(j)]; }

    // d/d lambda_i of sigma_k / sigma_{k-1}
    static double quotient_partial(double sk, double skm1, double dk, double dkm1) {
        return (dk * skm1 - sk * dkm1) / (skm1 * skm1);
    }

    void require_domain(const EigenTuple& lambda) const {
        if (!in_domain(lambda)) throw InfeasiblePoint("eigenvalue tuple outside the operator domain");
    }

    Family family_;
    int k_;
    int n_;
    std::vector<double> alphas_;
    std::vector<double> betas_;
};

/// Anything with the evaluator surface used by the sampling and solver code.
template <class Op>
concept SymmetricOperator = requires(const Op& op, const EigenTuple& l) {
    { op.dimension() } -> std::convertible_to<int>;
    { op.value(l) } -> std::convertible_to<double>;
    { op.gradient(l) } -> std::same_as<EigenTuple>;
    { op.in_domain(l) } -> std::same_as<bool>;
    { op.asymptotic_cone() } -> std::same_as<ConeDescriptor>;
};

inline double eval(const OperatorSpec& op, const EigenTuple& lambda) { return op.value(lambda); }
inline EigenTuple grad(const OperatorSpec& op, const EigenTuple& lambda) { return op.gradient(lambda); }
inline ConeDescriptor asymptotic_cone(const OperatorSpec& op) { return op.asymptotic_cone(); }

/// Midpoint concavity: f((l+m)/2) >= (f(l)+f(m))/2 - 1e-10.
template <SymmetricOperator Op>
bool concavity_probe(const Op& op, const EigenTuple& lambda, const EigenTuple& mu) {
    const double mid = op.value((lambda + mu).scaled(0.5));
    return mid >= 0.5 * (op.value(lambda) + op.value(mu)) - 1e-10;
}

inline std::string to_string(Family f) {
    switch (f) {
        case Family::SigmaRoot: return "SigmaRoot";
        case Family::SigmaQuotient: return "SigmaQuotient";
        case Family::GuanZhang: return "GuanZhang";
        case Family::Linear: return "Linear";
    }
    return "?";
}

/// f on the diagonal ray: t -> f(t * 1).
template <SymmetricOperator Op>
double diagonal_value(const Op& op, double t) {
    return op.value(EigenTuple::constant(op.dimension(), t));
}

}  // namespace garding
