#pragma once

#include <span>
#include <string>
#include <vector>

#include "garding/eigen_tuple.hpp"

namespace garding {

/// All elementary symmetric polynomials sigma_0..sigma_kmax of `x`, from the
/// coefficients of prod(t + x_i). Entries above x.size() are zero.
inline std::vector<double> sigma_all(std::span<const double> x, int kmax) {
    std::vector<double> e(static_cast<std::size_t>(kmax) + 1, 0.0);
    e[0] = 1.0;
    int filled = 0;
    for (double xi : x) {
        filled = std::min(filled + 1, kmax);
        for (int j = filled; j >= 1; --j) e[j] += xi * e[j - 1];
    }
    return e;
}

/// sigma_k(lambda); sigma_0 = 1. Requires 0 <= k <= n.
inline double sigma(const EigenTuple& lambda, int k) {
    if (k < 0 || k > lambda.size())
        throw DomainError("sigma: k=" + std::to_string(k) + " outside [0, " +
                          std::to_string(lambda.size()) + "]");
    return sigma_all(lambda.values(), k)[static_cast<std::size_t>(k)];
}

/// sigma_{k-1} of lambda with entry i removed, i.e. d sigma_k / d lambda_i.
inline double sigma_partial(const EigenTuple& lambda, int k, int i) {
    if (k < 1 || k > lambda.size())
        throw DomainError("sigma_partial: k=" + std::to_string(k) + " outside [1, " +
                          std::to_string(lambda.size()) + "]");
    if (i < 0 || i >= lambda.size())
        throw DomainError("sigma_partial: index " + std::to_string(i) + " out of range");
    auto rest = lambda.without(i);
    return sigma_all(rest, k - 1)[static_cast<std::size_t>(k - 1)];
}

/// Table d[i][j] = sigma_j(lambda | i) for j = 0..kmax, one row per deleted index.
inline std::vector<std::vector<double>> sigma_deleted_table(const EigenTuple& lambda, int kmax) {
    std::vector<std::vector<double>> table;
    table.reserve(static_cast<std::size_t>(lambda.size()));
    for (int i = 0; i < lambda.size(); ++i) table.push_back(sigma_all(lambda.without(i), kmax));
    return table;
}

}  // namespace garding
