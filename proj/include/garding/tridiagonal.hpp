#pragma once

#include <cmath>
#include <span>
#include <utility>
#include <vector>

#include "garding/errors.hpp"

namespace garding {

/// Tridiagonal matrix: sub[i] = A(i, i-1), diag[i] = A(i, i), super[i] = A(i, i+1).
/// sub[0] and super[n-1] are unused.
struct Tridiagonal {
    std::vector<double> sub, diag, super;

    explicit Tridiagonal(std::size_t n) : sub(n, 0.0), diag(n, 0.0), super(n, 0.0) {}
    std::size_t size() const { return diag.size(); }

    std::vector<double> multiply(std::span<const double> x) const {
        const std::size_t n = size();
        std::vector<double> y(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            y[i] = diag[i] * x[i];
            if (i > 0) y[i] += sub[i] * x[i - 1];
            if (i + 1 < n) y[i] += super[i] * x[i + 1];
        }
        return y;
    }
};

/// Solves A x = b by Gaussian elimination with partial pivoting (the
/// LAPACK gtsv scheme: one extra super-diagonal of fill).
inline std::vector<double> solve_tridiagonal(const Tridiagonal& a, std::span<const double> rhs) {
    const std::size_t n = a.size();
    if (rhs.size() != n) throw DomainError("tridiagonal system size mismatch");
    std::vector<double> dl(n, 0.0), d(a.diag), du(a.super), du2(n, 0.0), b(rhs.begin(), rhs.end());
    for (std::size_t i = 0; i + 1 < n; ++i) dl[i] = a.sub[i + 1];
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (std::abs(d[i]) >= std::abs(dl[i])) {
            if (d[i] == 0.0) throw InternalConsistencyError("singular tridiagonal matrix");
            const double f = dl[i] / d[i];
            d[i + 1] -= f * du[i];
            b[i + 1] -= f * b[i];
            dl[i] = 0.0;
        } else {
            const double f = d[i] / dl[i];
            d[i] = dl[i];
            const double tmp = d[i + 1];
            d[i + 1] = du[i] - f * tmp;
            if (i + 2 < n) {
                dl[i] = du[i + 1];
                du[i + 1] = -f * dl[i];
            }
            du[i] = tmp;
            std::swap(b[i], b[i + 1]);
            b[i + 1] -= f * b[i];
            if (i + 2 < n) du2[i] = dl[i];
        }
    }
    if (d[n - 1] == 0.0) throw InternalConsistencyError("singular tridiagonal matrix");
    std::vector<double> x(n);
    x[n - 1] = b[n - 1] / d[n - 1];
    if (n > 1) x[n - 2] = (b[n - 2] - du[n - 2] * x[n - 1]) / d[n - 2];
    for (std::size_t ii = n; ii-- > 2;) {
        const std::size_t i = ii - 2;
        x[i] = (b[i] - du[i] * x[i + 1] - du2[i] * x[i + 2]) / d[i];
    }
    return x;
}

}  // namespace garding
