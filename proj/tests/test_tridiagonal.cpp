#include <gtest/gtest.h>

#include <cmath>

#include "support.hpp"

using namespace garding;

namespace {

Tridiagonal random_system(std::mt19937_64& rng, std::size_t n, double diag_boost) {
    Tridiagonal a(n);
    for (std::size_t i = 0; i < n; ++i) {
        a.diag[i] = uniform(rng, -1, 1) + diag_boost;
        if (i > 0) a.sub[i] = uniform(rng, -1, 1);
        if (i + 1 < n) a.super[i] = uniform(rng, -1, 1);
    }
    return a;
}

}  // namespace

TEST(Tridiagonal, SolvesRandomSystems) {
    std::mt19937_64 rng(81);
    for (int s = 0; s < 300; ++s) {
        const std::size_t n = 1 + rng() % 200;
        const auto a = random_system(rng, n, (s % 2) ? 3.0 : 0.0);
        const auto x = testing_support::random_vector(rng, static_cast<int>(n), -1, 1);
        const auto b = a.multiply(x);
        const auto y = solve_tridiagonal(a, b);
        double err = 0.0, scale = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            err = std::max(err, std::abs(y[i] - x[i]));
            scale = std::max(scale, std::abs(x[i]));
        }
        // the unboosted systems can be ill-conditioned; check the residual instead
        const auto r = a.multiply(y);
        double res = 0.0;
        for (std::size_t i = 0; i < n; ++i) res = std::max(res, std::abs(r[i] - b[i]));
        EXPECT_LE(res, 1e-9 * (1.0 + scale)) << "n=" << n;
        if (s % 2) EXPECT_LE(err, 1e-12 * (1.0 + scale));
    }
}

TEST(Tridiagonal, NeedsPivoting) {
    Tridiagonal a(3);
    a.diag = {0.0, 0.0, 1.0};
    a.super = {1.0, 1.0, 0.0};
    a.sub = {0.0, 1.0, 1.0};
    const std::vector<double> x{1.0, 2.0, 3.0};
    const auto y = solve_tridiagonal(a, a.multiply(x));
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(y[static_cast<std::size_t>(i)], x[static_cast<std::size_t>(i)], 1e-14);
}

TEST(Tridiagonal, SingularAndMismatched) {
    Tridiagonal a(2);
    a.diag = {1.0, 1.0};
    a.super = {1.0, 0.0};
    a.sub = {0.0, 1.0};
    const std::vector<double> b{1.0, 1.0};
    EXPECT_THROW(solve_tridiagonal(a, b), InternalConsistencyError);
    EXPECT_THROW(solve_tridiagonal(a, std::vector<double>{1.0}), DomainError);
}
