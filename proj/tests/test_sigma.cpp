#include <gtest/gtest.h>

#include <cmath>

#include "support.hpp"

using namespace garding;
using testing_support::brute_sigma;

TEST(Sigma, SmallCases) {
    EXPECT_DOUBLE_EQ(sigma(EigenTuple{1, 1, 1}, 2), 3.0);
    EXPECT_DOUBLE_EQ(sigma(EigenTuple{1, 2, 3}, 2), 11.0);
    EXPECT_DOUBLE_EQ(sigma(EigenTuple{1, 2, 3}, 3), 6.0);
    EXPECT_DOUBLE_EQ(sigma(EigenTuple{4, -2, 7}, 0), 1.0);
}

TEST(Sigma, DiagonalIsBinomialTimesPower) {
    const double t = 1.7;
    for (int n = 2; n <= 9; ++n) {
        double binom = 1.0;
        for (int k = 0; k <= n; ++k) {
            if (k > 0) binom = binom * (n - k + 1) / k;
            EXPECT_NEAR(sigma(EigenTuple::constant(n, t), k), binom * std::pow(t, k), 1e-12 * binom * std::pow(t, k));
        }
    }
}

TEST(Sigma, OutOfRangeK) {
    EXPECT_THROW(sigma(EigenTuple{1, 2, 3}, 4), DomainError);
    EXPECT_THROW(sigma(EigenTuple{1, 2, 3}, -1), DomainError);
    EXPECT_THROW(sigma_partial(EigenTuple{1, 2, 3}, 0, 0), DomainError);
    EXPECT_THROW(sigma_partial(EigenTuple{1, 2, 3}, 2, 3), DomainError);
}

TEST(Sigma, PartialDeletesOneEntry) {
    // indices are 0-based
    EXPECT_DOUBLE_EQ(sigma_partial(EigenTuple{1, 2, 3}, 2, 0), 5.0);
    EXPECT_DOUBLE_EQ(sigma_partial(EigenTuple{1, 2, 3}, 3, 1), 3.0);
    EXPECT_DOUBLE_EQ(sigma_partial(EigenTuple{-4, 2, 9}, 1, 2), 1.0);
}

TEST(Sigma, RecurrenceMatchesSubsetSums) {
    const int failures = testing_support::count_failures(
        11, 2000,
        [](std::mt19937_64& rng) {
            const int n = 2 + static_cast<int>(rng() % 7);
            return testing_support::random_vector(rng, n, -3.0, 3.0);
        },
        [](const std::vector<double>& x) {
            for (int k = 0; k <= static_cast<int>(x.size()); ++k) {
                const double b = brute_sigma(x, k);
                if (std::abs(sigma(EigenTuple(x), k) - b) > 1e-10 * (1.0 + std::abs(b))) return false;
            }
            return true;
        });
    EXPECT_EQ(failures, 0);
}

TEST(Sigma, PartialIsTheDerivative) {
    const int failures = testing_support::count_failures(
        12, 500,
        [](std::mt19937_64& rng) { return testing_support::random_vector(rng, 2 + static_cast<int>(rng() % 6), -2, 2); },
        [](const std::vector<double>& x) {
            const EigenTuple l(x);
            for (int k = 1; k <= l.size(); ++k) {
                for (int i = 0; i < l.size(); ++i) {
                    const double fd = testing_support::central_difference(
                        [k](const EigenTuple& y) { return sigma(y, k); }, l, i, 1e-3);
                    if (std::abs(sigma_partial(l, k, i) - fd) > 1e-8 * (1.0 + std::abs(fd))) return false;
                }
            }
            return true;
        });
    EXPECT_EQ(failures, 0);
}

TEST(EigenTupleTest, RejectsBadInput) {
    EXPECT_THROW(EigenTuple({1.0}), DomainError);
    EXPECT_THROW(EigenTuple({1.0, std::nan("")}), DomainError);
    EXPECT_THROW(EigenTuple({1.0, INFINITY}), DomainError);
}

TEST(EigenTupleTest, SortingDoesNotMutate) {
    const EigenTuple l{3, 1, 2};
    const auto s = l.sorted();
    EXPECT_EQ(s, (EigenTuple{1, 2, 3}));
    EXPECT_EQ(l, (EigenTuple{3, 1, 2}));
}
