#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "support.hpp"

using namespace garding;

TEST(Operators, ClosedFormValues) {
    EXPECT_NEAR(eval(OperatorSpec::sigma_root(2, 3), EigenTuple{1, 1, 1}), std::sqrt(3.0), 1e-15);
    for (int n = 2; n <= 6; ++n)
        EXPECT_NEAR(eval(OperatorSpec::sigma_quotient(n, n), EigenTuple::constant(n, 1.0)), 1.0 / n, 1e-15);
    EXPECT_NEAR(eval(OperatorSpec::guan_zhang(2, 3, {1.0}, {0.0}), EigenTuple{1, 1, 1}), 2.0 / 3.0, 1e-15);
    // beta_0 sigma_0 / sigma_2 with beta_0 = 1: 3/3 - 1/3 - 1/3
    EXPECT_NEAR(eval(OperatorSpec::guan_zhang(2, 3, {1.0}, {1.0}), EigenTuple{1, 1, 1}), 1.0 / 3.0, 1e-15);
    EXPECT_DOUBLE_EQ(eval(OperatorSpec::linear(4), EigenTuple{1, -2, 3, 0.5}), 2.5);
}

TEST(Operators, Validation) {
    EXPECT_THROW(OperatorSpec::sigma_root(0, 3), DomainError);
    EXPECT_THROW(OperatorSpec::sigma_root(4, 3), DomainError);
    EXPECT_THROW(OperatorSpec::sigma_quotient(4, 3), DomainError);
    EXPECT_THROW(OperatorSpec::guan_zhang(1, 3, {}, {}), DomainError);
    EXPECT_THROW(OperatorSpec::guan_zhang(2, 3, {0.0}, {0.0}), DomainError);
    EXPECT_THROW(OperatorSpec::guan_zhang(2, 3, {-1.0}, {2.0}), DomainError);
    EXPECT_THROW(OperatorSpec::guan_zhang(3, 3, {1.0}, {1.0}), DomainError);
    EXPECT_NO_THROW(OperatorSpec::guan_zhang(3, 4, {0.0, 1.0}, {0.0, 0.0}));
}

TEST(Operators, OutsideDomainIsInfeasible) {
    const auto op = OperatorSpec::sigma_root(2, 3);
    EXPECT_FALSE(op.in_domain(EigenTuple{-1, -1, 1}));
    EXPECT_THROW(eval(op, EigenTuple{-1, -1, 1}), InfeasiblePoint);
    EXPECT_THROW(grad(op, EigenTuple{-1, -1, 1}), InfeasiblePoint);
    // boundary of Gamma_2: sigma_2(0,0,1) = 0
    EXPECT_THROW(grad(op, EigenTuple{0, 0, 1}), InfeasiblePoint);
}

TEST(Operators, GuanZhangDomain) {
    const auto no_beta = OperatorSpec::guan_zhang(2, 3, {1.0}, {0.0});
    const auto with_beta = OperatorSpec::guan_zhang(2, 3, {1.0}, {0.5});
    // in Gamma_1 but not Gamma_2
    const EigenTuple l{-1.0, -1.0, 3.0};
    EXPECT_TRUE(no_beta.in_domain(l));
    EXPECT_FALSE(with_beta.in_domain(l));
    EXPECT_EQ(no_beta.domain().k(), 1);
    EXPECT_EQ(with_beta.domain().k(), 2);
    EXPECT_EQ(no_beta.asymptotic_cone().k(), 2);
}

TEST(Operators, AsymptoticCones) {
    EXPECT_EQ(asymptotic_cone(OperatorSpec::linear(4)).k(), 1);
    for (int k = 1; k <= 4; ++k) {
        EXPECT_EQ(asymptotic_cone(OperatorSpec::sigma_root(k, 4)).k(), k);
        EXPECT_EQ(asymptotic_cone(OperatorSpec::sigma_quotient(k, 4)).k(), k);
    }
    EXPECT_EQ(asymptotic_cone(OperatorSpec::guan_zhang(3, 4, {1, 1}, {0, 0})).k(), 3);
    EXPECT_EQ(asymptotic_cone(OperatorSpec::guan_zhang(3, 4, {1, 1}, {1, 0})).kind(), ConeKind::Garding);
}

TEST(Operators, GradientExamples) {
    const auto lin = grad(OperatorSpec::linear(3), EigenTuple{4, -1, 2});
    EXPECT_EQ(lin, (EigenTuple{1, 1, 1}));
    const auto diag = grad(OperatorSpec::sigma_root(2, 4), EigenTuple::constant(4, 0.7));
    for (int i = 1; i < 4; ++i) EXPECT_NEAR(diag[i], diag[0], 1e-15);
    const auto g = grad(OperatorSpec::sigma_root(2, 3), EigenTuple{1, 2, 3});
    EXPECT_NEAR(g[0] / g[2], 5.0 / 3.0, 1e-14);
    EXPECT_NEAR(g[1] / g[2], 4.0 / 3.0, 1e-14);
}

namespace {

/// Interior point of the operator domain with some room to the boundary.
EigenTuple domain_point(const OperatorSpec& op, std::mt19937_64& rng) {
    for (;;) {
        auto l = testing_support::random_interior(op.domain(), rng, 0.1);
        if (op.in_domain(l) && op.domain().contains(l.shifted(-0.05))) return l;
    }
}

}  // namespace

TEST(Operators, GradientMatchesFiniteDifferences) {
    for (int n = 2; n <= 6; ++n) {
        for (const auto& op : testing_support::all_operators(n)) {
            std::mt19937_64 rng(100 + n);
            for (int s = 0; s < 40; ++s) {
                const auto l = domain_point(op, rng);
                const auto g = grad(op, l);
                const double scale = std::max(1.0, l.max_abs());
                for (int i = 0; i < n; ++i) {
                    const double fd = testing_support::central_difference(
                        [&](const EigenTuple& y) { return eval(op, y); }, l, i, 1e-5 * scale);
                    ASSERT_NEAR(g[i], fd, 1e-6 * (std::abs(fd) + g.max_abs()))
                        << to_string(op.family()) << " k=" << op.k() << " n=" << n;
                }
            }
        }
    }
}

TEST(Operators, PermutationInvariance) {
    std::mt19937_64 rng(7);
    for (const auto& op : testing_support::all_operators(5)) {
        for (int s = 0; s < 200; ++s) {
            const auto l = domain_point(op, rng);
            auto p = l.vector();
            std::shuffle(p.begin(), p.end(), rng);
            const double a = eval(op, l), b = eval(op, EigenTuple(p));
            ASSERT_NEAR(a, b, 1e-14 * std::max(1.0, std::abs(a)) * 10);
        }
    }
}

TEST(Operators, HomogeneityOfDegreeOne) {
    std::mt19937_64 rng(8);
    for (const auto& op : testing_support::all_operators(4)) {
        if (!op.homogeneous()) continue;
        for (int s = 0; s < 200; ++s) {
            const auto l = domain_point(op, rng);
            const double t = std::exp(garding::uniform(rng, -3.0, 3.0));
            ASSERT_NEAR(eval(op, l.scaled(t)), t * eval(op, l), 1e-12 * t * std::abs(eval(op, l)));
        }
    }
}

TEST(Operators, GradientOrderingAndSign) {
    std::mt19937_64 rng(9);
    int checked = 0;
    for (int n = 3; n <= 5; ++n) {
        for (const auto& op : testing_support::all_operators(n)) {
            for (int s = 0; s < 10000 / 40; ++s) {
                const auto l = domain_point(op, rng).sorted();
                const auto g = grad(op, l);
                for (int i = 0; i < n; ++i) ASSERT_GE(g[i], -1e-12);
                for (int i = 0; i + 1 < n; ++i) ASSERT_GE(g[i], g[i + 1] - 1e-12 * g.max_abs());
                ++checked;
            }
        }
    }
    EXPECT_GE(checked, 10000);
}

TEST(Operators, ConcavityProbe) {
    const auto op = OperatorSpec::sigma_root(2, 3);
    EXPECT_TRUE(concavity_probe(op, EigenTuple{3, 1, 1}, EigenTuple{1, 1, 3}));
    EXPECT_TRUE(concavity_probe(op, EigenTuple{3, 1, 1}, EigenTuple{3, 1, 1}));
    std::mt19937_64 rng(10);
    for (int n = 3; n <= 5; ++n) {
        for (const auto& op2 : testing_support::all_operators(n)) {
            for (int s = 0; s < 200; ++s) {
                const auto a = domain_point(op2, rng), b = domain_point(op2, rng);
                ASSERT_TRUE(concavity_probe(op2, a, b)) << to_string(op2.family());
            }
        }
    }
}

TEST(Operators, SingularGuard) {
    const auto op = OperatorSpec::guan_zhang(2, 2, {1.0}, {1.0});
    // sigma_2 = 1e-40 is treated as singular
    EXPECT_FALSE(op.in_domain(EigenTuple{1e-40, 1.0}));
}
