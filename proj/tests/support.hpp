#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "garding/garding.hpp"

namespace testing_support {

using garding::EigenTuple;

/// sigma_k by summing over all k-subsets.
inline double brute_sigma(const std::vector<double>& x, int k) {
    const int n = static_cast<int>(x.size());
    double total = 0.0;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        if (__builtin_popcount(mask) != k) continue;
        double prod = 1.0;
        for (int i = 0; i < n; ++i)
            if (mask & (1u << i)) prod *= x[static_cast<std::size_t>(i)];
        total += prod;
    }
    return total;
}

inline std::vector<double> random_vector(std::mt19937_64& rng, int n, double lo, double hi) {
    std::vector<double> x(static_cast<std::size_t>(n));
    for (double& v : x) v = garding::uniform(rng, lo, hi);
    return x;
}

/// Point strictly inside `cone`, pushed further in by `margin` along the diagonal.
inline EigenTuple random_interior(const garding::ConeDescriptor& cone, std::mt19937_64& rng, double margin = 0.05) {
    auto x = garding::random_cone_point(cone, rng);
    for (double& v : x) v += margin;
    return EigenTuple(std::move(x));
}

/// Five-point central difference of f along coordinate i.
template <class F>
double central_difference(F&& f, const EigenTuple& x, int i, double h) {
    auto at = [&](double s) {
        auto v = x.vector();
        v[static_cast<std::size_t>(i)] += s;
        return f(EigenTuple(v));
    };
    return (-at(2 * h) + 8 * at(h) - 8 * at(-h) + at(-2 * h)) / (12 * h);
}

/// Runs `prop` on `count` generated cases; returns the number of failures.
template <class Gen, class Prop>
int count_failures(std::uint64_t seed, int count, Gen&& gen, Prop&& prop) {
    std::mt19937_64 rng(seed);
    int failures = 0;
    for (int i = 0; i < count; ++i)
        if (!prop(gen(rng))) ++failures;
    return failures;
}

inline std::vector<garding::OperatorSpec> all_operators(int n) { return garding::verify::builtin_operators(n); }

}  // namespace testing_support
