#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <vector>

#include "garding/errors.hpp"

namespace garding {

inline constexpr std::uint64_t kDefaultSeed = 0x5EED;

/// Uniform double in [0, 1) from the top 53 bits; independent of the
/// standard library's distribution implementations, so draws are
/// reproducible across toolchains.
inline double unit_double(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * unit_double(rng);
}

/// Halton sequence with a seeded Cranley-Patterson rotation per coordinate.
/// Dimension is limited by the prime table (up to 16 coordinates).
class ScrambledHalton {
public:
    static constexpr std::array<int, 16> kPrimes = {2,  3,  5,  7,  11, 13, 17, 19,
                                                    23, 29, 31, 37, 41, 43, 47, 53};

    ScrambledHalton(int dim, std::uint64_t seed) : dim_(dim), shift_(static_cast<std::size_t>(dim)) {
        if (dim < 1 || dim > static_cast<int>(kPrimes.size()))
            throw DomainError("ScrambledHalton: dimension out of range");
        std::mt19937_64 rng(seed);
        for (double& s : shift_) s = unit_double(rng);
    }

    int dimension() const { return dim_; }

    /// Next point in [0,1)^dim.
    std::vector<double> next() {
        ++index_;
        std::vector<double> x(static_cast<std::size_t>(dim_));
        for (int d = 0; d < dim_; ++d) {
            double v = radical_inverse(index_, kPrimes[static_cast<std::size_t>(d)]) +
                       shift_[static_cast<std::size_t>(d)];
            x[static_cast<std::size_t>(d)] = v >= 1.0 ? v - 1.0 : v;
        }
        return x;
    }

private:
    static double radical_inverse(std::uint64_t i, int base) {
        double inv = 1.0 / base, f = inv, r = 0.0;
        while (i > 0) {
            r += f * static_cast<double>(i % static_cast<std::uint64_t>(base));
            i /= static_cast<std::uint64_t>(base);
            f *= inv;
        }
        return r;
    }

    int dim_;
    std::uint64_t index_ = 0;
    std::vector<double> shift_;
};

}  // namespace garding
