#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "garding/errors.hpp"

namespace garding {

/// Ordered real n-tuple of eigenvalues, n >= 2, all entries finite.
class EigenTuple {
public:
    EigenTuple(std::initializer_list<double> values) : values_(values) { validate(); }
    explicit EigenTuple(std::vector<double> values) : values_(std::move(values)) { validate(); }

    /// n copies of `value`.
    static EigenTuple constant(int n, double value) {
        return EigenTuple(std::vector<double>(static_cast<std::size_t>(std::max(n, 0)), value));
    }

    int size() const { return static_cast<int>(values_.size()); }
    double operator[](int i) const { return values_[static_cast<std::size_t>(i)]; }
    std::span<const double> values() const { return values_; }
    const std::vector<double>& vector() const { return values_; }

    double sum() const {
        double s = 0.0;
        for (double v : values_) s += v;
        return s;
    }
    double max_abs() const {
        double m = 0.0;
        for (double v : values_) m = std::max(m, std::abs(v));
        return m;
    }

    /// Ascending copy; the original is left untouched.
    EigenTuple sorted() const {
        auto copy = values_;
        std::sort(copy.begin(), copy.end());
        return EigenTuple(std::move(copy));
    }

    /// Copy with entry i removed (size n-1, may be 1 so no size validation).
    std::vector<double> without(int i) const {
        std::vector<double> out;
        out.reserve(values_.size() - 1);
        for (int j = 0; j < size(); ++j)
            if (j != i) out.push_back(values_[static_cast<std::size_t>(j)]);
        return out;
    }

    EigenTuple scaled(double t) const {
        auto copy = values_;
        for (double& v : copy) v *= t;
        return EigenTuple(std::move(copy));
    }
    EigenTuple shifted(double s) const {
        auto copy = values_;
        for (double& v : copy) v += s;
        return EigenTuple(std::move(copy));
    }

    friend EigenTuple operator+(const EigenTuple& a, const EigenTuple& b) {
        check_same(a, b);
        auto out = a.values_;
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += b.values_[i];
        return EigenTuple(std::move(out));
    }
    friend EigenTuple operator-(const EigenTuple& a, const EigenTuple& b) {
        check_same(a, b);
        auto out = a.values_;
        for (std::size_t i = 0; i < out.size(); ++i) out[i] -= b.values_[i];
        return EigenTuple(std::move(out));
    }
    friend double dot(const EigenTuple& a, const EigenTuple& b) {
        check_same(a, b);
        double s = 0.0;
        for (std::size_t i = 0; i < a.values_.size(); ++i) s += a.values_[i] * b.values_[i];
        return s;
    }
    friend bool operator==(const EigenTuple&, const EigenTuple&) = default;

private:
    void validate() const {
        if (values_.size() < 2) throw DomainError("EigenTuple needs n >= 2 entries");
        for (double v : values_)
            if (!std::isfinite(v)) throw DomainError("EigenTuple entries must be finite");
    }
    static void check_same(const EigenTuple& a, const EigenTuple& b) {
        if (a.size() != b.size()) throw DomainError("EigenTuple dimension mismatch");
    }

    std::vector<double> values_;
};

}  // namespace garding
