/// @file sparse_dual.hpp
/// @brief Forward-mode dual number with a sparse gradient, used to assemble
/// Jacobian rows from the same stencil code that evaluates the residual.
#pragma once

#include <boost/container/small_vector.hpp>

namespace tcflow {

struct GradEntry {
    int index;
    double coef;
};

class SparseDual {
public:
    using Grad = boost::container::small_vector<GradEntry, 24>;

    SparseDual(double value = 0.0) : value_(value) {}  // NOLINT: implicit by design of the stencils

    static SparseDual variable(double value, int index) {
        SparseDual d(value);
        d.grad_.push_back({index, 1.0});
        return d;
    }

    double value() const { return value_; }
    const Grad& grad() const { return grad_; }

    SparseDual& operator+=(const SparseDual& o) {
        value_ += o.value_;
        grad_.insert(grad_.end(), o.grad_.begin(), o.grad_.end());
        return *this;
    }
    SparseDual& operator-=(const SparseDual& o) {
        value_ -= o.value_;
        for (const auto& e : o.grad_) grad_.push_back({e.index, -e.coef});
        return *this;
    }
    SparseDual& operator*=(double s) {
        value_ *= s;
        for (auto& e : grad_) e.coef *= s;
        return *this;
    }

    friend SparseDual operator+(SparseDual a, const SparseDual& b) { return a += b; }
    friend SparseDual operator-(SparseDual a, const SparseDual& b) { return a -= b; }
    friend SparseDual operator-(SparseDual a) { return a *= -1.0; }
    friend SparseDual operator*(SparseDual a, double s) { return a *= s; }
    friend SparseDual operator*(double s, SparseDual a) { return a *= s; }

    friend SparseDual operator*(const SparseDual& a, const SparseDual& b) {
        SparseDual out(a.value_ * b.value_);
        out.grad_.reserve(a.grad_.size() + b.grad_.size());
        for (const auto& e : a.grad_) out.grad_.push_back({e.index, e.coef * b.value_});
        for (const auto& e : b.grad_) out.grad_.push_back({e.index, e.coef * a.value_});
        return out;
    }

private:
    double value_;
    Grad grad_;
};

inline double value_of(double x) { return x; }
inline double value_of(const SparseDual& x) { return x.value(); }

}  // namespace tcflow
