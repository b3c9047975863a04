#pragma once

// Rational functions with denominator a power of one fixed pole base f.
// This is all the generality the logarithmic calculus needs: coefficients of
// meromorphic forms with poles along the divisor.

#include "logdiff/polynomial.hpp"

#include <stdexcept>
#include <string>
#include <utility>

namespace logdiff {

class RationalFunction {
public:
    RationalFunction() = default;

    // num / base^order, reduced so that base no longer divides num (unless
    // the pole order is already zero).
    RationalFunction(Polynomial num, Polynomial pole_base, int pole_order = 0)
        : num_(std::move(num)), base_(std::move(pole_base)), order_(pole_order) {
        if (order_ < 0) throw std::invalid_argument("negative pole order");
        if (base_.is_zero()) throw std::invalid_argument("zero pole base");
        reduce();
    }

    static RationalFunction from_polynomial(Polynomial p, Polynomial pole_base) {
        return RationalFunction(std::move(p), std::move(pole_base), 0);
    }

    const Polynomial& numerator() const { return num_; }
    const Polynomial& pole_base() const { return base_; }
    int pole_order() const { return order_; }

    bool is_zero() const { return num_.is_zero(); }
    bool is_polynomial() const { return order_ == 0; }

    // Valid only when pole_order == 0.
    const Polynomial& as_polynomial() const {
        if (order_ != 0) throw std::domain_error("rational function has a genuine pole");
        return num_;
    }

    RationalFunction operator-() const { return raw(-num_, base_, order_); }

    friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
        const auto& [x, y] = aligned(a, b);
        return RationalFunction(x.num_ + y.num_, x.base_, x.order_);
    }
    friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) {
        const auto& [x, y] = aligned(a, b);
        return RationalFunction(x.num_ - y.num_, x.base_, x.order_);
    }
    friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
        require_same_base(a, b);
        return RationalFunction(a.num_ * b.num_, a.base_, a.order_ + b.order_);
    }
    friend RationalFunction operator*(const Polynomial& p, const RationalFunction& b) {
        return RationalFunction(p * b.num_, b.base_, b.order_);
    }

    RationalFunction scaled(const Rational& c) const { return raw(num_.scaled(c), base_, order_); }

    RationalFunction& operator+=(const RationalFunction& b) { *this = *this + b; return *this; }
    RationalFunction& operator-=(const RationalFunction& b) { *this = *this - b; return *this; }

    // d/dx_i by the quotient rule; pole order grows by at most one.
    RationalFunction partial(int index) const {
        if (order_ == 0) return RationalFunction(num_.partial(index), base_, 0);
        Polynomial top = num_.partial(index) * base_ - num_.scaled(Rational(order_)) * base_.partial(index);
        return RationalFunction(std::move(top), base_, order_ + 1);
    }

    bool operator==(const RationalFunction& o) const {
        if (num_.is_zero() && o.num_.is_zero()) return true;
        return order_ == o.order_ && num_ == o.num_ && base_ == o.base_;
    }
    bool operator!=(const RationalFunction& o) const { return !(*this == o); }

private:
    static RationalFunction raw(Polynomial n, Polynomial b, int k) {
        RationalFunction r;
        r.num_ = std::move(n);
        r.base_ = std::move(b);
        r.order_ = k;
        return r;  // already reduced by the caller's invariant
    }

    static void require_same_base(const RationalFunction& a, const RationalFunction& b) {
        if (!a.base_.is_zero() && !b.base_.is_zero() && a.base_ != b.base_)
            throw std::invalid_argument("rational functions with different pole bases");
    }

    static std::pair<RationalFunction, RationalFunction> aligned(const RationalFunction& a,
                                                                 const RationalFunction& b) {
        require_same_base(a, b);
        Polynomial base = a.base_.is_zero() ? b.base_ : a.base_;
        int k = std::max(a.order_, b.order_);
        auto lift = [&](const RationalFunction& r) {
            Polynomial n = r.num_;
            for (int i = r.order_; i < k; ++i) n *= base;
            return raw(std::move(n), base, k);
        };
        return {lift(a), lift(b)};
    }

    void reduce() {
        if (num_.is_zero()) { order_ = 0; return; }
        while (order_ > 0) {
            auto d = exact_divide(num_, base_);
            if (!d.exact) break;
            num_ = d.quotient;
            --order_;
        }
    }

    Polynomial num_;
    Polynomial base_;
    int order_ = 0;
};

// "num / f^k" with the canonical polynomial rendering for num; plain
// polynomial text when there is no pole.
inline std::string to_string(const RationalFunction& r) {
    if (r.pole_order() == 0) return to_string(r.numerator());
    return to_string(r.numerator()) + " / f^" + std::to_string(r.pole_order());
}

}  // namespace logdiff
