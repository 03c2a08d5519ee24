#pragma once

#include <cmath>
#include <ostream>

#include "scalecalc/errors.hpp"
#include "scalecalc/rational.hpp"

namespace scalecalc {

/// Exact element a + b*sqrt(2) of the quadratic field Q(sqrt 2).
///
/// Dyadic graininess is 2^-m, so sqrt(mu) lives in this field for every m;
/// midpoint displacements proportional to sqrt(mu) stay exact.
class QSqrt2 {
public:
    QSqrt2() = default;
    QSqrt2(Rational rational_part) : a_(std::move(rational_part)) {}  // NOLINT(google-explicit-constructor)
    QSqrt2(Rational rational_part, Rational root_part) : a_(std::move(rational_part)), b_(std::move(root_part)) {}
    QSqrt2(int value) : a_(value) {}  // NOLINT(google-explicit-constructor)

    /// sqrt(2^-k) for integer k.
    static QSqrt2 sqrt_pow2(long k) {
        // 2^(-k/2): even k is rational, odd k carries one sqrt(2).
        if (k % 2 == 0) return QSqrt2(pow(Rational(2), -k / 2));
        const long e = (k + 1) / 2;  // 2^(-k/2) = 2^(-e) * sqrt(2) when k = 2e - 1
        return QSqrt2(Rational(0), pow(Rational(2), -e));
    }

    [[nodiscard]] const Rational& rational_part() const { return a_; }
    [[nodiscard]] const Rational& root_part() const { return b_; }
    [[nodiscard]] bool is_zero() const { return a_.is_zero() && b_.is_zero(); }
    [[nodiscard]] bool is_rational() const { return b_.is_zero(); }

    [[nodiscard]] double to_double() const { return a_.to_double() + b_.to_double() * std::sqrt(2.0); }

    /// Norm a^2 - 2 b^2; nonzero for every nonzero element.
    [[nodiscard]] Rational norm() const { return a_ * a_ - Rational(2) * b_ * b_; }
    [[nodiscard]] QSqrt2 conjugate() const { return {a_, -b_}; }

    QSqrt2& operator+=(const QSqrt2& r) { a_ += r.a_; b_ += r.b_; return *this; }
    QSqrt2& operator-=(const QSqrt2& r) { a_ -= r.a_; b_ -= r.b_; return *this; }
    QSqrt2& operator*=(const QSqrt2& r) {
        Rational a = a_ * r.a_ + Rational(2) * b_ * r.b_;
        Rational b = a_ * r.b_ + b_ * r.a_;
        a_ = std::move(a);
        b_ = std::move(b);
        return *this;
    }
    QSqrt2& operator/=(const QSqrt2& r) {
        if (r.is_zero()) throw ParameterError("division by zero in Q(sqrt 2)");
        const Rational n = r.norm();
        *this *= r.conjugate();
        a_ /= n;
        b_ /= n;
        return *this;
    }

    friend QSqrt2 operator+(QSqrt2 l, const QSqrt2& r) { return l += r; }
    friend QSqrt2 operator-(QSqrt2 l, const QSqrt2& r) { return l -= r; }
    friend QSqrt2 operator*(QSqrt2 l, const QSqrt2& r) { return l *= r; }
    friend QSqrt2 operator/(QSqrt2 l, const QSqrt2& r) { return l /= r; }
    friend QSqrt2 operator-(const QSqrt2& x) { return {-x.a_, -x.b_}; }
    friend bool operator==(const QSqrt2& l, const QSqrt2& r) { return l.a_ == r.a_ && l.b_ == r.b_; }

    friend std::ostream& operator<<(std::ostream& os, const QSqrt2& x) {
        return os << x.a_ << "+" << x.b_ << "*sqrt2";
    }

private:
    Rational a_{0};
    Rational b_{0};
};

}  // namespace scalecalc
