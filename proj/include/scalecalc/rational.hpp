#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace scalecalc {

/// Exact rational number backed by GMP.
///
/// Always canonical (lowest terms, positive denominator). Every arithmetic
/// operator evaluates eagerly and returns a Rational, so gmpxx expression
/// templates never leak into generic code.
class Rational {
public:
    Rational() = default;
    Rational(long value) : q_(value) {}                 // NOLINT(google-explicit-constructor)
    Rational(int value) : q_(static_cast<long>(value)) {}  // NOLINT(google-explicit-constructor)
    Rational(long num, long den);
    explicit Rational(const mpq_class& q) : q_(q) { q_.canonicalize(); }
    explicit Rational(const mpz_class& num, const mpz_class& den = 1);

    /// Parses `p/q`, an integer, or a decimal literal such as `-0.125` or
    /// `2.5e-3`. Decimal literals are converted exactly (0.1 -> 1/10).
    static Rational parse(std::string_view text);

    /// Exact value of a binary double.
    static Rational from_double(double value);

    [[nodiscard]] mpz_class numerator() const { return q_.get_num(); }
    [[nodiscard]] mpz_class denominator() const { return q_.get_den(); }
    [[nodiscard]] const mpq_class& raw() const { return q_; }

    [[nodiscard]] double to_double() const;
    /// ln|x| without overflow for huge numerators/denominators; -inf for 0.
    [[nodiscard]] double log_abs() const;
    [[nodiscard]] int sign() const { return sgn(q_); }
    [[nodiscard]] bool is_zero() const { return sgn(q_) == 0; }
    [[nodiscard]] bool is_integer() const { return q_.get_den() == 1; }

    /// `p/q`, or `p` when the denominator is 1.
    [[nodiscard]] std::string str() const;

    Rational& operator+=(const Rational& rhs) { q_ += rhs.q_; return *this; }
    Rational& operator-=(const Rational& rhs) { q_ -= rhs.q_; return *this; }
    Rational& operator*=(const Rational& rhs) { q_ *= rhs.q_; return *this; }
    Rational& operator/=(const Rational& rhs);

    friend Rational operator+(Rational lhs, const Rational& rhs) { return lhs += rhs; }
    friend Rational operator-(Rational lhs, const Rational& rhs) { return lhs -= rhs; }
    friend Rational operator*(Rational lhs, const Rational& rhs) { return lhs *= rhs; }
    friend Rational operator/(Rational lhs, const Rational& rhs) { return lhs /= rhs; }
    friend Rational operator-(const Rational& x) { return Rational(mpq_class(-x.q_)); }

    friend bool operator==(const Rational& a, const Rational& b) { return cmp(a.q_, b.q_) == 0; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        const int c = cmp(a.q_, b.q_);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& x);

private:
    mpq_class q_{0};
};

Rational abs(const Rational& x);
/// x^n for any integer n (negative powers require x != 0).
Rational pow(const Rational& x, long n);
Rational factorial(unsigned n);

}  // namespace scalecalc
