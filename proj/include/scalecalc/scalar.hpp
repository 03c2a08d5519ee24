#pragma once

#include <cmath>
#include <complex>
#include <concepts>
#include <cstdio>
#include <limits>
#include <string>

#include "scalecalc/qsqrt2.hpp"
#include "scalecalc/rational.hpp"

namespace scalecalc {

/// Customization point for the value type carried by discrete functions.
///
/// Exact scalars (Rational, QSqrt2) make derivative identities hold with
/// residual exactly zero; double and complex<double> serve analytic and
/// float-sourced data.
template <class S>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
    static constexpr bool exact = true;
    static constexpr bool complex = false;
    static Rational from_rational(const Rational& q) { return q; }
    static double to_double(const Rational& x) { return x.to_double(); }
    static double abs(const Rational& x) { return std::fabs(x.to_double()); }
    static double log_abs(const Rational& x) { return x.log_abs(); }
    static bool is_zero(const Rational& x) { return x.is_zero(); }
};

template <>
struct ScalarTraits<QSqrt2> {
    static constexpr bool exact = true;
    static constexpr bool complex = false;
    static QSqrt2 from_rational(const Rational& q) { return QSqrt2(q); }
    static double to_double(const QSqrt2& x) { return x.to_double(); }
    static double abs(const QSqrt2& x) { return std::fabs(x.to_double()); }
    static double log_abs(const QSqrt2& x) {
        if (x.is_rational()) return x.rational_part().log_abs();
        return std::log(std::fabs(x.to_double()));
    }
    static bool is_zero(const QSqrt2& x) { return x.is_zero(); }
};

template <>
struct ScalarTraits<double> {
    static constexpr bool exact = false;
    static constexpr bool complex = false;
    static double from_rational(const Rational& q) { return q.to_double(); }
    static double to_double(double x) { return x; }
    static double abs(double x) { return std::fabs(x); }
    static double log_abs(double x) { return std::log(std::fabs(x)); }
    static bool is_zero(double x) { return x == 0.0; }
};

template <>
struct ScalarTraits<std::complex<double>> {
    static constexpr bool exact = false;
    static constexpr bool complex = true;
    using C = std::complex<double>;
    static C from_rational(const Rational& q) { return {q.to_double(), 0.0}; }
    /// Real part; callers needing the modulus use abs().
    static double to_double(const C& x) { return x.real(); }
    static double abs(const C& x) { return std::abs(x); }
    static double log_abs(const C& x) { return std::log(std::abs(x)); }
    static bool is_zero(const C& x) { return x == C{}; }
};

template <class S>
concept Scalar = requires(const S& a, const S& b, const Rational& q) {
    { a + b } -> std::convertible_to<S>;
    { a - b } -> std::convertible_to<S>;
    { a * b } -> std::convertible_to<S>;
    { a / b } -> std::convertible_to<S>;
    { ScalarTraits<S>::from_rational(q) } -> std::convertible_to<S>;
    { ScalarTraits<S>::to_double(a) } -> std::convertible_to<double>;
};

template <Scalar S>
S from_rational(const Rational& q) {
    return ScalarTraits<S>::from_rational(q);
}

template <Scalar S>
double to_double(const S& x) {
    return ScalarTraits<S>::to_double(x);
}

template <Scalar S>
double abs_value(const S& x) {
    return ScalarTraits<S>::abs(x);
}

template <Scalar S>
bool is_zero(const S& x) {
    return ScalarTraits<S>::is_zero(x);
}

/// Decimal rendering with 17 significant digits.
inline std::string format_decimal(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace scalecalc
