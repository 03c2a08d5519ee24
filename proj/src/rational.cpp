#include "scalecalc/rational.hpp"

#include <cctype>
#include <cmath>
#include <limits>
#include <ostream>

#include "scalecalc/errors.hpp"

namespace scalecalc {

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

mpz_class parse_integer(std::string_view s) {
    bool negative = false;
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    if (!all_digits(s)) throw ParseError("invalid integer literal '" + std::string(s) + "'");
    mpz_class z(std::string(s), 10);
    return negative ? mpz_class(-z) : z;
}

mpz_class pow10(unsigned long n) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), 10, n);
    return r;
}

// ln|z| for arbitrarily large z via mantissa/exponent split.
double log_abs_mpz(const mpz_class& z) {
    long exp = 0;
    const double mant = mpz_get_d_2exp(&exp, z.get_mpz_t());
    return std::log(std::fabs(mant)) + static_cast<double>(exp) * std::log(2.0);
}

}  // namespace

Rational::Rational(long num, long den) {
    if (den == 0) throw ParameterError("rational with zero denominator");
    q_ = mpq_class(num, 1);
    q_ /= mpq_class(den, 1);
    q_.canonicalize();
}

Rational::Rational(const mpz_class& num, const mpz_class& den) {
    if (den == 0) throw ParameterError("rational with zero denominator");
    q_ = mpq_class(num, den);
    q_.canonicalize();
}

Rational& Rational::operator/=(const Rational& rhs) {
    if (rhs.is_zero()) throw ParameterError("division by zero rational");
    q_ /= rhs.q_;
    return *this;
}

Rational Rational::parse(std::string_view text) {
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
    if (text.empty()) throw ParseError("empty rational literal");

    if (const auto slash = text.find('/'); slash != std::string_view::npos) {
        const mpz_class num = parse_integer(text.substr(0, slash));
        const auto den_text = text.substr(slash + 1);
        if (!all_digits(den_text)) throw ParseError("invalid denominator in '" + std::string(text) + "'");
        const mpz_class den(std::string(den_text), 10);
        if (den == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
        return Rational(num, den);
    }

    // Decimal: [sign] digits [. digits] [e|E [sign] digits]
    std::string_view mantissa = text;
    long exponent = 0;
    if (const auto e = text.find_first_of("eE"); e != std::string_view::npos) {
        mantissa = text.substr(0, e);
        const mpz_class ez = parse_integer(text.substr(e + 1));
        if (!ez.fits_slong_p() || abs(ez) > 4096) throw ParseError("exponent out of range in '" + std::string(text) + "'");
        exponent = ez.get_si();
    }
    bool negative = false;
    if (!mantissa.empty() && (mantissa.front() == '-' || mantissa.front() == '+')) {
        negative = mantissa.front() == '-';
        mantissa.remove_prefix(1);
    }
    std::string digits;
    long frac_len = 0;
    if (const auto dot = mantissa.find('.'); dot != std::string_view::npos) {
        const auto ip = mantissa.substr(0, dot);
        const auto fp = mantissa.substr(dot + 1);
        if ((!ip.empty() && !all_digits(ip)) || (!fp.empty() && !all_digits(fp)) || (ip.empty() && fp.empty())) {
            throw ParseError("invalid decimal literal '" + std::string(text) + "'");
        }
        digits = std::string(ip) + std::string(fp);
        frac_len = static_cast<long>(fp.size());
    } else {
        if (!all_digits(mantissa)) throw ParseError("invalid rational literal '" + std::string(text) + "'");
        digits = std::string(mantissa);
    }
    mpz_class num(digits, 10);
    if (negative) num = -num;
    const long shift = exponent - frac_len;
    if (shift >= 0) return Rational(mpz_class(num * pow10(static_cast<unsigned long>(shift))));
    return Rational(num, pow10(static_cast<unsigned long>(-shift)));
}

Rational Rational::from_double(double value) {
    if (!std::isfinite(value)) throw ParameterError("non-finite double cannot be converted to Rational");
    mpq_class q;
    mpq_set_d(q.get_mpq_t(), value);
    return Rational(q);
}

double Rational::to_double() const { return q_.get_d(); }

double Rational::log_abs() const {
    if (is_zero()) return -std::numeric_limits<double>::infinity();
    return log_abs_mpz(q_.get_num()) - log_abs_mpz(q_.get_den());
}

std::string Rational::str() const {
    if (q_.get_den() == 1) return q_.get_num().get_str();
    return q_.get_num().get_str() + "/" + q_.get_den().get_str();
}

std::ostream& operator<<(std::ostream& os, const Rational& x) { return os << x.str(); }

Rational abs(const Rational& x) { return x.sign() < 0 ? -x : x; }

Rational pow(const Rational& x, long n) {
    if (n < 0) {
        if (x.is_zero()) throw ParameterError("negative power of zero");
        return Rational(1) / pow(x, -n);
    }
    mpz_class num;
    mpz_class den;
    mpz_pow_ui(num.get_mpz_t(), x.raw().get_num_mpz_t(), static_cast<unsigned long>(n));
    mpz_pow_ui(den.get_mpz_t(), x.raw().get_den_mpz_t(), static_cast<unsigned long>(n));
    return Rational(num, den);
}

Rational factorial(unsigned n) {
    mpz_class r;
    mpz_fac_ui(r.get_mpz_t(), n);
    return Rational(r);
}

}  // namespace scalecalc
