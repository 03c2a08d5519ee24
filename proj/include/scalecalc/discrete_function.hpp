#pragma once

#include <cstddef>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "scalecalc/errors.hpp"
#include "scalecalc/scalar.hpp"
#include "scalecalc/timescale.hpp"

namespace scalecalc {

/// One value per point of a time-scale.
template <Scalar S>
class DiscreteFunction {
public:
    using value_type = S;

    DiscreteFunction(TimeScale domain, std::vector<S> values) : domain_(std::move(domain)), values_(std::move(values)) {
        if (values_.size() != domain_.size()) {
            throw SizeError("discrete function has " + std::to_string(values_.size()) + " values for " +
                            std::to_string(domain_.size()) + " points");
        }
    }

    /// Samples `fn(t)` at every point of `domain`.
    template <class Fn>
    static DiscreteFunction sample(const TimeScale& domain, Fn&& fn) {
        std::vector<S> values;
        values.reserve(domain.size());
        for (const Rational& t : domain.points()) values.push_back(static_cast<S>(fn(t)));
        return DiscreteFunction(domain, std::move(values));
    }

    [[nodiscard]] const TimeScale& domain() const { return domain_; }
    [[nodiscard]] std::span<const S> values() const& { return values_; }
    std::span<const S> values() const&& = delete;
    [[nodiscard]] std::size_t size() const { return values_.size(); }
    [[nodiscard]] const S& operator[](std::size_t i) const { return values_[i]; }
    [[nodiscard]] const S& at(const Rational& t) const { return values_[domain_.index_of(t)]; }

    /// Restriction to a subset of the domain (throws DomainError otherwise).
    [[nodiscard]] DiscreteFunction restrict_to(const TimeScale& sub) const {
        std::vector<S> out;
        out.reserve(sub.size());
        std::size_t j = 0;
        for (const Rational& t : sub.points()) {
            while (j < domain_.size() && domain_[j] < t) ++j;
            if (j == domain_.size() || !(domain_[j] == t)) {
                throw DomainError("restriction point " + t.str() + " is not in the domain");
            }
            out.push_back(values_[j]);
        }
        return DiscreteFunction(sub, std::move(out));
    }

    friend bool operator==(const DiscreteFunction& l, const DiscreteFunction& r) {
        return l.domain_ == r.domain_ && l.values_ == r.values_;
    }

private:
    TimeScale domain_;
    std::vector<S> values_;
};

/// Forward quotient (f(sigma t) - f(t)) / mu(t) at point index i < n-1.
template <Scalar S>
S delta_at(const DiscreteFunction<S>& f, std::size_t i) {
    const auto& ts = f.domain();
    return (f[i + 1] - f[i]) / from_rational<S>(ts[i + 1] - ts[i]);
}

/// Backward quotient (f(t) - f(rho t)) / nu(t) at point index i > 0.
template <Scalar S>
S nabla_at(const DiscreteFunction<S>& f, std::size_t i) {
    const auto& ts = f.domain();
    return (f[i] - f[i - 1]) / from_rational<S>(ts[i] - ts[i - 1]);
}

/// Delta derivative on T^kappa. On a finite time-scale every point is
/// isolated, so the limit definition reduces to the forward quotient.
template <Scalar S>
DiscreteFunction<S> delta_derivative(const DiscreteFunction<S>& f) {
    if (f.size() < 3) throw SizeError("delta derivative requires at least 3 points");
    std::vector<S> out;
    out.reserve(f.size() - 1);
    for (std::size_t i = 0; i + 1 < f.size(); ++i) out.push_back(delta_at(f, i));
    return DiscreteFunction<S>(f.domain().kappa_upper(), std::move(out));
}

/// Nabla derivative on T_kappa.
template <Scalar S>
DiscreteFunction<S> nabla_derivative(const DiscreteFunction<S>& f) {
    if (f.size() < 3) throw SizeError("nabla derivative requires at least 3 points");
    std::vector<S> out;
    out.reserve(f.size() - 1);
    for (std::size_t i = 1; i < f.size(); ++i) out.push_back(nabla_at(f, i));
    return DiscreteFunction<S>(f.domain().kappa_lower(), std::move(out));
}

/// Cauchy Delta-integral: sum of f(s) mu(s) over grid points s in [t0, t).
template <Scalar S>
S cauchy_delta_integral(const DiscreteFunction<S>& f, const Rational& t0, const Rational& t) {
    const auto& ts = f.domain();
    const std::size_t i0 = ts.index_of(t0);
    const std::size_t i1 = ts.index_of(t);
    if (i0 > i1) throw OrderError("integration bounds out of order: " + t0.str() + " > " + t.str());
    S sum = from_rational<S>(Rational(0));
    for (std::size_t i = i0; i < i1; ++i) sum = sum + f[i] * from_rational<S>(ts[i + 1] - ts[i]);
    return sum;
}

/// Delta-antiderivative U with U(t0) = 0 and Delta U = f on T^kappa, on the
/// whole domain (points left of t0 carry the negated sum).
template <Scalar S>
DiscreteFunction<S> delta_antiderivative(const DiscreteFunction<S>& f, const Rational& t0) {
    const auto& ts = f.domain();
    const std::size_t i0 = ts.index_of(t0);
    std::vector<S> out(ts.size(), from_rational<S>(Rational(0)));
    for (std::size_t i = i0; i + 1 < ts.size(); ++i) {
        out[i + 1] = out[i] + f[i] * from_rational<S>(ts[i + 1] - ts[i]);
    }
    for (std::size_t i = i0; i > 0; --i) {
        out[i - 1] = out[i] - f[i - 1] * from_rational<S>(ts[i] - ts[i - 1]);
    }
    return DiscreteFunction<S>(ts, std::move(out));
}

/// Pointwise difference on identical domains.
template <Scalar S>
DiscreteFunction<S> operator-(const DiscreteFunction<S>& l, const DiscreteFunction<S>& r) {
    if (!(l.domain() == r.domain())) throw DomainError("pointwise difference over different domains");
    std::vector<S> out;
    out.reserve(l.size());
    for (std::size_t i = 0; i < l.size(); ++i) out.push_back(l[i] - r[i]);
    return DiscreteFunction<S>(l.domain(), std::move(out));
}

/// Converts values to double (time points stay exact).
template <Scalar S>
DiscreteFunction<double> to_double(const DiscreteFunction<S>& f) {
    std::vector<double> out;
    out.reserve(f.size());
    for (const S& v : f.values()) out.push_back(to_double(v));
    return DiscreteFunction<double>(f.domain(), std::move(out));
}

/// CSV with header `t,value` (17 significant digits), or in exact mode
/// `num,den,value` where rational values are written as `p/q` literals.
template <Scalar S>
void write_csv(std::ostream& os, const DiscreteFunction<S>& f, bool exact = false) {
    const auto& ts = f.domain();
    os << (exact ? "num,den,value\n" : "t,value\n");
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (exact) {
            os << ts[i].numerator().get_str() << ',' << ts[i].denominator().get_str() << ',';
            if constexpr (std::is_same_v<S, Rational>) {
                os << f[i].str();
            } else {
                os << format_decimal(to_double(f[i]));
            }
        } else {
            os << format_decimal(ts[i].to_double()) << ',' << format_decimal(to_double(f[i]));
        }
        os << '\n';
    }
}

}  // namespace scalecalc
