#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "scalecalc/discrete_function.hpp"
#include "scalecalc/errors.hpp"
#include "scalecalc/scale_function.hpp"
#include "scalecalc/symbolic.hpp"

namespace scalecalc {

/// Chord interpolation of `coarse` onto the finer time-scale `fine`
/// (which must contain every coarse point).
template <Scalar S>
DiscreteFunction<S> chord_interpolate(const DiscreteFunction<S>& coarse, const TimeScale& fine) {
    const auto& cs = coarse.domain();
    std::vector<S> out;
    out.reserve(fine.size());
    std::size_t k = 0;
    for (const Rational& t : fine.points()) {
        while (k + 1 < cs.size() && cs[k + 1] <= t) ++k;
        if (cs[k] == t) {
            out.push_back(coarse[k]);
        } else {
            if (k + 1 >= cs.size()) throw DomainError("point " + t.str() + " lies outside the coarse time-scale");
            const Rational w = (t - cs[k]) / (cs[k + 1] - cs[k]);
            out.push_back(coarse[k] + from_rational<S>(w) * (coarse[k + 1] - coarse[k]));
        }
    }
    if (!cs.is_subset_of(fine)) throw DomainError("fine time-scale does not contain the coarse one");
    return DiscreteFunction<S>(fine, std::move(out));
}

/// F*: per level m >= 1 the chord interpolation of F_{m-1} onto T_m.
/// Index 0 holds F_0 itself so that level indices line up with F.
template <Scalar S>
struct ReferenceScaleFunction {
    std::vector<DiscreteFunction<S>> layers;

    [[nodiscard]] const DiscreteFunction<S>& layer(std::size_t m) const { return layers.at(m); }
    [[nodiscard]] std::size_t depth() const { return layers.size() - 1; }
};

template <Scalar S>
ReferenceScaleFunction<S> reference_function(const ScaleFunction<S>& f) {
    if (f.levels() < 2) throw SizeError("reference function needs at least two levels");
    ReferenceScaleFunction<S> ref;
    ref.layers.reserve(f.levels());
    ref.layers.push_back(f.layer(0));
    for (std::size_t m = 1; m < f.levels(); ++m) ref.layers.push_back(chord_interpolate(f.layer(m - 1), f.layer(m).domain()));
    return ref;
}

enum class CorrectionSide { okamoto, left, right };

inline std::string to_string(CorrectionSide s) {
    switch (s) {
        case CorrectionSide::okamoto: return "okamoto";
        case CorrectionSide::left: return "left";
        case CorrectionSide::right: return "right";
    }
    return "okamoto";
}

/// Correction values per level, on the points where they are defined.
template <Scalar S>
struct CorrectionField {
    CorrectionSide side = CorrectionSide::okamoto;
    std::size_t first_level = 1;
    std::vector<DiscreteFunction<S>> layers;
    /// Full T_m per level, to report the excluded points.
    std::vector<TimeScale> full_domains;

    [[nodiscard]] const DiscreteFunction<S>& at_level(std::size_t m) const {
        if (m < first_level || m - first_level >= layers.size()) throw SizeError("level " + std::to_string(m) + " not in correction field");
        return layers[m - first_level];
    }
    [[nodiscard]] std::size_t last_level() const { return first_level + layers.size() - 1; }

    /// Points of T_m where the correction is undefined.
    [[nodiscard]] std::vector<Rational> excluded(std::size_t m) const {
        const auto& dom = at_level(m).domain();
        std::vector<Rational> out;
        for (const Rational& t : full_domains.at(m - first_level).points()) {
            if (!dom.contains(t)) out.push_back(t);
        }
        return out;
    }
};

/// Slope multiplier of the Okamoto action on the sub-interval at `position`
/// (0, 1, 2) relative to the chord slope of the parent interval.
inline Rational okamoto_slope_factor(const Rational& a, std::size_t position) {
    return position == 1 ? Rational(3) * (Rational(1) - Rational(2) * a) : Rational(3) * a;
}

namespace detail {

template <Scalar S>
void require_okamoto(const ScaleFunction<S>& f) {
    if (f.kind() != Refinement::triadic || !f.has_provenance()) {
        throw MisuseError("Okamoto correction needs a triadic scale function built from Okamoto actions");
    }
    for (const auto& a : f.actions()) {
        if (a.name() != "okamoto" || !a.parameter()) throw MisuseError("level built by '" + a.name() + "' is not an Okamoto action");
    }
}

template <Scalar S>
CorrectionField<S> okamoto_field(const ScaleFunction<S>& f, const std::function<Rational(std::size_t)>& param) {
    CorrectionField<S> out;
    out.side = CorrectionSide::okamoto;
    out.first_level = 1;
    for (std::size_t m = 1; m < f.levels(); ++m) {
        const auto& coarse = f.layer(m - 1);
        const auto& fine = f.layer(m);
        const Rational a = param(m);
        std::vector<S> vals;
        vals.reserve(fine.size() - 1);
        for (std::size_t i = 0; i + 1 < fine.size(); ++i) {
            const S ref_slope = delta_at(coarse, i / 3);
            vals.push_back(from_rational<S>(okamoto_slope_factor(a, i % 3) - Rational(1)) * ref_slope);
        }
        out.layers.emplace_back(fine.domain().kappa_upper(), std::move(vals));
        out.full_domains.push_back(fine.domain());
    }
    return out;
}

}  // namespace detail

/// Okamoto correction C = dO - dO* per level on T_m^kappa. With the parent
/// interval length normalized to 1 the factor is (3a - 1) on the outer
/// sub-intervals and (3(1 - 2a) - 1) on the middle one.
template <Scalar S>
CorrectionField<S> okamoto_correction(const ScaleFunction<S>& f, const Rational& a) {
    detail::require_okamoto(f);
    for (const auto& act : f.actions()) {
        if (!(*act.parameter() == a)) throw MisuseError("scale function was built with a = " + act.parameter()->str() + ", not " + a.str());
    }
    return detail::okamoto_field(f, [&a](std::size_t) { return a; });
}

/// Multiscale Okamoto correction: level m uses symbol s_m.
template <Scalar S>
CorrectionField<S> mso_correction(const ScaleFunction<S>& f, const SymbolSequence& s) {
    detail::require_okamoto(f);
    for (std::size_t m = 1; m < f.levels(); ++m) {
        if (!s.symbols_equal(*f.actions()[m - 1].parameter(), s.at(m - 1))) {
            throw MisuseError("level " + std::to_string(m) + " was built with a = " + f.actions()[m - 1].parameter()->str() +
                              " but the sequence gives " + s.at(m - 1).str());
        }
    }
    return detail::okamoto_field(f, [&s](std::size_t m) { return s.at(m - 1); });
}

/// Scale sign of level m: +1 on T_{m-1}, -1 on T_m \ T_{m-1}.
struct ScaleSign {
    TimeScale domain;
    std::vector<int> values;
};

template <Scalar S>
ScaleSign scale_sign(const ScaleFunction<S>& f, std::size_t m) {
    if (m == 0 || m >= f.levels()) throw SizeError("scale sign needs 1 <= m <= depth");
    const auto& coarse = f.layer(m - 1).domain();
    const auto& fine = f.layer(m).domain();
    std::vector<int> vals;
    vals.reserve(fine.size());
    std::size_t k = 0;
    for (const Rational& t : fine.points()) {
        if (k < coarse.size() && coarse[k] == t) {
            vals.push_back(1);
            ++k;
        } else {
            vals.push_back(-1);
        }
    }
    return ScaleSign{fine, std::move(vals)};
}

namespace detail {

template <Scalar S>
void require_dyadic(const ScaleFunction<S>& f) {
    if (f.kind() != Refinement::dyadic) {
        throw UnsupportedRefinement("left/right corrections are defined for dyadic refinement only, got " + to_string(f.kind()));
    }
}

// (nabla - delta)/2 of a layer at interior index i.
template <Scalar S>
S half_difference(const DiscreteFunction<S>& g, std::size_t i) {
    return (nabla_at(g, i) - delta_at(g, i)) * from_rational<S>(Rational(1, 2));
}

}  // namespace detail

/// Right correction C_right at level m on T_m \ {b}: (nabla - delta)/2 taken
/// at sigma(t) for t in T_{m-1}, at t itself for new points. Then
/// delta F = delta F* + eps * C_right holds exactly.
template <Scalar S>
DiscreteFunction<S> correction_right(const ScaleFunction<S>& f, std::size_t m) {
    detail::require_dyadic(f);
    if (m == 0 || m >= f.levels()) throw SizeError("corrections need 1 <= m <= depth");
    const auto& g = f.layer(m);
    std::vector<S> vals;
    vals.reserve(g.size() - 1);
    for (std::size_t i = 0; i + 1 < g.size(); ++i) vals.push_back(detail::half_difference(g, i % 2 == 0 ? i + 1 : i));
    return DiscreteFunction<S>(g.domain().kappa_upper(), std::move(vals));
}

/// Left correction C_left at level m on T_m \ {a}: (delta - nabla)/2 taken
/// at rho(t) for t in T_{m-1}, at t itself for new points. With this sign
/// nabla F = nabla F* + eps * C_left holds exactly.
template <Scalar S>
DiscreteFunction<S> correction_left(const ScaleFunction<S>& f, std::size_t m) {
    detail::require_dyadic(f);
    if (m == 0 || m >= f.levels()) throw SizeError("corrections need 1 <= m <= depth");
    const auto& g = f.layer(m);
    std::vector<S> vals;
    vals.reserve(g.size() - 1);
    for (std::size_t i = 1; i < g.size(); ++i) vals.push_back(-detail::half_difference(g, i % 2 == 0 ? i - 1 : i));
    return DiscreteFunction<S>(g.domain().kappa_lower(), std::move(vals));
}

template <Scalar S>
CorrectionField<S> correction_field(const ScaleFunction<S>& f, CorrectionSide side) {
    if (side == CorrectionSide::okamoto) throw MisuseError("use okamoto_correction for the triadic correction");
    detail::require_dyadic(f);
    CorrectionField<S> out;
    out.side = side;
    out.first_level = 1;
    for (std::size_t m = 1; m < f.levels(); ++m) {
        out.layers.push_back(side == CorrectionSide::right ? correction_right(f, m) : correction_left(f, m));
        out.full_domains.push_back(f.layer(m).domain());
    }
    return out;
}

/// Max |lhs - rhs| per level of both scale-effect identities.
struct ScaleEffectResidual {
    std::vector<double> delta_residual;
    std::vector<double> nabla_residual;
    /// True when every residual is exactly zero (exact scalars only).
    bool exact_zero = true;

    [[nodiscard]] double max_residual() const {
        double r = 0.0;
        for (double v : delta_residual) r = std::max(r, v);
        for (double v : nabla_residual) r = std::max(r, v);
        return r;
    }
};

/// Checks delta F = delta F* + eps C_right and nabla F = nabla F* + eps C_left
/// at every level m >= 1.
template <Scalar S>
ScaleEffectResidual scale_effect_identity_check(const ScaleFunction<S>& f) {
    detail::require_dyadic(f);
    if (f.levels() < 3) throw SizeError("scale-effect identities need at least three levels");
    const auto ref = reference_function(f);
    ScaleEffectResidual out;
    for (std::size_t m = 1; m < f.levels(); ++m) {
        const auto& g = f.layer(m);
        const auto& gs = ref.layer(m);
        const auto eps = scale_sign(f, m);
        const auto cr = correction_right(f, m);
        const auto cl = correction_left(f, m);
        double rd = 0.0;
        double rn = 0.0;
        for (std::size_t i = 0; i + 1 < g.size(); ++i) {
            const S diff = delta_at(g, i) - (delta_at(gs, i) + from_rational<S>(Rational(eps.values[i])) * cr[i]);
            rd = std::max(rd, abs_value(diff));
            out.exact_zero = out.exact_zero && is_zero(diff);
        }
        for (std::size_t i = 1; i < g.size(); ++i) {
            const S diff = nabla_at(g, i) - (nabla_at(gs, i) + from_rational<S>(Rational(eps.values[i])) * cl[i - 1]);
            rn = std::max(rn, abs_value(diff));
            out.exact_zero = out.exact_zero && is_zero(diff);
        }
        out.delta_residual.push_back(rd);
        out.nabla_residual.push_back(rn);
    }
    return out;
}

/// Smooth scalar field f(t, x) with access to partial derivatives.
template <Scalar S>
struct Observable {
    std::string name;
    std::function<S(const S& t, const S& x)> value;
    std::function<S(const S& t, const S& x)> dt;
    /// j-th partial in x, j >= 1.
    std::function<S(unsigned j, const S& t, const S& x)> dx;
    /// Highest x-partial available; nullopt for all orders.
    std::optional<unsigned> max_order;

    [[nodiscard]] bool has_order(unsigned j) const { return !max_order || j <= *max_order; }
    [[nodiscard]] static constexpr bool complex_capable() { return ScalarTraits<S>::complex; }
};

/// f(t, x) = sum_k c_k x^k + tau t; every x-partial is available.
template <Scalar S>
Observable<S> polynomial_observable(std::vector<Rational> coeffs, const Rational& tau = Rational(0)) {
    auto c = std::make_shared<std::vector<S>>();
    for (const auto& q : coeffs) c->push_back(from_rational<S>(q));
    const S ts = from_rational<S>(tau);
    auto horner = [](const std::vector<S>& cc, const S& x) {
        S acc = from_rational<S>(Rational(0));
        for (std::size_t k = cc.size(); k-- > 0;) acc = acc * x + cc[k];
        return acc;
    };
    Observable<S> f;
    f.name = "polynomial";
    f.value = [c, ts, horner](const S& t, const S& x) { return horner(*c, x) + ts * t; };
    f.dt = [ts](const S&, const S&) { return ts; };
    f.dx = [c, horner](unsigned j, const S&, const S& x) {
        std::vector<S> d;
        for (std::size_t k = j; k < c->size(); ++k) {
            Rational falling(1);
            for (std::size_t r = 0; r < j; ++r) falling *= Rational(static_cast<long>(k - r));
            d.push_back(from_rational<S>(falling) * (*c)[k]);
        }
        return horner(d, x);
    };
    return f;
}

/// f(t, x) = sin(x) (floating scalars only).
template <Scalar S>
Observable<S> sine_observable() {
    static_assert(!ScalarTraits<S>::exact, "sine needs a floating scalar");
    Observable<S> f;
    f.name = "sin";
    f.value = [](const S&, const S& x) { return S(std::sin(x)); };
    f.dt = [](const S&, const S&) { return S(0.0); };
    f.dx = [](unsigned j, const S&, const S& x) {
        switch (j % 4) {
            case 0: return S(std::sin(x));
            case 1: return S(std::cos(x));
            case 2: return S(-std::sin(x));
            default: return S(-std::cos(x));
        }
    };
    return f;
}

/// Largest discrepancy between the analytic partials (dt, dx order 1 and 2)
/// and central differences of `value` at (t, x).
template <Scalar S>
double observable_self_check(const Observable<S>& f, const S& t, const S& x, double h = 1e-4) {
    static_assert(!ScalarTraits<S>::exact, "self check uses floating differences");
    const S hh(h);
    const S two(2.0);
    const S ft = (f.value(t + hh, x) - f.value(t - hh, x)) / (two * hh);
    const S fx = (f.value(t, x + hh) - f.value(t, x - hh)) / (two * hh);
    const S fxx = (f.value(t, x + hh) - two * f.value(t, x) + f.value(t, x - hh)) / (hh * hh);
    double worst = std::abs(ft - f.dt(t, x));
    if (f.has_order(1)) worst = std::max(worst, std::abs(fx - f.dx(1, t, x)));
    if (f.has_order(2)) worst = std::max(worst, std::abs(fxx - f.dx(2, t, x)) * h);
    return worst;
}

/// Both sides of a chain-rule identity at one level.
template <Scalar S>
struct ChainRuleLevel {
    std::size_t level = 0;
    DiscreteFunction<S> lhs;
    DiscreteFunction<S> rhs;
    double max_residual = 0.0;
    bool exact_zero = true;
};

namespace detail {

template <Scalar S>
std::vector<ChainRuleLevel<S>> chain_rule(const ScaleFunction<S>& x, const Observable<S>& f, unsigned truncation, bool forward) {
    require_dyadic(x);
    if (truncation < 1) throw ParameterError("chain-rule truncation J must be at least 1");
    if (!f.has_order(truncation)) throw ParameterError("observable lacks x-partials up to order " + std::to_string(truncation));
    const auto ref = reference_function(x);
    std::vector<ChainRuleLevel<S>> out;
    for (std::size_t m = 1; m < x.levels(); ++m) {
        const auto& xm = x.layer(m);
        const auto& xs = ref.layer(m);
        const auto& ts = xm.domain();
        const auto eps = scale_sign(x, m);
        const auto corr = forward ? correction_right(x, m) : correction_left(x, m);
        const S mu = from_rational<S>(ts[1] - ts[0]);

        std::vector<S> fx(ts.size());
        std::vector<S> fxs(ts.size());
        for (std::size_t i = 0; i < ts.size(); ++i) {
            const S t = from_rational<S>(ts[i]);
            fx[i] = f.value(t, xm[i]);
            fxs[i] = f.value(t, xs[i]);
        }
        const DiscreteFunction<S> comp(ts, std::move(fx));
        const DiscreteFunction<S> comp_ref(ts, std::move(fxs));

        std::vector<S> lhs;
        std::vector<S> rhs;
        const std::size_t begin = forward ? 0 : 1;
        const std::size_t end = forward ? ts.size() - 1 : ts.size();
        for (std::size_t i = begin; i < end; ++i) {
            const bool coarse = eps.values[i] == 1;
            // Selector: sigma (right) or rho (left) on T_{m-1}, identity on new points.
            const std::size_t sel = coarse ? (forward ? i + 1 : i - 1) : i;
            const S c = corr[forward ? i : i - 1];
            const S tsel = from_rational<S>(ts[sel]);
            S sum = from_rational<S>(Rational(0));
            S cpow = c;
            S mupow = from_rational<S>(Rational(1));
            for (unsigned j = 1; j <= truncation; ++j) {
                S term = mupow * cpow * from_rational<S>(Rational(1) / factorial(j)) * f.dx(j, tsel, xs[sel]);
                if (!forward && j % 2 == 0) term = -term;
                sum = sum + term;
                cpow = cpow * c;
                mupow = mupow * mu;
            }
            const S base = forward ? delta_at(comp_ref, i) : nabla_at(comp_ref, i);
            lhs.push_back(forward ? delta_at(comp, i) : nabla_at(comp, i));
            rhs.push_back(base + from_rational<S>(Rational(eps.values[i])) * sum);
        }
        const TimeScale dom = forward ? ts.kappa_upper() : ts.kappa_lower();
        ChainRuleLevel<S> lvl{m, DiscreteFunction<S>(dom, lhs), DiscreteFunction<S>(dom, rhs), 0.0, true};
        for (std::size_t k = 0; k < lhs.size(); ++k) {
            const S d = lhs[k] - rhs[k];
            lvl.max_residual = std::max(lvl.max_residual, abs_value(d));
            lvl.exact_zero = lvl.exact_zero && is_zero(d);
        }
        out.push_back(std::move(lvl));
    }
    return out;
}

}  // namespace detail

/// delta f(T, X) against delta f(T, X*) + eps sum_{j<=J} mu^{j-1}/j! C_right^j d^j f/dx^j
/// evaluated at the right-selected (t, X*(t)), per level m >= 1.
template <Scalar S>
std::vector<ChainRuleLevel<S>> chain_rule_delta(const ScaleFunction<S>& x, const Observable<S>& f, unsigned truncation) {
    return detail::chain_rule(x, f, truncation, true);
}

/// nabla version with the alternating factor (-1)^{j-1} and left selectors.
template <Scalar S>
std::vector<ChainRuleLevel<S>> chain_rule_nabla(const ScaleFunction<S>& x, const Observable<S>& f, unsigned truncation) {
    return detail::chain_rule(x, f, truncation, false);
}

enum class Trend { vanishing, converging, diverging, undefined };

std::string to_string(Trend t);

/// Geometric trend of the last four values: ratio r = v_{m+1}/v_m.
struct TrendReport {
    Trend trend = Trend::undefined;
    double ratio = 0.0;
    std::vector<double> values;
};

/// Classifies a level sequence. Zero tails are vanishing.
TrendReport classify_trend(const std::vector<double>& values);

struct DerivabilityReport {
    Rational t;
    std::size_t first_level = 0;
    TrendReport delta;
    TrendReport nabla;
    TrendReport correction;
    /// Set when delta and nabla settle on the same value and C vanishes.
    std::optional<double> derivative;
    std::string summary;
};

/// Tabulates delta, nabla and the Okamoto correction at t from the first
/// level containing t up to the deepest level.
template <Scalar S>
DerivabilityReport derivability_probe(const ScaleFunction<S>& f, const Rational& t) {
    detail::require_okamoto(f);
    std::optional<std::size_t> m0;
    for (std::size_t m = 0; m < f.levels() && !m0; ++m) {
        if (f.layer(m).domain().contains(t)) m0 = m;
    }
    if (!m0) throw DomainError(t.str() + " belongs to no level of the scale sequence");
    const auto corr = detail::okamoto_field(f, [&f](std::size_t m) { return *f.actions()[m - 1].parameter(); });

    std::vector<double> dv, nv, cv;
    for (std::size_t m = std::max<std::size_t>(*m0, 1); m < f.levels(); ++m) {
        const auto& g = f.layer(m);
        const std::size_t i = g.domain().index_of(t);
        if (i + 1 < g.size()) {
            dv.push_back(to_double(delta_at(g, i)));
            cv.push_back(to_double(corr.at_level(m)[i]));
        }
        if (i > 0) nv.push_back(to_double(nabla_at(g, i)));
    }
    DerivabilityReport rep;
    rep.t = t;
    rep.first_level = *m0;
    rep.delta = classify_trend(dv);
    rep.nabla = classify_trend(nv);
    rep.correction = classify_trend(cv);
    const bool settled = rep.delta.trend == Trend::converging && rep.nabla.trend == Trend::converging &&
                         rep.correction.trend == Trend::vanishing && !dv.empty() && !nv.empty();
    if (settled && std::fabs(dv.back() - nv.back()) <= 1e-9 * std::max(1.0, std::fabs(dv.back()))) rep.derivative = dv.back();
    rep.summary = "delta " + to_string(rep.delta.trend) + ", nabla " + to_string(rep.nabla.trend) + ", correction " +
                  to_string(rep.correction.trend);
    if (rep.derivative) rep.summary += ", derivative = " + format_decimal(*rep.derivative);
    return rep;
}

}  // namespace scalecalc
