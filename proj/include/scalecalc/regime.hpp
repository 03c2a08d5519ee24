#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "scalecalc/errors.hpp"
#include "scalecalc/scale_dynamics.hpp"
#include "scalecalc/scale_function.hpp"

namespace scalecalc {

/// Levels m0 < m1 over which a regime is assessed.
struct ScaleRange {
    std::size_t m0 = 0;
    std::size_t m1 = 0;

    void validate(std::size_t levels) const {
        if (!(m0 < m1)) throw ParameterError("scale range needs m0 < m1");
        if (m1 >= levels) throw SizeError("scale range ends at level " + std::to_string(m1) + " but only " + std::to_string(levels) + " levels exist");
    }
    /// Parses `m0:m1`.
    static ScaleRange parse(const std::string& text);
};

/// Exponent recorded where delta X vanishes.
inline constexpr double kZeroDeltaSentinel = std::numeric_limits<double>::infinity();

/// ln(mu_m |delta X_m(t)|) / ln(mu_m) per level.
struct PointwiseRegime {
    Rational t;
    std::vector<std::size_t> levels;
    std::vector<double> mu;
    std::vector<double> abs_delta;
    std::vector<double> exponent;
    std::size_t zero_count = 0;
};

struct LocalRegime {
    std::vector<std::size_t> levels;
    /// Sup over admissible t; NaN when every point of the level is a zero.
    std::vector<double> exponent;
    /// A point attaining the sup.
    std::vector<Rational> argsup;
    std::size_t zero_count = 0;
};

struct GlobalRegime {
    double alpha = std::numeric_limits<double>::quiet_NaN();
    std::size_t level_of_sup = 0;
    /// `linear` or `power-law(alpha)`; `unresolved` when no level had data.
    std::string label = "unresolved";
};

struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
    double max_residual = 0.0;
    std::size_t used = 0;
    std::size_t zero_count = 0;
};

struct RegimeReport {
    ScaleRange range;
    std::vector<PointwiseRegime> pointwise;
    LocalRegime local;
    GlobalRegime global;
    std::vector<SlopeFit> fits;
};

namespace detail {

inline double log_graininess(const std::optional<Rational>& mu, std::size_t m) {
    if (!mu) throw ParameterError("level " + std::to_string(m) + " is not uniform; regimes need constant graininess");
    const double l = mu->log_abs();
    if (l == 0.0) throw ParameterError("level " + std::to_string(m) + " has graininess 1, where ln(mu) = 0");
    return l;
}

// ln(mu |delta|) / ln(mu) at index i, or the sentinel.
template <Scalar S>
double exponent_at(const DiscreteFunction<S>& g, std::size_t i, double ln_mu) {
    const S inc = g[i + 1] - g[i];
    if (is_zero(inc)) return kZeroDeltaSentinel;
    return ScalarTraits<S>::log_abs(inc) / ln_mu;
}

}  // namespace detail

template <Scalar S>
PointwiseRegime pointwise_regime(const ScaleFunction<S>& f, const Rational& t, const ScaleRange& range) {
    range.validate(f.levels());
    if (!f.layer(range.m0).domain().contains(t)) throw DomainError(t.str() + " is not a point of level " + std::to_string(range.m0));
    PointwiseRegime out;
    out.t = t;
    for (std::size_t m = range.m0; m <= range.m1; ++m) {
        const auto& g = f.layer(m);
        const auto mu = g.domain().uniform_graininess();
        const double ln_mu = detail::log_graininess(mu, m);
        const std::size_t i = g.domain().index_of(t);
        if (i + 1 >= g.size()) throw DomainError(t.str() + " is the right end point; delta is undefined there");
        const double e = detail::exponent_at(g, i, ln_mu);
        out.levels.push_back(m);
        out.mu.push_back(mu->to_double());
        out.abs_delta.push_back(abs_value(delta_at(g, i)));
        out.exponent.push_back(e);
        if (e == kZeroDeltaSentinel) ++out.zero_count;
    }
    return out;
}

template <Scalar S>
LocalRegime local_regime(const ScaleFunction<S>& f, const ScaleRange& range) {
    range.validate(f.levels());
    LocalRegime out;
    for (std::size_t m = range.m0; m <= range.m1; ++m) {
        const auto& g = f.layer(m);
        const double ln_mu = detail::log_graininess(g.domain().uniform_graininess(), m);
        double best = std::numeric_limits<double>::quiet_NaN();
        std::size_t arg = 0;
        for (std::size_t i = 0; i + 1 < g.size(); ++i) {
            const double e = detail::exponent_at(g, i, ln_mu);
            if (e == kZeroDeltaSentinel) {
                ++out.zero_count;
                continue;
            }
            if (std::isnan(best) || e > best) {
                best = e;
                arg = i;
            }
        }
        out.levels.push_back(m);
        out.exponent.push_back(best);
        out.argsup.push_back(g.domain()[arg]);
    }
    return out;
}

/// Sup of local exponents; `linear` when |alpha - 1| <= tol.
inline GlobalRegime global_from_local(const LocalRegime& local, double tol = 1e-6) {
    GlobalRegime out;
    for (std::size_t k = 0; k < local.levels.size(); ++k) {
        const double e = local.exponent[k];
        if (std::isnan(e)) continue;
        if (std::isnan(out.alpha) || e > out.alpha) {
            out.alpha = e;
            out.level_of_sup = local.levels[k];
        }
    }
    if (std::isnan(out.alpha)) return out;
    out.label = std::fabs(out.alpha - 1.0) <= tol ? "linear" : "power-law(" + format_decimal(out.alpha) + ")";
    return out;
}

template <Scalar S>
GlobalRegime global_regime(const ScaleFunction<S>& f, const ScaleRange& range, double tol = 1e-6) {
    return global_from_local(local_regime(f, range), tol);
}

/// Ordinary least squares y = slope x + intercept; residual is max |y - fit|.
SlopeFit slope_fit(const std::vector<double>& xs, const std::vector<double>& ys);

/// Fit of ln(mu_m |delta X_m(t)|) against ln(mu_m) over the range. Levels
/// with delta = 0 are skipped and counted.
template <Scalar S>
SlopeFit slope_fit(const ScaleFunction<S>& f, const Rational& t, const ScaleRange& range) {
    const auto pw = pointwise_regime(f, t, range);
    std::vector<double> xs, ys;
    for (std::size_t k = 0; k < pw.levels.size(); ++k) {
        if (pw.exponent[k] == kZeroDeltaSentinel) continue;
        const double lmu = std::log(pw.mu[k]);
        xs.push_back(lmu);
        ys.push_back(pw.exponent[k] * lmu);
    }
    if (xs.size() < 3) throw InsufficientData("slope fit needs at least 3 levels with nonzero delta, found " + std::to_string(xs.size()));
    SlopeFit fit = slope_fit(xs, ys);
    fit.zero_count = pw.zero_count;
    return fit;
}

/// Full report for the given probe points.
template <Scalar S>
RegimeReport regime_report(const ScaleFunction<S>& f, const std::vector<Rational>& points, const ScaleRange& range, double tol = 1e-6) {
    RegimeReport rep;
    rep.range = range;
    for (const auto& t : points) {
        rep.pointwise.push_back(pointwise_regime(f, t, range));
        try {
            rep.fits.push_back(slope_fit(f, t, range));
        } catch (const InsufficientData&) {
            rep.fits.push_back(SlopeFit{});
        }
    }
    rep.local = local_regime(f, range);
    rep.global = global_from_local(rep.local, tol);
    return rep;
}

/// X_ext = X*_ext + D_ext per level.
template <Scalar S>
struct Decomposition {
    ScaleFunction<S> extension;
    ReferenceScaleFunction<S> regular;
    std::vector<DiscreteFunction<S>> deviation;
    std::size_t m1 = 0;
};

/// Continues F beyond range.m1 up to `target_depth` with `continuation`, or
/// with the action that produced level m1 when none is given.
template <Scalar S>
Decomposition<S> extend(const ScaleFunction<S>& f, const ScaleRange& range, std::size_t target_depth,
                        const std::optional<ElementaryAction<S>>& continuation = std::nullopt,
                        std::size_t max_depth = kDefaultMaxDepth) {
    range.validate(f.levels());
    if (target_depth <= range.m1) throw ParameterError("extension target must lie beyond level " + std::to_string(range.m1));
    if (target_depth > max_depth) throw ParameterError("extension target exceeds the depth cap " + std::to_string(max_depth));
    std::optional<ElementaryAction<S>> action = continuation;
    if (!action) {
        if (!f.has_provenance()) throw MisuseError("no continuation action given and the scale function records none");
        action = f.actions()[range.m1 - 1];
    }
    const auto base = f.truncated(range.m1);
    std::vector<DiscreteFunction<S>> layers(base.layers().begin(), base.layers().end());
    for (std::size_t m = range.m1 + 1; m <= target_depth; ++m) layers.push_back(scale_action_apply(*action, layers.back()));
    std::vector<ElementaryAction<S>> actions;
    if (base.has_provenance()) {
        actions = base.actions();
        actions.insert(actions.end(), target_depth - range.m1, *action);
    }
    ScaleFunction<S> ext(std::move(layers), f.kind(), std::move(actions));
    auto reg = reference_function(ext);
    std::vector<DiscreteFunction<S>> dev;
    for (std::size_t m = 0; m < ext.levels(); ++m) dev.push_back(ext.layer(m) - reg.layer(m));
    return Decomposition<S>{std::move(ext), std::move(reg), std::move(dev), range.m1};
}

/// Decomposition of F as it stands (no extension): m1 is the depth.
template <Scalar S>
Decomposition<S> decompose(const ScaleFunction<S>& f) {
    auto reg = reference_function(f);
    std::vector<DiscreteFunction<S>> dev;
    for (std::size_t m = 0; m < f.levels(); ++m) dev.push_back(f.layer(m) - reg.layer(m));
    return Decomposition<S>{f, std::move(reg), std::move(dev), f.depth()};
}

/// floor(1/alpha) for 0 < alpha < 1; exact reciprocals 1/j give j.
unsigned j_alpha(double alpha);

enum class LambdaSide { plus, minus };

struct LambdaSummary {
    std::vector<double> level_means;
    double estimate = 0.0;
    /// Relative spread of the last three level means.
    double level_spread = 0.0;
    /// (max - min) of the field at the deepest level.
    double spatial_spread = 0.0;
    bool degenerate = false;
};

/// `exact_means`, when given, replaces the floating means of each level.
LambdaSummary summarize_lambda_levels(const std::vector<std::vector<double>>& level_values,
                                      const std::vector<double>& exact_means = {});

template <Scalar S>
struct LambdaEstimate {
    LambdaSide side = LambdaSide::plus;
    unsigned j_alpha = 1;
    /// mu_m^{j-1} C_m^j per level m >= 1.
    std::vector<DiscreteFunction<S>> fields;
    std::vector<double> level_means;
    /// Deepest-level spatial mean, an estimate of lambda^j.
    double estimate = 0.0;
    double level_spread = 0.0;
    double spatial_spread = 0.0;
    bool degenerate = false;

    [[nodiscard]] double diagnostic() const { return std::max(level_spread, spatial_spread); }
};

template <Scalar S>
LambdaEstimate<S> estimate_lambda(const Decomposition<S>& d, double alpha, LambdaSide side) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw ParameterError("lambda estimation needs 0 < alpha < 1");
    const auto& x = d.extension;
    if (x.kind() != Refinement::dyadic) throw UnsupportedRefinement("lambda estimation needs dyadic corrections");
    LambdaEstimate<S> out;
    out.side = side;
    out.j_alpha = j_alpha(alpha);
    std::vector<std::vector<double>> values;
    std::vector<double> means;
    for (std::size_t m = 1; m < x.levels(); ++m) {
        const auto c = side == LambdaSide::plus ? correction_right(x, m) : correction_left(x, m);
        const S mu = from_rational<S>(*x.layer(m).domain().uniform_graininess());
        S mupow = from_rational<S>(Rational(1));
        for (unsigned k = 1; k < out.j_alpha; ++k) mupow = mupow * mu;
        std::vector<S> field;
        std::vector<double> dv;
        S sum = from_rational<S>(Rational(0));
        for (std::size_t i = 0; i < c.size(); ++i) {
            S p = mupow;
            for (unsigned k = 0; k < out.j_alpha; ++k) p = p * c[i];
            dv.push_back(to_double(p));
            sum = sum + p;
            field.push_back(std::move(p));
        }
        // Exact scalars average without rounding.
        if constexpr (ScalarTraits<S>::exact) means.push_back(to_double(sum / from_rational<S>(Rational(static_cast<long>(c.size())))));
        out.fields.emplace_back(c.domain(), std::move(field));
        values.push_back(std::move(dv));
    }
    const auto s = summarize_lambda_levels(values, means);
    out.level_means = s.level_means;
    out.estimate = s.estimate;
    out.level_spread = s.level_spread;
    out.spatial_spread = s.spatial_spread;
    out.degenerate = s.degenerate;
    return out;
}

}  // namespace scalecalc
