#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "scalecalc/discrete_function.hpp"
#include "scalecalc/errors.hpp"
#include "scalecalc/parallel.hpp"
#include "scalecalc/scale_sequence.hpp"

namespace scalecalc {

/// Default cap on materialized depth (3^12 + 1 points at the deepest
/// triadic level).
inline constexpr std::size_t kDefaultMaxDepth = 12;

/// Decomposition of a time-scale into consecutive two-point time-scales.
std::vector<TimeScale> elem_decompose(const TimeScale& ts);

/// Operator refining a two-point discrete function {t0, t1} into a finer
/// discrete function that keeps both endpoint values.
///
/// Interior points sit at fixed fractions of [t0, t1]; the generator maps
/// (t0, t1, F(t0), F(t1)) to one value per interior point.
template <Scalar S>
class ElementaryAction {
public:
    using Generator = std::function<std::vector<S>(const Rational& t0, const Rational& t1, const S& f0, const S& f1)>;

    ElementaryAction(std::string name, std::vector<Rational> interior_fractions, Generator generator,
                     std::optional<Rational> parameter = std::nullopt)
        : name_(std::move(name)),
          fractions_(std::move(interior_fractions)),
          generator_(std::move(generator)),
          parameter_(std::move(parameter)) {
        for (std::size_t i = 0; i < fractions_.size(); ++i) {
            if (!(Rational(0) < fractions_[i]) || !(fractions_[i] < Rational(1)) ||
                (i > 0 && !(fractions_[i - 1] < fractions_[i]))) {
                throw ParameterError("interior fractions must be strictly increasing inside (0, 1)");
            }
        }
    }

    [[nodiscard]] const std::string& name() const { return name_; }
    [[nodiscard]] const std::optional<Rational>& parameter() const { return parameter_; }
    /// Number of sub-intervals produced per elementary interval.
    [[nodiscard]] std::size_t arity() const { return fractions_.size() + 1; }
    [[nodiscard]] const std::vector<Rational>& interior_fractions() const { return fractions_; }

    [[nodiscard]] std::vector<Rational> interior_points(const Rational& t0, const Rational& t1) const {
        const Rational len = t1 - t0;
        std::vector<Rational> out;
        out.reserve(fractions_.size());
        for (const Rational& f : fractions_) out.push_back(t0 + f * len);
        return out;
    }

    [[nodiscard]] std::vector<S> interior_values(const Rational& t0, const Rational& t1, const S& f0, const S& f1) const {
        auto v = generator_(t0, t1, f0, f1);
        if (v.size() != fractions_.size()) throw MisuseError("elementary action '" + name_ + "' produced the wrong number of values");
        return v;
    }

    /// The refined elementary time-scale {t0, interior..., t1}.
    [[nodiscard]] TimeScale refine(const Rational& t0, const Rational& t1) const {
        if (!(t0 < t1)) throw ParameterError("elementary time-scale needs t0 < t1");
        std::vector<Rational> pts{t0};
        for (auto& p : interior_points(t0, t1)) pts.push_back(std::move(p));
        pts.push_back(t1);
        return TimeScale(std::move(pts));
    }

    /// Action on a discrete function over a two-point time-scale.
    [[nodiscard]] DiscreteFunction<S> apply(const DiscreteFunction<S>& elementary) const {
        if (elementary.size() != 2) throw SizeError("elementary action applies to two-point functions only");
        const auto& ts = elementary.domain();
        std::vector<S> values{elementary[0]};
        for (auto& v : interior_values(ts[0], ts[1], elementary[0], elementary[1])) values.push_back(std::move(v));
        values.push_back(elementary[1]);
        return DiscreteFunction<S>(refine(ts[0], ts[1]), std::move(values));
    }

private:
    std::string name_;
    std::vector<Rational> fractions_;
    Generator generator_;
    std::optional<Rational> parameter_;
};

/// Okamoto's triadic action: interior values F(t0) + a dF and F(t0) + (1-a) dF.
template <Scalar S>
ElementaryAction<S> okamoto_action(const Rational& a) {
    if (!(Rational(0) < a) || !(a < Rational(1))) throw ParameterError("Okamoto parameter must lie in (0, 1), got " + a.str());
    const S as = from_rational<S>(a);
    const S bs = from_rational<S>(Rational(1) - a);
    return ElementaryAction<S>(
        "okamoto", {Rational(1, 3), Rational(2, 3)},
        [as, bs](const Rational&, const Rational&, const S& f0, const S& f1) {
            const S d = f1 - f0;
            return std::vector<S>{f0 + as * d, f0 + bs * d};
        },
        a);
}

/// Chord interpolation with `arity` equal sub-intervals (3 triadic, 2 dyadic).
template <Scalar S>
ElementaryAction<S> linear_reference_action(unsigned arity = 3) {
    if (arity < 2) throw ParameterError("linear reference action needs arity >= 2");
    std::vector<Rational> fractions;
    for (unsigned k = 1; k < arity; ++k) fractions.emplace_back(static_cast<long>(k), static_cast<long>(arity));
    return ElementaryAction<S>("linear", fractions, [arity](const Rational&, const Rational&, const S& f0, const S& f1) {
        std::vector<S> out;
        const S d = f1 - f0;
        for (unsigned k = 1; k < arity; ++k) out.push_back(f0 + from_rational<S>(Rational(static_cast<long>(k), static_cast<long>(arity))) * d);
        return out;
    });
}

/// Dyadic action placing the midpoint at chord + displacement(t0, t1).
template <Scalar S>
ElementaryAction<S> midpoint_displacement_action(std::string name,
                                                 std::function<S(const Rational& t0, const Rational& t1)> displacement) {
    return ElementaryAction<S>(std::move(name), {Rational(1, 2)},
                               [d = std::move(displacement)](const Rational& t0, const Rational& t1, const S& f0, const S& f1) {
                                   const S half = from_rational<S>(Rational(1, 2));
                                   return std::vector<S>{(f0 + f1) * half + d(t0, t1)};
                               });
}

/// Scale action: applies `action` on every elementary pair and stitches the
/// refined pieces. The result restricted to the input domain equals F.
template <Scalar S>
DiscreteFunction<S> scale_action_apply(const ElementaryAction<S>& action, const DiscreteFunction<S>& f) {
    const auto& ts = f.domain();
    const std::size_t pairs = ts.size() - 1;
    const std::size_t r = action.arity();
    const std::size_t n = pairs * r + 1;
    std::vector<Rational> pts(n);
    std::vector<S> vals(n);
    parallel_chunks(pairs, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const std::size_t base = i * r;
            pts[base] = ts[i];
            vals[base] = f[i];
            auto ip = action.interior_points(ts[i], ts[i + 1]);
            auto iv = action.interior_values(ts[i], ts[i + 1], f[i], f[i + 1]);
            for (std::size_t k = 0; k + 1 < r; ++k) {
                pts[base + 1 + k] = std::move(ip[k]);
                vals[base + 1 + k] = std::move(iv[k]);
            }
        }
    });
    pts[n - 1] = ts.b();
    vals[n - 1] = f[f.size() - 1];
    return DiscreteFunction<S>(TimeScale(std::move(pts)), std::move(vals));
}

/// A nested family of discrete functions, one per level, with layer i+1
/// restricting to layer i on T_i.
///
/// When built from elementary actions, `actions()[i]` is the action that
/// produced level i+1 from level i.
template <Scalar S>
class ScaleFunction {
public:
    ScaleFunction(std::vector<DiscreteFunction<S>> layers, Refinement kind,
                  std::vector<ElementaryAction<S>> actions = {})
        : seq_(domains_of(layers), kind), layers_(std::move(layers)), actions_(std::move(actions)) {
        if (!actions_.empty() && actions_.size() != layers_.size() - 1) {
            throw SizeError("provenance must record one action per refinement step");
        }
        if (const auto bad = first_incompatible_level(); bad) {
            throw ParameterError("layer " + std::to_string(*bad) + " does not restrict to layer " + std::to_string(*bad - 1));
        }
    }

    [[nodiscard]] const ScaleSequence& sequence() const { return seq_; }
    [[nodiscard]] Refinement kind() const { return seq_.kind(); }
    [[nodiscard]] std::size_t depth() const { return layers_.size() - 1; }
    [[nodiscard]] std::size_t levels() const { return layers_.size(); }
    [[nodiscard]] const DiscreteFunction<S>& layer(std::size_t i) const { return layers_.at(i); }
    [[nodiscard]] const std::vector<DiscreteFunction<S>>& layers() const { return layers_; }
    [[nodiscard]] const std::vector<ElementaryAction<S>>& actions() const { return actions_; }
    [[nodiscard]] bool has_provenance() const { return !actions_.empty(); }

    /// Levels 0..m.
    [[nodiscard]] ScaleFunction truncated(std::size_t m) const {
        if (m > depth()) throw SizeError("truncation level beyond depth");
        std::vector<DiscreteFunction<S>> ls(layers_.begin(), layers_.begin() + static_cast<std::ptrdiff_t>(m) + 1);
        std::vector<ElementaryAction<S>> as;
        if (!actions_.empty()) as.assign(actions_.begin(), actions_.begin() + static_cast<std::ptrdiff_t>(m));
        return ScaleFunction(std::move(ls), kind(), std::move(as));
    }

    /// Index of the first level violating restriction compatibility. Exact
    /// scalars compare exactly; floating scalars at 1e-14 relative.
    [[nodiscard]] std::optional<std::size_t> first_incompatible_level() const {
        for (std::size_t i = 1; i < layers_.size(); ++i) {
            const auto r = layers_[i].restrict_to(layers_[i - 1].domain());
            for (std::size_t k = 0; k < r.size(); ++k) {
                if (!values_match(r[k], layers_[i - 1][k])) return i;
            }
        }
        return std::nullopt;
    }

private:
    static std::vector<TimeScale> domains_of(const std::vector<DiscreteFunction<S>>& layers) {
        if (layers.empty()) throw SizeError("scale function needs at least one layer");
        std::vector<TimeScale> out;
        out.reserve(layers.size());
        for (const auto& l : layers) out.push_back(l.domain());
        return out;
    }

    static bool values_match(const S& x, const S& y) {
        if constexpr (ScalarTraits<S>::exact) {
            return x == y;
        } else {
            const double scale = std::max({1.0, abs_value(x), abs_value(y)});
            return abs_value(S(x - y)) <= 1e-14 * scale;
        }
    }

    ScaleSequence seq_;
    std::vector<DiscreteFunction<S>> layers_;
    std::vector<ElementaryAction<S>> actions_;
};

/// Scale-indexed family of discrete functions without any restriction
/// requirement (derivatives and antiderivatives of scale functions).
template <Scalar S>
struct ScaleFamily {
    std::size_t first_level = 0;
    std::vector<DiscreteFunction<S>> layers;

    [[nodiscard]] const DiscreteFunction<S>& at_level(std::size_t m) const {
        if (m < first_level || m - first_level >= layers.size()) throw SizeError("level " + std::to_string(m) + " not in family");
        return layers[m - first_level];
    }
    [[nodiscard]] std::size_t last_level() const { return first_level + layers.size() - 1; }
};

/// E_0: 0 -> 0, 1 -> 1 on {0, 1}.
template <Scalar S>
DiscreteFunction<S> unit_identity() {
    return DiscreteFunction<S>(TimeScale({Rational(0), Rational(1)}), {from_rational<S>(Rational(0)), from_rational<S>(Rational(1))});
}

/// Repeatedly applies the level's action to `base`, producing levels 0..depth.
template <Scalar S>
ScaleFunction<S> build_from_actions(const DiscreteFunction<S>& base, std::vector<ElementaryAction<S>> actions, Refinement kind,
                                    std::size_t max_depth = kDefaultMaxDepth) {
    if (actions.size() > max_depth) {
        throw ParameterError("depth " + std::to_string(actions.size()) + " exceeds the configured cap " + std::to_string(max_depth));
    }
    std::vector<DiscreteFunction<S>> layers{base};
    layers.reserve(actions.size() + 1);
    for (const auto& a : actions) layers.push_back(scale_action_apply(a, layers.back()));
    return ScaleFunction<S>(std::move(layers), kind, std::move(actions));
}

/// Multiscale function of order `depth`: level j is produced by the action
/// of the pattern block owning j (see MultiscalePattern::block_for_level).
template <Scalar S>
ScaleFunction<S> build_multiscale(const MultiscalePattern& pattern, std::size_t depth,
                                  const std::function<ElementaryAction<S>(const Rational&)>& action_family,
                                  Refinement kind = Refinement::triadic, const DiscreteFunction<S>& base = unit_identity<S>(),
                                  std::size_t max_depth = kDefaultMaxDepth) {
    pattern.validate();
    std::vector<ElementaryAction<S>> actions;
    actions.reserve(depth);
    for (std::size_t j = 1; j <= depth; ++j) actions.push_back(action_family(pattern.param_for_level(j)));
    return build_from_actions(base, std::move(actions), kind, max_depth);
}

/// Multiscale Okamoto function O_{a,N} of order `depth` on E_0.
template <Scalar S>
ScaleFunction<S> build_okamoto(const MultiscalePattern& pattern, std::size_t depth, std::size_t max_depth = kDefaultMaxDepth) {
    return build_multiscale<S>(pattern, depth, [](const Rational& a) { return okamoto_action<S>(a); }, Refinement::triadic,
                               unit_identity<S>(), max_depth);
}

template <Scalar S>
ScaleFunction<S> build_okamoto(const Rational& a, std::size_t depth, std::size_t max_depth = kDefaultMaxDepth) {
    return build_okamoto<S>(MultiscalePattern::constant(a), depth, max_depth);
}

/// Layer-wise Delta derivative on T_i^kappa for levels from_level..M. The
/// result need not satisfy restriction compatibility.
template <Scalar S>
ScaleFamily<S> scale_delta(const ScaleFunction<S>& f, std::size_t from_level = 0) {
    ScaleFamily<S> out{from_level, {}};
    for (std::size_t i = from_level; i < f.levels(); ++i) out.layers.push_back(delta_derivative(f.layer(i)));
    return out;
}

template <Scalar S>
ScaleFamily<S> scale_nabla(const ScaleFunction<S>& f, std::size_t from_level = 0) {
    ScaleFamily<S> out{from_level, {}};
    for (std::size_t i = from_level; i < f.levels(); ++i) out.layers.push_back(nabla_derivative(f.layer(i)));
    return out;
}

/// Layer-wise Cauchy antiderivative from t0 (t0 must belong to T_0).
template <Scalar S>
ScaleFamily<S> scale_antiderivative(const ScaleFunction<S>& f, const Rational& t0) {
    if (!f.layer(0).domain().contains(t0)) throw DomainError("antiderivative base point " + t0.str() + " is not in T_0");
    ScaleFamily<S> out{0, {}};
    for (const auto& layer : f.layers()) out.layers.push_back(delta_antiderivative(layer, t0));
    return out;
}

}  // namespace scalecalc
