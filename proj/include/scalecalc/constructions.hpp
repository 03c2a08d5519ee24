#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "scalecalc/qsqrt2.hpp"
#include "scalecalc/scale_function.hpp"

namespace scalecalc {

/// m such that x = 2^-m; ParameterError when x is not such a power.
inline long dyadic_exponent(const Rational& x) {
    if (x.numerator() != 1) throw ParameterError(x.str() + " is not a negative power of two");
    const mpz_class& den = x.denominator();
    const long m = static_cast<long>(mpz_sizeinbase(den.get_mpz_t(), 2)) - 1;
    if (den != mpz_class(1) << static_cast<mp_bitcnt_t>(m)) throw ParameterError(x.str() + " is not a negative power of two");
    return m;
}

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Deterministic draw in [-resolution, resolution] keyed by (seed, t); safe to
// call from parallel workers in any order.
inline long keyed_draw(std::uint64_t seed, const Rational& t, long resolution) {
    std::uint64_t h = splitmix64(seed);
    h = splitmix64(h ^ std::hash<std::string>{}(t.str()));
    return static_cast<long>(h % static_cast<std::uint64_t>(2 * resolution + 1)) - resolution;
}

}  // namespace detail

/// Dyadic scale function on [0, 1] whose new midpoint values are
/// independent uniform rationals k/`resolution` in [-1, 1].
inline ScaleFunction<Rational> random_dyadic_scale_function(std::size_t depth, std::uint64_t seed, long resolution = 1024,
                                                            std::size_t max_depth = kDefaultMaxDepth) {
    ElementaryAction<Rational> action("random-midpoint", {Rational(1, 2)},
                                      [seed, resolution](const Rational& t0, const Rational& t1, const Rational&, const Rational&) {
                                          const Rational mid = (t0 + t1) / Rational(2);
                                          return std::vector<Rational>{Rational(detail::keyed_draw(seed, mid, resolution), resolution)};
                                      });
    const DiscreteFunction<Rational> base(TimeScale({Rational(0), Rational(1)}),
                                          {Rational(detail::keyed_draw(seed, Rational(0), resolution), resolution),
                                           Rational(detail::keyed_draw(seed, Rational(1), resolution), resolution)});
    return build_from_actions(base, std::vector<ElementaryAction<Rational>>(depth, action), Refinement::dyadic, max_depth);
}

/// Dyadic function whose midpoint sits at chord + sign * c * mu_new, with
/// the sign alternating along the level. The half-difference (nabla - delta)/2
/// at every new point is then +-c.
template <Scalar S>
ScaleFunction<S> bounded_displacement_function(std::size_t depth, const Rational& c, const DiscreteFunction<S>& base,
                                               std::size_t max_depth = kDefaultMaxDepth) {
    auto action = midpoint_displacement_action<S>("bounded-displacement", [c](const Rational& t0, const Rational& t1) {
        const Rational len = t1 - t0;
        const Rational k = t0 / len;
        const bool odd = k.is_integer() && mpz_odd_p(k.numerator().get_mpz_t());
        const Rational d = c * len / Rational(2);
        return from_rational<S>(odd ? -d : d);
    });
    return build_from_actions(base, std::vector<ElementaryAction<S>>(depth, action), Refinement::dyadic, max_depth);
}

/// Binomial fluctuation on [0, 1] starting from 0 -> 0, 1 -> 0: each new
/// midpoint is displaced from the chord by +-lambda sqrt(mu_new), the sign
/// alternating with the index of the coarse interval. Values are exact in
/// Q(sqrt 2).
inline ScaleFunction<QSqrt2> binomial_fluctuation(std::size_t depth, const Rational& lambda, std::size_t max_depth = kDefaultMaxDepth) {
    auto action = midpoint_displacement_action<QSqrt2>("binomial", [lambda](const Rational& t0, const Rational& t1) {
        const Rational len = t1 - t0;
        const long m = dyadic_exponent(len / Rational(2));
        const Rational k = t0 / len;
        const bool odd = mpz_odd_p(k.numerator().get_mpz_t()) != 0;
        const QSqrt2 d = QSqrt2(lambda) * QSqrt2::sqrt_pow2(m);
        return odd ? -d : d;
    });
    const DiscreteFunction<QSqrt2> base(TimeScale({Rational(0), Rational(1)}), {QSqrt2(0), QSqrt2(0)});
    return build_from_actions(base, std::vector<ElementaryAction<QSqrt2>>(depth, action), Refinement::dyadic, max_depth);
}

/// Samples of g on the uniform dyadic (arity 2) or triadic (arity 3)
/// grids of [0, 1], levels 0..depth.
template <Scalar S, class Fn>
ScaleFunction<S> sampled_scale_function(Fn&& g, std::size_t depth, Refinement kind) {
    const unsigned r = arity(kind);
    if (r == 0) throw UnsupportedRefinement("sampling needs a triadic or dyadic refinement");
    std::vector<DiscreteFunction<S>> layers;
    std::size_t n = 1;
    for (std::size_t m = 0; m <= depth; ++m) {
        layers.push_back(DiscreteFunction<S>::sample(TimeScale::uniform(Rational(0), Rational(1), n), g));
        n *= r;
    }
    return ScaleFunction<S>(std::move(layers), kind);
}

/// Layer-wise conversion to double values.
template <Scalar S>
ScaleFunction<double> to_double(const ScaleFunction<S>& f) {
    std::vector<DiscreteFunction<double>> layers;
    layers.reserve(f.levels());
    for (const auto& l : f.layers()) layers.push_back(to_double(l));
    return ScaleFunction<double>(std::move(layers), f.kind());
}

}  // namespace scalecalc
