#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "scalecalc/errors.hpp"
#include "scalecalc/regime.hpp"
#include "scalecalc/scale_dynamics.hpp"

namespace scalecalc {

/// The four admissible values of eta.
enum class Eta { minus_one, plus_one, minus_i, plus_i };

std::complex<double> eta_value(Eta e);
bool eta_is_complex(Eta e);
Eta parse_eta(const std::string& text);
std::string to_string(Eta e);

/// Deepest-level samples of X* with one-sided derivative samples, the
/// regime order and the lambda coefficients.
struct AsymptoticContext {
    TimeScale grid;
    std::vector<double> xstar;
    std::vector<double> dplus;
    std::vector<double> dminus;
    /// 0 < alpha < 1 fractional; alpha = 1 classical (no correction terms).
    double alpha = 1.0;
    /// lambda_+^{j_alpha} and lambda_-^{j_alpha}.
    std::optional<double> lambda_plus;
    std::optional<double> lambda_minus;
    Eta eta = Eta::minus_one;

    AsymptoticContext(TimeScale grid, std::vector<double> xstar, std::vector<double> dplus, std::vector<double> dminus,
                      double alpha, std::optional<double> lambda_plus, std::optional<double> lambda_minus, Eta eta);

    [[nodiscard]] bool classical() const { return alpha == 1.0; }
    /// floor(1/alpha); 1 in classical mode.
    [[nodiscard]] unsigned order() const { return classical() ? 1U : j_alpha(alpha); }
    [[nodiscard]] std::size_t index(const Rational& t) const { return grid.index_of(t); }
};

/// Context from the regular part at the deepest level of a decomposition:
/// d+ and d- are forward and backward quotients of X* (d+ at b and d- at a
/// repeat their neighbours).
template <Scalar S>
AsymptoticContext context_from_decomposition(const Decomposition<S>& d, double alpha, std::optional<double> lambda_plus,
                                             std::optional<double> lambda_minus, Eta eta) {
    const auto& xs = d.regular.layer(d.regular.depth());
    const std::size_t n = xs.size();
    if (n < 3) throw SizeError("context needs at least three samples");
    std::vector<double> x(n), dp(n), dm(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = to_double(xs[i]);
    for (std::size_t i = 0; i + 1 < n; ++i) dp[i] = to_double(delta_at(xs, i));
    for (std::size_t i = 1; i < n; ++i) dm[i] = to_double(nabla_at(xs, i));
    dp[n - 1] = dp[n - 2];
    dm[0] = dm[1];
    return AsymptoticContext(xs.domain(), std::move(x), std::move(dp), std::move(dm), alpha, lambda_plus, lambda_minus, eta);
}

namespace detail {

template <Scalar S>
S correction_term(const AsymptoticContext& ctx, const Observable<S>& f, const S& t, const S& x, double lambda_j) {
    const unsigned j = ctx.order();
    if (!f.has_order(j)) throw ParameterError("observable '" + f.name + "' lacks the x-partial of order " + std::to_string(j));
    return S(lambda_j / to_double(factorial(j))) * f.dx(j, t, x);
}

template <Scalar S>
void require_first_order(const Observable<S>& f) {
    if (!f.dt || !f.dx || !f.has_order(1)) throw ParameterError("observable '" + f.name + "' lacks first-order partials");
}

}  // namespace detail

/// d+/dt f(t, X*) + (lambda_+^j / j!) d^j f/dx^j (t, X*).
template <Scalar S>
S delta_infinity(const AsymptoticContext& ctx, const Observable<S>& f, const Rational& t) {
    detail::require_first_order(f);
    const std::size_t i = ctx.index(t);
    const S ts(t.to_double());
    const S x(ctx.xstar[i]);
    S out = f.dt(ts, x) + f.dx(1, ts, x) * S(ctx.dplus[i]);
    if (!ctx.classical()) {
        if (!ctx.lambda_plus) throw ParameterError("lambda_+ is not set");
        out = out + detail::correction_term(ctx, f, ts, x, *ctx.lambda_plus);
    }
    return out;
}

/// d-/dt f(t, X*) - (lambda_-^j / j!) d^j f/dx^j (t, X*).
template <Scalar S>
S nabla_infinity(const AsymptoticContext& ctx, const Observable<S>& f, const Rational& t) {
    detail::require_first_order(f);
    const std::size_t i = ctx.index(t);
    const S ts(t.to_double());
    const S x(ctx.xstar[i]);
    S out = f.dt(ts, x) + f.dx(1, ts, x) * S(ctx.dminus[i]);
    if (!ctx.classical()) {
        if (!ctx.lambda_minus) throw ParameterError("lambda_- is not set");
        out = out - detail::correction_term(ctx, f, ts, x, *ctx.lambda_minus);
    }
    return out;
}

/// Box derivative evaluated two ways.
struct BoxResult {
    /// (1/2)(D+ + D-) + i(eta/2)(D+ - D-).
    std::complex<double> value;
    /// Drift combination plus (lambda_eff / j!) d^j f, lambda_eff = lambda_printed / 2.
    std::complex<double> closed_form;
    /// (lambda_+^j - lambda_-^j) + i eta (lambda_+^j + lambda_-^j).
    std::complex<double> lambda_printed;
    std::complex<double> lambda_effective;
};

std::complex<double> box_lambda_printed(double lambda_plus_j, double lambda_minus_j, Eta eta);

template <Scalar S>
BoxResult box_infinity(const AsymptoticContext& ctx, const Observable<S>& f, const Rational& t) {
    using C = std::complex<double>;
    if (eta_is_complex(ctx.eta) && !Observable<S>::complex_capable()) {
        throw MisuseError("eta = " + to_string(ctx.eta) + " needs a complex-capable observable");
    }
    const double lp = ctx.lambda_plus.value_or(0.0);
    if (!ctx.classical() && (!ctx.lambda_plus || !ctx.lambda_minus)) throw ParameterError("box derivative needs lambda_+ and lambda_-");
    const double lm = ctx.lambda_minus.value_or(0.0);
    const C eta = eta_value(ctx.eta);
    const C i1(0.0, 1.0);

    const C dp(delta_infinity(ctx, f, t));
    const C dm(nabla_infinity(ctx, f, t));
    BoxResult r;
    r.value = 0.5 * (dp + dm) + i1 * (eta / 2.0) * (dp - dm);

    const std::size_t k = ctx.index(t);
    const S ts(t.to_double());
    const S x(ctx.xstar[k]);
    const C drift = C(f.dt(ts, x)) + C(f.dx(1, ts, x)) * (0.5 * (ctx.dplus[k] + ctx.dminus[k]) + i1 * (eta / 2.0) * (ctx.dplus[k] - ctx.dminus[k]));
    r.lambda_printed = ctx.classical() ? C(0.0) : box_lambda_printed(lp, lm, ctx.eta);
    r.lambda_effective = r.lambda_printed / 2.0;
    r.closed_form = drift;
    if (!ctx.classical()) {
        const unsigned j = ctx.order();
        r.closed_form += r.lambda_effective / to_double(factorial(j)) * C(f.dx(j, ts, x));
    }
    return r;
}

/// Discrete scale-effect part beyond first order at coarse points of level m:
/// delta f(T, X) - delta f(T, X*) - d_x f(sigma t, X*(sigma t)) C_right(t),
/// next to the lambda correction (lambda^2 / 2) f_xx(t, X(t)) it should
/// approach (order 2 regimes).
struct ItoComparison {
    std::size_t level = 0;
    double mean_discrete = 0.0;
    double mean_target = 0.0;
    double max_abs_error = 0.0;

    [[nodiscard]] double relative_error() const {
        return mean_target == 0.0 ? std::abs(mean_discrete) : std::abs(mean_discrete - mean_target) / std::abs(mean_target);
    }
};

ItoComparison ito_comparison(const ScaleFunction<double>& x, const Observable<double>& f, std::size_t level, double lambda_sq);

}  // namespace scalecalc
