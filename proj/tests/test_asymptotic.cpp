#include <cmath>
#include <random>

#include "doctest.h"
#include "scalecalc/asymptotic.hpp"
#include "scalecalc/constructions.hpp"

using namespace scalecalc;

namespace {

using C = std::complex<double>;

// Smooth X*(t) = sin(2t) + t^2 / 3 on a uniform grid of [0, 1] with exact
// one-sided derivative samples.
AsymptoticContext smooth_context(std::size_t n, double alpha, std::optional<double> lp, std::optional<double> lm, Eta eta) {
    const auto grid = TimeScale::uniform(Rational(0), Rational(1), n);
    std::vector<double> x, d;
    for (const auto& t : grid.points()) {
        const double s = t.to_double();
        x.push_back(std::sin(2 * s) + s * s / 3);
        d.push_back(2 * std::cos(2 * s) + 2 * s / 3);
    }
    return AsymptoticContext(grid, x, d, d, alpha, lp, lm, eta);
}

double xstar(double s) { return std::sin(2 * s) + s * s / 3; }

template <class F>
double central(F&& g, double s, double h = 1e-5) {
    return (g(s + h) - g(s - h)) / (2 * h);
}

AsymptoticContext random_context(std::mt19937_64& rng, Eta eta) {
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    const auto grid = TimeScale::uniform(Rational(0), Rational(1), 8);
    std::vector<double> x, dp, dm;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        x.push_back(u(rng));
        dp.push_back(u(rng));
        dm.push_back(u(rng));
    }
    const double lp = std::fabs(u(rng));
    const double lm = std::fabs(u(rng));
    return AsymptoticContext(grid, x, dp, dm, 0.5, lp, lm, eta);
}

}  // namespace

TEST_CASE("eta values") {
    for (auto e : {Eta::minus_one, Eta::plus_one, Eta::minus_i, Eta::plus_i}) CHECK(parse_eta(to_string(e)) == e);
    CHECK(eta_value(Eta::minus_i) == C(0, -1));
    CHECK(eta_is_complex(Eta::plus_i));
    CHECK_FALSE(eta_is_complex(Eta::minus_one));
    CHECK_THROWS_AS(parse_eta("2"), ParseError);
}

TEST_CASE("context validation") {
    const auto grid = TimeScale::uniform(Rational(0), Rational(1), 2);
    CHECK_THROWS_AS(AsymptoticContext(grid, {0, 0}, {0, 0, 0}, {0, 0, 0}, 0.5, 1.0, 1.0, Eta::minus_one), SizeError);
    CHECK_THROWS_AS(AsymptoticContext(grid, {0, 0, 0}, {0, 0, 0}, {0, 0, 0}, 1.5, 1.0, 1.0, Eta::minus_one), ParameterError);
    const AsymptoticContext ok(grid, {0, 0, 0}, {0, 0, 0}, {0, 0, 0}, 0.5, std::nullopt, std::nullopt, Eta::minus_one);
    const auto sq = polynomial_observable<double>({Rational(0), Rational(0), Rational(1)});
    CHECK(ok.order() == 2);
    CHECK_THROWS_AS(delta_infinity(ok, sq, Rational(0)), ParameterError);
    CHECK_THROWS_AS(box_infinity(ok, sq, Rational(0)), ParameterError);
}

TEST_CASE("delta and nabla infinity on x and x^2") {
    const auto ctx = smooth_context(16, 0.5, 0.3, 0.7, Eta::minus_one);
    const auto id = polynomial_observable<double>({Rational(0), Rational(1)});
    const auto sq = polynomial_observable<double>({Rational(0), Rational(0), Rational(1)});
    for (std::size_t i = 0; i < ctx.grid.size(); ++i) {
        const Rational& t = ctx.grid[i];
        CHECK(delta_infinity(ctx, id, t) == doctest::Approx(ctx.dplus[i]));
        CHECK(nabla_infinity(ctx, id, t) == doctest::Approx(ctx.dminus[i]));
        CHECK(delta_infinity(ctx, sq, t) == doctest::Approx(2 * ctx.xstar[i] * ctx.dplus[i] + 0.3).epsilon(1e-14));
        CHECK(nabla_infinity(ctx, sq, t) == doctest::Approx(2 * ctx.xstar[i] * ctx.dminus[i] - 0.7).epsilon(1e-14));
    }
    Observable<double> partial = sq;
    partial.max_order = 1;
    CHECK_THROWS_AS(delta_infinity(ctx, partial, Rational(0)), ParameterError);
}

TEST_CASE("classical degeneration against finite differences") {
    const auto f = polynomial_observable<double>({Rational(1), Rational(-1), Rational(1, 2), Rational(2)}, Rational(3));
    const auto g = [&f](double s) { return f.value(s, xstar(s)); };
    for (double alpha : {1.0, 0.5}) {
        const auto ctx = smooth_context(32, alpha, 0.0, 0.0, Eta::minus_one);
        for (std::size_t i = 1; i + 1 < ctx.grid.size(); ++i) {
            const Rational& t = ctx.grid[i];
            const double fd = central(g, t.to_double());
            CHECK(std::fabs(delta_infinity(ctx, f, t) - fd) <= 1e-6);
            CHECK(std::fabs(nabla_infinity(ctx, f, t) - fd) <= 1e-6);
            const auto box = box_infinity(ctx, f, t);
            CHECK(std::abs(box.value - C(fd)) <= 1e-6);
            CHECK(std::abs(box.closed_form - box.value) <= 1e-12);
        }
    }
}

TEST_CASE("context from a decomposition") {
    const auto x = sampled_scale_function<double>([](const Rational& t) { return xstar(t.to_double()); }, 10, Refinement::dyadic);
    const auto ctx = context_from_decomposition(decompose(x), 1.0, std::nullopt, std::nullopt, Eta::minus_one);
    CHECK(ctx.classical());
    const auto id = polynomial_observable<double>({Rational(0), Rational(1)});
    const double mu = std::ldexp(1.0, -10);
    for (std::size_t i = 2; i + 2 < ctx.grid.size(); i += 37) {
        const double s = ctx.grid[i].to_double();
        const double exact = 2 * std::cos(2 * s) + 2 * s / 3;
        CHECK(std::fabs(delta_infinity(ctx, id, ctx.grid[i]) - exact) <= 8 * mu);
        CHECK(std::fabs(nabla_infinity(ctx, id, ctx.grid[i]) - exact) <= 8 * mu);
    }
}

TEST_CASE("box path equivalence on random contexts") {
    std::mt19937_64 rng(17);
    const auto fr = polynomial_observable<double>({Rational(1, 2), Rational(2), Rational(-1), Rational(1, 3)}, Rational(1));
    const auto fc = polynomial_observable<C>({Rational(1, 2), Rational(2), Rational(-1), Rational(1, 3)}, Rational(1));
    for (int trial = 0; trial < 100; ++trial) {
        for (auto eta : {Eta::minus_one, Eta::plus_one}) {
            const auto ctx = random_context(rng, eta);
            const auto r = box_infinity(ctx, fr, ctx.grid[trial % 9]);
            CHECK(std::abs(r.value - r.closed_form) <= 1e-12 * std::max(1.0, std::abs(r.value)));
            CHECK(r.lambda_effective == r.lambda_printed / 2.0);
        }
        for (auto eta : {Eta::minus_i, Eta::plus_i}) {
            const auto ctx = random_context(rng, eta);
            const auto r = box_infinity(ctx, fc, ctx.grid[trial % 9]);
            CHECK(std::abs(r.value - r.closed_form) <= 1e-12 * std::max(1.0, std::abs(r.value)));
            CHECK_THROWS_AS(box_infinity(ctx, fr, ctx.grid[0]), MisuseError);
        }
    }
}

TEST_CASE("box examples") {
    const auto grid = TimeScale::uniform(Rational(0), Rational(1), 2);
    const AsymptoticContext anti(grid, {1, 2, 3}, {0.5, 1, 2}, {-0.5, -1, -2}, 0.5, 0.0, 0.0, Eta::minus_one);
    const auto id = polynomial_observable<double>({Rational(0), Rational(1)});
    const auto r = box_infinity(anti, id, Rational(1, 2));
    CHECK(r.value.real() == doctest::Approx(0.0));
    CHECK(r.value.imag() == doctest::Approx(-1.0));

    const double hbar = 0.7;
    const AsymptoticContext q(grid, {1, 2, 3}, {0, 0, 0}, {0, 0, 0}, 0.5, hbar * hbar, hbar * hbar, Eta::minus_one);
    const auto sq = polynomial_observable<double>({Rational(0), Rational(0), Rational(1)});
    const auto b = box_infinity(q, sq, Rational(0));
    CHECK(b.lambda_printed.real() == 0.0);
    CHECK(b.lambda_printed.imag() == doctest::Approx(-2 * hbar * hbar));
    CHECK(b.lambda_effective.imag() == doctest::Approx(-hbar * hbar));
    // f_xx = 2, so the correction is lambda_eff / 2! * 2 = lambda_eff.
    CHECK(std::abs(b.value - b.lambda_effective) <= 1e-14);
    CHECK(box_lambda_printed(1.0, 0.5, Eta::plus_one) == C(0.5, 1.5));
}

TEST_CASE("observable self check") {
    const auto s = sine_observable<double>();
    CHECK(observable_self_check(s, 0.3, 1.1) <= 1e-6);
    const auto p = polynomial_observable<double>({Rational(1), Rational(0), Rational(-3), Rational(1)}, Rational(2));
    CHECK(observable_self_check(p, 0.2, -0.4) <= 1e-6);
    auto bad = p;
    bad.dt = [](double, double) { return 0.0; };
    CHECK(observable_self_check(bad, 0.2, -0.4) > 1.0);
}

TEST_CASE("Ito consistency on the binomial fluctuation") {
    const auto x = to_double(binomial_fluctuation(14, Rational(1), 14));
    const auto f = polynomial_observable<double>({Rational(0), Rational(0), Rational(1), Rational(1)});
    const auto deep = ito_comparison(x, f, 14, 1.0);
    CHECK(deep.relative_error() <= 0.05);
    const auto shallow = ito_comparison(x, f, 4, 1.0);
    // Pointwise the gap shrinks like sqrt(mu): 2^-5 from level 4 to 14.
    CHECK(deep.max_abs_error < shallow.max_abs_error / 16);
    // For x^2 the term is exactly mu C^2 = lambda^2 at every coarse point.
    const auto sq = polynomial_observable<double>({Rational(0), Rational(0), Rational(1)});
    const auto e = ito_comparison(x, sq, 9, 1.0);
    CHECK(e.max_abs_error <= 1e-9);
    CHECK_THROWS_AS(ito_comparison(x, f, 0, 1.0), SizeError);
}
