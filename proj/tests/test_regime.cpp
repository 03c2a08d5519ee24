#include <cmath>

#include "doctest.h"
#include "scalecalc/constructions.hpp"
#include "scalecalc/regime.hpp"

using namespace scalecalc;

namespace {

const MultiscalePattern kMso{{Rational(2, 9), Rational(2, 3), Rational(5, 6)}, {4, 3, std::nullopt}};

double log3(double x) { return std::log(x) / std::log(3.0); }

}  // namespace

TEST_CASE("scale range") {
    const auto r = ScaleRange::parse("2:7");
    CHECK(r.m0 == 2);
    CHECK(r.m1 == 7);
    CHECK_THROWS_AS(ScaleRange::parse("27"), ParseError);
    CHECK_THROWS_AS(ScaleRange::parse("a:3"), ParseError);
    CHECK_THROWS_AS(ScaleRange::parse("1:3x"), ParseError);
    CHECK_THROWS_AS((ScaleRange{3, 3}.validate(10)), ParameterError);
    CHECK_THROWS_AS((ScaleRange{1, 10}.validate(10)), SizeError);
}

TEST_CASE("Okamoto pointwise exponent at 0") {
    for (const Rational a : {Rational(1, 4), Rational(1, 3), Rational(1, 2), Rational(2, 3), Rational(5, 6), Rational(2, 9)}) {
        const auto f = build_okamoto<Rational>(a, 10);
        const auto pw = pointwise_regime(f, Rational(0), ScaleRange{1, 10});
        const double expected = log3(1.0 / a.to_double());
        for (double e : pw.exponent) CHECK(std::fabs(e - expected) <= 1e-12);
        CHECK(pw.zero_count == 0);
    }
    const auto id = build_okamoto<Rational>(Rational(1, 3), 5);
    for (double e : pointwise_regime(id, Rational(1, 3), ScaleRange{1, 5}).exponent) CHECK(e == doctest::Approx(1.0).epsilon(1e-14));
    CHECK_THROWS_AS(pointwise_regime(id, Rational(1, 9), ScaleRange{1, 5}), DomainError);
    CHECK_THROWS_AS(pointwise_regime(id, Rational(1), ScaleRange{1, 5}), DomainError);
    CHECK_THROWS_AS(pointwise_regime(id, Rational(0), ScaleRange{0, 5}), ParameterError);
}

TEST_CASE("zero increments use the sentinel") {
    const auto f = build_okamoto<Rational>(Rational(1, 2), 6);
    const auto pw = pointwise_regime(f, Rational(1, 3), ScaleRange{1, 6});
    CHECK(pw.zero_count == 6);
    for (double e : pw.exponent) CHECK(e == kZeroDeltaSentinel);
    CHECK_THROWS_AS(slope_fit(f, Rational(1, 3), ScaleRange{1, 6}), InsufficientData);
    const auto local = local_regime(f, ScaleRange{1, 6});
    CHECK(local.zero_count > 0);
    for (double e : local.exponent) CHECK(std::isfinite(e));
}

TEST_CASE("local regime of a single-parameter function") {
    // For a <= 1/3 the outer factor a is the smallest slope factor, so the
    // sup over t is attained at 0.
    for (const Rational a : {Rational(1, 4), Rational(2, 9), Rational(1, 3)}) {
        const auto f = build_okamoto<Rational>(a, 6);
        const auto local = local_regime(f, ScaleRange{1, 6});
        for (std::size_t k = 0; k < local.levels.size(); ++k) {
            CHECK(local.exponent[k] == doctest::Approx(log3(1.0 / a.to_double())).epsilon(1e-12));
        }
    }
    // Otherwise the middle factor |1 - 2a| wins.
    const auto f = build_okamoto<Rational>(Rational(2, 5), 6);
    const auto local = local_regime(f, ScaleRange{1, 6});
    CHECK(local.exponent.back() == doctest::Approx(log3(5.0)).epsilon(1e-12));

    const auto lin = sampled_scale_function<Rational>([](const Rational& t) { return Rational(3) * t; }, 6, Refinement::dyadic);
    const auto g = global_regime(lin, ScaleRange{1, 6});
    CHECK(g.label == "power-law(" + format_decimal(g.alpha) + ")");
    const auto id = sampled_scale_function<Rational>([](const Rational& t) { return t; }, 6, Refinement::dyadic);
    CHECK(global_regime(id, ScaleRange{1, 6}).label == "linear");
}

TEST_CASE("multiscale regimes") {
    const auto f = build_okamoto<Rational>(kMso, 10);
    const ScaleRange all{1, 10};
    const auto g = global_regime(f, all);
    const double a1 = std::log(4.5) / std::log(3.0);
    CHECK(std::fabs(g.alpha - a1) <= 1e-12);
    CHECK(g.label.rfind("power-law(", 0) == 0);

    const auto b1 = slope_fit(f, Rational(0), ScaleRange{1, 4});
    const auto b2 = slope_fit(f, Rational(0), ScaleRange{4, 7});
    const auto b3 = slope_fit(f, Rational(0), ScaleRange{7, 10});
    CHECK(std::fabs(b1.slope - a1) <= 1e-10);
    CHECK(std::fabs(b2.slope - std::log(1.5) / std::log(3.0)) <= 1e-10);
    CHECK(std::fabs(b3.slope - std::log(1.2) / std::log(3.0)) <= 1e-10);
    CHECK(b1.max_residual <= 1e-12);

    const auto across = slope_fit(f, Rational(0), all);
    CHECK(across.max_residual > 0.1);

    const auto rep = regime_report(f, {Rational(0), Rational(1, 3)}, all);
    CHECK(rep.pointwise.size() == 2);
    CHECK(rep.fits.size() == 2);
    CHECK(rep.global.alpha == g.alpha);
}

TEST_CASE("global >= local >= pointwise") {
    const auto f = build_okamoto<Rational>(kMso, 7);
    const ScaleRange r{1, 7};
    const auto local = local_regime(f, r);
    const auto g = global_from_local(local);
    for (std::size_t k = 0; k < local.levels.size(); ++k) {
        CHECK(g.alpha >= local.exponent[k]);
        if (local.levels[k] == 7) continue;
        const auto& dom = f.layer(local.levels[k]).domain();
        const auto pw = pointwise_regime(f, local.argsup[k], ScaleRange{local.levels[k], 7});
        CHECK(pw.exponent[0] == local.exponent[k]);
        for (std::size_t i = 0; i + 1 < dom.size(); i += 7) {
            const auto p = pointwise_regime(f, dom[i], ScaleRange{local.levels[k], 7});
            if (p.exponent[0] != kZeroDeltaSentinel) CHECK(local.exponent[k] >= p.exponent[0]);
        }
    }
}

TEST_CASE("slope fit on exact data") {
    const std::vector<double> xs{-1.0, -2.0, -3.0, -4.0};
    const auto fit = slope_fit(xs, {-0.7, -1.4, -2.1, -2.8});
    CHECK(fit.slope == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(fit.max_residual <= 1e-13);
    CHECK_THROWS_AS(slope_fit({1.0, 2.0}, {1.0, 2.0}), InsufficientData);
    CHECK_THROWS_AS(slope_fit({1.0, 1.0, 1.0}, {1.0, 2.0, 3.0}), InsufficientData);

    // Constant delta scales like mu.
    const auto lin = sampled_scale_function<Rational>([](const Rational& t) { return Rational(5) * t; }, 8, Refinement::dyadic);
    CHECK(slope_fit(lin, Rational(0), ScaleRange{2, 8}).slope == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("extension and decomposition") {
    const auto f = build_okamoto<Rational>(Rational(2, 3), 4);
    const auto d = extend(f, ScaleRange{1, 4}, 7);
    const auto direct = build_okamoto<Rational>(Rational(2, 3), 7);
    for (std::size_t m = 0; m <= 7; ++m) {
        CHECK(d.extension.layer(m) == direct.layer(m));
        const auto& x = d.extension.layer(m);
        for (std::size_t i = 0; i < x.size(); ++i) REQUIRE(x[i] - d.regular.layer(m)[i] - d.deviation[m][i] == Rational(0));
    }

    // Continue the second block past its end.
    const auto mso = build_okamoto<Rational>(kMso, 7);
    const auto e = extend(mso, ScaleRange{1, 7}, 10);
    const auto fit = slope_fit(e.extension, Rational(0), ScaleRange{7, 10});
    CHECK(fit.slope == doctest::Approx(std::log(1.5) / std::log(3.0)).epsilon(1e-12));

    const auto lin = linear_reference_action<Rational>(3);
    const auto e2 = extend(mso, ScaleRange{1, 3}, 5, std::optional<ElementaryAction<Rational>>(lin));
    CHECK(e2.deviation[5].values()[1] == Rational(0));

    const auto bare = sampled_scale_function<Rational>([](const Rational& t) { return t; }, 3, Refinement::triadic);
    CHECK_THROWS_AS(extend(bare, ScaleRange{1, 3}, 5), MisuseError);
    CHECK_THROWS_AS(extend(f, ScaleRange{1, 4}, 4), ParameterError);
    CHECK_THROWS_AS(extend(f, ScaleRange{1, 4}, 13), ParameterError);

    const auto dd = decompose(random_dyadic_scale_function(5, 2));
    for (std::size_t m = 0; m <= 5; ++m) {
        const auto& x = dd.extension.layer(m);
        for (std::size_t i = 0; i < x.size(); ++i) REQUIRE(x[i] == dd.regular.layer(m)[i] + dd.deviation[m][i]);
    }
}

TEST_CASE("j alpha") {
    CHECK(j_alpha(0.5) == 2);
    CHECK(j_alpha(1.0 / 3.0) == 3);
    CHECK(j_alpha(0.4) == 2);
    CHECK(j_alpha(0.99) == 1);
    CHECK_THROWS_AS(j_alpha(1.0), ParameterError);
    CHECK_THROWS_AS(j_alpha(0.0), ParameterError);
}

TEST_CASE("lambda oracle: binomial fluctuation") {
    for (const Rational lambda : {Rational(1), Rational(3, 2), Rational(1, 5)}) {
        const auto f = binomial_fluctuation(12, lambda);
        const auto est = estimate_lambda(decompose(f), 0.5, LambdaSide::plus);
        CHECK(est.j_alpha == 2);
        for (const auto& field : est.fields) {
            for (const auto& v : field.values()) REQUIRE(v == QSqrt2(lambda * lambda));
        }
        CHECK(est.estimate == doctest::Approx((lambda * lambda).to_double()).epsilon(1e-14));
        CHECK(est.diagnostic() == 0.0);
        CHECK_FALSE(est.degenerate);

        const auto minus = estimate_lambda(decompose(f), 0.5, LambdaSide::minus);
        CHECK(minus.estimate == doctest::Approx((lambda * lambda).to_double()).epsilon(1e-14));
    }
}

TEST_CASE("lambda estimation edge cases") {
    const auto lin = sampled_scale_function<Rational>([](const Rational& t) { return t; }, 5, Refinement::dyadic);
    const auto est = estimate_lambda(decompose(lin), 0.5, LambdaSide::plus);
    CHECK(est.degenerate);
    CHECK(est.estimate == 0.0);
    CHECK_THROWS_AS(estimate_lambda(decompose(build_okamoto<Rational>(Rational(1, 2), 3)), 0.5, LambdaSide::plus), UnsupportedRefinement);
    CHECK_THROWS_AS(estimate_lambda(decompose(lin), 1.0, LambdaSide::plus), ParameterError);

    const auto first = estimate_lambda(decompose(binomial_fluctuation(6, Rational(1))), 0.9, LambdaSide::plus);
    CHECK(first.j_alpha == 1);
    CHECK(std::fabs(first.estimate) <= 1e-12);
}
