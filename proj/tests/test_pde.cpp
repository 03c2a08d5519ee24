#include <cmath>
#include <random>

#include "doctest.h"
#include "scalecalc/constructions.hpp"
#include "scalecalc/pde.hpp"

using namespace scalecalc;

namespace {

std::function<Rational(const Rational&)> constant_force(const Rational& g) {
    return [g](const Rational&) { return g; };
}

Grid random_grid(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.1, 2.0);
    Grid g;
    g.tmin = u(rng);
    g.tmax = g.tmin + u(rng);
    g.nt = 7;
    g.xmin = -u(rng);
    g.xmax = u(rng);
    g.nx = 9;
    return g;
}

}  // namespace

TEST_CASE("scale Newton residual") {
    const auto line = sampled_scale_function<Rational>([](const Rational& t) { return Rational(3) * t - Rational(1); }, 6, Refinement::dyadic);
    const auto r0 = scale_newton_residual(line, constant_force(Rational(0)));
    CHECK(r0.first_level == 2);
    CHECK(r0.max_residual() == 0.0);

    const Rational g(9, 4);
    const auto fall = sampled_scale_function<Rational>([g](const Rational& t) { return g * t * t / Rational(2); }, 6, Refinement::triadic);
    const auto r = scale_newton_residual(fall, constant_force(g));
    CHECK(r.first_level == 1);
    for (const auto& layer : r.layers) {
        for (const auto& v : layer.values()) CHECK(v.is_zero());
    }
    for (const auto& layer : r.alt_layers) {
        for (const auto& v : layer.values()) CHECK(v.is_zero());
    }

    const auto rnd = scale_newton_residual(random_dyadic_scale_function(5, 4), constant_force(Rational(0)));
    CHECK(rnd.max_residual() > 0.0);

    const DiscreteFunction<Rational> three(TimeScale::uniform(Rational(0), Rational(1), 2), {Rational(0), Rational(1), Rational(0)});
    CHECK_THROWS_AS(newton_residual_layer(three, constant_force(Rational(0))), SizeError);
}

TEST_CASE("Newton residual is level-blind") {
    // The same layer evaluated alone or inside a scale function gives the same residual.
    const auto f = random_dyadic_scale_function(6, 12);
    const auto uprime = [](const Rational& x) { return x * x; };
    const auto r = scale_newton_residual(f, std::function<Rational(const Rational&)>(uprime));
    for (std::size_t m = r.first_level; m <= 6; ++m) CHECK(r.layers[m - r.first_level] == newton_residual_layer(f.layer(m), std::function<Rational(const Rational&)>(uprime)));
}

TEST_CASE("scale Euler-Lagrange residual") {
    const auto uprime = std::function<Rational(const Rational&)>([](const Rational& x) { return Rational(2) * x - Rational(1, 3); });
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto x = random_dyadic_scale_function(6, seed);
        const auto n = scale_newton_residual(x, uprime);
        const auto el = scale_euler_lagrange_residual(x, kinetic_plus_potential(uprime));
        REQUIRE(n.layers.size() == el.layers.size());
        for (std::size_t k = 0; k < n.layers.size(); ++k) CHECK(n.layers[k] == el.layers[k]);
    }

    const auto free = sampled_scale_function<Rational>([](const Rational& t) { return Rational(2) * t; }, 5, Refinement::dyadic);
    CHECK(scale_euler_lagrange_residual(free, kinetic_plus_potential(constant_force(Rational(0)))).max_residual() == 0.0);

    // L = v^2/2 - g x: the relation reads nabla delta X = -g.
    const Rational g(3);
    const auto fall = sampled_scale_function<Rational>([g](const Rational& t) { return -g * t * t / Rational(2); }, 5, Refinement::dyadic);
    const auto el = scale_euler_lagrange_residual(fall, kinetic_plus_potential(constant_force(g), Rational(-1)));
    CHECK(el.max_residual() == 0.0);
    CHECK_FALSE(el.degenerate);

    Lagrangian<Rational> position_only{"U", [](const Rational& x, const Rational&) { return x; }, {}, false};
    const auto deg = scale_euler_lagrange_residual(fall, position_only);
    CHECK(deg.degenerate);
    CHECK(deg.layers.back()[0] == -fall.layer(5)[1]);
}

TEST_CASE("linear scale equation") {
    for (long n : {4L, 8L, 16L}) {
        const Rational mu(1, n);
        const auto ts = TimeScale::uniform(Rational(0), Rational(1), static_cast<std::size_t>(n));
        const auto f = DiscreteFunction<Rational>::sample(ts, [&mu](const Rational& t) {
            return pow(Rational(1) + mu * mu, (t / mu).numerator().get_si());
        });
        const auto own = linear_scale_residual_layer(f, mu);
        for (const auto& v : own.values()) CHECK(v.is_zero());
        const auto other = linear_scale_residual_layer(f, mu / Rational(2));
        bool nonzero = false;
        for (const auto& v : other.values()) nonzero = nonzero || !v.is_zero();
        CHECK(nonzero);
    }
    const auto zero = sampled_scale_function<Rational>([](const Rational&) { return Rational(0); }, 4, Refinement::dyadic);
    const auto rz = linear_scale_equation_residual(zero);
    CHECK(rz.max_residual() == 0.0);
    CHECK(rz.mu.size() == 4);
    CHECK(rz.mu.front() == 0.5);

    const auto id = sampled_scale_function<Rational>([](const Rational& t) { return t; }, 4, Refinement::dyadic);
    const auto ri = linear_scale_equation_residual(id);
    CHECK(ri.layers[0].at(Rational(1, 2)) == Rational(3, 4));
    CHECK(ri.layers[1].at(Rational(1, 2)) == Rational(7, 8));
}

TEST_CASE("potentials and fields") {
    CHECK(potential_self_check(harmonic_potential(2.0), {-1.0, 0.0, 0.7}) <= 1e-6);
    CHECK(potential_self_check(zero_potential(), {1.0}) == 0.0);
    Potential wrong = harmonic_potential();
    wrong.uprime = [](double) { return 1.0; };
    CHECK(potential_self_check(wrong, {0.0}) > 0.5);

    CHECK(psi_self_check(heat_kernel(0.5), 0.4, 0.3) <= 1e-6);
    CHECK(psi_self_check(separable_exponential(0.5, 1.3), 0.4, 0.3) <= 1e-6);
    CHECK(psi_self_check(plane_wave(2.0, 3.0), 0.4, 0.3) <= 1e-6);
    CHECK(psi_self_check(harmonic_ground_state(0.8), 0.4, 0.3) <= 1e-6);
}

TEST_CASE("grid and parameters") {
    const auto g = Grid::parse("0.1:1:10,-2:2:21");
    CHECK(g.nt == 10);
    CHECK(g.x(0) == -2.0);
    CHECK(g.x(20) == 2.0);
    CHECK(g.t(9) == 1.0);
    CHECK_THROWS_AS(Grid::parse("0:1:10"), ParseError);
    CHECK_THROWS_AS(Grid::parse("0:1:0,0:1:3"), ParseError);
    CHECK_THROWS_AS(Grid::parse("1:0:3,0:1:3"), ParseError);

    auto p = ModelParameters::schrodinger(1.0);
    p.apply("gamma", "0.25");
    p.apply("eta", "i");
    p.apply("lambda2_im", "-2");
    CHECK(p.gamma == 0.25);
    CHECK(p.eta == Eta::plus_i);
    CHECK(p.lambda2 == Complex(0.0, -2.0));
    CHECK_THROWS_AS(p.apply("mass", "1"), ParseError);
    CHECK_THROWS_AS(p.apply("hbar", "-1"), ParameterError);
    CHECK_THROWS_AS(p.apply("gamma", "x"), ParseError);
    CHECK_THROWS_AS(ModelParameters::schrodinger(0.0), ParameterError);
}

TEST_CASE("diffusion residuals") {
    const Grid grid = Grid::parse("0.1:1:25,-3:3:41");
    for (double l2 : {0.5, 1.0, 2.0}) {
        const auto p = ModelParameters::diffusion(l2);
        CHECK(nonlinear_coefficient(p) == 0.0);
        const auto kernel = heat_kernel(l2 / 2.0);
        CHECK(diffusion_residual(kernel, p, zero_potential(), grid).max_abs <= 1e-10);
        CHECK(nonlinear_psi_residual(kernel, p, zero_potential(), grid).max_abs <= 1e-10);
        CHECK(diffusion_residual(separable_exponential(l2 / 2.0, 0.7), p, zero_potential(), grid).max_abs <= 1e-10);
    }
    auto generic = ModelParameters::diffusion(1.0);
    generic.gamma = 0.8;
    CHECK(nonlinear_psi_residual(heat_kernel(0.5), generic, zero_potential(), grid).max_abs > 1e-3);
    generic.gamma = 0.0;
    CHECK_THROWS_AS(nonlinear_psi_residual(heat_kernel(0.5), generic, zero_potential(), grid), ParameterError);
}

TEST_CASE("Schroedinger residuals") {
    const Grid grid = Grid::parse("0:2:21,-3:3:31");
    for (double hbar : {0.5, 1.0, 1.7}) {
        const auto p = ModelParameters::schrodinger(hbar);
        for (double k : {-1.0, 0.5, 2.0}) {
            CHECK(schrodinger_residual(plane_wave(k, hbar * k * k / 2.0), p, zero_potential(), grid).max_abs <= 1e-10);
        }
        CHECK(schrodinger_residual(harmonic_ground_state(hbar), p, harmonic_potential(), grid).max_abs <= 1e-8);
        CHECK(std::abs(box_nonlinear_coefficient(p)) == 0.0);
    }
    const auto p = ModelParameters::schrodinger(1.0);
    CHECK(schrodinger_residual(plane_wave(1.0, 1.0), p, zero_potential(), grid).max_abs > 0.1);
}

TEST_CASE("specialization identities on random grids") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(0.3, 2.0);
    for (int trial = 0; trial < 50; ++trial) {
        const Grid grid = random_grid(rng);
        const double l2 = u(rng);
        const auto pd = ModelParameters::diffusion(l2);
        const auto field = separable_exponential(u(rng), u(rng) - 1.0);
        const auto pot = harmonic_potential(u(rng));
        const auto a = nonlinear_psi_residual(field, pd, pot, grid);
        const auto b = diffusion_residual(field, pd, pot, grid);
        double scale = 1.0;
        for (const auto& s : b.samples) scale = std::max(scale, std::abs(field.psi(s.t, s.x)));
        CHECK(pointwise_difference(a, b) <= 1e-12 * scale);

        const double hbar = u(rng);
        const auto ps = ModelParameters::schrodinger(hbar);
        const auto wave = plane_wave(u(rng), u(rng));
        const auto box = box_nonlinear_residual(wave, ps, pot, grid);
        const auto sch = schrodinger_residual(wave, ps, pot, grid);
        CHECK(pointwise_difference(box, sch, -1.0) <= 1e-12 * std::max(1.0, sch.max_abs));
    }
}

TEST_CASE("drift consistency") {
    // X with slope -2 gamma k realizes the drift of exp(D k^2 t + k x).
    const double gamma = -0.5;
    const double k = 0.8;
    const auto x = sampled_scale_function<double>([&](const Rational& t) { return -2.0 * gamma * k * t.to_double(); }, 5, Refinement::dyadic);
    const auto d = drift_consistency_check(x, separable_exponential(0.5, k), gamma);
    for (const auto& lvl : d) CHECK(lvl.drift_deviation <= 1e-12);

    const auto ok = to_double(build_okamoto<Rational>(Rational(5, 6), 4));
    const auto bad = drift_consistency_check(ok, separable_exponential(0.5, k), gamma);
    CHECK(bad.back().drift_deviation > 1.0);

    std::vector<DiscreteFunction<double>> layers{DiscreteFunction<double>(TimeScale({Rational(0), Rational(1)}), {0.0, 0.0}),
                                                 DiscreteFunction<double>(TimeScale::uniform(Rational(0), Rational(1), 2), {0.0, 1.0, 0.0})};
    const ScaleFunction<double> zig(layers, Refinement::dyadic);
    const auto z = drift_consistency_check(zig, heat_kernel(0.5), gamma);
    REQUIRE(z.size() == 1);
    CHECK(z[0].symmetry_deviation == 0.0);

    auto negative = separable_exponential(0.5, k);
    negative.psi = [](double, double) { return Complex(-1.0); };
    CHECK_THROWS_AS(drift_consistency_check(zig, negative, gamma), ParameterError);
}
