#include <filesystem>

#include "doctest.h"
#include "oracles.hpp"
#include "scalecalc/constructions.hpp"
#include "scalecalc/scale_function.hpp"
#include "scalecalc/serialization.hpp"

using namespace scalecalc;

namespace {

std::uint64_t pow3(std::size_t m) {
    std::uint64_t p = 1;
    for (std::size_t i = 0; i < m; ++i) p *= 3;
    return p;
}

DiscreteFunction<Rational> e0() { return unit_identity<Rational>(); }

}  // namespace

TEST_CASE("elementary decomposition") {
    const auto parts = elem_decompose(TimeScale::uniform(Rational(0), Rational(1), 3));
    REQUIRE(parts.size() == 3);
    CHECK(parts[1] == TimeScale({Rational(1, 3), Rational(2, 3)}));
    CHECK(elem_decompose(TimeScale({Rational(0), Rational(1)})).size() == 1);
    CHECK(elem_decompose(TimeScale::uniform(Rational(0), Rational(1), 81)).size() == 81);
}

TEST_CASE("Okamoto elementary action") {
    for (const Rational a : {Rational(1, 4), Rational(1, 3), Rational(1, 2), Rational(5, 6)}) {
        const auto out = okamoto_action<Rational>(a).apply(e0());
        REQUIRE(out.size() == 4);
        CHECK(out[0] == Rational(0));
        CHECK(out[1] == a);
        CHECK(out[2] == Rational(1) - a);
        CHECK(out[3] == Rational(1));
        CHECK(out.domain() == TimeScale::uniform(Rational(0), Rational(1), 3));
    }
    const auto third = okamoto_action<Rational>(Rational(1, 3)).apply(e0());
    CHECK(third[1] == Rational(1, 3));
    CHECK(third[2] == Rational(2, 3));
    CHECK_THROWS_AS(okamoto_action<Rational>(Rational(0)), ParameterError);
    CHECK_THROWS_AS(okamoto_action<Rational>(Rational(1)), ParameterError);
    CHECK_THROWS_AS(okamoto_action<Rational>(Rational(3, 2)), ParameterError);
}

TEST_CASE("linear reference action") {
    const auto tri = linear_reference_action<Rational>(3).apply(e0());
    CHECK(tri[1] == Rational(1, 3));
    CHECK(tri[2] == Rational(2, 3));
    const DiscreteFunction<Rational> flat(TimeScale({Rational(0), Rational(1)}), {Rational(2), Rational(2)});
    const auto flat3 = linear_reference_action<Rational>(3).apply(flat);
    for (const auto& v : flat3.values()) CHECK(v == Rational(2));
    const DiscreteFunction<Rational> ramp(TimeScale({Rational(0), Rational(1)}), {Rational(0), Rational(3)});
    CHECK(linear_reference_action<Rational>(2).apply(ramp)[1] == Rational(3, 2));
}

TEST_CASE("scale action: two Okamoto steps give a^2 at 1/9") {
    const Rational a(2, 3);
    const auto act = okamoto_action<Rational>(a);
    const auto e2 = scale_action_apply(act, scale_action_apply(act, e0()));
    CHECK(e2.size() == 10);
    CHECK(e2.at(Rational(1, 9)) == a * a);
    // Restriction to the input domain reproduces the input.
    const auto e1 = scale_action_apply(act, e0());
    CHECK(e2.restrict_to(e1.domain()) == e1);
}

TEST_CASE("linear refinement has constant delta inside each original interval") {
    const DiscreteFunction<Rational> f(TimeScale({Rational(0), Rational(1, 2), Rational(1)}), {Rational(0), Rational(3), Rational(1)});
    const auto r = scale_action_apply(linear_reference_action<Rational>(3), f);
    const auto d = delta_derivative(r);
    for (std::size_t i = 0; i < 3; ++i) CHECK(d[i] == Rational(6));
    for (std::size_t i = 3; i < 6; ++i) CHECK(d[i] == Rational(-4));
}

TEST_CASE("a = 1/3 reproduces the identity") {
    const auto f = build_okamoto<Rational>(Rational(1, 3), 6);
    for (std::size_t m = 0; m <= 6; ++m) {
        const auto& g = f.layer(m);
        for (std::size_t i = 0; i < g.size(); ++i) REQUIRE(g[i] == g.domain()[i]);
    }
}

TEST_CASE("Okamoto build matches the digit oracle") {
    for (const Rational a : {Rational(1, 4), Rational(1, 2), Rational(5, 6)}) {
        const auto f = build_okamoto<Rational>(a, 6);
        for (std::size_t m = 1; m <= 6; ++m) {
            const auto expected = oracle::okamoto_level(std::vector<Rational>(m, a), m);
            const auto& g = f.layer(m);
            REQUIRE(g.size() == expected.size());
            for (std::size_t k = 0; k < g.size(); ++k) REQUIRE(g[k] == expected[k]);
        }
    }
}

TEST_CASE("multiscale block bookkeeping") {
    MultiscalePattern p{{Rational(2, 9), Rational(2, 3), Rational(5, 6)}, {4, 3, std::nullopt}};
    const auto f = build_okamoto<Rational>(p, 10);
    for (std::size_t j = 1; j <= 10; ++j) {
        const Rational expected = j <= 4 ? Rational(2, 9) : (j <= 7 ? Rational(2, 3) : Rational(5, 6));
        CHECK(*f.actions()[j - 1].parameter() == expected);
    }
    // Level 4 sits exactly on the first block boundary and stays in block 1.
    CHECK(p.block_for_level(4) == 0);
    CHECK(p.block_for_level(5) == 1);
    CHECK(p.block_for_level(7) == 1);
    CHECK(p.block_for_level(8) == 2);
    CHECK(p.block_for_level(1000) == 2);

    std::vector<Rational> params;
    for (std::size_t j = 1; j <= 10; ++j) params.push_back(p.param_for_level(j));
    const auto expected = oracle::okamoto_level(params, 7);
    for (std::size_t k = 0; k < expected.size(); ++k) REQUIRE(f.layer(7)[k] == expected[k]);
}

TEST_CASE("degenerate and exhausted patterns") {
    const auto single = build_okamoto<Rational>(MultiscalePattern::constant(Rational(2, 3)), 5);
    const auto direct = build_okamoto<Rational>(Rational(2, 3), 5);
    CHECK(single.layer(5) == direct.layer(5));

    const auto zero = build_okamoto<Rational>(Rational(2, 3), 0);
    CHECK(zero.levels() == 1);
    CHECK(zero.layer(0) == e0());

    MultiscalePattern finite{{Rational(1, 4), Rational(3, 4)}, {2, 1}};
    CHECK_NOTHROW(build_okamoto<Rational>(finite, 3));
    CHECK_THROWS_AS(build_okamoto<Rational>(finite, 4), PatternExhausted);

    MultiscalePattern bad{{Rational(1, 4), Rational(3, 4)}, {std::nullopt, 1}};
    CHECK_THROWS_AS(bad.validate(), ParameterError);
    MultiscalePattern zero_count{{Rational(1, 4)}, {0}};
    CHECK_THROWS_AS(zero_count.validate(), ParameterError);
}

TEST_CASE("depth cap") {
    CHECK_THROWS_AS(build_okamoto<Rational>(Rational(1, 2), 13), ParameterError);
    CHECK_NOTHROW(build_okamoto<Rational>(Rational(1, 2), 3, 3));
}

TEST_CASE("refinement cardinalities") {
    const auto f = build_okamoto<Rational>(Rational(2, 3), 7);
    for (std::size_t i = 0; i + 1 < f.levels(); ++i) CHECK(f.layer(i + 1).size() - 1 == 3 * (f.layer(i).size() - 1));
    const auto g = random_dyadic_scale_function(7, 1);
    for (std::size_t i = 0; i + 1 < g.levels(); ++i) CHECK(g.layer(i + 1).size() - 1 == 2 * (g.layer(i).size() - 1));
}

TEST_CASE("restriction compatibility is enforced") {
    const auto ts0 = TimeScale({Rational(0), Rational(1)});
    const auto ts1 = TimeScale({Rational(0), Rational(1, 2), Rational(1)});
    std::vector<DiscreteFunction<Rational>> good{DiscreteFunction<Rational>(ts0, {Rational(0), Rational(1)}),
                                                 DiscreteFunction<Rational>(ts1, {Rational(0), Rational(5), Rational(1)})};
    CHECK_NOTHROW(ScaleFunction<Rational>(good, Refinement::dyadic));
    std::vector<DiscreteFunction<Rational>> bad{DiscreteFunction<Rational>(ts0, {Rational(0), Rational(1)}),
                                                DiscreteFunction<Rational>(ts1, {Rational(0), Rational(5), Rational(2)})};
    CHECK_THROWS_AS(ScaleFunction<Rational>(bad, Refinement::dyadic), ParameterError);
    CHECK_THROWS_AS(ScaleFunction<Rational>(good, Refinement::triadic), ParameterError);

    // Floating values compare at 1e-14 relative.
    std::vector<DiscreteFunction<double>> near{DiscreteFunction<double>(ts0, {0.0, 1.0}),
                                               DiscreteFunction<double>(ts1, {0.0, 0.3, 1.0 + 1e-16})};
    CHECK_NOTHROW(ScaleFunction<double>(near, Refinement::dyadic));
}

TEST_CASE("scale delta and nabla") {
    const auto id = build_okamoto<Rational>(Rational(1, 3), 5);
    for (const auto& layer : scale_delta(id, 1).layers) {
        for (const auto& v : layer.values()) CHECK(v == Rational(1));
    }
    for (const auto& layer : scale_nabla(id, 1).layers) {
        for (const auto& v : layer.values()) CHECK(v == Rational(1));
    }
    for (const Rational a : {Rational(2, 3), Rational(5, 6), Rational(1, 4)}) {
        const auto f = build_okamoto<Rational>(a, 7);
        const auto d = scale_delta(f, 1);
        const auto n = scale_nabla(f, 1);
        for (std::size_t m = 1; m <= 7; ++m) {
            CHECK(d.at_level(m)[0] == pow(Rational(3) * a, static_cast<long>(m)));
            const auto& nl = n.at_level(m);
            CHECK(nl[nl.size() - 1] == pow(Rational(3) * a, static_cast<long>(m)));
        }
    }
    const auto flat = sampled_scale_function<Rational>([](const Rational&) { return Rational(4); }, 4, Refinement::dyadic);
    for (const auto& layer : scale_nabla(flat, 1).layers) {
        for (const auto& v : layer.values()) CHECK(v == Rational(0));
    }
}

TEST_CASE("a = 1/2: delta vanishes on left-reduced points from their entry level") {
    const std::size_t depth = 7;
    const auto f = build_okamoto<Rational>(Rational(1, 2), depth);
    const auto d = scale_delta(f, 1);
    for (const auto& [entry, k] : oracle::left_reduced_points(depth)) {
        const Rational t(static_cast<long>(k), static_cast<long>(pow3(entry)));
        for (std::size_t m = entry; m <= depth; ++m) {
            const auto& dl = d.at_level(m);
            REQUIRE(dl[dl.domain().index_of(t)] == Rational(0));
        }
    }
}

TEST_CASE("scale derivative of a multiscale function is not restriction compatible") {
    MultiscalePattern p{{Rational(1, 4), Rational(3, 4)}, {1, std::nullopt}};
    const auto f = build_okamoto<Rational>(p, 3);
    const auto d = scale_delta(f, 1);
    const auto& top = d.at_level(3);
    const auto& below = d.at_level(2);
    bool differs = false;
    for (std::size_t i = 0; i < below.size(); ++i) differs = differs || !(top.at(below.domain()[i]) == below[i]);
    CHECK(differs);
}

TEST_CASE("scale antiderivative") {
    const auto one = sampled_scale_function<Rational>([](const Rational&) { return Rational(1); }, 4, Refinement::triadic);
    const auto u = scale_antiderivative(one, Rational(0));
    for (const auto& layer : u.layers) {
        for (std::size_t i = 0; i < layer.size(); ++i) CHECK(layer[i] == layer.domain()[i]);
    }

    const auto f = build_okamoto<Rational>(Rational(2, 3), 6);
    const auto a = scale_antiderivative(f, Rational(0));
    for (std::size_t m = 0; m <= 6; ++m) {
        const auto& layer = f.layer(m);
        Rational naive(0);
        for (std::size_t i = 0; i + 1 < layer.size(); ++i) naive += layer[i] * (layer.domain()[i + 1] - layer.domain()[i]);
        const auto& am = a.at_level(m);
        CHECK(am[am.size() - 1] == naive);
        for (std::size_t i = 0; i + 1 < am.size(); ++i) CHECK(am[i] <= am[i + 1]);
        if (layer.size() >= 3) {
            const auto back = delta_derivative(am);
            for (std::size_t i = 0; i < back.size(); ++i) REQUIRE(back[i] == layer[i]);
        }
    }
    CHECK_THROWS_AS(scale_antiderivative(f, Rational(1, 3)), DomainError);
}

TEST_CASE("parallel construction matches sequential") {
    set_worker_threads(1);
    const auto seq = build_okamoto<Rational>(Rational(2, 3), 10);
    set_worker_threads(4);
    const auto par = build_okamoto<Rational>(Rational(2, 3), 10);
    set_worker_threads(1);
    CHECK(seq.layer(10) == par.layer(10));
}

TEST_CASE("serialization round trip") {
    const auto dir = std::filesystem::temp_directory_path() / "scalecalc_serial_test";
    std::filesystem::remove_all(dir);
    const auto stem = dir / "ok";
    const auto f = build_okamoto<Rational>(Rational(2, 3), 3);
    Manifest m;
    m.set("kind", "okamoto");
    m.set("a", "2/3");
    write_scale_function(stem, f, m, true);
    const auto back = Manifest::read(manifest_path(stem));
    CHECK(back.get("kind") == "okamoto");
    CHECK(back.get("levels") == "4");
    CHECK(back.get("refinement") == "triadic");
    const auto l3 = read_csv(level_csv_path(stem, 3));
    CHECK(l3.domain() == f.layer(3).domain());
    for (std::size_t i = 0; i < l3.size(); ++i) CHECK(l3[i] == doctest::Approx(f.layer(3)[i].to_double()));

    write_scale_function(dir / "plain", f, m, false);
    const auto p3 = read_csv(level_csv_path(dir / "plain", 3));
    CHECK(p3.size() == 28);
    CHECK_THROWS_AS(Manifest::read(dir / "missing.manifest"), ParseError);
    std::filesystem::remove_all(dir);
}
