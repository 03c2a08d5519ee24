#include <CLI11.hpp>

#include <cmath>
#include <complex>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "scalecalc/asymptotic.hpp"
#include "scalecalc/constructions.hpp"
#include "scalecalc/parallel.hpp"
#include "scalecalc/pde.hpp"
#include "scalecalc/regime.hpp"
#include "scalecalc/scale_dynamics.hpp"
#include "scalecalc/serialization.hpp"
#include "scalecalc/symbolic.hpp"

namespace fs = std::filesystem;
using namespace scalecalc;

namespace {

constexpr int kUsageError = 2;
constexpr int kComputationError = 3;

struct BuildSpec {
    std::string kind = "okamoto";
    std::string a = "2/3";
    std::string n;
    std::size_t depth = 4;
    std::string lambda = "1";
    std::string c = "1";
    std::uint64_t seed = 0;
    std::size_t max_depth = kDefaultMaxDepth;
};

MultiscalePattern parse_pattern(const std::string& a, const std::string& n) {
    MultiscalePattern p;
    for (const auto& s : split_list(a)) p.params.push_back(Rational::parse(s));
    if (p.params.empty()) throw ParseError("--a needs at least one parameter");
    std::vector<std::string> counts = n.empty() ? std::vector<std::string>{} : split_list(n);
    for (const auto& s : counts) {
        if (s == "inf" || s == "tail") {
            p.counts.emplace_back(std::nullopt);
            continue;
        }
        try {
            std::size_t used = 0;
            const unsigned long v = std::stoul(s, &used);
            if (used != s.size()) throw std::invalid_argument(s);
            p.counts.emplace_back(static_cast<std::size_t>(v));
        } catch (const std::logic_error&) {
            throw ParseError("block count must be a positive integer or 'inf', got '" + s + "'");
        }
    }
    if (p.counts.size() + 1 == p.params.size()) p.counts.emplace_back(std::nullopt);
    if (p.counts.size() != p.params.size()) throw ParseError("--n needs one count per parameter, or one fewer for an infinite tail");
    p.validate();
    return p;
}

std::string blocks_of(const MultiscalePattern& p) {
    std::string out;
    for (std::size_t k = 0; k < p.counts.size(); ++k) {
        if (k) out += ',';
        out += p.counts[k] ? std::to_string(*p.counts[k]) : "tail";
    }
    return out;
}

Manifest manifest_of(const BuildSpec& b) {
    Manifest m;
    m.set("kind", b.kind);
    m.set("depth", std::to_string(b.depth));
    m.set("max_depth", std::to_string(b.max_depth));
    if (b.kind == "okamoto" || b.kind == "mso") {
        const auto p = b.kind == "okamoto" ? MultiscalePattern::constant(Rational::parse(b.a)) : parse_pattern(b.a, b.n);
        m.set("a", b.a);
        m.set("n", b.n);
        m.set("blocks", blocks_of(p));
    } else if (b.kind == "random") {
        m.set("seed", std::to_string(b.seed));
    } else if (b.kind == "binomial") {
        m.set("lambda", b.lambda);
    } else if (b.kind == "displacement") {
        m.set("c", b.c);
    }
    return m;
}

BuildSpec spec_from(const Manifest& m) {
    BuildSpec b;
    b.kind = m.get("kind");
    b.depth = std::stoul(m.get("depth"));
    b.max_depth = std::stoul(m.get_or("max_depth", std::to_string(kDefaultMaxDepth)));
    b.a = m.get_or("a", b.a);
    b.n = m.get_or("n", "");
    b.lambda = m.get_or("lambda", b.lambda);
    b.c = m.get_or("c", b.c);
    b.seed = std::stoull(m.get_or("seed", "0"));
    return b;
}

using AnyFunction = std::variant<ScaleFunction<Rational>, ScaleFunction<QSqrt2>, ScaleFunction<double>>;

AnyFunction construct(const BuildSpec& b) {
    if (b.kind == "okamoto") return build_okamoto<Rational>(Rational::parse(b.a), b.depth, b.max_depth);
    if (b.kind == "mso") return build_okamoto<Rational>(parse_pattern(b.a, b.n), b.depth, b.max_depth);
    if (b.kind == "random") return random_dyadic_scale_function(b.depth, b.seed, 1024, b.max_depth);
    if (b.kind == "binomial") return binomial_fluctuation(b.depth, Rational::parse(b.lambda), b.max_depth);
    if (b.kind == "displacement") {
        return bounded_displacement_function<Rational>(b.depth, Rational::parse(b.c), unit_identity<Rational>(), b.max_depth);
    }
    throw ParseError("unknown kind '" + b.kind + "' (okamoto, mso, random, binomial, displacement)");
}

struct Loaded {
    Manifest manifest;
    std::optional<BuildSpec> spec;
    AnyFunction f;
};

// Known kinds are rebuilt exactly; anything else is read back from the level CSVs.
Loaded load(const fs::path& stem) {
    const auto mpath = manifest_path(stem);
    if (!fs::exists(mpath)) throw ParseError("missing manifest " + mpath.string());
    Manifest m = Manifest::read(mpath);
    const std::string kind = m.get_or("kind", "");
    if (kind == "okamoto" || kind == "mso" || kind == "random" || kind == "binomial" || kind == "displacement") {
        BuildSpec b = spec_from(m);
        return Loaded{m, b, construct(b)};
    }
    const std::size_t levels = std::stoul(m.get("levels"));
    std::vector<DiscreteFunction<double>> layers;
    for (std::size_t i = 0; i < levels; ++i) {
        const auto p = level_csv_path(stem, i);
        if (!fs::exists(p)) throw ParseError("missing level file " + p.string());
        layers.push_back(read_csv(p));
    }
    const Refinement r = parse_refinement(m.get_or("refinement", "custom"));
    return Loaded{m, std::nullopt, ScaleFunction<double>(std::move(layers), r)};
}

std::ofstream open_out(const fs::path& p) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream os(p);
    if (!os) throw ParseError("cannot write " + p.string());
    return os;
}

std::size_t first_level_with(std::size_t levels, const auto& f, std::size_t points) {
    for (std::size_t m = 0; m < levels; ++m) {
        if (f.layer(m).size() >= points) return m;
    }
    throw SizeError("no level has " + std::to_string(points) + " points");
}

// ---------------------------------------------------------------------------
// build
// ---------------------------------------------------------------------------

struct BuildOptions {
    BuildSpec spec;
    std::string out;
    bool exact = false;
};

int run_build(BuildOptions& o, std::uint64_t seed) {
    if (o.spec.kind == "random" && o.spec.seed == 0) o.spec.seed = seed;
    const auto f = construct(o.spec);
    const Manifest m = manifest_of(o.spec);
    std::visit([&](const auto& g) { write_scale_function(o.out, g, m, o.exact); }, f);
    std::cout << "wrote " << o.spec.depth + 1 << " levels to " << o.out << ".L*.csv\n";
    return 0;
}

// ---------------------------------------------------------------------------
// analyze
// ---------------------------------------------------------------------------

struct AnalyzeOptions {
    std::string input;
    std::string op = "regime";
    std::string point = "0";
    std::string range;
    std::string side = "okamoto";
    double alpha = 0.5;
    std::string from = "0";
    std::size_t extend_to = 0;
    std::string out;
    bool exact = false;
};

template <Scalar S>
void write_correction(const CorrectionField<S>& c, const AnalyzeOptions& o, Manifest m, bool exact) {
    m.set("op", "correction");
    m.set("side", to_string(c.side));
    for (std::size_t lv = c.first_level; lv <= c.last_level(); ++lv) {
        const auto ex = c.excluded(lv);
        std::string list;
        for (std::size_t k = 0; k < ex.size(); ++k) list += (k ? "," : "") + ex[k].str();
        m.set("excluded.L" + std::to_string(lv), list);
        if (!ex.empty()) std::cout << "level " << lv << " excluded: " << list << '\n';
    }
    write_family(o.out, ScaleFamily<S>{c.first_level, c.layers}, m, exact);
}

template <Scalar S>
int analyze(const ScaleFunction<S>& f, const Loaded& in, const AnalyzeOptions& o) {
    const bool exact = o.exact && ScalarTraits<S>::exact;
    const auto need_out = [&] {
        if (o.out.empty()) throw ParseError("--op " + o.op + " needs --out");
    };
    Manifest m;
    m.set("source", o.input);
    m.set("refinement", to_string(f.kind()));

    if (o.op == "delta" || o.op == "nabla") {
        need_out();
        const std::size_t first = first_level_with(f.levels(), f, 3);
        m.set("op", o.op);
        write_family(o.out, o.op == "delta" ? scale_delta(f, first) : scale_nabla(f, first), m, exact);
        return 0;
    }
    if (o.op == "integral") {
        need_out();
        m.set("op", "integral");
        m.set("from", o.from);
        write_family(o.out, scale_antiderivative(f, Rational::parse(o.from)), m, exact);
        return 0;
    }
    if (o.op == "correction") {
        need_out();
        if (o.side == "okamoto") {
            if (!in.spec || (in.spec->kind != "okamoto" && in.spec->kind != "mso")) {
                throw MisuseError("okamoto corrections need an okamoto or mso input");
            }
            const auto seq = in.spec->kind == "okamoto" ? SymbolSequence::constant(Rational::parse(in.spec->a))
                                                        : expand_pattern(parse_pattern(in.spec->a, in.spec->n));
            write_correction(mso_correction(f, seq), o, m, exact);
        } else if (o.side == "left" || o.side == "right") {
            write_correction(correction_field(f, o.side == "left" ? CorrectionSide::left : CorrectionSide::right), o, m, exact);
        } else {
            throw ParseError("--side must be okamoto, left or right");
        }
        return 0;
    }
    if (o.op == "regime") {
        const ScaleRange range = o.range.empty() ? ScaleRange{1, f.depth()} : ScaleRange::parse(o.range);
        const Rational t = Rational::parse(o.point);
        const auto rep = regime_report(f, {t}, range);
        const auto& pw = rep.pointwise.front();
        std::ofstream file;
        if (!o.out.empty()) file = open_out(o.out);
        std::ostream& csv = o.out.empty() ? std::cout : file;
        csv << "m,mu,abs_delta,exponent\n";
        for (std::size_t k = 0; k < pw.levels.size(); ++k) {
            csv << pw.levels[k] << ',' << format_decimal(pw.mu[k]) << ',' << format_decimal(pw.abs_delta[k]) << ','
                << format_decimal(pw.exponent[k]) << '\n';
        }
        std::ostream& txt = o.out.empty() ? std::cerr : std::cout;
        txt << "point " << t.str() << ", levels " << range.m0 << ":" << range.m1 << '\n';
        txt << "zero increments: " << pw.zero_count << '\n';
        const auto& fit = rep.fits.front();
        if (fit.used > 0) txt << "slope fit: alpha=" << format_decimal(fit.slope) << " max_residual=" << format_decimal(fit.max_residual) << '\n';
        txt << "local exponents:";
        for (double e : rep.local.exponent) txt << ' ' << format_decimal(e);
        txt << '\n' << "global regime: " << rep.global.label << '\n';
        return 0;
    }
    if (o.op == "probe") {
        const auto rep = derivability_probe(f, Rational::parse(o.point));
        std::cout << "point " << rep.t.str() << " first level " << rep.first_level << '\n';
        std::cout << "delta ratio " << format_decimal(rep.delta.ratio) << '\n';
        std::cout << "nabla ratio " << format_decimal(rep.nabla.ratio) << '\n';
        std::cout << rep.summary << '\n';
        return 0;
    }
    if (o.op == "lambda") {
        const auto side = o.side == "minus" || o.side == "left" ? LambdaSide::minus : LambdaSide::plus;
        const auto d = o.extend_to > f.depth() ? extend(f, ScaleRange{1, f.depth()}, o.extend_to) : decompose(f);
        const auto est = estimate_lambda(d, o.alpha, side);
        std::cout << "j_alpha=" << est.j_alpha << '\n';
        std::cout << "estimate=" << format_decimal(est.estimate) << '\n';
        std::cout << "level_spread=" << format_decimal(est.level_spread) << '\n';
        std::cout << "spatial_spread=" << format_decimal(est.spatial_spread) << '\n';
        std::cout << "degenerate=" << (est.degenerate ? "yes" : "no") << '\n';
        if (!o.out.empty()) {
            auto os = open_out(o.out);
            os << "m,mean\n";
            for (std::size_t k = 0; k < est.level_means.size(); ++k) os << k + 1 << ',' << format_decimal(est.level_means[k]) << '\n';
        }
        return 0;
    }
    if (o.op == "identity") {
        const auto r = scale_effect_identity_check(f);
        std::cout << "max_residual=" << format_decimal(r.max_residual()) << '\n';
        std::cout << "exact_zero=" << (r.exact_zero && ScalarTraits<S>::exact ? "yes" : "no") << '\n';
        return 0;
    }
    throw ParseError("unknown --op '" + o.op + "'");
}

int run_analyze(const AnalyzeOptions& o) {
    const Loaded in = load(o.input);
    return std::visit([&](const auto& f) { return analyze(f, in, o); }, in.f);
}

// ---------------------------------------------------------------------------
// pde
// ---------------------------------------------------------------------------

struct PdeOptions {
    std::string equation = "diffusion";
    std::vector<std::string> params;
    std::string grid = "0.1:1:10,-2:2:21";
    std::string psi = "auto";
    std::string potential = "auto";
    double k = 1.0;
    std::optional<double> omega;
    std::optional<double> diffusivity;
    std::string input;
    std::string rhs = "0";
    std::string c = "1";
    std::string out;
};

std::map<std::string, std::string> parse_params(const std::vector<std::string>& raw) {
    std::map<std::string, std::string> out;
    for (const auto& item : raw) {
        for (const auto& kv : split_list(item)) {
            const auto eq = kv.find('=');
            if (eq == std::string::npos || eq == 0) throw ParseError("parameter must read key=value, got '" + kv + "'");
            out[kv.substr(0, eq)] = kv.substr(eq + 1);
        }
    }
    return out;
}

template <Scalar S>
double discrete_pde(const ScaleFunction<S>& f, const PdeOptions& o, std::ostream* csv) {
    LevelResidual<S> r;
    if (o.equation == "newton" || o.equation == "euler-lagrange") {
        const S g = from_rational<S>(Rational::parse(o.rhs));
        const std::function<S(const S&)> uprime = [g](const S&) { return g; };
        r = o.equation == "newton" ? scale_newton_residual(f, uprime)
                                   : scale_euler_lagrange_residual(f, kinetic_plus_potential<S>(uprime, Rational::parse(o.c)));
    } else {
        r = linear_scale_equation_residual(f);
    }
    if (csv) {
        *csv << "m,t,residual\n";
        for (std::size_t k = 0; k < r.layers.size(); ++k) {
            const auto& l = r.layers[k];
            for (std::size_t i = 0; i < l.size(); ++i) {
                *csv << r.first_level + k << ',' << format_decimal(l.domain()[i].to_double()) << ',' << format_decimal(to_double(l[i])) << '\n';
            }
        }
    }
    if (r.degenerate) std::cout << "degenerate: the scale function is identically zero\n";
    return r.max_residual();
}

double continuous_pde(const PdeOptions& o, std::ostream* csv) {
    auto kv = parse_params(o.params);
    ModelParameters p;
    if (o.equation == "schrodinger") {
        p = ModelParameters::schrodinger(kv.count("hbar") ? std::stod(kv["hbar"]) : 1.0);
    } else {
        p = ModelParameters::diffusion(kv.count("lambda_minus_sq") ? std::stod(kv["lambda_minus_sq"]) : 1.0);
    }
    for (const auto& [key, value] : kv) p.apply(key, value);

    std::string psi_name = o.psi;
    if (psi_name == "auto") psi_name = o.equation == "schrodinger" ? "plane-wave" : "heat-kernel";
    const double dif = o.diffusivity.value_or(p.lambda_minus_sq / 2.0);
    PsiField psi;
    if (psi_name == "heat-kernel") {
        psi = heat_kernel(dif);
    } else if (psi_name == "separable") {
        psi = separable_exponential(dif, o.k);
    } else if (psi_name == "plane-wave") {
        psi = plane_wave(o.k, o.omega.value_or(p.hbar * o.k * o.k / 2.0));
    } else if (psi_name == "harmonic") {
        psi = harmonic_ground_state(p.hbar);
    } else {
        throw ParseError("--psi must be auto, heat-kernel, separable, plane-wave or harmonic");
    }
    std::string pot = o.potential;
    if (pot == "auto") pot = psi_name == "harmonic" ? "harmonic" : "zero";
    Potential u;
    if (pot == "zero") {
        u = zero_potential();
    } else if (pot == "harmonic") {
        u = harmonic_potential(1.0);
    } else {
        throw ParseError("--potential must be auto, zero or harmonic");
    }

    const Grid grid = Grid::parse(o.grid);
    GridResidual r;
    if (o.equation == "nonlinear-psi") {
        r = nonlinear_psi_residual(psi, p, u, grid);
    } else if (o.equation == "diffusion") {
        r = diffusion_residual(psi, p, u, grid);
    } else {
        r = schrodinger_residual(psi, p, u, grid);
    }
    if (csv) {
        *csv << "t,x,re,im\n";
        for (const auto& s : r.samples) {
            *csv << format_decimal(s.t) << ',' << format_decimal(s.x) << ',' << format_decimal(s.residual.real()) << ','
                 << format_decimal(s.residual.imag()) << '\n';
        }
    }
    return r.max_abs;
}

int run_pde(const PdeOptions& o) {
    std::ofstream file;
    if (!o.out.empty()) file = open_out(o.out);
    std::ostream* csv = o.out.empty() ? nullptr : &file;
    double res = 0.0;
    if (o.equation == "newton" || o.equation == "euler-lagrange" || o.equation == "linear-scale") {
        if (o.input.empty()) throw ParseError("--equation " + o.equation + " needs --input");
        const Loaded in = load(o.input);
        res = std::visit([&](const auto& f) { return discrete_pde(f, o, csv); }, in.f);
    } else if (o.equation == "nonlinear-psi" || o.equation == "diffusion" || o.equation == "schrodinger") {
        res = continuous_pde(o, csv);
    } else {
        throw ParseError("unknown --equation '" + o.equation + "'");
    }
    std::cout << "max_residual=" << format_decimal(res) << '\n';
    return 0;
}

// ---------------------------------------------------------------------------
// asymptotic
// ---------------------------------------------------------------------------

struct AsymptoticOptions {
    std::string input;
    double alpha = 1.0;
    std::optional<double> lambda_plus;
    std::optional<double> lambda_minus;
    std::string eta = "-1";
    std::string observable = "x2";
    std::string out;
};

template <Scalar S>
Observable<S> make_observable(const std::string& name) {
    if (name == "x") return polynomial_observable<S>({Rational(0), Rational(1)});
    if (name == "x2") return polynomial_observable<S>({Rational(0), Rational(0), Rational(1)});
    if (name == "x3") return polynomial_observable<S>({Rational(0), Rational(0), Rational(0), Rational(1)});
    if (name == "sin") return sine_observable<S>();
    if (name.rfind("poly:", 0) == 0) {
        std::vector<Rational> c;
        for (const auto& s : split_list(name.substr(5))) c.push_back(Rational::parse(s));
        return polynomial_observable<S>(std::move(c));
    }
    throw ParseError("--observable must be x, x2, x3, sin or poly:c0,c1,...");
}

int run_asymptotic(const AsymptoticOptions& o) {
    const Loaded in = load(o.input);
    const auto f = std::visit([](const auto& g) { return to_double(g); }, in.f);
    const auto d = decompose(f);
    auto lp = o.lambda_plus;
    auto lm = o.lambda_minus;
    if (o.alpha < 1.0) {
        if (!lp) {
            lp = estimate_lambda(d, o.alpha, LambdaSide::plus).estimate;
            std::cout << "lambda_plus^j estimated as " << format_decimal(*lp) << '\n';
        }
        if (!lm) {
            lm = estimate_lambda(d, o.alpha, LambdaSide::minus).estimate;
            std::cout << "lambda_minus^j estimated as " << format_decimal(*lm) << '\n';
        }
    }
    const Eta eta = parse_eta(o.eta);
    const auto ctx = context_from_decomposition(d, o.alpha, lp, lm, eta);
    const auto real_obs = make_observable<double>(o.observable);
    const auto cplx_obs = make_observable<std::complex<double>>(o.observable);

    std::ofstream file;
    if (!o.out.empty()) file = open_out(o.out);
    std::ostream& csv = o.out.empty() ? std::cout : file;
    csv << "t,xstar,delta_inf,nabla_inf,box_re,box_im\n";
    double worst = 0.0;
    for (std::size_t i = 0; i < ctx.grid.size(); ++i) {
        const Rational& t = ctx.grid[i];
        const double dp = delta_infinity(ctx, real_obs, t);
        const double dm = nabla_infinity(ctx, real_obs, t);
        const BoxResult b = eta_is_complex(eta) ? box_infinity(ctx, cplx_obs, t) : box_infinity(ctx, real_obs, t);
        worst = std::max(worst, std::abs(b.value - b.closed_form));
        csv << format_decimal(t.to_double()) << ',' << format_decimal(ctx.xstar[i]) << ',' << format_decimal(dp) << ','
            << format_decimal(dm) << ',' << format_decimal(b.value.real()) << ',' << format_decimal(b.value.imag()) << '\n';
    }
    (o.out.empty() ? std::cerr : std::cout) << "box closed-form deviation " << format_decimal(worst) << '\n';
    return 0;
}

// ---------------------------------------------------------------------------
// symbolic
// ---------------------------------------------------------------------------

struct SymbolicOptions {
    std::string a;
    std::string n;
    std::string file;
    std::size_t horizon = 64;
    std::size_t shift_by = 0;
    std::string against_a;
    std::string against_n;
    std::string against_file;
    std::size_t truncation = 50;
    std::size_t show = 16;
};

SymbolSequence sequence_from(const std::string& a, const std::string& n, const std::string& file) {
    if (!file.empty()) return read_sequence_file(file);
    if (a.empty()) throw ParseError("give a pattern with --a/--n or a sequence --file");
    return expand_pattern(parse_pattern(a, n));
}

void print_symbols(const SymbolSequence& s, std::size_t count) {
    std::size_t n = count;
    if (const auto len = s.length()) n = std::min(n, *len);
    for (const auto& x : s.take(n)) std::cout << ' ' << x.str();
    std::cout << '\n';
}

int run_symbolic(const SymbolicOptions& o) {
    SymbolSequence s = sequence_from(o.a, o.n, o.file);
    if (o.shift_by > 0) s = shift(s, o.shift_by);
    std::cout << "symbols:";
    print_symbols(s, o.show);
    const auto rep = classify(s, o.horizon);
    std::cout << "class=" << rep.label() << '\n';
    if (!o.against_a.empty() || !o.against_file.empty()) {
        const auto other = sequence_from(o.against_a, o.against_n, o.against_file);
        const auto d = sequence_metric(s, other, o.truncation);
        std::cout << "metric=" << format_decimal(d.value) << " bound=" << format_decimal(d.bound) << '\n';
    }
    return 0;
}

// ---------------------------------------------------------------------------
// figures
// ---------------------------------------------------------------------------

int run_figures(const fs::path& dir, std::size_t depth) {
    fs::create_directories(dir);
    const std::vector<std::pair<std::string, Rational>> family{
        {"4/9", Rational(4, 9)}, {"1/2", Rational(1, 2)}, {"2/3", Rational(2, 3)}, {"5/6", Rational(5, 6)}};
    std::vector<ScaleFunction<Rational>> fs_;
    for (const auto& [name, a] : family) fs_.push_back(build_okamoto<Rational>(a, depth));
    {
        auto os = open_out(dir / "okamoto_family.csv");
        os << "t";
        for (const auto& [name, a] : family) os << ",a=" << name;
        os << '\n';
        const auto& ts = fs_.front().layer(depth).domain();
        for (std::size_t i = 0; i < ts.size(); ++i) {
            os << format_decimal(ts[i].to_double());
            for (const auto& f : fs_) os << ',' << format_decimal(f.layer(depth)[i].to_double());
            os << '\n';
        }
    }
    {
        const auto& f = fs_[2];
        auto os = open_out(dir / "scale_stack.csv");
        os << "m,t,value\n";
        for (std::size_t m = 0; m <= depth; ++m) {
            const auto& g = f.layer(m);
            for (std::size_t i = 0; i < g.size(); ++i) os << m << ',' << format_decimal(g.domain()[i].to_double()) << ',' << format_decimal(g[i].to_double()) << '\n';
        }
    }
    {
        MultiscalePattern p;
        p.params = {Rational(2, 9), Rational(2, 3), Rational(5, 6)};
        p.counts = {std::size_t{4}, std::size_t{3}, std::nullopt};
        const auto f = build_okamoto<Rational>(p, 10);
        const auto pw = pointwise_regime(f, Rational(0), ScaleRange{1, 10});
        auto os = open_out(dir / "pointwise_regime.csv");
        os << "m,mu,abs_delta,exponent\n";
        for (std::size_t k = 0; k < pw.levels.size(); ++k) {
            os << pw.levels[k] << ',' << format_decimal(pw.mu[k]) << ',' << format_decimal(pw.abs_delta[k]) << ','
               << format_decimal(pw.exponent[k]) << '\n';
        }
    }
    {
        const auto& f = fs_[1];
        const auto c = okamoto_correction(f, Rational(1, 2));
        auto os = open_out(dir / "correction_a1_2.csv");
        os << "m,t,correction\n";
        for (std::size_t m = c.first_level; m <= c.last_level(); ++m) {
            const auto& g = c.at_level(m);
            for (std::size_t i = 0; i < g.size(); ++i) os << m << ',' << format_decimal(g.domain()[i].to_double()) << ',' << format_decimal(g[i].to_double()) << '\n';
        }
    }
    std::cout << "wrote okamoto_family.csv, scale_stack.csv, pointwise_regime.csv, correction_a1_2.csv to " << dir.string() << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"scalecalc: scale calculus on nested time scales"};
    app.require_subcommand(1);
    unsigned threads = 1;
    std::uint64_t seed = 1;
    app.add_option("--threads", threads, "Worker threads for level-parallel loops");
    app.add_option("--seed", seed, "Seed for randomized constructions");

    BuildOptions bo;
    auto* build = app.add_subcommand("build", "Construct a scale function and write level CSVs plus a manifest");
    build->add_option("--kind", bo.spec.kind, "okamoto, mso, random, binomial or displacement")
        ->check(CLI::IsMember({"okamoto", "mso", "random", "binomial", "displacement"}));
    build->add_option("--a", bo.spec.a, "Parameter a, or a comma list a1,a2,... for mso");
    build->add_option("--n", bo.spec.n, "Block counts N1,N2,... (last block infinite when one short)");
    build->add_option("--depth", bo.spec.depth, "Number of refinement levels");
    build->add_option("--lambda", bo.spec.lambda, "Binomial amplitude");
    build->add_option("--c", bo.spec.c, "Displacement half-difference");
    build->add_option("--max-depth", bo.spec.max_depth, "Depth cap");
    build->add_option("--out", bo.out, "Output stem")->required();
    build->add_flag("--exact", bo.exact, "Write exact num,den,value CSVs");

    AnalyzeOptions ao;
    auto* analyze_cmd = app.add_subcommand("analyze", "Derivatives, corrections, regimes and lambda estimates of a stored scale function");
    analyze_cmd->add_option("--input", ao.input, "Input stem")->required();
    analyze_cmd->add_option("--op", ao.op, "delta, nabla, integral, correction, regime, probe, lambda or identity")
        ->check(CLI::IsMember({"delta", "nabla", "integral", "correction", "regime", "probe", "lambda", "identity"}));
    analyze_cmd->add_option("--point", ao.point, "Probe point (p/q or decimal)");
    analyze_cmd->add_option("--range", ao.range, "Scale range m0:m1");
    analyze_cmd->add_option("--side", ao.side, "Correction side (okamoto, left, right) or lambda side (plus, minus)");
    analyze_cmd->add_option("--alpha", ao.alpha, "Regime order for lambda estimation");
    analyze_cmd->add_option("--from", ao.from, "Antiderivative base point");
    analyze_cmd->add_option("--extend-to", ao.extend_to, "Continue the function to this depth before estimating lambda");
    analyze_cmd->add_option("--out", ao.out, "Output stem or CSV path");
    analyze_cmd->add_flag("--exact", ao.exact, "Exact CSVs when the values are exact");

    PdeOptions po;
    auto* pde = app.add_subcommand("pde", "Residuals of the scale and asymptotic equations");
    pde->add_option("--equation", po.equation, "newton, euler-lagrange, linear-scale, nonlinear-psi, diffusion or schrodinger")
        ->check(CLI::IsMember({"newton", "euler-lagrange", "linear-scale", "nonlinear-psi", "diffusion", "schrodinger"}));
    pde->add_option("--params", po.params, "Model parameters key=value (gamma, lambda_minus_sq, lambda_plus_sq, hbar, eta, lambda2_re, lambda2_im)");
    pde->add_option("--grid", po.grid, "tmin:tmax:nt,xmin:xmax:nx");
    pde->add_option("--psi", po.psi, "auto, heat-kernel, separable, plane-wave or harmonic");
    pde->add_option("--potential", po.potential, "auto, zero or harmonic");
    pde->add_option("--k", po.k, "Wave number");
    pde->add_option("--omega", po.omega, "Angular frequency (default hbar k^2 / 2)");
    pde->add_option("--diffusivity", po.diffusivity, "Heat kernel diffusivity (default lambda_minus_sq / 2)");
    pde->add_option("--input", po.input, "Scale function stem for the discrete equations");
    pde->add_option("--rhs", po.rhs, "Constant right-hand side g in the scale Newton equation");
    pde->add_option("--c", po.c, "Sign of the kinetic term in the Lagrangian");
    pde->add_option("--out", po.out, "Residual CSV");

    AsymptoticOptions so;
    auto* asym = app.add_subcommand("asymptotic", "Tabulate the asymptotic operators along the deepest grid");
    asym->add_option("--input", so.input, "Scale function stem")->required();
    asym->add_option("--alpha", so.alpha, "Regime order in (0, 1]");
    asym->add_option("--lambda-plus", so.lambda_plus, "lambda_+^j (estimated when omitted)");
    asym->add_option("--lambda-minus", so.lambda_minus, "lambda_-^j (estimated when omitted)");
    asym->add_option("--eta", so.eta, "-1, 1, -i or i");
    asym->add_option("--observable", so.observable, "x, x2, x3, sin or poly:c0,c1,...");
    asym->add_option("--out", so.out, "Output CSV");

    SymbolicOptions yo;
    auto* sym = app.add_subcommand("symbolic", "Classify and compare parameter sequences");
    sym->add_option("--a", yo.a, "Pattern parameters");
    sym->add_option("--n", yo.n, "Pattern block counts");
    sym->add_option("--file", yo.file, "Sequence file");
    sym->add_option("--horizon", yo.horizon, "Classification horizon");
    sym->add_option("--shift", yo.shift_by, "Drop this many leading symbols first");
    sym->add_option("--against-a", yo.against_a, "Second pattern for the metric");
    sym->add_option("--against-n", yo.against_n, "Second pattern block counts");
    sym->add_option("--against-file", yo.against_file, "Second sequence file");
    sym->add_option("--truncation", yo.truncation, "Metric truncation");
    sym->add_option("--show", yo.show, "Symbols to print");

    std::string fig_dir = "figures";
    std::size_t fig_depth = 6;
    auto* figs = app.add_subcommand("figures", "Write plot-ready CSV data");
    figs->add_option("--out", fig_dir, "Output directory");
    figs->add_option("--depth", fig_depth, "Depth of the Okamoto family and scale stack");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kUsageError;
    }

    try {
        set_worker_threads(threads);
        if (*build) return run_build(bo, seed);
        if (*analyze_cmd) return run_analyze(ao);
        if (*pde) return run_pde(po);
        if (*asym) return run_asymptotic(so);
        if (*sym) return run_symbolic(yo);
        if (*figs) return run_figures(fig_dir, fig_depth);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kComputationError;
    }
    return 0;
}
