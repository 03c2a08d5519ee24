#include "scalecalc/pde.hpp"

#include <cmath>
#include <numbers>

#include "scalecalc/serialization.hpp"

namespace scalecalc {

namespace {

void require_nonzero(Complex v, double t, double x) {
    if (v == Complex(0.0, 0.0)) {
        throw ParameterError("psi vanishes at (t, x) = (" + format_decimal(t) + ", " + format_decimal(x) + ")");
    }
}

template <class Fn>
GridResidual evaluate(const Grid& grid, Fn&& fn) {
    GridResidual out;
    out.samples.reserve(grid.nt * grid.nx);
    for (std::size_t a = 0; a < grid.nt; ++a) {
        for (std::size_t b = 0; b < grid.nx; ++b) {
            const double t = grid.t(a);
            const double x = grid.x(b);
            const Complex r = fn(t, x);
            out.samples.push_back({t, x, r});
            out.max_abs = std::max(out.max_abs, std::abs(r));
        }
    }
    return out;
}

double parse_double(const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::logic_error&) {
        throw ParseError("invalid number '" + s + "'");
    }
    if (used != s.size()) throw ParseError("invalid number '" + s + "'");
    return v;
}

std::size_t parse_count(const std::string& s) {
    std::size_t used = 0;
    unsigned long v = 0;
    try {
        v = std::stoul(s, &used);
    } catch (const std::logic_error&) {
        throw ParseError("invalid count '" + s + "'");
    }
    if (used != s.size() || v == 0) throw ParseError("invalid count '" + s + "'");
    return v;
}

}  // namespace

Potential zero_potential() {
    return {[](double) { return 0.0; }, [](double) { return 0.0; }};
}

Potential harmonic_potential(double k) {
    return {[k](double x) { return 0.5 * k * x * x; }, [k](double x) { return k * x; }};
}

double potential_self_check(const Potential& p, const std::vector<double>& xs, double h) {
    double worst = 0.0;
    for (double x : xs) {
        const double fd = (p.u(x + h) - p.u(x - h)) / (2.0 * h);
        worst = std::max(worst, std::fabs(fd - p.uprime(x)));
    }
    return worst;
}

PsiField heat_kernel(double diffusivity) {
    const double d = diffusivity;
    auto psi = [d](double t, double x) { return Complex(std::exp(-x * x / (4.0 * d * t)) / std::sqrt(4.0 * std::numbers::pi * d * t)); };
    PsiField f;
    f.name = "heat-kernel";
    f.real_valued = true;
    f.psi = psi;
    f.psi_t = [d, psi](double t, double x) { return psi(t, x) * (x * x / (4.0 * d * t * t) - 0.5 / t); };
    f.psi_x = [d, psi](double t, double x) { return psi(t, x) * (-x / (2.0 * d * t)); };
    f.psi_xx = [d, psi](double t, double x) { return psi(t, x) * (x * x / (4.0 * d * d * t * t) - 1.0 / (2.0 * d * t)); };
    return f;
}

PsiField separable_exponential(double diffusivity, double k) {
    const double rate = diffusivity * k * k;
    auto psi = [rate, k](double t, double x) { return Complex(std::exp(rate * t + k * x)); };
    PsiField f;
    f.name = "separable-exponential";
    f.real_valued = true;
    f.psi = psi;
    f.psi_t = [rate, psi](double t, double x) { return rate * psi(t, x); };
    f.psi_x = [k, psi](double t, double x) { return k * psi(t, x); };
    f.psi_xx = [k, psi](double t, double x) { return k * k * psi(t, x); };
    return f;
}

PsiField plane_wave(double k, double omega) {
    const Complex i1(0.0, 1.0);
    auto psi = [=](double t, double x) { return std::exp(i1 * (k * x - omega * t)); };
    PsiField f;
    f.name = "plane-wave";
    f.psi = psi;
    f.psi_t = [=](double t, double x) { return -i1 * omega * psi(t, x); };
    f.psi_x = [=](double t, double x) { return i1 * k * psi(t, x); };
    f.psi_xx = [=](double t, double x) { return -k * k * psi(t, x); };
    return f;
}

PsiField harmonic_ground_state(double hbar) {
    const Complex i1(0.0, 1.0);
    auto psi = [=](double t, double x) { return std::exp(-x * x / (2.0 * hbar)) * std::exp(-i1 * t / 2.0); };
    PsiField f;
    f.name = "harmonic-ground-state";
    f.psi = psi;
    f.psi_t = [=](double t, double x) { return -0.5 * i1 * psi(t, x); };
    f.psi_x = [=](double t, double x) { return (-x / hbar) * psi(t, x); };
    f.psi_xx = [=](double t, double x) { return (x * x / (hbar * hbar) - 1.0 / hbar) * psi(t, x); };
    return f;
}

PsiField finite_difference_field(std::string name, std::function<Complex(double, double)> psi, double h) {
    PsiField f;
    f.name = std::move(name);
    f.psi = psi;
    f.psi_t = [psi, h](double t, double x) {
        return (-psi(t + 2 * h, x) + 8.0 * psi(t + h, x) - 8.0 * psi(t - h, x) + psi(t - 2 * h, x)) / (12.0 * h);
    };
    f.psi_x = [psi, h](double t, double x) {
        return (-psi(t, x + 2 * h) + 8.0 * psi(t, x + h) - 8.0 * psi(t, x - h) + psi(t, x - 2 * h)) / (12.0 * h);
    };
    f.psi_xx = [psi, h](double t, double x) {
        return (-psi(t, x + 2 * h) + 16.0 * psi(t, x + h) - 30.0 * psi(t, x) + 16.0 * psi(t, x - h) - psi(t, x - 2 * h)) / (12.0 * h * h);
    };
    return f;
}

double psi_self_check(const PsiField& f, double t, double x, double h) {
    const auto fd = finite_difference_field("probe", f.psi, h);
    double worst = std::abs(fd.psi_t(t, x) - f.psi_t(t, x));
    worst = std::max(worst, std::abs(fd.psi_x(t, x) - f.psi_x(t, x)));
    worst = std::max(worst, std::abs(fd.psi_xx(t, x) - f.psi_xx(t, x)));
    return worst;
}

ModelParameters ModelParameters::diffusion(double lambda_minus_sq) {
    ModelParameters p;
    p.lambda_minus_sq = lambda_minus_sq;
    p.lambda_plus_sq = lambda_minus_sq;
    p.gamma = -lambda_minus_sq / 2.0;
    p.eta = Eta::minus_one;
    return p;
}

ModelParameters ModelParameters::schrodinger(double hbar) {
    if (!(hbar > 0.0)) throw ParameterError("hbar must be positive");
    ModelParameters p;
    p.hbar = hbar;
    p.gamma = hbar / 2.0;
    p.lambda_minus_sq = hbar * hbar;
    p.lambda_plus_sq = hbar * hbar;
    p.eta = Eta::minus_one;
    p.lambda2 = Complex(0.0, -hbar);
    return p;
}

void ModelParameters::apply(const std::string& key, const std::string& value) {
    if (key == "gamma") {
        gamma = parse_double(value);
    } else if (key == "lambda_minus_sq") {
        lambda_minus_sq = parse_double(value);
    } else if (key == "lambda_plus_sq") {
        lambda_plus_sq = parse_double(value);
    } else if (key == "hbar") {
        hbar = parse_double(value);
        if (!(hbar > 0.0)) throw ParameterError("hbar must be positive");
    } else if (key == "eta") {
        eta = parse_eta(value);
    } else if (key == "lambda2_re") {
        lambda2.real(parse_double(value));
    } else if (key == "lambda2_im") {
        lambda2.imag(parse_double(value));
    } else {
        throw ParseError("unknown model parameter '" + key + "'");
    }
}

Grid Grid::parse(const std::string& text) {
    const auto parts = split_list(text, ',');
    if (parts.size() != 2) throw ParseError("grid must read tmin:tmax:nt,xmin:xmax:nx");
    Grid g;
    const auto tp = split_list(parts[0], ':');
    const auto xp = split_list(parts[1], ':');
    if (tp.size() != 3 || xp.size() != 3) throw ParseError("grid must read tmin:tmax:nt,xmin:xmax:nx");
    g.tmin = parse_double(tp[0]);
    g.tmax = parse_double(tp[1]);
    g.nt = parse_count(tp[2]);
    g.xmin = parse_double(xp[0]);
    g.xmax = parse_double(xp[1]);
    g.nx = parse_count(xp[2]);
    if (g.tmax < g.tmin || g.xmax < g.xmin) throw ParseError("grid bounds are reversed");
    return g;
}

namespace {

double node(double lo, double hi, std::size_t k, std::size_t n) {
    if (n == 1) return lo;
    if (k + 1 == n) return hi;
    return lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1);
}

}  // namespace

double Grid::t(std::size_t k) const { return node(tmin, tmax, k, nt); }

double Grid::x(std::size_t k) const { return node(xmin, xmax, k, nx); }

double nonlinear_coefficient(const ModelParameters& p) { return p.gamma + p.lambda_minus_sq / 2.0; }

GridResidual nonlinear_psi_residual(const PsiField& psi, const ModelParameters& p, const Potential& u, const Grid& grid) {
    if (p.gamma == 0.0) throw ParameterError("gamma must be nonzero");
    const double c = nonlinear_coefficient(p);
    const double l2 = p.lambda_minus_sq;
    return evaluate(grid, [&](double t, double x) {
        const Complex v = psi.psi(t, x);
        require_nonzero(v, t, x);
        const Complex px = psi.psi_x(t, x);
        return psi.psi_t(t, x) + c * px * px / v - (l2 / 2.0) * psi.psi_xx(t, x) + u.u(x) * v / (2.0 * p.gamma);
    });
}

GridResidual diffusion_residual(const PsiField& psi, const ModelParameters& p, const Potential& u, const Grid& grid) {
    if (p.lambda_minus_sq == 0.0) throw ParameterError("lambda_-^2 must be nonzero");
    const double l2 = p.lambda_minus_sq;
    return evaluate(grid, [&](double t, double x) {
        const Complex v = psi.psi(t, x);
        require_nonzero(v, t, x);
        return psi.psi_t(t, x) - (l2 / 2.0) * psi.psi_xx(t, x) - u.u(x) * v / l2;
    });
}

GridResidual schrodinger_residual(const PsiField& psi, const ModelParameters& p, const Potential& u, const Grid& grid) {
    if (!(p.hbar > 0.0)) throw ParameterError("hbar must be positive");
    const Complex i1(0.0, 1.0);
    const double h = p.hbar;
    return evaluate(grid, [&](double t, double x) {
        const Complex v = psi.psi(t, x);
        require_nonzero(v, t, x);
        return i1 * h * psi.psi_t(t, x) + (h * h / 2.0) * psi.psi_xx(t, x) - u.u(x) * v;
    });
}

Complex box_nonlinear_coefficient(const ModelParameters& p) { return Complex(0.0, p.gamma) + p.lambda2 / 2.0; }

GridResidual box_nonlinear_residual(const PsiField& psi, const ModelParameters& p, const Potential& u, const Grid& grid) {
    if (p.gamma == 0.0) throw ParameterError("gamma must be nonzero");
    const Complex i1(0.0, 1.0);
    const Complex c = box_nonlinear_coefficient(p);
    return evaluate(grid, [&](double t, double x) {
        const Complex v = psi.psi(t, x);
        require_nonzero(v, t, x);
        const Complex px = psi.psi_x(t, x);
        const Complex inner = psi.psi_t(t, x) - c * px * px / v + (p.lambda2 / 2.0) * psi.psi_xx(t, x);
        return -2.0 * i1 * p.gamma * inner + u.u(x) * v;
    });
}

double pointwise_difference(const GridResidual& r1, const GridResidual& r2, Complex c) {
    if (r1.samples.size() != r2.samples.size()) throw SizeError("residuals live on different grids");
    double worst = 0.0;
    for (std::size_t k = 0; k < r1.samples.size(); ++k) worst = std::max(worst, std::abs(r1.samples[k].residual - c * r2.samples[k].residual));
    return worst;
}

std::vector<DriftLevel> drift_consistency_check(const ScaleFunction<double>& x, const PsiField& psi, double gamma) {
    std::vector<DriftLevel> out;
    for (std::size_t m = 0; m < x.levels(); ++m) {
        const auto& g = x.layer(m);
        if (g.size() < 3) continue;
        DriftLevel lvl;
        lvl.level = m;
        for (std::size_t i = 0; i + 1 < g.size(); ++i) {
            const double t = g.domain()[i].to_double();
            const Complex v = psi.psi(t, g[i]);
            require_nonzero(v, t, g[i]);
            if (psi.real_valued && v.real() <= 0.0) throw ParameterError("real psi must be positive for its logarithm");
            const Complex dlog = psi.psi_x(t, g[i]) / v;
            lvl.drift_deviation = std::max(lvl.drift_deviation, std::abs(delta_at(g, i) + 2.0 * gamma * dlog));
            if (i > 0) lvl.symmetry_deviation = std::max(lvl.symmetry_deviation, std::fabs(delta_at(g, i) + nabla_at(g, i)));
        }
        out.push_back(lvl);
    }
    return out;
}

}  // namespace scalecalc
