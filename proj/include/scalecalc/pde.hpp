#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "scalecalc/asymptotic.hpp"
#include "scalecalc/discrete_function.hpp"
#include "scalecalc/errors.hpp"
#include "scalecalc/scale_function.hpp"

namespace scalecalc {

// ---------------------------------------------------------------------------
// Scale equations on discrete levels
// ---------------------------------------------------------------------------

/// nabla(delta X)(t) - U'(X(t)) on the interior points of one layer. The
/// formula carries no level-dependent constant.
template <Scalar S>
DiscreteFunction<S> newton_residual_layer(const DiscreteFunction<S>& x, const std::function<S(const S&)>& uprime) {
    if (x.size() < 4) throw SizeError("scale Newton residual needs at least 4 points");
    const auto& ts = x.domain();
    std::vector<S> out;
    for (std::size_t i = 1; i + 1 < x.size(); ++i) {
        const S second = (delta_at(x, i) - delta_at(x, i - 1)) / from_rational<S>(ts[i] - ts[i - 1]);
        out.push_back(second - uprime(x[i]));
    }
    return DiscreteFunction<S>(ts.slice(1, ts.size() - 2), std::move(out));
}

/// delta(nabla X)(t) - U'(X(t)) on the interior points of one layer.
template <Scalar S>
DiscreteFunction<S> newton_nabla_residual_layer(const DiscreteFunction<S>& x, const std::function<S(const S&)>& uprime) {
    if (x.size() < 4) throw SizeError("scale Newton residual needs at least 4 points");
    const auto& ts = x.domain();
    std::vector<S> out;
    for (std::size_t i = 1; i + 1 < x.size(); ++i) {
        const S second = (nabla_at(x, i + 1) - nabla_at(x, i)) / from_rational<S>(ts[i + 1] - ts[i]);
        out.push_back(second - uprime(x[i]));
    }
    return DiscreteFunction<S>(ts.slice(1, ts.size() - 2), std::move(out));
}

template <Scalar S>
struct LevelResidual {
    std::size_t first_level = 0;
    std::vector<DiscreteFunction<S>> layers;
    std::vector<double> max_abs;
    /// Graininess per level when the equation depends on it.
    std::vector<double> mu;
    bool degenerate = false;
    /// Second form where the equation has one (delta(nabla X) for Newton).
    std::vector<DiscreteFunction<S>> alt_layers;
    std::vector<double> alt_max_abs;

    [[nodiscard]] double max_residual() const {
        double r = 0.0;
        for (double v : max_abs) r = std::max(r, v);
        for (double v : alt_max_abs) r = std::max(r, v);
        return r;
    }
};

namespace detail {

template <Scalar S>
double max_abs_of(const DiscreteFunction<S>& g) {
    double r = 0.0;
    for (const S& v : g.values()) r = std::max(r, abs_value(v));
    return r;
}

template <Scalar S>
std::size_t first_level_with(const ScaleFunction<S>& f, std::size_t points) {
    for (std::size_t m = 0; m < f.levels(); ++m) {
        if (f.layer(m).size() >= points) return m;
    }
    throw SizeError("no level has the " + std::to_string(points) + " points this residual needs");
}

}  // namespace detail

/// Both scale Newton forms at every level with at least 4 points.
template <Scalar S>
LevelResidual<S> scale_newton_residual(const ScaleFunction<S>& x, const std::function<S(const S&)>& uprime) {
    LevelResidual<S> out;
    out.first_level = detail::first_level_with(x, 4);
    for (std::size_t m = out.first_level; m < x.levels(); ++m) {
        out.layers.push_back(newton_residual_layer(x.layer(m), uprime));
        out.max_abs.push_back(detail::max_abs_of(out.layers.back()));
        out.alt_layers.push_back(newton_nabla_residual_layer(x.layer(m), uprime));
        out.alt_max_abs.push_back(detail::max_abs_of(out.alt_layers.back()));
    }
    return out;
}

/// Lagrangian L(x, v) given through its partials.
template <Scalar S>
struct Lagrangian {
    std::string name;
    std::function<S(const S& x, const S& v)> dL_dx;
    std::function<S(const S& x, const S& v)> dL_dv;
    /// False when L depends on x only; the relation then reads 0 = dL/dx.
    bool depends_on_velocity = true;
};

/// L = v^2/2 + c U(x), given U'.
template <Scalar S>
Lagrangian<S> kinetic_plus_potential(const std::function<S(const S&)>& uprime, const Rational& c = Rational(1)) {
    const S cs = from_rational<S>(c);
    return Lagrangian<S>{"v^2/2 + c U", [uprime, cs](const S& x, const S&) { return cs * uprime(x); },
                         [](const S&, const S& v) { return v; }, true};
}

/// nabla(dL/dv(X, delta X))(t) - dL/dx(X(t), delta X(t)) on interior points.
template <Scalar S>
DiscreteFunction<S> euler_lagrange_residual_layer(const DiscreteFunction<S>& x, const Lagrangian<S>& lag) {
    if (x.size() < 4) throw SizeError("scale Euler-Lagrange residual needs at least 4 points");
    const auto& ts = x.domain();
    std::vector<S> p;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) p.push_back(lag.depends_on_velocity ? lag.dL_dv(x[i], delta_at(x, i)) : S{});
    std::vector<S> out;
    for (std::size_t i = 1; i + 1 < x.size(); ++i) {
        const S lhs = lag.depends_on_velocity ? (p[i] - p[i - 1]) / from_rational<S>(ts[i] - ts[i - 1]) : from_rational<S>(Rational(0));
        out.push_back(lhs - lag.dL_dx(x[i], delta_at(x, i)));
    }
    return DiscreteFunction<S>(ts.slice(1, ts.size() - 2), std::move(out));
}

template <Scalar S>
LevelResidual<S> scale_euler_lagrange_residual(const ScaleFunction<S>& x, const Lagrangian<S>& lag) {
    LevelResidual<S> out;
    out.first_level = detail::first_level_with(x, 4);
    out.degenerate = !lag.depends_on_velocity;
    for (std::size_t m = out.first_level; m < x.levels(); ++m) {
        out.layers.push_back(euler_lagrange_residual_layer(x.layer(m), lag));
        out.max_abs.push_back(detail::max_abs_of(out.layers.back()));
    }
    return out;
}

/// delta F - mu F on T^kappa for an explicitly given graininess mu.
template <Scalar S>
DiscreteFunction<S> linear_scale_residual_layer(const DiscreteFunction<S>& f, const Rational& mu) {
    const auto d = delta_derivative(f);
    std::vector<S> out;
    for (std::size_t i = 0; i < d.size(); ++i) out.push_back(d[i] - from_rational<S>(mu) * f[i]);
    return DiscreteFunction<S>(d.domain(), std::move(out));
}

/// delta F_i - mu_i F_i per uniform level (the equation changes with mu).
template <Scalar S>
LevelResidual<S> linear_scale_equation_residual(const ScaleFunction<S>& f) {
    LevelResidual<S> out;
    out.first_level = detail::first_level_with(f, 3);
    for (std::size_t m = out.first_level; m < f.levels(); ++m) {
        const auto mu = f.layer(m).domain().uniform_graininess();
        if (!mu) throw ParameterError("linear scale equation needs uniform levels");
        out.layers.push_back(linear_scale_residual_layer(f.layer(m), *mu));
        out.max_abs.push_back(detail::max_abs_of(out.layers.back()));
        out.mu.push_back(mu->to_double());
    }
    return out;
}

// ---------------------------------------------------------------------------
// Asymptotic PDEs with analytic partials
// ---------------------------------------------------------------------------

using Complex = std::complex<double>;

struct Potential {
    std::function<double(double)> u;
    std::function<double(double)> uprime;
};

Potential zero_potential();
Potential harmonic_potential(double k = 1.0);

/// Largest |U'(x) - central difference of U| over the points.
double potential_self_check(const Potential& p, const std::vector<double>& xs, double h = 1e-5);

struct PsiField {
    std::string name;
    std::function<Complex(double t, double x)> psi;
    std::function<Complex(double t, double x)> psi_t;
    std::function<Complex(double t, double x)> psi_x;
    std::function<Complex(double t, double x)> psi_xx;
    bool real_valued = false;
};

/// Gaussian heat kernel (4 pi D t)^{-1/2} exp(-x^2/(4 D t)).
PsiField heat_kernel(double diffusivity);
/// exp(D k^2 t + k x).
PsiField separable_exponential(double diffusivity, double k);
/// exp(i(k x - omega t)).
PsiField plane_wave(double k, double omega);
/// exp(-x^2/(2 hbar)) exp(-i t/2), ground state for U = x^2/2.
PsiField harmonic_ground_state(double hbar);
/// Partials of a tabulated or black-box field by fourth-order central
/// differences with step h (error floor O(h^4)).
PsiField finite_difference_field(std::string name, std::function<Complex(double, double)> psi, double h = 1e-3);

/// Largest discrepancy between analytic partials and fourth-order differences.
double psi_self_check(const PsiField& f, double t, double x, double h = 1e-3);

struct ModelParameters {
    double gamma = 0.5;
    double lambda_minus_sq = 1.0;
    double lambda_plus_sq = 1.0;
    double hbar = 1.0;
    Eta eta = Eta::minus_one;
    /// Coefficient of the Box nonlinear form; -i hbar recovers the
    /// Schroedinger form.
    Complex lambda2{0.0, -1.0};

    /// gamma = -lambda_-^2 / 2, eta = -1.
    static ModelParameters diffusion(double lambda_minus_sq);
    /// gamma = hbar/2, lambda_+-^2 = hbar^2, eta = -1, lambda2 = -i hbar.
    static ModelParameters schrodinger(double hbar);
    /// Applies `key=value` settings (gamma, lambda_minus_sq, lambda_plus_sq,
    /// hbar, eta, lambda2_re, lambda2_im).
    void apply(const std::string& key, const std::string& value);
};

struct Grid {
    double tmin = 0.0, tmax = 1.0;
    std::size_t nt = 1;
    double xmin = 0.0, xmax = 1.0;
    std::size_t nx = 1;

    /// `tmin:tmax:nt,xmin:xmax:nx`
    static Grid parse(const std::string& text);
    [[nodiscard]] double t(std::size_t k) const;
    [[nodiscard]] double x(std::size_t k) const;
};

struct GridSample {
    double t;
    double x;
    Complex residual;
};

struct GridResidual {
    std::vector<GridSample> samples;
    double max_abs = 0.0;
};

/// d psi/dt + (gamma + l^2/2) psi_x^2/psi - (l^2/2) psi_xx + U psi / (2 gamma), l^2 = lambda_-^2.
GridResidual nonlinear_psi_residual(const PsiField& psi, const ModelParameters& p, const Potential& u, const Grid& grid);
/// Coefficient gamma + lambda_-^2/2 of the nonlinear term.
double nonlinear_coefficient(const ModelParameters& p);
/// psi_t - (lambda_-^2/2) psi_xx - U psi / lambda_-^2.
GridResidual diffusion_residual(const PsiField& psi, const ModelParameters& p, const Potential& u, const Grid& grid);
/// i hbar psi_t + (hbar^2/2) psi_xx - U psi.
GridResidual schrodinger_residual(const PsiField& psi, const ModelParameters& p, const Potential& u, const Grid& grid);
/// -2 i gamma (psi_t - (i gamma + lambda2/2) psi_x^2/psi + (lambda2/2) psi_xx) + U psi.
GridResidual box_nonlinear_residual(const PsiField& psi, const ModelParameters& p, const Potential& u, const Grid& grid);
/// Coefficient i gamma + lambda2/2 of the Box nonlinear term.
Complex box_nonlinear_coefficient(const ModelParameters& p);

/// Max pointwise |r1 - c r2| over two residuals on the same grid.
double pointwise_difference(const GridResidual& r1, const GridResidual& r2, Complex c = 1.0);

struct DriftLevel {
    std::size_t level = 0;
    /// max |delta X + 2 gamma d_x ln psi(t, X)|
    double drift_deviation = 0.0;
    /// max |delta X + nabla X| over interior points
    double symmetry_deviation = 0.0;
};

/// How well X realizes the drift hypothesis and delta X = -nabla X.
std::vector<DriftLevel> drift_consistency_check(const ScaleFunction<double>& x, const PsiField& psi, double gamma);

}  // namespace scalecalc
