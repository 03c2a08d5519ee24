#include "scalecalc/asymptotic.hpp"

namespace scalecalc {

std::complex<double> eta_value(Eta e) {
    switch (e) {
        case Eta::minus_one: return {-1.0, 0.0};
        case Eta::plus_one: return {1.0, 0.0};
        case Eta::minus_i: return {0.0, -1.0};
        case Eta::plus_i: return {0.0, 1.0};
    }
    return {-1.0, 0.0};
}

bool eta_is_complex(Eta e) { return e == Eta::minus_i || e == Eta::plus_i; }

Eta parse_eta(const std::string& text) {
    if (text == "-1") return Eta::minus_one;
    if (text == "1" || text == "+1") return Eta::plus_one;
    if (text == "-i") return Eta::minus_i;
    if (text == "i" || text == "+i") return Eta::plus_i;
    throw ParseError("eta must be one of -1, 1, -i, i; got '" + text + "'");
}

std::string to_string(Eta e) {
    switch (e) {
        case Eta::minus_one: return "-1";
        case Eta::plus_one: return "1";
        case Eta::minus_i: return "-i";
        case Eta::plus_i: return "i";
    }
    return "-1";
}

AsymptoticContext::AsymptoticContext(TimeScale grid_, std::vector<double> xstar_, std::vector<double> dplus_,
                                     std::vector<double> dminus_, double alpha_, std::optional<double> lambda_plus_,
                                     std::optional<double> lambda_minus_, Eta eta_)
    : grid(std::move(grid_)),
      xstar(std::move(xstar_)),
      dplus(std::move(dplus_)),
      dminus(std::move(dminus_)),
      alpha(alpha_),
      lambda_plus(lambda_plus_),
      lambda_minus(lambda_minus_),
      eta(eta_) {
    const std::size_t n = grid.size();
    if (xstar.size() != n || dplus.size() != n || dminus.size() != n) throw SizeError("context samples must match the grid");
    if (!(alpha > 0.0 && alpha <= 1.0)) throw ParameterError("alpha must lie in (0, 1]");
}

std::complex<double> box_lambda_printed(double lambda_plus_j, double lambda_minus_j, Eta eta) {
    const std::complex<double> i1(0.0, 1.0);
    return (lambda_plus_j - lambda_minus_j) + i1 * eta_value(eta) * (lambda_plus_j + lambda_minus_j);
}

ItoComparison ito_comparison(const ScaleFunction<double>& x, const Observable<double>& f, std::size_t level, double lambda_sq) {
    if (x.kind() != Refinement::dyadic) throw UnsupportedRefinement("the comparison uses dyadic corrections");
    if (level == 0 || level >= x.levels()) throw SizeError("comparison level must satisfy 1 <= m <= depth");
    if (!f.has_order(2)) throw ParameterError("observable needs second x-partials");
    const auto& g = x.layer(level);
    const auto xs = chord_interpolate(x.layer(level - 1), g.domain());
    const auto cr = correction_right(x, level);
    const auto& ts = g.domain();
    ItoComparison out;
    out.level = level;
    std::size_t count = 0;
    // Coarse points are the even indices; the last one has no sigma inside T^kappa.
    for (std::size_t i = 0; i + 1 < ts.size(); i += 2) {
        const double t0 = ts[i].to_double();
        const double t1 = ts[i + 1].to_double();
        const double mu = (ts[i + 1] - ts[i]).to_double();
        const double lhs = (f.value(t1, g[i + 1]) - f.value(t0, g[i])) / mu;
        const double base = (f.value(t1, xs[i + 1]) - f.value(t0, xs[i])) / mu;
        const double discrete = lhs - base - f.dx(1, t1, xs[i + 1]) * cr[i];
        const double target = 0.5 * lambda_sq * f.dx(2, t0, g[i]);
        out.mean_discrete += discrete;
        out.mean_target += target;
        out.max_abs_error = std::max(out.max_abs_error, std::abs(discrete - target));
        ++count;
    }
    out.mean_discrete /= static_cast<double>(count);
    out.mean_target /= static_cast<double>(count);
    return out;
}

}  // namespace scalecalc
