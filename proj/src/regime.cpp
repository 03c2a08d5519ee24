#include "scalecalc/regime.hpp"

namespace scalecalc {

ScaleRange ScaleRange::parse(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw ParseError("scale range must read m0:m1, got '" + text + "'");
    try {
        std::size_t used0 = 0;
        std::size_t used1 = 0;
        const std::string a = text.substr(0, colon);
        const std::string b = text.substr(colon + 1);
        ScaleRange r{std::stoul(a, &used0), std::stoul(b, &used1)};
        if (used0 != a.size() || used1 != b.size()) throw std::invalid_argument("trailing characters");
        return r;
    } catch (const std::logic_error&) {
        throw ParseError("scale range must read m0:m1, got '" + text + "'");
    }
}

SlopeFit slope_fit(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size()) throw SizeError("slope fit needs as many x as y values");
    if (xs.size() < 3) throw InsufficientData("slope fit needs at least 3 points");
    const double n = static_cast<double>(xs.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (sxx == 0.0) throw InsufficientData("slope fit needs at least two distinct x values");
    SlopeFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.used = xs.size();
    for (std::size_t i = 0; i < xs.size(); ++i) {
        fit.max_residual = std::max(fit.max_residual, std::fabs(ys[i] - (fit.slope * xs[i] + fit.intercept)));
    }
    return fit;
}

unsigned j_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw ParameterError("j_alpha needs 0 < alpha < 1");
    // A relative nudge keeps 1/(1/j) from landing just below j.
    return static_cast<unsigned>(std::floor((1.0 / alpha) * (1.0 + 1e-12)));
}

LambdaSummary summarize_lambda_levels(const std::vector<std::vector<double>>& level_values, const std::vector<double>& exact_means) {
    LambdaSummary s;
    if (level_values.empty()) throw InsufficientData("lambda estimation needs at least one corrected level");
    if (!exact_means.empty() && exact_means.size() != level_values.size()) throw SizeError("one mean per level expected");
    for (std::size_t k = 0; k < level_values.size(); ++k) {
        const auto& v = level_values[k];
        if (!exact_means.empty()) {
            s.level_means.push_back(exact_means[k]);
            continue;
        }
        double sum = 0.0;
        for (double x : v) sum += x;
        s.level_means.push_back(v.empty() ? 0.0 : sum / static_cast<double>(v.size()));
    }
    s.estimate = s.level_means.back();
    const std::size_t first = s.level_means.size() > 3 ? s.level_means.size() - 3 : 0;
    double lo = s.level_means[first];
    double hi = lo;
    for (std::size_t k = first; k < s.level_means.size(); ++k) {
        lo = std::min(lo, s.level_means[k]);
        hi = std::max(hi, s.level_means[k]);
    }
    const double scale = std::max(std::fabs(lo), std::fabs(hi));
    s.level_spread = scale == 0.0 ? 0.0 : (hi - lo) / scale;
    const auto& deepest = level_values.back();
    if (!deepest.empty()) {
        const auto [mn, mx] = std::minmax_element(deepest.begin(), deepest.end());
        s.spatial_spread = *mx - *mn;
    }
    s.degenerate = s.estimate == 0.0;
    return s;
}

}  // namespace scalecalc
