#include "scalecalc/scale_dynamics.hpp"

#include <limits>

namespace scalecalc {

std::string to_string(Trend t) {
    switch (t) {
        case Trend::vanishing: return "vanishing";
        case Trend::converging: return "converging-or-flat";
        case Trend::diverging: return "diverging";
        case Trend::undefined: return "undefined";
    }
    return "undefined";
}

TrendReport classify_trend(const std::vector<double>& values) {
    TrendReport rep;
    rep.values = values;
    if (values.size() < 2) return rep;
    const std::size_t first = values.size() > 4 ? values.size() - 4 : 0;
    if (values.back() == 0.0 && values[values.size() - 2] == 0.0) {
        rep.trend = Trend::vanishing;
        rep.ratio = 0.0;
        return rep;
    }
    double log_sum = 0.0;
    std::size_t count = 0;
    for (std::size_t i = first; i + 1 < values.size(); ++i) {
        const double a = std::fabs(values[i]);
        const double b = std::fabs(values[i + 1]);
        if (a == 0.0) {
            if (b != 0.0) {
                rep.trend = Trend::diverging;
                rep.ratio = std::numeric_limits<double>::infinity();
                return rep;
            }
            continue;
        }
        if (b == 0.0) {
            rep.trend = Trend::vanishing;
            rep.ratio = 0.0;
            return rep;
        }
        log_sum += std::log(b / a);
        ++count;
    }
    if (count == 0) {
        rep.trend = Trend::vanishing;
        return rep;
    }
    rep.ratio = std::exp(log_sum / static_cast<double>(count));
    if (rep.ratio < 1.0 - 1e-9) {
        rep.trend = Trend::vanishing;
    } else if (rep.ratio > 1.0 + 1e-9) {
        rep.trend = Trend::diverging;
    } else {
        rep.trend = Trend::converging;
    }
    return rep;
}

}  // namespace scalecalc
