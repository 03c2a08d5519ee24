#include "scalecalc/scale_function.hpp"

namespace scalecalc {

std::vector<TimeScale> elem_decompose(const TimeScale& ts) {
    std::vector<TimeScale> out;
    out.reserve(ts.size() - 1);
    for (std::size_t i = 0; i + 1 < ts.size(); ++i) out.emplace_back(std::vector<Rational>{ts[i], ts[i + 1]});
    return out;
}

}  // namespace scalecalc
