#include "scalecalc/scale_sequence.hpp"

#include "scalecalc/errors.hpp"

namespace scalecalc {

std::string to_string(Refinement r) {
    switch (r) {
        case Refinement::triadic: return "triadic";
        case Refinement::dyadic: return "dyadic";
        case Refinement::custom: return "custom";
    }
    return "custom";
}

Refinement parse_refinement(const std::string& text) {
    if (text == "triadic") return Refinement::triadic;
    if (text == "dyadic") return Refinement::dyadic;
    if (text == "custom") return Refinement::custom;
    throw ParseError("unknown refinement kind '" + text + "'");
}

unsigned arity(Refinement r) {
    switch (r) {
        case Refinement::triadic: return 3;
        case Refinement::dyadic: return 2;
        case Refinement::custom: return 0;
    }
    return 0;
}

ScaleSequence::ScaleSequence(std::vector<TimeScale> levels, Refinement kind)
    : levels_(std::move(levels)), kind_(kind) {
    if (levels_.empty()) throw SizeError("scale sequence needs at least one level");
    const unsigned r = arity(kind_);
    for (std::size_t i = 0; i < levels_.size(); ++i) {
        const TimeScale& ts = levels_[i];
        if (!(ts.a() == levels_[0].a()) || !(ts.b() == levels_[0].b())) {
            throw ParameterError("scale sequence levels must share the interval [a, b]");
        }
        if (r == 0) {
            if (i > 0 && !levels_[i - 1].is_subset_of(ts)) {
                throw ParameterError("scale sequence level " + std::to_string(i) + " does not contain level " +
                                     std::to_string(i - 1));
            }
            continue;
        }
        const auto mu = ts.uniform_graininess();
        if (!mu) throw ParameterError("level " + std::to_string(i) + " of a " + to_string(kind_) + " sequence is not uniform");
        if (i > 0) {
            const auto coarse = levels_[i - 1].uniform_graininess();
            if (!(*coarse == *mu * Rational(static_cast<long>(r)))) {
                throw ParameterError("graininess ratio between levels " + std::to_string(i - 1) + " and " +
                                     std::to_string(i) + " is not " + std::to_string(r));
            }
            // Uniform grids on the same [a,b] with an integer step ratio are nested.
        }
    }
}

std::optional<Rational> ScaleSequence::graininess(std::size_t i) const { return level(i).uniform_graininess(); }

ScaleSequence ScaleSequence::truncated(std::size_t m) const {
    if (m >= levels_.size()) throw SizeError("cannot truncate to a level beyond the sequence depth");
    return ScaleSequence(std::vector<TimeScale>(levels_.begin(), levels_.begin() + static_cast<std::ptrdiff_t>(m) + 1),
                         kind_);
}

MultiscalePattern MultiscalePattern::constant(const Rational& a) { return MultiscalePattern{{a}, {std::nullopt}}; }

void MultiscalePattern::validate() const {
    if (params.empty()) throw ParameterError("pattern needs at least one parameter");
    if (params.size() != counts.size()) {
        throw ParameterError("pattern has " + std::to_string(params.size()) + " parameters but " +
                             std::to_string(counts.size()) + " counts");
    }
    for (std::size_t k = 0; k < counts.size(); ++k) {
        if (!counts[k]) {
            if (k + 1 != counts.size()) throw ParameterError("only the last count may be infinite");
        } else if (*counts[k] == 0) {
            throw ParameterError("pattern counts must be positive");
        }
    }
}

std::size_t MultiscalePattern::finite_total() const {
    std::size_t total = 0;
    for (const auto& c : counts) {
        if (c) total += *c;
    }
    return total;
}

std::size_t MultiscalePattern::block_for_level(std::size_t j) const {
    if (j == 0) throw ParameterError("level 0 is the initial function and has no block");
    std::size_t cumulative = 0;
    for (std::size_t k = 0; k < counts.size(); ++k) {
        if (!counts[k]) return k;
        cumulative += *counts[k];
        if (cumulative >= j) return k;
    }
    throw PatternExhausted("level " + std::to_string(j) + " exceeds the finite pattern total " +
                           std::to_string(cumulative));
}

}  // namespace scalecalc
