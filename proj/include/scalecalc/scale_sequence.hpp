#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "scalecalc/rational.hpp"
#include "scalecalc/timescale.hpp"

namespace scalecalc {

enum class Refinement { triadic, dyadic, custom };

std::string to_string(Refinement r);
Refinement parse_refinement(const std::string& text);
/// Sub-intervals per refinement step: 3, 2, or 0 for custom.
unsigned arity(Refinement r);

/// Nested time-scales T_0 c T_1 c ... c T_M on a common [a, b].
class ScaleSequence {
public:
    ScaleSequence(std::vector<TimeScale> levels, Refinement kind);

    [[nodiscard]] std::size_t size() const { return levels_.size(); }
    /// Deepest level index M.
    [[nodiscard]] std::size_t depth() const { return levels_.size() - 1; }
    [[nodiscard]] const TimeScale& level(std::size_t i) const { return levels_.at(i); }
    [[nodiscard]] const std::vector<TimeScale>& levels() const { return levels_; }
    [[nodiscard]] Refinement kind() const { return kind_; }

    /// Uniform graininess of level i, if that level is uniform.
    [[nodiscard]] std::optional<Rational> graininess(std::size_t i) const;

    /// Levels 0..m.
    [[nodiscard]] ScaleSequence truncated(std::size_t m) const;

private:
    std::vector<TimeScale> levels_;
    Refinement kind_;
};

/// Complexity pattern of a multiscale function: parameter a_k is applied
/// N_k times in a row. Only the last count may be infinite (nullopt).
struct MultiscalePattern {
    std::vector<Rational> params;
    std::vector<std::optional<std::size_t>> counts;

    /// Single-parameter pattern with an infinite count.
    static MultiscalePattern constant(const Rational& a);

    /// Throws ParameterError on an inconsistent pattern.
    void validate() const;
    [[nodiscard]] bool has_infinite_tail() const { return !counts.empty() && !counts.back().has_value(); }
    /// Sum of finite counts.
    [[nodiscard]] std::size_t finite_total() const;

    /// Block index k (0-based) that produces level j >= 1. At an exact block
    /// boundary the earlier block is chosen: level j belongs to the smallest
    /// k with N_1 + ... + N_k >= j.
    [[nodiscard]] std::size_t block_for_level(std::size_t j) const;
    [[nodiscard]] const Rational& param_for_level(std::size_t j) const { return params[block_for_level(j)]; }
};

}  // namespace scalecalc
