#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "scalecalc/rational.hpp"
#include "scalecalc/scale_sequence.hpp"

namespace scalecalc {

/// Word over the alphabet [0, 1]: an observed prefix, optionally followed by
/// a declared periodic tail repeated forever. Without a tail the sequence is
/// a finite observation window.
class SymbolSequence {
public:
    SymbolSequence() = default;
    explicit SymbolSequence(std::vector<Rational> prefix, std::vector<Rational> cycle = {}, bool float_sourced = false);

    static SymbolSequence constant(const Rational& c) { return SymbolSequence({}, {c}); }

    [[nodiscard]] const std::vector<Rational>& prefix() const { return prefix_; }
    [[nodiscard]] const std::vector<Rational>& cycle() const { return cycle_; }
    [[nodiscard]] bool has_tail() const { return !cycle_.empty(); }
    [[nodiscard]] bool float_sourced() const { return float_sourced_; }
    /// Equality tolerance for symbols: 0 for exact data, 1e-12 otherwise.
    [[nodiscard]] double tolerance() const { return float_sourced_ ? 1e-12 : 0.0; }
    /// Number of available symbols; nullopt when a tail is declared.
    [[nodiscard]] std::optional<std::size_t> length() const;
    [[nodiscard]] bool empty() const { return prefix_.empty() && cycle_.empty(); }

    /// Symbol i (0-based); InsufficientData past the end of a finite window.
    [[nodiscard]] const Rational& at(std::size_t i) const;
    /// First n symbols.
    [[nodiscard]] std::vector<Rational> take(std::size_t n) const;

    [[nodiscard]] bool symbols_equal(const Rational& x, const Rational& y) const;

private:
    std::vector<Rational> prefix_;
    std::vector<Rational> cycle_;
    bool float_sourced_ = false;
};

/// The expanded word: a_1 repeated N_1 times, a_2 repeated N_2 times, ...
/// An infinite last block becomes a constant tail.
SymbolSequence expand_pattern(const MultiscalePattern& pattern);

struct MetricValue {
    double value = 0.0;
    /// Upper bound on the omitted tail of the series.
    double bound = 0.0;
};

/// Truncated metric sum_{i=1..N} 2^-i d_i / (1 + d_i) with d_i = |s_i - s'_i|.
MetricValue sequence_metric(const SymbolSequence& s, const SymbolSequence& s2, std::size_t truncation);

/// Drops the first k symbols (a constant or periodic tail is preserved).
SymbolSequence shift(const SymbolSequence& s, std::size_t k = 1);

enum class SequenceClass { eventually_periodic, inconclusive };

struct ClassificationReport {
    SequenceClass kind = SequenceClass::inconclusive;
    std::size_t period = 0;
    std::size_t preperiod = 0;
    std::size_t horizon = 0;
    /// True when the period came from the declared tail because the horizon
    /// was too short for the scan to observe it twice.
    bool from_declared_tail = false;

    [[nodiscard]] std::string label() const;
};

/// Scans preperiod q and period p (p first, then q, both <= H/2, and at
/// least two full periods inside the horizon) for s_i = s_{i+p}, q <= i < H-p.
ClassificationReport classify(const SymbolSequence& s, std::size_t horizon);

/// One symbol per line, `p/q` or decimal; `#` starts a comment. A trailing
/// line `tail: x[,y...]` declares a periodic tail.
SymbolSequence read_sequence_file(const std::filesystem::path& path);

}  // namespace scalecalc
