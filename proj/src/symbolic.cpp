#include "scalecalc/symbolic.hpp"

#include <cmath>
#include <fstream>

#include "scalecalc/errors.hpp"

namespace scalecalc {

namespace {

void check_alphabet(const Rational& x) {
    if (x < Rational(0) || x > Rational(1)) throw ParameterError("symbol " + x.str() + " lies outside the alphabet [0, 1]");
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

bool is_decimal_literal(const std::string& s) { return s.find('/') == std::string::npos && s.find_first_of(".eE") != std::string::npos; }

// Smallest period of a cycle.
std::size_t primitive_period(const std::vector<Rational>& cycle) {
    const std::size_t n = cycle.size();
    for (std::size_t p = 1; p <= n; ++p) {
        if (n % p != 0) continue;
        bool ok = true;
        for (std::size_t i = p; i < n && ok; ++i) ok = cycle[i] == cycle[i - p];
        if (ok) return p;
    }
    return n;
}

}  // namespace

SymbolSequence::SymbolSequence(std::vector<Rational> prefix, std::vector<Rational> cycle, bool float_sourced)
    : prefix_(std::move(prefix)), cycle_(std::move(cycle)), float_sourced_(float_sourced) {
    for (const auto& x : prefix_) check_alphabet(x);
    for (const auto& x : cycle_) check_alphabet(x);
}

std::optional<std::size_t> SymbolSequence::length() const {
    if (has_tail()) return std::nullopt;
    return prefix_.size();
}

const Rational& SymbolSequence::at(std::size_t i) const {
    if (i < prefix_.size()) return prefix_[i];
    if (!has_tail()) {
        throw InsufficientData("symbol " + std::to_string(i + 1) + " requested from a window of " + std::to_string(prefix_.size()));
    }
    return cycle_[(i - prefix_.size()) % cycle_.size()];
}

std::vector<Rational> SymbolSequence::take(std::size_t n) const {
    std::vector<Rational> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(at(i));
    return out;
}

bool SymbolSequence::symbols_equal(const Rational& x, const Rational& y) const {
    if (!float_sourced_) return x == y;
    return std::fabs((x - y).to_double()) <= tolerance();
}

SymbolSequence expand_pattern(const MultiscalePattern& pattern) {
    pattern.validate();
    std::vector<Rational> prefix;
    std::vector<Rational> cycle;
    for (std::size_t k = 0; k < pattern.params.size(); ++k) {
        if (!pattern.counts[k]) {
            cycle.push_back(pattern.params[k]);
            break;
        }
        prefix.insert(prefix.end(), *pattern.counts[k], pattern.params[k]);
    }
    return SymbolSequence(std::move(prefix), std::move(cycle));
}

MetricValue sequence_metric(const SymbolSequence& s, const SymbolSequence& s2, std::size_t truncation) {
    if (truncation == 0) throw ParameterError("metric truncation must be positive");
    Rational sum(0);
    Rational weight(1, 2);
    for (std::size_t i = 0; i < truncation; ++i) {
        const Rational d = abs(s.at(i) - s2.at(i));
        sum += weight * d / (Rational(1) + d);
        weight *= Rational(1, 2);
    }
    return {sum.to_double(), std::ldexp(1.0, -static_cast<int>(std::min<std::size_t>(truncation, 1074)))};
}

SymbolSequence shift(const SymbolSequence& s, std::size_t k) {
    if (s.empty()) throw SizeError("cannot shift an empty sequence");
    const auto& prefix = s.prefix();
    if (k <= prefix.size()) {
        return SymbolSequence({prefix.begin() + static_cast<std::ptrdiff_t>(k), prefix.end()}, s.cycle(), s.float_sourced());
    }
    if (!s.has_tail()) throw InsufficientData("cannot shift past the end of a finite window");
    const auto& cycle = s.cycle();
    const std::size_t r = (k - prefix.size()) % cycle.size();
    std::vector<Rational> rotated(cycle.begin() + static_cast<std::ptrdiff_t>(r), cycle.end());
    rotated.insert(rotated.end(), cycle.begin(), cycle.begin() + static_cast<std::ptrdiff_t>(r));
    return SymbolSequence({}, std::move(rotated), s.float_sourced());
}

std::string ClassificationReport::label() const {
    if (kind == SequenceClass::eventually_periodic) {
        return "eventually-periodic(period=" + std::to_string(period) + ",preperiod=" + std::to_string(preperiod) +
               ") self-similar";
    }
    return "no-period-detected-within-horizon(H=" + std::to_string(horizon) + ") INCONCLUSIVE";
}

ClassificationReport classify(const SymbolSequence& s, std::size_t horizon) {
    if (horizon == 0) throw ParameterError("classification horizon must be positive");
    if (const auto n = s.length(); n && *n < horizon) {
        throw InsufficientData("horizon " + std::to_string(horizon) + " exceeds the " + std::to_string(*n) + " observed symbols");
    }
    const auto w = s.take(horizon);
    ClassificationReport rep;
    rep.horizon = horizon;
    for (std::size_t p = 1; p <= horizon / 2; ++p) {
        for (std::size_t q = 0; q <= horizon / 2 && q + 2 * p <= horizon; ++q) {
            bool ok = true;
            for (std::size_t i = q; i + p < horizon && ok; ++i) ok = s.symbols_equal(w[i], w[i + p]);
            if (ok) {
                rep.kind = SequenceClass::eventually_periodic;
                rep.period = p;
                rep.preperiod = q;
                return rep;
            }
        }
    }
    if (s.has_tail()) {
        // The declaration settles the question even when the window is short.
        const auto& prefix = s.prefix();
        const auto& cycle = s.cycle();
        const std::size_t p = primitive_period(cycle);
        std::size_t q = prefix.size();
        // Absorb prefix symbols that already follow the cycle backwards.
        while (q > 0 && s.symbols_equal(prefix[q - 1], s.at(q - 1 + p))) --q;
        rep.kind = SequenceClass::eventually_periodic;
        rep.period = p;
        rep.preperiod = q;
        rep.from_declared_tail = true;
    }
    return rep;
}

SymbolSequence read_sequence_file(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw ParseError("cannot open sequence file " + path.string());
    std::vector<Rational> prefix;
    std::vector<Rational> cycle;
    bool float_sourced = false;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        try {
            if (line.rfind("tail:", 0) == 0) {
                if (!cycle.empty()) throw ParseError("tail declared twice");
                std::string rest = line.substr(5);
                std::size_t start = 0;
                while (start <= rest.size()) {
                    const auto comma = rest.find(',', start);
                    const std::string item = trim(rest.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
                    if (!item.empty()) {
                        float_sourced = float_sourced || is_decimal_literal(item);
                        cycle.push_back(Rational::parse(item));
                    }
                    if (comma == std::string::npos) break;
                    start = comma + 1;
                }
                if (cycle.empty()) throw ParseError("empty tail declaration");
                continue;
            }
            if (!cycle.empty()) throw ParseError("symbols after the tail declaration");
            float_sourced = float_sourced || is_decimal_literal(line);
            prefix.push_back(Rational::parse(line));
        } catch (const ParseError& e) {
            throw ParseError(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return SymbolSequence(std::move(prefix), std::move(cycle), float_sourced);
}

}  // namespace scalecalc
