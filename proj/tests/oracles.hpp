#pragma once

// Independent reference implementations used by the tests. None of them call
// into the library's construction code.

#include <cstdint>
#include <vector>

#include "scalecalc/rational.hpp"

namespace oracle {

using scalecalc::Rational;

/// Okamoto value at k / 3^m by reading the m ternary digits of k: each digit
/// picks one of the three affine pieces of the current interval.
inline Rational okamoto_digit_value(const std::vector<Rational>& params, std::size_t m, std::uint64_t k) {
    std::uint64_t p = 1;
    for (std::size_t i = 0; i < m; ++i) p *= 3;
    if (k == p) return Rational(1);
    // Ternary digits, most significant first.
    std::vector<int> digits(m, 0);
    std::uint64_t r = k;
    for (std::size_t i = 0; i < m; ++i) {
        digits[m - 1 - i] = static_cast<int>(r % 3);
        r /= 3;
    }
    Rational lo(0);
    Rational inc(1);
    for (std::size_t i = 0; i < m; ++i) {
        const Rational& a = params[i];
        switch (digits[i]) {
            case 0: inc = a * inc; break;
            case 1:
                lo = lo + a * inc;
                inc = (Rational(1) - Rational(2) * a) * inc;
                break;
            default:
                lo = lo + (Rational(1) - a) * inc;
                inc = a * inc;
                break;
        }
    }
    return lo;
}

/// All 3^m + 1 values of level m.
inline std::vector<Rational> okamoto_level(const std::vector<Rational>& params, std::size_t m) {
    std::uint64_t n = 1;
    for (std::size_t i = 0; i < m; ++i) n *= 3;
    std::vector<Rational> out;
    out.reserve(n + 1);
    for (std::uint64_t k = 0; k <= n; ++k) out.push_back(okamoto_digit_value(params, m, k));
    return out;
}

/// Left-reduced points of level up to `depth`: t = k / 3^m whose last
/// ternary digit is 1 (the left end of a middle sub-interval).
inline std::vector<std::pair<std::size_t, std::uint64_t>> left_reduced_points(std::size_t depth) {
    std::vector<std::pair<std::size_t, std::uint64_t>> out;
    std::uint64_t n = 1;
    for (std::size_t m = 1; m <= depth; ++m) {
        n *= 3;
        for (std::uint64_t k = 0; k < n; ++k) {
            if (k % 3 == 1) out.emplace_back(m, k);
        }
    }
    return out;
}

}  // namespace oracle
