#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "scalecalc/rational.hpp"

namespace scalecalc {

/// A finite, strictly increasing set of exact time points on [a, b].
///
/// Immutable; copies share storage. Cardinality is at least 2. Operations
/// that need T^kappa or T_kappa (derivatives) additionally require 3 points.
class TimeScale {
public:
    explicit TimeScale(std::vector<Rational> points);

    /// `intervals + 1` equally spaced points from a to b.
    static TimeScale uniform(const Rational& a, const Rational& b, std::size_t intervals);

    [[nodiscard]] std::size_t size() const { return pts_->size(); }
    [[nodiscard]] const Rational& operator[](std::size_t i) const { return (*pts_)[i]; }
    [[nodiscard]] std::span<const Rational> points() const { return *pts_; }
    [[nodiscard]] const Rational& a() const { return pts_->front(); }
    [[nodiscard]] const Rational& b() const { return pts_->back(); }

    [[nodiscard]] std::optional<std::size_t> find(const Rational& t) const;
    [[nodiscard]] bool contains(const Rational& t) const { return find(t).has_value(); }
    /// Index of t; throws DomainError when t is not a member.
    [[nodiscard]] std::size_t index_of(const Rational& t) const;

    /// Forward jump: inf{s > t}, with inf(empty) = b.
    [[nodiscard]] Rational sigma(const Rational& t) const;
    /// Backward jump: sup{s < t}, with sup(empty) = a.
    [[nodiscard]] Rational rho(const Rational& t) const;
    /// Forward graininess sigma(t) - t.
    [[nodiscard]] Rational mu(const Rational& t) const;
    /// Backward graininess t - rho(t).
    [[nodiscard]] Rational nu(const Rational& t) const;

    /// mu at the i-th point (0 at the last point).
    [[nodiscard]] Rational mu_at(std::size_t i) const;
    /// nu at the i-th point (0 at the first point).
    [[nodiscard]] Rational nu_at(std::size_t i) const;

    /// T^kappa = T \ ]rho(b), b]; requires card >= 3.
    [[nodiscard]] TimeScale kappa_upper() const;
    /// T_kappa = T \ [a, sigma(a)[; requires card >= 3.
    [[nodiscard]] TimeScale kappa_lower() const;
    /// Points with index in [first, last].
    [[nodiscard]] TimeScale slice(std::size_t first, std::size_t last) const;

    /// Constant graininess when all gaps are equal.
    [[nodiscard]] std::optional<Rational> uniform_graininess() const;
    [[nodiscard]] bool is_subset_of(const TimeScale& other) const;

    friend bool operator==(const TimeScale& l, const TimeScale& r);

private:
    std::shared_ptr<const std::vector<Rational>> pts_;
};

}  // namespace scalecalc
