#include "scalecalc/timescale.hpp"

#include <algorithm>

#include "scalecalc/errors.hpp"

namespace scalecalc {

TimeScale::TimeScale(std::vector<Rational> points) {
    if (points.size() < 2) throw SizeError("time-scale needs at least 2 points");
    for (std::size_t i = 1; i < points.size(); ++i) {
        if (!(points[i - 1] < points[i])) {
            throw ParameterError("time-scale points must be strictly increasing (at index " + std::to_string(i) + ")");
        }
    }
    pts_ = std::make_shared<const std::vector<Rational>>(std::move(points));
}

TimeScale TimeScale::uniform(const Rational& a, const Rational& b, std::size_t intervals) {
    if (intervals == 0) throw SizeError("uniform time-scale needs at least one interval");
    if (!(a < b)) throw ParameterError("uniform time-scale needs a < b");
    const Rational step = (b - a) / Rational(static_cast<long>(intervals));
    std::vector<Rational> pts;
    pts.reserve(intervals + 1);
    for (std::size_t k = 0; k < intervals; ++k) pts.push_back(a + step * Rational(static_cast<long>(k)));
    pts.push_back(b);
    return TimeScale(std::move(pts));
}

std::optional<std::size_t> TimeScale::find(const Rational& t) const {
    const auto it = std::lower_bound(pts_->begin(), pts_->end(), t);
    if (it == pts_->end() || !(*it == t)) return std::nullopt;
    return static_cast<std::size_t>(it - pts_->begin());
}

std::size_t TimeScale::index_of(const Rational& t) const {
    const auto i = find(t);
    if (!i) throw DomainError("point " + t.str() + " is not a member of the time-scale");
    return *i;
}

Rational TimeScale::sigma(const Rational& t) const {
    const std::size_t i = index_of(t);
    return i + 1 < size() ? (*pts_)[i + 1] : b();
}

Rational TimeScale::rho(const Rational& t) const {
    const std::size_t i = index_of(t);
    return i > 0 ? (*pts_)[i - 1] : a();
}

Rational TimeScale::mu(const Rational& t) const { return sigma(t) - t; }

Rational TimeScale::nu(const Rational& t) const { return t - rho(t); }

Rational TimeScale::mu_at(std::size_t i) const {
    return i + 1 < size() ? (*pts_)[i + 1] - (*pts_)[i] : Rational(0);
}

Rational TimeScale::nu_at(std::size_t i) const { return i > 0 ? (*pts_)[i] - (*pts_)[i - 1] : Rational(0); }

TimeScale TimeScale::kappa_upper() const {
    if (size() < 3) throw SizeError("T^kappa requires a time-scale with at least 3 points");
    return slice(0, size() - 2);
}

TimeScale TimeScale::kappa_lower() const {
    if (size() < 3) throw SizeError("T_kappa requires a time-scale with at least 3 points");
    return slice(1, size() - 1);
}

TimeScale TimeScale::slice(std::size_t first, std::size_t last) const {
    if (last >= size() || first >= last) throw SizeError("invalid time-scale slice");
    return TimeScale(std::vector<Rational>(pts_->begin() + static_cast<std::ptrdiff_t>(first),
                                           pts_->begin() + static_cast<std::ptrdiff_t>(last) + 1));
}

std::optional<Rational> TimeScale::uniform_graininess() const {
    const Rational step = (*pts_)[1] - (*pts_)[0];
    for (std::size_t i = 2; i < size(); ++i) {
        if (!((*pts_)[i] - (*pts_)[i - 1] == step)) return std::nullopt;
    }
    return step;
}

bool TimeScale::is_subset_of(const TimeScale& other) const {
    // Both sorted: merge walk.
    std::size_t j = 0;
    for (std::size_t i = 0; i < size(); ++i) {
        while (j < other.size() && other[j] < (*pts_)[i]) ++j;
        if (j == other.size() || !(other[j] == (*pts_)[i])) return false;
    }
    return true;
}

bool operator==(const TimeScale& l, const TimeScale& r) {
    if (l.pts_ == r.pts_) return true;
    return *l.pts_ == *r.pts_;
}

}  // namespace scalecalc
