#include "braggkit/comb.hpp"
#include "braggkit/errors.hpp"

#include <algorithm>
#include <cmath>

namespace braggkit {

bool interval_contains(const Interval& iv, const QuadValue& x) {
    if (iv.empty()) return false;
    return quad_cmp(QuadValue::from_double(iv.lo), x) <= 0 &&
           quad_cmp(x, QuadValue::from_double(iv.hi)) <= 0;
}

WeightedComb::WeightedComb(std::vector<CombPoint> pts, Interval window,
                           std::string generator_tag)
    : window_(window), tag_(std::move(generator_tag)) {
    pts_.reserve(pts.size());
    for (auto& p : pts)
        if (p.w != std::complex<double>(0.0, 0.0)) pts_.push_back(std::move(p));
    std::sort(pts_.begin(), pts_.end(),
              [](const CombPoint& a, const CombPoint& b) { return quad_cmp(a.x, b.x) < 0; });
    for (std::size_t i = 0; i + 1 < pts_.size(); ++i)
        if (pts_[i].x == pts_[i + 1].x)
            throw ValidationError("duplicate comb coordinate " + pts_[i].x.to_string());
    for (const auto& p : pts_) {
        if (!interval_contains(window_, p.x))
            throw ValidationError("coordinate " + p.x.to_string() +
                                  " outside certified window");
        if (p.w.imag() != 0.0) has_complex_ = true;
    }
    // Translation-boundedness witness: the largest unit-interval weight mass
    // starts at some comb point.
    for (std::size_t i = 0; i < pts_.size(); ++i) {
        double mass = 0.0;
        QuadValue end = pts_[i].x + QuadValue(1);
        for (std::size_t j = i; j < pts_.size() && quad_cmp(pts_[j].x, end) <= 0; ++j)
            mass += std::abs(pts_[j].w);
        t_bound_ = std::max(t_bound_, mass);
    }
}

std::complex<double> WeightedComb::weight_at(const QuadValue& x) const {
    auto it = std::lower_bound(
        pts_.begin(), pts_.end(), x,
        [](const CombPoint& p, const QuadValue& v) { return quad_cmp(p.x, v) < 0; });
    if (it != pts_.end() && it->x == x) return it->w;
    return {0.0, 0.0};
}

PointSet::PointSet(std::vector<QuadValue> coords, Interval window)
    : coords_(std::move(coords)), window_(window) {
    std::sort(coords_.begin(), coords_.end(),
              [](const QuadValue& a, const QuadValue& b) { return quad_cmp(a, b) < 0; });
    coords_.erase(std::unique(coords_.begin(), coords_.end()), coords_.end());
    for (const auto& x : coords_)
        if (!interval_contains(window_, x))
            throw ValidationError("coordinate " + x.to_string() +
                                  " outside certified window");
}

bool PointSet::contains(const QuadValue& x) const {
    auto it = std::lower_bound(
        coords_.begin(), coords_.end(), x,
        [](const QuadValue& a, const QuadValue& b) { return quad_cmp(a, b) < 0; });
    return it != coords_.end() && *it == x;
}

VanHoveSpec::VanHoveSpec(double L0_, std::vector<int> sizes_)
    : L0(L0_), sizes(std::move(sizes_)) {
    if (!(L0 > 0.0)) throw ValidationError("van Hove base half-length must be > 0");
    if (sizes.empty()) throw ValidationError("van Hove size list is empty");
    for (std::size_t i = 0; i < sizes.size(); ++i) {
        if (sizes[i] <= 0) throw ValidationError("van Hove sizes must be positive");
        if (i > 0 && sizes[i] <= sizes[i - 1])
            throw ValidationError("van Hove sizes must be strictly increasing");
    }
}

WeightedComb restrict_comb(const WeightedComb& c, Interval interval) {
    if (interval.empty())
        return WeightedComb({}, interval, c.generator_tag() + "|restricted");
    if (!c.window().contains(interval))
        throw IncompleteDataError("restriction interval exceeds certified window");
    std::vector<CombPoint> kept;
    for (const auto& p : c.points())
        if (interval_contains(interval, p.x)) kept.push_back(p);
    return WeightedComb(std::move(kept), interval, c.generator_tag() + "|restricted");
}

PointSet difference_set(const WeightedComb& c, double radius) {
    if (!(radius > 0.0)) throw DomainError("difference-set radius must be > 0");
    if (c.empty()) throw DomainError("difference set of an empty comb");
    QuadValue bound = QuadValue::from_double(radius);
    const auto& pts = c.points();
    std::vector<QuadValue> diffs;
    diffs.push_back(QuadValue(0));
    // Points are sorted, so scanning j > i enumerates each positive difference
    // once; close the set under negation afterwards.
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            QuadValue z = pts[j].x - pts[i].x;
            if (quad_cmp(z, bound) > 0) break;
            diffs.push_back(z);
        }
    std::size_t positive = diffs.size();
    for (std::size_t i = 1; i < positive; ++i) diffs.push_back(-diffs[i]);
    return PointSet(std::move(diffs), {-radius, radius});
}

CompareVerdict compare_combs(const WeightedComb& c1, const WeightedComb& c2, double C) {
    if (!(c1.window() == c2.window()))
        throw DomainError("compared combs certify different windows");
    if (C < 0.0) throw DomainError("comparison constant must be >= 0");

    bool c2_nonneg = true;
    for (const auto& p : c2.points())
        if (p.w.imag() != 0.0 || p.w.real() < 0.0) {
            c2_nonneg = false;
            break;
        }

    bool below = c2_nonneg;
    bool sandwich = c2_nonneg;
    for (const auto& p : c1.points()) {
        if (!below && !sandwich) break;
        double ref = c2.weight_at(p.x).real();
        if (p.w.imag() != 0.0 || p.w.real() < 0.0 || p.w.real() > C * ref) below = false;
        if (std::abs(p.w) > C * ref) sandwich = false;
    }
    if (below) return CompareVerdict::below;
    if (sandwich) return CompareVerdict::sandwich;
    return CompareVerdict::neither;
}

PointSet threshold_subset(const WeightedComb& c, double C1) {
    if (!(C1 > 0.0)) throw DomainError("threshold must be > 0");
    if (c.has_complex_weight())
        throw DomainError("threshold subset of a complex-weighted comb");
    std::vector<QuadValue> kept;
    for (const auto& p : c.points())
        if (p.w.real() >= C1) kept.push_back(p.x);
    return PointSet(std::move(kept), c.window());
}

double max_gap(const PointSet& s) {
    if (s.size() < 2)
        throw UndefinedStatisticError("max gap needs at least 2 points");
    const auto& xs = s.coords();
    double best = xs.front().to_float() - s.window().lo;
    best = std::max(best, s.window().hi - xs.back().to_float());
    for (std::size_t i = 0; i + 1 < xs.size(); ++i)
        best = std::max(best, (xs[i + 1] - xs[i]).to_float());
    return best;
}

} // namespace braggkit
