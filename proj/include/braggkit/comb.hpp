#pragma once

#include "braggkit/exactnum.hpp"

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

namespace braggkit {

// Closed real interval [lo, hi]. lo > hi denotes the empty interval.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    bool empty() const { return lo > hi; }
    double length() const { return empty() ? 0.0 : hi - lo; }
    bool contains(const Interval& inner) const {
        return inner.empty() || (lo <= inner.lo && inner.hi <= hi);
    }
    friend bool operator==(const Interval&, const Interval&) = default;
};

// Exact membership test: from_double(lo) <= x <= from_double(hi).
bool interval_contains(const Interval& iv, const QuadValue& x);

struct CombPoint {
    QuadValue x;
    std::complex<double> w;
};

// Finite patch of a weighted Dirac comb. The window certifies completeness:
// every point of the underlying comb inside it is present. Coordinates are
// exact and strictly increasing; weights are nonzero doubles (zero-weight
// points are dropped at construction). Immutable after construction.
class WeightedComb {
public:
    WeightedComb() = default;
    WeightedComb(std::vector<CombPoint> pts, Interval window, std::string generator_tag);

    const std::vector<CombPoint>& points() const { return pts_; }
    const Interval& window() const { return window_; }
    const std::string& generator_tag() const { return tag_; }
    std::size_t size() const { return pts_.size(); }
    bool empty() const { return pts_.empty(); }

    // Max of sum |w| over unit subintervals of the window (translation
    // boundedness witness), computed at construction.
    double translation_bound() const { return t_bound_; }
    bool has_complex_weight() const { return has_complex_; }

    // Weight at an exact coordinate; 0 when the coordinate is absent.
    std::complex<double> weight_at(const QuadValue& x) const;

private:
    std::vector<CombPoint> pts_;
    Interval window_{0.0, -1.0};
    std::string tag_;
    double t_bound_ = 0.0;
    bool has_complex_ = false;
};

// Finite set of exact coordinates inside a certifying window.
class PointSet {
public:
    PointSet() = default;
    PointSet(std::vector<QuadValue> coords, Interval window);

    const std::vector<QuadValue>& coords() const { return coords_; }
    const Interval& window() const { return window_; }
    std::size_t size() const { return coords_.size(); }
    bool empty() const { return coords_.empty(); }
    bool contains(const QuadValue& x) const;

private:
    std::vector<QuadValue> coords_;
    Interval window_{0.0, -1.0};
};

// Nested averaging windows A_n = [-n*L0, n*L0].
struct VanHoveSpec {
    double L0 = 1.0;
    std::vector<int> sizes;

    VanHoveSpec(double L0, std::vector<int> sizes);
    Interval window(int n) const { return {-n * L0, n * L0}; }
    double volume(int n) const { return 2.0 * n * L0; }
    int last() const { return sizes.back(); }
};

enum class CompareVerdict { below, sandwich, neither };

// Restriction to a subinterval of the certified window; membership decided by
// exact comparison against the interval's endpoints.
WeightedComb restrict_comb(const WeightedComb& c, Interval interval);

// {x - y : x, y in support, |x - y| <= radius}, deduplicated and sorted.
PointSet difference_set(const WeightedComb& c, double radius);

// Verdicts read c1, c2 as measures omega', omega on the shared window.
// below: 0 <= omega' <= C*omega, i.e. every c1 weight w' is real with
// 0 <= w' <= C*w at the same exact coordinate of c2 (absent => w = 0) and c2
// is nonnegative. sandwich: |omega'| <= C*omega with c2 real nonnegative.
// neither: otherwise.
CompareVerdict compare_combs(const WeightedComb& c1, const WeightedComb& c2, double C);

// Coordinates whose (real) weight is >= C1.
PointSet threshold_subset(const WeightedComb& c, double C1);

// Largest of: consecutive coordinate differences and the two boundary gaps to
// the window ends.
double max_gap(const PointSet& s);

} // namespace braggkit
