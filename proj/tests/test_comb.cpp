#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "braggkit/comb.hpp"
#include "braggkit/errors.hpp"

#include <cmath>
#include <complex>
#include <vector>

using namespace braggkit;

namespace {

WeightedComb integer_comb(long lo, long hi, double weight = 1.0, long step = 1) {
    std::vector<CombPoint> pts;
    for (long x = lo; x <= hi; x += step)
        pts.push_back({QuadValue(x), {weight, 0.0}});
    return WeightedComb(std::move(pts), {double(lo), double(hi)}, "integer-lattice");
}

// Brute-force golden-ratio model set: a + b*tau with conjugate inside
// [-tau/2, tau/2]. Serves as the independent enumeration oracle.
std::vector<CombPoint> golden_points(double lo, double hi) {
    const QuadValue tau(1, 1, 2, 5);
    const QuadValue tau_star = tau.star();
    const QuadValue win_hi(1, 1, 4, 5);
    const QuadValue win_lo = -win_hi;
    const QuadValue plo = QuadValue::from_double(lo);
    const QuadValue phi = QuadValue::from_double(hi);

    std::vector<CombPoint> pts;
    long bmin = static_cast<long>(std::floor((lo - 1.0) / std::sqrt(5.0))) - 1;
    long bmax = static_cast<long>(std::ceil((hi + 1.0) / std::sqrt(5.0))) + 1;
    for (long b = bmin; b <= bmax; ++b) {
        long amin = static_cast<long>(std::floor(lo - b * 1.6180339887498949)) - 1;
        long amax = static_cast<long>(std::ceil(hi - b * 1.6180339887498949)) + 1;
        for (long a = amin; a <= amax; ++a) {
            QuadValue phys = QuadValue(a) + QuadValue(b) * tau;
            QuadValue internal = QuadValue(a) + QuadValue(b) * tau_star;
            if (quad_cmp(phys, plo) < 0 || quad_cmp(phys, phi) > 0) continue;
            if (quad_cmp(internal, win_lo) < 0 || quad_cmp(internal, win_hi) > 0) continue;
            pts.push_back({phys, {1.0, 0.0}});
        }
    }
    return pts;
}

WeightedComb golden_comb(double lo, double hi) {
    return WeightedComb(golden_points(lo, hi), {lo, hi}, "golden-model-set");
}

bool same_points(const WeightedComb& a, const WeightedComb& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!(a.points()[i].x == b.points()[i].x) || a.points()[i].w != b.points()[i].w)
            return false;
    return true;
}

} // namespace

TEST_CASE("restrict enumerates exactly") {
    WeightedComb z = integer_comb(-10, 10);
    WeightedComb r = restrict_comb(z, {-2.0, 2.0});
    REQUIRE(r.size() == 5);
    for (long k = -2; k <= 2; ++k) CHECK(r.points()[k + 2].x == QuadValue(k));
    CHECK(r.window() == Interval{-2.0, 2.0});

    WeightedComb e = restrict_comb(z, {1.0, -1.0});
    CHECK(e.empty());

    WeightedComb fib = golden_comb(0.0, 100.0);
    WeightedComb fib10 = restrict_comb(fib, {0.0, 10.0});
    CHECK(fib10.size() == golden_points(0.0, 10.0).size());
}

TEST_CASE("restrict is idempotent") {
    WeightedComb fib = golden_comb(0.0, 50.0);
    const Interval ivs[] = {{0.0, 50.0}, {3.5, 20.25}, {10.0, 10.0}, {7.0, 6.0}};
    for (const Interval& iv : ivs) {
        WeightedComb once = restrict_comb(fib, iv);
        WeightedComb twice = restrict_comb(once, iv);
        CHECK(same_points(once, twice));
    }
}

TEST_CASE("restrict errors outside the certified window") {
    WeightedComb z = integer_comb(-10, 10);
    CHECK_THROWS_AS(restrict_comb(z, {-11.0, 2.0}), IncompleteDataError);
    CHECK_THROWS_AS(restrict_comb(z, {0.0, 10.5}), IncompleteDataError);
}

TEST_CASE("difference set") {
    WeightedComb z = integer_comb(-10, 10);
    PointSet d = difference_set(z, 2.5);
    REQUIRE(d.size() == 5);
    for (long k = -2; k <= 2; ++k) CHECK(d.coords()[k + 2] == QuadValue(k));

    WeightedComb single({{QuadValue(3), {1.0, 0.0}}}, {0.0, 5.0}, "single");
    PointSet d1 = difference_set(single, 7.0);
    REQUIRE(d1.size() == 1);
    CHECK(d1.coords()[0].is_zero());
}

TEST_CASE("difference set is symmetric") {
    for (const WeightedComb& c : {golden_comb(0.0, 40.0), integer_comb(-8, 8)}) {
        PointSet d = difference_set(c, 5.0);
        for (const QuadValue& zv : d.coords()) CHECK(d.contains(-zv));
    }
}

TEST_CASE("finite local complexity: difference set stable across windows") {
    PointSet d100 = difference_set(golden_comb(0.0, 100.0), 5.0);
    PointSet d200 = difference_set(golden_comb(0.0, 200.0), 5.0);
    REQUIRE(d100.size() == d200.size());
    for (std::size_t i = 0; i < d100.size(); ++i)
        CHECK(d100.coords()[i] == d200.coords()[i]);
}

TEST_CASE("comb comparison verdicts") {
    WeightedComb z = integer_comb(-10, 10);
    std::vector<CombPoint> even, alternating, imag;
    for (long x = -10; x <= 10; ++x) {
        if (x % 2 == 0) even.push_back({QuadValue(x), {1.0, 0.0}});
        alternating.push_back({QuadValue(x), {x % 2 == 0 ? 1.0 : -1.0, 0.0}});
        imag.push_back({QuadValue(x), {0.0, 1.0}});
    }
    Interval w{-10.0, 10.0};
    WeightedComb z2(even, w, "even-lattice");
    WeightedComb pm(alternating, w, "alternating");
    WeightedComb zi(imag, w, "imaginary");

    CHECK(compare_combs(z2, z, 1.0) == CompareVerdict::below);
    CHECK(compare_combs(pm, z, 1.0) == CompareVerdict::sandwich);
    CHECK(compare_combs(z, z2, 5.0) == CompareVerdict::neither);
    CHECK(compare_combs(zi, z, 1.0) == CompareVerdict::sandwich);
    CHECK(compare_combs(pm, z, 0.5) == CompareVerdict::neither);
    CHECK_THROWS_AS(compare_combs(z, integer_comb(-9, 9), 1.0), DomainError);
}

TEST_CASE("every nonnegative comb sits below itself") {
    for (const WeightedComb& c : {golden_comb(0.0, 30.0), integer_comb(-5, 5, 0.25)})
        CHECK(compare_combs(c, c, 1.0) == CompareVerdict::below);
}

TEST_CASE("threshold subset") {
    std::vector<CombPoint> pts = {{QuadValue(0), {0.2, 0.0}},
                                  {QuadValue(1), {1.0, 0.0}},
                                  {QuadValue(2), {0.5, 0.0}},
                                  {QuadValue(3), {1.0, 0.0}}};
    WeightedComb c(pts, {0.0, 3.0}, "steps");
    PointSet top = threshold_subset(c, 1.0);
    REQUIRE(top.size() == 2);
    CHECK(top.coords()[0] == QuadValue(1));
    CHECK(top.coords()[1] == QuadValue(3));
    CHECK(threshold_subset(c, 2.0).empty());

    WeightedComb z = integer_comb(-10, 10);
    CHECK(threshold_subset(z, 1.0).size() == z.size());

    WeightedComb zi({{QuadValue(0), {1.0, 0.5}}}, {0.0, 1.0}, "complex");
    CHECK_THROWS_AS(threshold_subset(zi, 1.0), DomainError);
    CHECK_THROWS_AS(threshold_subset(z, 0.0), DomainError);
}

TEST_CASE("max gap") {
    WeightedComb z = integer_comb(-10, 10);
    CHECK(max_gap(threshold_subset(z, 1.0)) == 1.0);

    PointSet sparse({QuadValue(-10), QuadValue(0), QuadValue(10)}, {-10.0, 10.0});
    CHECK(max_gap(sparse) == 10.0);

    PointSet lone({QuadValue(0)}, {-1.0, 1.0});
    CHECK_THROWS_AS(max_gap(lone), UndefinedStatisticError);
}

TEST_CASE("golden model set max gap equals the long tile, stable across windows") {
    auto gap_of = [](double hi) {
        std::vector<QuadValue> xs;
        for (const auto& p : golden_points(0.0, hi)) xs.push_back(p.x);
        return max_gap(PointSet(std::move(xs), {0.0, hi}));
    };
    double g100 = gap_of(100.0);
    double g200 = gap_of(200.0);
    CHECK(std::abs(g100 - g200) <= 1e-12);
    CHECK(std::abs(g100 - 1.6180339887498949) <= 1e-9);
}

TEST_CASE("supersets never increase the max gap") {
    std::vector<CombPoint> all = golden_points(0.0, 60.0);
    std::vector<QuadValue> full, thinned;
    for (std::size_t i = 0; i < all.size(); ++i) {
        full.push_back(all[i].x);
        if (i % 3 != 1) thinned.push_back(all[i].x);
    }
    Interval w{0.0, 60.0};
    CHECK(max_gap(PointSet(full, w)) <= max_gap(PointSet(thinned, w)));
}

TEST_CASE("construction canonicalizes") {
    std::vector<CombPoint> pts = {{QuadValue(2), {1.0, 0.0}},
                                  {QuadValue(0), {0.5, 0.0}},
                                  {QuadValue(1), {0.0, 0.0}}};
    WeightedComb c(pts, {0.0, 2.0}, "scrambled");
    REQUIRE(c.size() == 2);  // zero weight dropped
    CHECK(c.points()[0].x == QuadValue(0));
    CHECK(c.points()[1].x == QuadValue(2));
    CHECK(c.weight_at(QuadValue(2)) == std::complex<double>(1.0, 0.0));
    CHECK(c.weight_at(QuadValue(1)) == std::complex<double>(0.0, 0.0));

    std::vector<CombPoint> dup = {{QuadValue(1), {1.0, 0.0}}, {QuadValue(1), {2.0, 0.0}}};
    CHECK_THROWS_AS(WeightedComb(dup, {0.0, 2.0}, "dup"), ValidationError);

    std::vector<CombPoint> outside = {{QuadValue(5), {1.0, 0.0}}};
    CHECK_THROWS_AS(WeightedComb(outside, {0.0, 2.0}, "outside"), ValidationError);
}

TEST_CASE("translation bound witnesses unit-interval mass") {
    WeightedComb z = integer_comb(-10, 10);
    CHECK(z.translation_bound() == 2.0);  // closed unit interval catches two integers
    WeightedComb half = integer_comb(-10, 10, 0.5);
    CHECK(half.translation_bound() == 1.0);
    CHECK(golden_comb(0.0, 50.0).translation_bound() <= 2.0);
}

TEST_CASE("van Hove windows") {
    VanHoveSpec vh(1.0, {50, 100, 200, 400});
    CHECK(vh.window(100) == Interval{-100.0, 100.0});
    CHECK(vh.volume(100) == 200.0);
    CHECK(vh.last() == 400);
    CHECK_THROWS_AS(VanHoveSpec(0.0, {1, 2}), ValidationError);
    CHECK_THROWS_AS(VanHoveSpec(1.0, {}), ValidationError);
    CHECK_THROWS_AS(VanHoveSpec(1.0, {2, 2}), ValidationError);
    CHECK_THROWS_AS(VanHoveSpec(1.0, {2, -1}), ValidationError);
}

TEST_CASE("difference set preconditions") {
    WeightedComb z = integer_comb(0, 3);
    CHECK_THROWS_AS(difference_set(z, 0.0), DomainError);
    WeightedComb empty({}, {0.0, 1.0}, "empty");
    CHECK_THROWS_AS(difference_set(empty, 1.0), DomainError);
}
