#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "braggkit/autocorr.hpp"
#include "braggkit/cps.hpp"
#include "braggkit/errors.hpp"
#include "braggkit/gram.hpp"

#include <cmath>
#include <complex>
#include <random>

using namespace braggkit;

namespace {

WeightedComb integer_comb(long lo, long hi, double weight = 1.0, long step = 1) {
    std::vector<CombPoint> pts;
    for (long x = lo; x <= hi; x += step)
        pts.push_back({QuadValue(x), {weight, 0.0}});
    return WeightedComb(std::move(pts), {double(lo), double(hi)}, "integer-lattice");
}

WeightedComb golden_comb(double lo, double hi) {
    SchemeConfig cfg;
    cfg.preset = "fibonacci";
    CPScheme s = build_scheme(cfg);
    return generate_model_comb(s, weight_from_config(cfg, s), {lo, hi});
}

struct Rng {
    std::mt19937_64 eng;
    explicit Rng(uint64_t seed) : eng(seed) {}
    double unit() { return (eng() >> 11) * 0x1.0p-53; }
};

// Bernoulli(1/2) thinning, one draw per point in ascending coordinate order.
WeightedComb thin(const WeightedComb& c, uint64_t seed) {
    Rng rng(seed);
    std::vector<CombPoint> kept;
    for (const auto& p : c.points())
        if (rng.unit() < 0.5) kept.push_back(p);
    return WeightedComb(std::move(kept), c.window(), c.generator_tag() + "|thinned");
}

} // namespace

TEST_CASE("integer lattice autocorrelation in closed form") {
    WeightedComb c = integer_comb(-10, 10);
    VanHoveSpec vh(1.0, {10});
    Autocorrelation a = autocorrelation(c, vh, 10, 5.0);

    CHECK(a.n() == 10);
    CHECK(a.volume() == 20.0);
    REQUIRE(a.entries().size() == 11);  // z = -5..5
    CHECK(a.value_at(QuadValue(0)) == std::complex<double>(21.0 / 20.0, 0.0));
    CHECK(a.value_at(QuadValue(1)) == std::complex<double>(1.0, 0.0));
    CHECK(a.value_at(QuadValue(-1)) == std::complex<double>(1.0, 0.0));
    CHECK(a.value_at(QuadValue(5)) == std::complex<double>(16.0 / 20.0, 0.0));
    CHECK(a.value_at(QuadValue(7)) == std::complex<double>(0.0, 0.0));
    CHECK(!a.has(QuadValue(7)));
}

TEST_CASE("empty comb gives an empty table") {
    WeightedComb empty({}, {-50.0, 50.0}, "empty");
    VanHoveSpec vh(1.0, {10});
    CHECK(autocorrelation(empty, vh, 10, 5.0).empty());
}

TEST_CASE("hermitian symmetry for complex weights") {
    std::vector<CombPoint> pts;
    for (long x = -30; x <= 30; ++x)
        pts.push_back({QuadValue(x), {std::cos(0.7 * x), std::sin(0.7 * x)}});
    WeightedComb c(pts, {-30.0, 30.0}, "phase-ramp");
    VanHoveSpec vh(1.0, {30});
    Autocorrelation a = autocorrelation(c, vh, 30, 6.0);

    CHECK(!a.is_real());
    for (const auto& e : a.entries())
        CHECK(a.value_at(-e.z) == std::conj(e.value));
    std::complex<double> at0 = a.value_at(QuadValue(0));
    CHECK(at0.imag() == 0.0);
    CHECK(at0.real() >= 0.0);
}

TEST_CASE("finite-patch tables are positive definite") {
    struct Case {
        WeightedComb comb;
        int n;
    };
    Case cases[] = {{integer_comb(-50, 50), 50}, {golden_comb(-60.0, 60.0), 50}};
    VanHoveSpec vh(1.0, {50});
    for (const auto& [comb, n] : cases) {
        Autocorrelation a = autocorrelation(comb, vh, n, 20.0);
        std::vector<QuadValue> samples;
        for (const auto& p : comb.points()) {
            if (samples.size() == 40) break;
            if (interval_contains({0.0, 20.0}, p.x)) samples.push_back(p.x);
        }
        REQUIRE(samples.size() >= 6);
        std::size_t d = samples.size();
        std::vector<std::complex<double>> g(d * d);
        double trace = 0.0;
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) {
                g[i * d + j] = a.value_at(samples[i] - samples[j]);
                if (i == j) trace += g[i * d + j].real();
            }
        double min_eig = hermitian_eigenvalues(g, d).front();
        CHECK(min_eig >= -1e-8 * trace);
    }
}

TEST_CASE("support is contained in the difference set") {
    WeightedComb fib = golden_comb(-60.0, 60.0);
    VanHoveSpec vh(1.0, {50});
    Autocorrelation a = autocorrelation(fib, vh, 50, 20.0);
    PointSet diffs = difference_set(restrict_comb(fib, vh.window(50)), 20.0);
    for (const auto& e : a.entries()) CHECK(diffs.contains(e.z));
}

TEST_CASE("integer lattice converges at rate 1/N") {
    WeightedComb c = integer_comb(-400, 400);
    VanHoveSpec vh(1.0, {50, 100, 200, 400});
    ConvergenceSeries cs = convergence_series(c, vh, 2.0);

    REQUIRE(cs.sizes == std::vector<int>{50, 100, 200, 400});
    REQUIRE(cs.zs.size() == 5);
    for (std::size_t zi = 0; zi < cs.zs.size(); ++zi)
        REQUIRE(cs.values[zi].size() == 4);
    // gamma_N(0) = (2N+1)/(2N).
    for (std::size_t si = 0; si < 4; ++si) {
        double n = cs.sizes[si];
        CHECK(cs.values[2][si].real() == (2.0 * n + 1.0) / (2.0 * n));
    }
    // gamma_400(z) - gamma_200(z) = (|z|-1)/800 peaks at |z| = 2 here.
    CHECK(std::abs(cs.cauchy_stat - 1.0 / 800.0) <= 1e-15);
    CHECK(cs.cauchy_stat <= 0.01);
}

TEST_CASE("golden model comb convergence improves with n") {
    WeightedComb fib = golden_comb(-400.0, 400.0);
    double s1 = convergence_series(fib, VanHoveSpec(1.0, {100, 200}), 5.0).cauchy_stat;
    double s2 = convergence_series(fib, VanHoveSpec(1.0, {200, 400}), 5.0).cauchy_stat;
    CHECK(s2 <= 1.1 * s1);
}

TEST_CASE("a single point has vanishing autocorrelation density") {
    WeightedComb c({{QuadValue(0), {2.0, 0.0}}}, {-4.0, 4.0}, "single");
    VanHoveSpec vh(1.0, {1, 2, 4});
    ConvergenceSeries cs = convergence_series(c, vh, 1.0);
    REQUIRE(cs.zs.size() == 1);
    CHECK(cs.values[0][0].real() == 2.0);   // |2|^2 / 2
    CHECK(cs.values[0][1].real() == 1.0);
    CHECK(cs.values[0][2].real() == 0.5);
}

TEST_CASE("convolution with a unit atom is the identity") {
    WeightedComb fib = golden_comb(-60.0, 60.0);
    VanHoveSpec vh(1.0, {50});
    Autocorrelation a = autocorrelation(fib, vh, 50, 10.0);
    WeightedComb unit({{QuadValue(0), {1.0, 0.0}}}, {0.0, 0.0}, "atom");
    Autocorrelation conv = convolve_finite(a, unit);
    REQUIRE(conv.entries().size() == a.entries().size());
    for (std::size_t i = 0; i < a.entries().size(); ++i) {
        CHECK(conv.entries()[i].z == a.entries()[i].z);
        CHECK(conv.entries()[i].value == a.entries()[i].value);
    }

    WeightedComb none({}, {0.0, 1.0}, "none");
    CHECK(convolve_finite(a, none).empty());
}

TEST_CASE("doubling kernel dominates the integer autocorrelation") {
    VanHoveSpec vh(1.0, {100});
    Autocorrelation a2 = autocorrelation(integer_comb(-100, 100, 1.0, 2), vh, 100, 12.0);
    Autocorrelation az = autocorrelation(integer_comb(-100, 100), vh, 100, 10.0);
    WeightedComb f({{QuadValue(0), {1.0, 0.0}}, {QuadValue(1), {1.0, 0.0}}}, {0.0, 1.0},
                   "pair");
    Autocorrelation conv = convolve_finite(a2, f);
    for (long z = -10; z <= 10; ++z)
        CHECK(conv.value_at(QuadValue(z)).real() + 1e-9 >=
              az.value_at(QuadValue(z)).real());
}

TEST_CASE("covering set of the even sublattice") {
    std::vector<QuadValue> all, evens;
    for (long x = -10; x <= 10; ++x) {
        all.push_back(QuadValue(x));
        if (x % 2 == 0) evens.push_back(QuadValue(x));
    }
    PointSet lambda(all, {-10.0, 10.0});
    PointSet gamma(evens, {-10.0, 10.0});
    PointSet f = covering_set(lambda, gamma);
    REQUIRE(f.size() == 2);
    CHECK(f.coords()[0] == QuadValue(0));
    CHECK(f.coords()[1] == QuadValue(1));

    PointSet self = covering_set(lambda, lambda);
    REQUIRE(self.size() == 1);
    CHECK(self.coords()[0].is_zero());
}

TEST_CASE("long-tile anchors cover with short offsets") {
    // Away from the window edges every point is either an anchor (offset 0)
    // or a short-tile endpoint whose successor is an anchor (offset -1);
    // the last few points fall back on an anchor at most tau+1 behind.
    const QuadValue tau(1, 1, 2, 5);
    auto anchors_cover = [&](double hi) {
        WeightedComb fib = golden_comb(0.0, hi);
        std::vector<QuadValue> xs, anchors;
        for (const auto& p : fib.points()) xs.push_back(p.x);
        for (std::size_t i = 0; i + 1 < xs.size(); ++i)
            if (xs[i + 1] - xs[i] == tau) anchors.push_back(xs[i]);
        PointSet lambda(xs, {0.0, hi});
        PointSet gamma(anchors, {0.0, hi});
        return covering_set(lambda, gamma);
    };
    for (double hi : {100.0, 200.0}) {
        PointSet f = anchors_cover(hi);
        CHECK(f.size() <= 4);
        std::vector<QuadValue> interior;
        for (const auto& off : f.coords()) {
            QuadValue mag = off.sign() < 0 ? QuadValue(0) - off : off;
            CHECK(quad_cmp(mag, tau + QuadValue(1)) <= 0);
            if (quad_cmp(mag, QuadValue(1)) <= 0) interior.push_back(off);
        }
        REQUIRE(interior.size() == 2);
        CHECK(interior[0] == QuadValue(-1));
        CHECK(interior[1] == QuadValue(0));
    }
}

TEST_CASE("covering preconditions") {
    PointSet lambda({QuadValue(0), QuadValue(1)}, {0.0, 1.0});
    PointSet empty;
    CHECK_THROWS_AS(covering_set(lambda, empty), DomainError);
    PointSet outside({QuadValue(3)}, {0.0, 4.0});
    CHECK_THROWS_AS(covering_set(lambda, outside), DomainError);
}

TEST_CASE("ordering verdicts") {
    VanHoveSpec vh(1.0, {100});
    Autocorrelation az = autocorrelation(integer_comb(-100, 100), vh, 100, 10.0);
    Autocorrelation a2 = autocorrelation(integer_comb(-100, 100, 1.0, 2), vh, 100, 10.0);

    OrderReport below = order_check(a2, az, 1.0);
    CHECK(below.pass);

    OrderReport self = order_check(az, az, 1.0);
    CHECK(self.pass);
    CHECK(self.max_violation == 0.0);

    // Reversed: the integer table has full mass at odd z where the even
    // sublattice has none, so the worst violation is 1.0 at |z| = 1.
    OrderReport above = order_check(az, a2, 1.0);
    CHECK(!above.pass);
    CHECK(above.worst_z == QuadValue(-1));
    CHECK(above.max_violation == 1.0);
}

TEST_CASE("ordering preconditions") {
    VanHoveSpec vh(1.0, {50, 100});
    WeightedComb c = integer_comb(-100, 100);
    Autocorrelation a50 = autocorrelation(c, vh, 50, 10.0);
    Autocorrelation a100 = autocorrelation(c, vh, 100, 10.0);
    Autocorrelation a100r5 = autocorrelation(c, vh, 100, 5.0);
    CHECK_THROWS_AS(order_check(a50, a100, 1.0), DomainError);
    CHECK_THROWS_AS(order_check(a100, a100r5, 1.0), DomainError);
    CHECK_THROWS_AS(order_check(a100, a100, -1.0), DomainError);

    std::vector<CombPoint> pts;
    for (long x = -100; x <= 100; ++x)
        pts.push_back({QuadValue(x), {std::cos(0.3 * x), std::sin(0.3 * x)}});
    WeightedComb cc(pts, {-100.0, 100.0}, "complex");
    Autocorrelation ac = autocorrelation(cc, vh, 100, 10.0);
    CHECK_THROWS_AS(order_check(ac, a100, 1.0), DomainError);
}

TEST_CASE("thinned sub-combs stay ordered at every patch size") {
    VanHoveSpec vh(1.0, {50, 100});
    for (const WeightedComb& full : {integer_comb(-100, 100), golden_comb(-100.0, 100.0)})
        for (uint64_t seed : {1, 2, 3}) {
            WeightedComb sub = thin(full, seed);
            CHECK(compare_combs(sub, full, 1.0) == CompareVerdict::below);
            for (int n : vh.sizes) {
                Autocorrelation gp = autocorrelation(sub, vh, n, 10.0);
                Autocorrelation g = autocorrelation(full, vh, n, 10.0);
                CHECK(order_check(gp, g, 1.0).pass);
            }
        }
}

TEST_CASE("signed unit weights are sandwiched at every patch size") {
    VanHoveSpec vh(1.0, {50, 100});
    WeightedComb full = integer_comb(-100, 100);
    for (uint64_t seed : {1, 2, 3}) {
        Rng rng(seed);
        std::vector<CombPoint> pts;
        for (const auto& p : full.points())
            pts.push_back({p.x, {2.0 * rng.unit() - 1.0, 0.0}});
        WeightedComb signedc(pts, full.window(), "signed");
        CHECK(compare_combs(signedc, full, 1.0) == CompareVerdict::sandwich);
        for (int n : vh.sizes) {
            Autocorrelation gp = autocorrelation(signedc, vh, n, 10.0);
            Autocorrelation g = autocorrelation(full, vh, n, 10.0);
            for (const auto& e : gp.entries())
                CHECK(std::abs(e.value.real()) <= g.value_at(e.z).real() + 1e-9);
        }
    }
}

TEST_CASE("window certification is enforced") {
    WeightedComb c = integer_comb(-50, 50);
    VanHoveSpec vh(1.0, {100});
    CHECK_THROWS_AS(autocorrelation(c, vh, 100, 5.0), IncompleteDataError);
    CHECK_THROWS_AS(autocorrelation(c, vh, 0, 5.0), DomainError);
    CHECK_THROWS_AS(autocorrelation(c, VanHoveSpec(1.0, {10}), 10, 0.0), DomainError);
}

TEST_CASE("table canonicalization") {
    using C = std::complex<double>;
    std::vector<AutocorrEntry> asym = {{QuadValue(0), C(1, 0)}, {QuadValue(1), C(0.5, 0)}};
    CHECK_THROWS_AS(Autocorrelation(asym, 1, 2.0, 2.0, "t"), ValidationError);

    std::vector<AutocorrEntry> skew = {{QuadValue(-1), C(0.2, 0)},
                                       {QuadValue(0), C(1, 0)},
                                       {QuadValue(1), C(0.5, 0)}};
    CHECK_THROWS_AS(Autocorrelation(skew, 1, 2.0, 2.0, "t"), ValidationError);

    std::vector<AutocorrEntry> neg = {{QuadValue(0), C(-1, 0)}};
    CHECK_THROWS_AS(Autocorrelation(neg, 1, 2.0, 2.0, "t"), ValidationError);

    // A last-ulp mirror mismatch is canonicalized to an exact conjugate.
    double v = 0.1 + 0.2;  // 0.30000000000000004
    std::vector<AutocorrEntry> near = {{QuadValue(-1), C(0.3, 1e-13)},
                                       {QuadValue(0), C(1, 0)},
                                       {QuadValue(1), C(v, 0)}};
    Autocorrelation fixed(near, 1, 2.0, 2.0, "t");
    CHECK(fixed.value_at(QuadValue(-1)) == std::conj(fixed.value_at(QuadValue(1))));
}
