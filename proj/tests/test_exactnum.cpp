#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "braggkit/errors.hpp"
#include "braggkit/exactnum.hpp"

#include <cmath>
#include <limits>
#include <random>

using braggkit::BigInt;
using braggkit::DomainError;
using braggkit::QuadValue;
using braggkit::ValidationError;
using braggkit::quad_cmp;

namespace {

// Deterministic helper: the engine is bit-specified by the standard, the
// distribution adaptors are not.
struct Rng {
    std::mt19937_64 eng;
    explicit Rng(uint64_t seed) : eng(seed) {}
    long pick(long lo, long hi) {
        return lo + static_cast<long>(eng() % static_cast<uint64_t>(hi - lo + 1));
    }
    double unit() { return (eng() >> 11) * 0x1.0p-53; }
};

QuadValue random_value(Rng& rng, long m) {
    long q = m == 0 ? 0 : rng.pick(-30, 30);
    return QuadValue(rng.pick(-30, 30), q, rng.pick(1, 12), m);
}

const QuadValue kTau(1, 1, 2, 5);       // (1+sqrt(5))/2
const QuadValue kSqrt2 = QuadValue::sqrt_of(2);

} // namespace

TEST_CASE("conjugate pair arithmetic") {
    QuadValue a(1, 1, 1, 2);   // 1+sqrt(2)
    QuadValue b(1, -1, 1, 2);  // 1-sqrt(2)
    CHECK(a + b == QuadValue(2));
    CHECK(a * b == QuadValue(-1));
    CHECK((a * b).is_rational());
}

TEST_CASE("golden ratio satisfies tau^2 = tau + 1") {
    // Rational expansion by hand: (1/2 + (1/2)sqrt5)^2 = (1+5)/4 + (2/4)sqrt5.
    QuadValue expanded(6, 2, 4, 5);
    CHECK(kTau * kTau == expanded);
    CHECK(kTau * kTau == kTau + QuadValue(1));
    CHECK(expanded == QuadValue(3, 1, 2, 5));
}

TEST_CASE("galois star") {
    QuadValue v(3, 2, 1, 2);
    CHECK(v.star() == QuadValue(3, -2, 1, 2));
    QuadValue seven(7);
    CHECK(seven.star() == seven);
    CHECK(kTau.star() == QuadValue(1, -1, 2, 5));
    // Norm of the golden ratio: tau * tau' = -1.
    CHECK(kTau * kTau.star() == QuadValue(-1));
}

TEST_CASE("star is an involution and ring homomorphism") {
    Rng rng(20260819);
    const long ms[] = {0, 2, 5};
    for (int t = 0; t < 10000; ++t) {
        long m = ms[rng.pick(0, 2)];
        QuadValue a = random_value(rng, m);
        QuadValue b = random_value(rng, m);
        CHECK(a.star().star() == a);
        CHECK((a * b).star() == a.star() * b.star());
        CHECK((a + b).star() == a.star() + b.star());
    }
}

TEST_CASE("to_float matches known constants") {
    double v = (QuadValue(1) + kSqrt2).to_float();
    double expected = 2.4142135623730951;
    CHECK(std::abs(v - expected) <=
          4 * std::numeric_limits<double>::epsilon() * expected);
    CHECK(QuadValue().to_float() == 0.0);

    // Large-offset value against an independent extended-precision evaluation.
    QuadValue big(1000000, 1, 3, 2);
    long double oracle = (1000000.0L + sqrtl(2.0L)) / 3.0L;
    CHECK(std::abs(big.to_float() - static_cast<double>(oracle)) <=
          1e-15 * static_cast<double>(oracle));
}

TEST_CASE("exact comparison") {
    // 2*25 > 49, so sqrt(2) > 7/5.
    CHECK(quad_cmp(kSqrt2, QuadValue::rational(7, 5)) > 0);
    CHECK(quad_cmp(kTau, QuadValue(1)) > 0);
    CHECK(quad_cmp(kTau, kTau) == 0);
    CHECK(kSqrt2 > QuadValue::rational(7, 5));
    CHECK(kTau.star() < QuadValue(0));
    CHECK(quad_cmp(QuadValue(1, -1, 1, 2), QuadValue(0)) < 0);  // 1-sqrt(2) < 0
}

TEST_CASE("comparison agrees with float sign at separations above 1e-9") {
    Rng rng(77);
    const long ms[] = {0, 2, 5};
    for (int t = 0; t < 10000; ++t) {
        long m = ms[rng.pick(0, 2)];
        QuadValue a = random_value(rng, m);
        QuadValue b = random_value(rng, m);
        double fa = a.to_float(), fb = b.to_float();
        if (std::abs(fa - fb) <= 1e-9) continue;
        int c = quad_cmp(a, b);
        CHECK(c == (fa < fb ? -1 : 1));
    }
}

TEST_CASE("field axioms on random canonical values") {
    Rng rng(42);
    const long ms[] = {0, 2, 5};
    const QuadValue zero, one(1);
    for (int t = 0; t < 10000; ++t) {
        long m = ms[rng.pick(0, 2)];
        QuadValue a = random_value(rng, m);
        QuadValue b = random_value(rng, m);
        QuadValue c = random_value(rng, m);
        CHECK(a + b == b + a);
        CHECK((a + b) + c == a + (b + c));
        CHECK(a * b == b * a);
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(a + zero == a);
        CHECK(a * one == a);
        CHECK(a + (-a) == zero);
        CHECK(a - b == a + (-b));
        if (!a.is_zero()) {
            CHECK(a / a == one);
            CHECK((one / a) * a == one);
        }
    }
}

TEST_CASE("canonical form") {
    CHECK(QuadValue(6, 2, 4, 5) == QuadValue(3, 1, 2, 5));
    CHECK(QuadValue(2, 0, -4, 0) == QuadValue::rational(-1, 2));
    CHECK(QuadValue(5, 0, 1, 5).is_rational());  // q = 0 drops the radicand
    CHECK(QuadValue(5, 0, 1, 5) == QuadValue(5));
    CHECK(QuadValue(0, 0, 7, 2).is_zero());
}

TEST_CASE("textual form") {
    CHECK(QuadValue(3).to_string() == "3");
    CHECK(QuadValue::rational(-3, 4).to_string() == "-3/4");
    CHECK(QuadValue().to_string() == "0");
    CHECK(kSqrt2.to_string() == "sqrt(2)");
    CHECK((-kSqrt2).to_string() == "-sqrt(2)");
    CHECK((QuadValue(2) * QuadValue::sqrt_of(3)).to_string() == "2*sqrt(3)");
    CHECK(kTau.to_string() == "1/2+1/2*sqrt(5)");
    CHECK(kTau.star().to_string() == "1/2-1/2*sqrt(5)");

    CHECK(QuadValue::parse("3") == QuadValue(3));
    CHECK(QuadValue::parse("sqrt(2)") == kSqrt2);
    CHECK(QuadValue::parse("1/2+1/2*sqrt(5)") == kTau);
    CHECK(QuadValue::parse(" 1/2 - 1/2 * sqrt(5) ") == kTau.star());
    CHECK(QuadValue::parse("-5/7+2*sqrt(2)") == QuadValue(-5, 14, 7, 2));
}

TEST_CASE("textual round trip on random values") {
    Rng rng(7);
    const long ms[] = {0, 2, 5};
    for (int t = 0; t < 10000; ++t) {
        QuadValue a = random_value(rng, ms[rng.pick(0, 2)]);
        CHECK(QuadValue::parse(a.to_string()) == a);
    }
}

TEST_CASE("dyadic conversion from double") {
    CHECK(QuadValue::from_double(0.5) == QuadValue::rational(1, 2));
    CHECK(QuadValue::from_double(-1.25) == QuadValue::rational(-5, 4));
    CHECK(QuadValue::from_double(3.0) == QuadValue(3));
    Rng rng(99);
    for (int t = 0; t < 2000; ++t) {
        double x = (rng.unit() - 0.5) * 2000.0;
        CHECK(QuadValue::from_double(x).to_float() == x);
    }
}

TEST_CASE("error conditions") {
    CHECK_THROWS_AS(QuadValue(1, 1, 0, 2), ValidationError);       // zero denominator
    CHECK_THROWS_AS(QuadValue(1, 1, 1, 4), ValidationError);       // 4 = 2^2
    CHECK_THROWS_AS(QuadValue(1, 1, 1, 12), ValidationError);      // 12 = 4*3
    CHECK_THROWS_AS(QuadValue(1, 1, 1, 1), ValidationError);       // sqrt(1) is rational
    CHECK_THROWS_AS(QuadValue(1, 2, 3, 0), ValidationError);       // sqrt coeff without field
    CHECK_THROWS_AS(kSqrt2 + QuadValue::sqrt_of(5), DomainError);  // mixed radicands
    CHECK_THROWS_AS(quad_cmp(kSqrt2, QuadValue::sqrt_of(3)), DomainError);
    CHECK_THROWS_AS(kTau / QuadValue(), DomainError);              // division by zero
    CHECK_THROWS_AS(QuadValue::parse(""), ValidationError);
    CHECK_THROWS_AS(QuadValue::parse("abc"), ValidationError);
    CHECK_THROWS_AS(QuadValue::parse("1+"), ValidationError);
    CHECK_THROWS_AS(QuadValue::parse("sqrt(2"), ValidationError);
    CHECK_THROWS_AS(QuadValue::parse("1*2"), ValidationError);
    CHECK_THROWS_AS(QuadValue::from_double(std::numeric_limits<double>::infinity()),
                    ValidationError);

    // Rationals mix freely with either field.
    CHECK(kSqrt2 + QuadValue(1) == QuadValue(1, 1, 1, 2));
    CHECK(quad_cmp(QuadValue(1), kSqrt2) < 0);
}
