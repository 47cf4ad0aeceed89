#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <compare>
#include <string>

namespace braggkit {

using BigInt = boost::multiprecision::cpp_int;

// Element of the real quadratic field Q(sqrt(m)), stored exactly as
// (p + q*sqrt(m)) / d with arbitrary-precision integers.
//
// Canonical form: d >= 1, gcd(p, q, d) = 1, and q == 0 forces m = 0.
// m = 0 marks a plain rational; otherwise m must be square-free and > 1.
// Two values are equal iff their canonical fields are identical.
//
// Values are immutable after construction and safe to share across threads.
// Arbitrary-precision backing means arithmetic never overflows or wraps.
class QuadValue {
public:
    QuadValue() : p_(0), q_(0), d_(1), m_(0) {}
    QuadValue(long value) : p_(value), q_(0), d_(1), m_(0) {}
    QuadValue(BigInt p, BigInt q, BigInt d, long m);

    static QuadValue rational(BigInt num, BigInt den);
    static QuadValue sqrt_of(long m);
    // Exact dyadic representation of a finite double.
    static QuadValue from_double(double x);
    // Inverse of to_string; accepts omitted zero terms ("3", "sqrt(2)",
    // "1/2+1/2*sqrt(5)").
    static QuadValue parse(const std::string& text);

    const BigInt& p() const { return p_; }
    const BigInt& q() const { return q_; }
    const BigInt& d() const { return d_; }
    long m() const { return m_; }

    bool is_rational() const { return m_ == 0; }
    bool is_zero() const { return p_ == 0 && q_ == 0; }
    // Exact sign of the real value, computed symbolically.
    int sign() const;

    // Galois conjugate (p - q*sqrt(m)) / d; an involution, identity on rationals.
    QuadValue star() const;
    // Double within 4 ulp of the exact real value.
    double to_float() const;
    // Canonical text "p/d+q/d*sqrt(m)" with zero terms and unit factors omitted.
    std::string to_string() const;

    QuadValue operator-() const;
    friend QuadValue operator+(const QuadValue& a, const QuadValue& b);
    friend QuadValue operator-(const QuadValue& a, const QuadValue& b);
    friend QuadValue operator*(const QuadValue& a, const QuadValue& b);
    friend QuadValue operator/(const QuadValue& a, const QuadValue& b);

    friend bool operator==(const QuadValue& a, const QuadValue& b) {
        return a.m_ == b.m_ && a.p_ == b.p_ && a.q_ == b.q_ && a.d_ == b.d_;
    }
    friend std::strong_ordering operator<=>(const QuadValue& a, const QuadValue& b);

private:
    BigInt p_, q_, d_;
    long m_;

    void canonicalize();
    // Shared radicand for an arithmetic result; throws DomainError on a mix of
    // two distinct irrational fields.
    static long join_radicand(const QuadValue& a, const QuadValue& b);
};

// Exact three-way comparison by real value: -1, 0, +1. Never uses floating
// point. Rationals compare against either field; two distinct irrational
// radicands are a domain error.
int quad_cmp(const QuadValue& a, const QuadValue& b);

} // namespace braggkit
