#include "braggkit/exactnum.hpp"
#include "braggkit/errors.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cctype>
#include <cmath>

namespace braggkit {

namespace {

using HighFloat = boost::multiprecision::cpp_bin_float_100;

void validate_radicand(long m) {
    if (m == 0) return;
    if (m < 2)
        throw ValidationError("radicand must be 0 or a square-free integer > 1, got " +
                              std::to_string(m));
    for (long f = 2; f * f <= m; ++f)
        if (m % (f * f) == 0)
            throw ValidationError("radicand is not square-free: " + std::to_string(m));
}

} // namespace

QuadValue::QuadValue(BigInt p, BigInt q, BigInt d, long m)
    : p_(std::move(p)), q_(std::move(q)), d_(std::move(d)), m_(m) {
    canonicalize();
}

void QuadValue::canonicalize() {
    if (d_ == 0) throw ValidationError("zero denominator");
    validate_radicand(m_);
    if (m_ == 0 && q_ != 0)
        throw ValidationError("nonzero sqrt coefficient with zero radicand");
    if (q_ == 0) m_ = 0;
    if (d_ < 0) {
        p_ = -p_;
        q_ = -q_;
        d_ = -d_;
    }
    BigInt g = gcd(gcd(abs(p_), abs(q_)), d_);
    if (g > 1) {
        p_ /= g;
        q_ /= g;
        d_ /= g;
    }
}

QuadValue QuadValue::rational(BigInt num, BigInt den) {
    return QuadValue(std::move(num), 0, std::move(den), 0);
}

QuadValue QuadValue::sqrt_of(long m) {
    return QuadValue(0, 1, 1, m);
}

QuadValue QuadValue::from_double(double x) {
    if (!std::isfinite(x)) throw ValidationError("non-finite double");
    if (x == 0.0) return QuadValue();
    int e = 0;
    double f = std::frexp(x, &e);
    auto mant = static_cast<long long>(std::ldexp(f, 53));
    e -= 53;
    BigInt two_abs_e = pow(BigInt(2), static_cast<unsigned>(e >= 0 ? e : -e));
    if (e >= 0) return QuadValue(BigInt(mant) * two_abs_e, 0, 1, 0);
    return QuadValue(BigInt(mant), 0, two_abs_e, 0);
}

int QuadValue::sign() const {
    int sp = p_ == 0 ? 0 : (p_ < 0 ? -1 : 1);
    if (q_ == 0) return sp;
    int sq = q_ < 0 ? -1 : 1;
    if (sp == 0) return sq;
    if (sp == sq) return sp;
    // Opposite pulls: the sign is decided by p^2 versus q^2 m.
    BigInt lhs = p_ * p_;
    BigInt rhs = q_ * q_ * m_;
    if (lhs == rhs) return 0;
    return lhs > rhs ? sp : sq;
}

QuadValue QuadValue::star() const {
    return QuadValue(p_, -q_, d_, m_);
}

double QuadValue::to_float() const {
    HighFloat v(p_);
    if (q_ != 0) v += HighFloat(q_) * sqrt(HighFloat(m_));
    v /= HighFloat(d_);
    return v.convert_to<double>();
}

long QuadValue::join_radicand(const QuadValue& a, const QuadValue& b) {
    if (a.m_ == b.m_ || b.m_ == 0) return a.m_;
    if (a.m_ == 0) return b.m_;
    throw DomainError("mixed radicands: sqrt(" + std::to_string(a.m_) + ") vs sqrt(" +
                      std::to_string(b.m_) + ")");
}

QuadValue QuadValue::operator-() const {
    return QuadValue(-p_, -q_, d_, m_);
}

QuadValue operator+(const QuadValue& a, const QuadValue& b) {
    long m = QuadValue::join_radicand(a, b);
    return QuadValue(a.p_ * b.d_ + b.p_ * a.d_, a.q_ * b.d_ + b.q_ * a.d_, a.d_ * b.d_, m);
}

QuadValue operator-(const QuadValue& a, const QuadValue& b) {
    return a + (-b);
}

QuadValue operator*(const QuadValue& a, const QuadValue& b) {
    long m = QuadValue::join_radicand(a, b);
    return QuadValue(a.p_ * b.p_ + a.q_ * b.q_ * m, a.p_ * b.q_ + a.q_ * b.p_,
                     a.d_ * b.d_, m);
}

QuadValue operator/(const QuadValue& a, const QuadValue& b) {
    if (b.is_zero()) throw DomainError("division by zero");
    long m = QuadValue::join_radicand(a, b);
    // 1/b = d*(p - q*sqrt(m)) / (p^2 - q^2 m); the denominator is nonzero
    // because sqrt(m) is irrational whenever q != 0.
    BigInt den = b.p_ * b.p_ - b.q_ * b.q_ * m;
    QuadValue inv(b.d_ * b.p_, -b.d_ * b.q_, den, m);
    return a * inv;
}

std::strong_ordering operator<=>(const QuadValue& a, const QuadValue& b) {
    int c = quad_cmp(a, b);
    if (c < 0) return std::strong_ordering::less;
    if (c > 0) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

int quad_cmp(const QuadValue& a, const QuadValue& b) {
    return (a - b).sign();
}

std::string QuadValue::to_string() const {
    std::string den = d_ == 1 ? "" : "/" + d_.str();
    if (q_ == 0) return p_.str() + den;
    std::string root = "sqrt(" + std::to_string(m_) + ")";
    BigInt qa = abs(q_);
    std::string coef = (qa == 1 && d_ == 1) ? "" : qa.str() + den + "*";
    if (p_ == 0) return (q_ < 0 ? "-" : "") + coef + root;
    return p_.str() + den + (q_ < 0 ? "-" : "+") + coef + root;
}

namespace {

struct TextCursor {
    const std::string& s;
    size_t pos = 0;

    bool done() const { return pos >= s.size(); }
    char peek() const { return done() ? '\0' : s[pos]; }
    bool eat(char c) {
        if (peek() != c) return false;
        ++pos;
        return true;
    }
    bool eat_word(const char* w) {
        size_t n = std::char_traits<char>::length(w);
        if (s.compare(pos, n, w) != 0) return false;
        pos += n;
        return true;
    }
    BigInt digits() {
        size_t start = pos;
        while (!done() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (pos == start) throw ValidationError("expected digits at offset " +
                                                std::to_string(start) + " in '" + s + "'");
        return BigInt(s.substr(start, pos - start));
    }
};

} // namespace

QuadValue QuadValue::parse(const std::string& text) {
    std::string compact;
    compact.reserve(text.size());
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) compact.push_back(c);
    if (compact.empty()) throw ValidationError("empty number text");

    TextCursor cur{compact};
    QuadValue total;
    bool first = true;
    while (!cur.done()) {
        int sgn = 1;
        if (cur.eat('+')) {
        } else if (cur.eat('-')) {
            sgn = -1;
        } else if (!first) {
            throw ValidationError("expected '+' or '-' at offset " +
                                  std::to_string(cur.pos) + " in '" + compact + "'");
        }
        BigInt num = 1, den = 1;
        bool is_sqrt = false;
        if (cur.eat_word("sqrt(")) {
            is_sqrt = true;
        } else {
            num = cur.digits();
            if (cur.eat('/')) den = cur.digits();
            if (cur.eat('*')) {
                if (!cur.eat_word("sqrt("))
                    throw ValidationError("expected sqrt( after '*' in '" + compact + "'");
                is_sqrt = true;
            }
        }
        QuadValue term;
        if (is_sqrt) {
            BigInt mb = cur.digits();
            if (!cur.eat(')'))
                throw ValidationError("unterminated sqrt( in '" + compact + "'");
            if (mb > std::numeric_limits<long>::max())
                throw ValidationError("radicand too large in '" + compact + "'");
            term = QuadValue(0, sgn * num, den, mb.convert_to<long>());
        } else {
            term = QuadValue(sgn * num, 0, den, 0);
        }
        total = total + term;
        first = false;
    }
    return total;
}

} // namespace braggkit
