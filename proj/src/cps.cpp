#include "braggkit/cps.hpp"
#include "braggkit/errors.hpp"

#include <algorithm>
#include <cmath>

namespace braggkit {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kEnumerationCap = 1e8;

const char* kind_name(WeightFn::Kind k) {
    switch (k) {
        case WeightFn::Kind::indicator: return "indicator";
        case WeightFn::Kind::tent: return "tent";
        case WeightFn::Kind::autoconv_step: return "autoconv_step";
    }
    return "?";
}

} // namespace

WeightFn make_weight(const std::string& kind, double halfwidth, double height) {
    if (!(halfwidth > 0.0)) throw ValidationError("weight halfwidth must be > 0");
    if (!(height >= 0.0)) throw ValidationError("weight height must be >= 0");
    WeightFn h;
    h.halfwidth = halfwidth;
    h.height = height;
    if (kind == "indicator") {
        h.kind = WeightFn::Kind::indicator;
        h.pd_certified = false;
    } else if (kind == "tent") {
        h.kind = WeightFn::Kind::tent;
        h.pd_certified = true;
    } else if (kind == "autoconv_step") {
        h.kind = WeightFn::Kind::autoconv_step;
        h.pd_certified = true;
    } else {
        throw ValidationError("unknown weight kind '" + kind + "'");
    }
    return h;
}

double weight_eval(const WeightFn& h, double t) {
    double a = std::abs(t);
    if (a > h.halfwidth) return 0.0;
    switch (h.kind) {
        case WeightFn::Kind::indicator: return h.height;
        case WeightFn::Kind::tent: return h.height * (1.0 - a / h.halfwidth);
        case WeightFn::Kind::autoconv_step: return h.height * (h.halfwidth - a);
    }
    return 0.0;
}

double weight_ft(const WeightFn& h, double k) {
    if (!h.pd_certified && h.kind != WeightFn::Kind::indicator)
        throw DomainError("no closed-form transform for this weight kind");
    double hw = h.halfwidth, H = h.height;
    switch (h.kind) {
        case WeightFn::Kind::indicator:
            if (k == 0.0) return 2.0 * H * hw;
            return H * std::sin(2.0 * kPi * k * hw) / (kPi * k);
        case WeightFn::Kind::tent: {
            if (k == 0.0) return H * hw;
            double s = std::sin(kPi * k * hw) / (kPi * k * hw);
            return H * hw * s * s;
        }
        case WeightFn::Kind::autoconv_step: {
            if (k == 0.0) return H * hw * hw;
            double s = std::sin(kPi * k * hw) / (kPi * k);
            return H * s * s;
        }
    }
    return 0.0;
}

GramReport check_pd_weight(const WeightFn& h, int sample_count) {
    if (sample_count < 2) throw DomainError("need at least 2 samples");
    if (sample_count > 256) throw CapacityError("sample count beyond 256");
    std::size_t n = static_cast<std::size_t>(sample_count);
    // Equally spaced samples spanning twice the support interval.
    double lo = -2.0 * h.halfwidth;
    double step = 4.0 * h.halfwidth / (sample_count - 1);
    std::vector<std::complex<double>> m(n * n);
    GramReport rep;
    rep.dimension = n;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double v = weight_eval(h, (lo + i * step) - (lo + j * step));
            m[i * n + j] = {v, 0.0};
            if (i == j) rep.trace += v;
        }
    rep.min_eigenvalue = hermitian_eigenvalues(m, n).front();
    rep.tolerance = 1e-8;
    rep.pass = rep.min_eigenvalue >= -rep.tolerance * rep.trace;
    return rep;
}

CPScheme::CPScheme(std::string name, long m, const QuadValue& v1_phys,
                   const QuadValue& v2_phys, Interval window)
    : name_(std::move(name)), m_(m), window_(window) {
    if (m_ != 0) QuadValue::sqrt_of(m_);  // validates square-freeness
    if (!(window_.lo < window_.hi))
        throw ValidationError("acceptance window must satisfy lo < hi");
    auto check_field = [&](const QuadValue& v) {
        if (v.m() != 0 && v.m() != m_)
            throw ValidationError("basis vector lies outside Q(sqrt(m))");
    };
    check_field(v1_phys);
    check_field(v2_phys);
    v1_ = {v1_phys, v1_phys.star()};
    v2_ = {v2_phys, v2_phys.star()};
    det_ = v1_.phys * v2_.internal - v2_.phys * v1_.internal;
    if (det_.is_zero()) throw ValidationError("singular lattice basis");
    // Physical projection must be injective; verified exactly on a coefficient box.
    for (long a = -20; a <= 20; ++a)
        for (long b = -20; b <= 20; ++b) {
            if (a == 0 && b == 0) continue;
            if ((QuadValue(a) * v1_.phys + QuadValue(b) * v2_.phys).is_zero())
                throw ValidationError("physical projection is not injective");
        }
}

CPScheme CPScheme::integer_lattice() {
    CPScheme s;
    s.name_ = "integer";
    s.m_ = 0;
    s.window_ = {-1.0, 1.0};
    s.trivial_ = true;
    s.v1_ = {QuadValue(1), QuadValue(0)};
    return s;
}

const LatticeVector& CPScheme::v2() const {
    if (trivial_) throw DomainError("degenerate scheme has a single generator");
    return v2_;
}

const QuadValue& CPScheme::det() const {
    if (trivial_) throw DomainError("degenerate scheme has no 2x2 determinant");
    return det_;
}

CPScheme build_scheme(const SchemeConfig& cfg) {
    std::string name = cfg.preset.empty() ? "custom" : cfg.preset;
    long m = 0;
    std::string v1_text, v2_text;
    Interval window{-1.0, 1.0};

    if (cfg.preset == "integer") {
        if (!cfg.m && !cfg.basis_v1 && !cfg.basis_v2 && !cfg.window_lo && !cfg.window_hi)
            return CPScheme::integer_lattice();
        throw ValidationError("integer preset takes no basis or window overrides");
    } else if (cfg.preset == "zroot2") {
        m = 2;
        v1_text = "1";
        v2_text = "sqrt(2)";
        window = {-1.0, 1.0};
    } else if (cfg.preset == "fibonacci") {
        m = 5;
        v1_text = "1";
        v2_text = "1/2+1/2*sqrt(5)";
        window = {-0.8090169943749475, 0.8090169943749475};
    } else if (cfg.preset.empty()) {
        if (!cfg.m || !cfg.basis_v1 || !cfg.basis_v2 || !cfg.window_lo || !cfg.window_hi)
            throw ValidationError(
                "custom scheme needs m, basis.v1, basis.v2, window.lo, window.hi");
    } else {
        throw ValidationError("unknown preset '" + cfg.preset + "'");
    }

    if (cfg.m) m = *cfg.m;
    if (cfg.basis_v1) v1_text = *cfg.basis_v1;
    if (cfg.basis_v2) v2_text = *cfg.basis_v2;
    if (cfg.window_lo) window.lo = *cfg.window_lo;
    if (cfg.window_hi) window.hi = *cfg.window_hi;

    return CPScheme(name, m, QuadValue::parse(v1_text), QuadValue::parse(v2_text), window);
}

WeightFn weight_from_config(const SchemeConfig& cfg, const CPScheme& s) {
    std::string kind =
        cfg.weight_kind.value_or(s.trivial_internal() ? "indicator" : "tent");
    double hw = cfg.weight_halfwidth.value_or(s.window().length() / 2.0);
    if (s.trivial_internal() && !cfg.weight_halfwidth) hw = 1.0;
    return make_weight(kind, hw, cfg.weight_height.value_or(1.0));
}

WeightedComb generate_model_comb(const CPScheme& s, const WeightFn& h, Interval interval) {
    std::string tag = s.name() + "+" + kind_name(h.kind);
    if (interval.empty()) return WeightedComb({}, interval, tag);

    std::vector<CombPoint> pts;
    if (s.trivial_internal()) {
        double w = weight_eval(h, 0.0);
        long lo = static_cast<long>(std::floor(interval.lo)) - 1;
        long hi = static_cast<long>(std::ceil(interval.hi)) + 1;
        if (double(hi) - double(lo) > kEnumerationCap)
            throw CapacityError("lattice enumeration exceeds the configured cap");
        for (long a = lo; a <= hi; ++a) {
            QuadValue x(a);
            if (interval_contains(interval, x)) pts.push_back({x, {w, 0.0}});
        }
        return WeightedComb(std::move(pts), interval, tag);
    }

    if (-h.halfwidth < s.window().lo || h.halfwidth > s.window().hi)
        throw ValidationError("weight support exceeds the acceptance window");

    // Coefficient bounds: image of the (physical, internal) corner rectangle
    // under the inverse basis matrix, padded for float slack.
    double v1p = s.v1().phys.to_float(), v1i = s.v1().internal.to_float();
    double v2p = s.v2().phys.to_float(), v2i = s.v2().internal.to_float();
    double det = s.det().to_float();
    double amin = 0, amax = 0, bmin = 0, bmax = 0;
    bool first = true;
    for (double P : {interval.lo, interval.hi})
        for (double S : {-h.halfwidth, h.halfwidth}) {
            double af = (v2i * P - v2p * S) / det;
            double bf = (v1p * S - v1i * P) / det;
            if (first) {
                amin = amax = af;
                bmin = bmax = bf;
                first = false;
            } else {
                amin = std::min(amin, af);
                amax = std::max(amax, af);
                bmin = std::min(bmin, bf);
                bmax = std::max(bmax, bf);
            }
        }
    long a0 = static_cast<long>(std::floor(amin)) - 2;
    long a1 = static_cast<long>(std::ceil(amax)) + 2;
    long b0 = static_cast<long>(std::floor(bmin)) - 2;
    long b1 = static_cast<long>(std::ceil(bmax)) + 2;
    double cells = (double(a1) - double(a0) + 1.0) * (double(b1) - double(b0) + 1.0);
    if (cells > kEnumerationCap)
        throw CapacityError("coefficient box exceeds the configured enumeration cap");

    Interval support{-h.halfwidth, h.halfwidth};
    for (long b = b0; b <= b1; ++b) {
        QuadValue phys = QuadValue(a0) * s.v1().phys + QuadValue(b) * s.v2().phys;
        QuadValue internal = QuadValue(a0) * s.v1().internal + QuadValue(b) * s.v2().internal;
        for (long a = a0; a <= a1; ++a) {
            if (interval_contains(support, internal) && interval_contains(interval, phys)) {
                double w = weight_eval(h, internal.to_float());
                pts.push_back({phys, {w, 0.0}});
            }
            phys = phys + s.v1().phys;
            internal = internal + s.v1().internal;
        }
    }
    return WeightedComb(std::move(pts), interval, tag);
}

std::array<LatticeVector, 2> dual_basis(const CPScheme& s) {
    if (s.trivial_internal())
        throw DomainError("degenerate scheme has no planar dual basis");
    const QuadValue& det = s.det();
    LatticeVector w1{s.v2().internal / det, -(s.v2().phys / det)};
    LatticeVector w2{-(s.v1().internal / det), s.v1().phys / det};
    return {w1, w2};
}

std::vector<QuadValue> dual_candidates(const CPScheme& s, int coeff_bound) {
    if (coeff_bound < 1) throw DomainError("coefficient bound must be >= 1");
    std::vector<QuadValue> ks;
    if (s.trivial_internal()) {
        for (int p = -coeff_bound; p <= coeff_bound; ++p) ks.push_back(QuadValue(p));
        return ks;
    }
    auto dual = dual_basis(s);
    for (int p = -coeff_bound; p <= coeff_bound; ++p)
        for (int q = -coeff_bound; q <= coeff_bound; ++q)
            ks.push_back(QuadValue(p) * dual[0].phys + QuadValue(q) * dual[1].phys);
    std::sort(ks.begin(), ks.end(),
              [](const QuadValue& a, const QuadValue& b) { return quad_cmp(a, b) < 0; });
    ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
    return ks;
}

} // namespace braggkit
