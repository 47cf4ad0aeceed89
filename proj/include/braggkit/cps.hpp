#pragma once

#include "braggkit/comb.hpp"
#include "braggkit/exactnum.hpp"
#include "braggkit/gram.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace braggkit {

// Compactly supported weight function on the internal space, centered at 0.
// tent and autoconv_step are autoconvolutions of steps, hence positive
// definite; the raw indicator is not.
struct WeightFn {
    enum class Kind { indicator, tent, autoconv_step };

    Kind kind = Kind::tent;
    double halfwidth = 1.0;  // support = [-halfwidth, halfwidth]
    double height = 1.0;
    bool pd_certified = true;
};

// kind is one of "indicator", "tent", "autoconv_step".
WeightFn make_weight(const std::string& kind, double halfwidth, double height);

// indicator: height on the support. tent: height*(1 - |t|/halfwidth).
// autoconv_step: height*(halfwidth - |t|), the raw autoconvolution of a step
// of width halfwidth, apex height*halfwidth.
double weight_eval(const WeightFn& h, double t);

// Closed-form transform integral h(t) e^{-2 pi i k t} dt (real, since h is
// even): sinc family for the indicator, squared-sinc family for the
// autoconvolution kinds.
double weight_ft(const WeightFn& h, double k);

// Positive-definiteness evidence: eigenvalues of [h(t_i - t_j)] on
// sample_count equally spaced points spanning twice the support interval.
// pass iff min eigenvalue >= -1e-8 * trace.
GramReport check_pd_weight(const WeightFn& h, int sample_count);

// One lattice generator: physical projection and its Galois conjugate.
struct LatticeVector {
    QuadValue phys;
    QuadValue internal;
};

// Planar cut-and-project scheme over Q(sqrt(m)): lattice {a*v1 + b*v2},
// physical projection first coordinate, internal second, acceptance window
// in internal space. The degenerate integer lattice has a trivial
// (single-point) internal space and one generator.
class CPScheme {
public:
    CPScheme(std::string name, long m, const QuadValue& v1_phys, const QuadValue& v2_phys,
             Interval window);

    static CPScheme integer_lattice();

    const std::string& name() const { return name_; }
    long m() const { return m_; }
    const Interval& window() const { return window_; }
    bool trivial_internal() const { return trivial_; }
    const LatticeVector& v1() const { return v1_; }
    const LatticeVector& v2() const;
    // v1.phys * v2.internal - v2.phys * v1.internal, nonzero by construction.
    const QuadValue& det() const;

private:
    CPScheme() = default;

    std::string name_;
    long m_ = 0;
    Interval window_{-1.0, 1.0};
    bool trivial_ = false;
    LatticeVector v1_, v2_;
    QuadValue det_;
};

// Key-value scheme description; unset fields fall back to preset defaults.
struct SchemeConfig {
    std::string preset;  // "integer", "zroot2", "fibonacci", or "" for custom
    std::optional<long> m;
    std::optional<std::string> basis_v1, basis_v2;  // physical parts, exactnum text
    std::optional<double> window_lo, window_hi;
    std::optional<std::string> weight_kind;
    std::optional<double> weight_halfwidth, weight_height;
};

// Presets: "integer" (degenerate Z); "zroot2" (basis (1,1),(sqrt2,-sqrt2),
// m=2, window [-1,1]); "fibonacci" (basis (1,1),(tau,tau'), m=5, window
// [-tau/2, tau/2]). Explicit config keys override preset fields.
CPScheme build_scheme(const SchemeConfig& cfg);

// Weight resolved against the scheme: kind defaults to indicator for the
// degenerate lattice and tent otherwise; halfwidth defaults to half the
// window length.
WeightFn weight_from_config(const SchemeConfig& cfg, const CPScheme& s);

// All lattice points with physical part in the interval and internal part in
// supp(h), weighted by h(internal). Exhaustive coefficient-box enumeration
// with bounds from the inverse basis matrix; membership decided exactly.
WeightedComb generate_model_comb(const CPScheme& s, const WeightFn& h, Interval interval);

// Dual lattice generators: columns of the inverse of [[v1p, v1i], [v2p, v2i]],
// so that <v_i, w_j> = delta_ij exactly.
std::array<LatticeVector, 2> dual_basis(const CPScheme& s);

// Physical projections of dual lattice points with coefficients up to
// coeff_bound in absolute value, deduplicated and sorted.
std::vector<QuadValue> dual_candidates(const CPScheme& s, int coeff_bound);

} // namespace braggkit
