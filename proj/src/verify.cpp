#include "braggkit/verify.hpp"

#include "braggkit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <random>

namespace braggkit {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi_v<double>;

bool finalize(VerifyReport& rep) {
    rep.pass = true;
    for (const auto& c : rep.checks) rep.pass = rep.pass && c.pass;
    rep.runtime_ms = 0;
    return rep.pass;
}

// Matched product-Fejer resummation over the complete dual coefficient box:
// est(z) = (1/P) sum_{|p|,|q|<P} (1-|p|/P)(1-|q|/P) I(p w1 + q w2) cos(2 pi k z).
struct BoxResummer {
    std::vector<double> ks;
    std::vector<double> coeffs;  // Fejer weight / P per box point

    BoxResummer(const CPScheme& scheme, int bound) {
        if (bound < 1) throw ValidationError("coefficient bound must be at least 1");
        auto duals = dual_basis(scheme);
        double w1 = duals[0].phys.to_float();
        double w2 = duals[1].phys.to_float();
        double P = bound;
        for (int p = -bound + 1; p <= bound - 1; ++p)
            for (int q = -bound + 1; q <= bound - 1; ++q) {
                ks.push_back(p * w1 + q * w2);
                coeffs.push_back((1.0 - std::abs(p) / P) * (1.0 - std::abs(q) / P) / P);
            }
    }

    // Per-frequency intensities of a comb at the last patch size.
    std::vector<double> intensities(const WeightedComb& c, const VanHoveSpec& spec) const {
        WeightedComb patch = restrict_comb(c, spec.window(spec.last()));
        std::vector<double> xs;
        std::vector<std::complex<double>> ws;
        for (const auto& p : patch.points()) {
            xs.push_back(p.x.to_float());
            ws.push_back(p.w);
        }
        double vol = spec.volume(spec.last());
        std::vector<double> out(ks.size());
        for (std::size_t i = 0; i < ks.size(); ++i) {
            std::complex<double> s{0.0, 0.0};
            for (std::size_t j = 0; j < xs.size(); ++j)
                s += ws[j] * std::polar(1.0, -kTwoPi * ks[i] * xs[j]);
            out[i] = std::norm(s / vol);
        }
        return out;
    }

    double eval(const std::vector<double>& intensity, double z) const {
        double s = 0.0;
        for (std::size_t i = 0; i < ks.size(); ++i)
            s += coeffs[i] * intensity[i] * std::cos(kTwoPi * ks[i] * z);
        return s;
    }
};

std::vector<QuadValue> gram_samples(const WeightedComb& c, double radius,
                                    std::size_t cap) {
    std::vector<QuadValue> pts;
    for (const auto& p : c.points()) {
        if (pts.size() == cap) break;
        if (interval_contains({0.0, radius}, p.x)) pts.push_back(p.x);
    }
    return pts;
}

} // namespace

std::string to_string(SubcombRule rule) {
    switch (rule) {
    case SubcombRule::identity: return "identity";
    case SubcombRule::internal_half: return "internal-half";
    default: return "bernoulli";
    }
}

WeightedComb bernoulli_subcomb(const WeightedComb& c, std::uint64_t seed) {
    std::mt19937_64 eng(seed);
    std::vector<CombPoint> kept;
    for (const auto& p : c.points()) {
        double u = (eng() >> 11) * 0x1.0p-53;
        if (u < 0.5) kept.push_back(p);
    }
    return WeightedComb(std::move(kept), c.window(), c.generator_tag() + "|bernoulli");
}

VerifyReport verify_ordering(const WeightedComb& omega_prime, const WeightedComb& omega,
                             double C, const VanHoveSpec& spec, double radius) {
    if (compare_combs(omega_prime, omega, C) != CompareVerdict::below)
        throw ScenarioError("verify_ordering: sub-comb is not below the reference");
    VerifyReport rep;
    rep.theorem = "L4";
    rep.scenario = omega_prime.generator_tag() + " <= " + std::to_string(C) + " * " +
                   omega.generator_tag();
    for (int n : spec.sizes) {
        Autocorrelation gp = autocorrelation(omega_prime, spec, n, radius);
        Autocorrelation g = autocorrelation(omega, spec, n, radius);
        OrderReport ord = order_check(gp, g, C * C);
        rep.checks.push_back(
            {"order:n=" + std::to_string(n), ord.pass, ord.max_violation, 1e-9});
    }
    finalize(rep);
    return rep;
}

VerifyReport verify_sandwich(const WeightedComb& omega_prime, const WeightedComb& omega,
                             double C, const VanHoveSpec& spec, double radius) {
    // below implies the sandwich (0 <= omega' <= C omega), and compare_combs
    // reports it with priority.
    CompareVerdict verdict = compare_combs(omega_prime, omega, C);
    if (verdict != CompareVerdict::sandwich && verdict != CompareVerdict::below)
        throw ScenarioError("verify_sandwich: sub-comb is not sandwiched");
    VerifyReport rep;
    rep.theorem = "sandwich";
    rep.scenario = "|" + omega_prime.generator_tag() + "| <= " + std::to_string(C) +
                   " * " + omega.generator_tag();
    for (int n : spec.sizes) {
        Autocorrelation gp = autocorrelation(omega_prime, spec, n, radius);
        Autocorrelation g = autocorrelation(omega, spec, n, radius);
        // Both inequalities at once: |gamma'(z)| - C^2 gamma(z) <= 0, over the
        // union of supports.
        double worst = -std::numeric_limits<double>::infinity();
        for (const auto& e : gp.entries())
            worst = std::max(worst,
                             std::abs(e.value.real()) - C * C * g.value_at(e.z).real());
        for (const auto& e : g.entries())
            worst = std::max(worst, std::abs(gp.value_at(e.z).real()) -
                                        C * C * e.value.real());
        rep.checks.push_back({"sandwich:n=" + std::to_string(n), worst <= 1e-9, worst, 1e-9});
    }
    finalize(rep);
    return rep;
}

VerifyReport verify_theorem_L1(const CPScheme& scheme, const WeightFn& weight,
                               SubcombRule rule, const VerifyParams& params) {
    WeightedComb omega = generate_model_comb(scheme, weight, params.interval);

    WeightedComb omega_prime = omega;
    if (rule == SubcombRule::internal_half) {
        Interval win = scheme.window();
        Interval left{win.lo, 0.5 * (win.lo + win.hi)};
        std::vector<CombPoint> kept;
        for (const auto& p : omega.points())
            if (interval_contains(left, p.x.star())) kept.push_back(p);
        omega_prime = WeightedComb(std::move(kept), omega.window(),
                                   omega.generator_tag() + "|internal-half");
    } else if (rule == SubcombRule::bernoulli) {
        omega_prime = bernoulli_subcomb(omega, params.seed);
    }

    const double C = 1.0;
    if (compare_combs(omega_prime, omega, C) != CompareVerdict::below)
        throw ScenarioError("verify_theorem_L1: rule produced a comb not below the model");

    VerifyReport rep;
    rep.theorem = "L1";
    rep.scenario = scheme.name() + ":" + to_string(rule);
    rep.seed = params.seed;

    int n_last = params.spec.last();
    Autocorrelation gp = autocorrelation(omega_prime, params.spec, n_last, params.radius);

    BoxResummer box(scheme, params.coeff_bound);
    std::vector<double> ip = box.intensities(omega_prime, params.spec);
    std::vector<double> iref = box.intensities(omega, params.spec);

    ValueTable sap;
    double min_value = std::numeric_limits<double>::infinity();
    double max_excess = -std::numeric_limits<double>::infinity();
    for (const auto& e : gp.entries()) {
        double z = e.z.to_float();
        double v = box.eval(ip, z);
        double ref = box.eval(iref, z);
        min_value = std::min(min_value, v);
        max_excess = std::max(max_excess, v - C * C * ref);
        sap.entries.push_back({e.z, {v, 0.0}});
    }
    rep.checks.push_back({"pp_nonnegative", min_value >= -1e-6, min_value, 1e-6});
    rep.checks.push_back({"pp_dominated", max_excess <= 1e-6, max_excess, 1e-6});

    std::vector<QuadValue> samples = gram_samples(omega_prime, params.radius, 32);
    GramReport gram = gram_psd(sap, samples, params.gram_tolerance);
    rep.checks.push_back({"pp_gram_psd", gram.pass, gram.min_eigenvalue,
                          params.gram_tolerance * gram.trace});

    PointSet diffs = difference_set(restrict_comb(omega, params.spec.window(n_last)),
                                    params.radius);
    std::size_t outside = 0;
    for (const auto& e : sap.entries)
        if (!diffs.contains(e.z)) ++outside;
    rep.checks.push_back(
        {"pp_support_in_difference_set", outside == 0, double(outside), 0.0});

    finalize(rep);
    return rep;
}

VerifyReport verify_T1(const CPScheme& scheme, const WeightFn& weight,
                       const WeightedComb& omega_prime, double C1,
                       const Interval& freq_window, const VerifyParams& params) {
    if (!(C1 > 0.0)) throw ValidationError("verify_T1: threshold must be positive");
    WeightedComb omega = generate_model_comb(scheme, weight, omega_prime.window());

    VerifyReport rep;
    rep.theorem = "T1";
    rep.scenario = scheme.name() + ":" + omega_prime.generator_tag();
    rep.seed = params.seed;

    // Support of omega' must lie in the model set.
    for (const auto& p : omega_prime.points())
        if (omega.weight_at(p.x) == std::complex<double>(0.0, 0.0))
            throw ScenarioError("verify_T1: sub-comb point outside the model set");

    std::vector<FreqCandidate> cands;
    for (const auto& k : dual_candidates(scheme, params.coeff_bound)) {
        double kf = k.to_float();
        if (kf >= freq_window.lo && kf <= freq_window.hi)
            cands.push_back(exact_candidate(k));
    }
    if (cands.empty())
        throw ScenarioError("verify_T1: no dual candidates in the frequency window");

    SpectrumEstimate sub_se = bragg_scan(omega_prime, cands, params.spec);
    SpectrumEstimate full_se = bragg_scan(omega, cands, params.spec);
    double gap_bound = 2.0 * full_se.max_gap;

    int n_last = params.spec.last();
    Autocorrelation gp = autocorrelation(omega_prime, params.spec, n_last, params.radius);
    ValueTable pp, residual;
    if (sub_se.bragg_count() > 0) {
        Decomposition d = decompose(gp, sub_se);
        pp = std::move(d.gamma_S);
        residual = std::move(d.gamma_0);
    } else {
        residual.entries = gp.entries();  // no detected peaks: everything residual
    }

    PointSet diffs = difference_set(restrict_comb(omega, params.spec.window(n_last)),
                                    params.radius);
    std::size_t pp_out = 0, res_out = 0;
    for (const auto& e : pp.entries)
        if (!diffs.contains(e.z)) ++pp_out;
    for (const auto& e : residual.entries)
        if (!diffs.contains(e.z)) ++res_out;
    rep.checks.push_back(
        {"pp_support_in_difference_set", pp_out == 0, double(pp_out), 0.0});
    rep.checks.push_back(
        {"residual_support_in_difference_set", res_out == 0, double(res_out), 0.0});

    bool empty_or_dense =
        sub_se.bragg_count() == 0 || sub_se.max_gap <= gap_bound;
    rep.checks.push_back({"bragg_empty_or_relatively_dense", empty_or_dense,
                          sub_se.bragg_count() == 0 ? 0.0 : sub_se.max_gap, gap_bound});

    // Threshold set: a finite gap statistic promises a nonempty, relatively
    // dense bragg set.
    PointSet gamma_set = threshold_subset(omega_prime, C1);
    bool gate = false;
    double gamma_gap = 0.0;
    if (gamma_set.size() >= 2) {
        gamma_gap = max_gap(gamma_set);
        gate = std::isfinite(gamma_gap);
    }
    bool threshold_ok = !gate || (sub_se.bragg_count() > 0 && sub_se.max_gap <= gap_bound);
    rep.checks.push_back({"threshold_set_implies_bragg", threshold_ok,
                          gate ? sub_se.max_gap : 0.0, gap_bound});

    // Covering chain omega <= (C2/C1) omega' * delta_F on the patch.
    std::vector<QuadValue> lambda_pts;
    for (const auto& p : omega.points()) lambda_pts.push_back(p.x);
    PointSet lambda(lambda_pts, omega.window());
    PointSet offsets = covering_set(lambda, gamma_set);
    rep.checks.push_back({"lattice_covered_by_offsets", true,
                          double(offsets.size()), 0.0});

    double C2 = 0.0;
    for (const auto& p : omega.points()) C2 = std::max(C2, p.w.real());
    std::map<QuadValue, double, decltype([](const QuadValue& a, const QuadValue& b) {
                return quad_cmp(a, b) < 0;
            })>
        conv;
    for (const auto& g : gamma_set.coords()) {
        double wg = omega_prime.weight_at(g).real();
        for (const auto& f : offsets.coords()) conv[g + f] += wg;
    }
    double chain_worst = -std::numeric_limits<double>::infinity();
    for (const auto& p : omega.points()) {
        auto it = conv.find(p.x);
        double rhs = it == conv.end() ? 0.0 : (C2 / C1) * it->second;
        chain_worst = std::max(chain_worst, p.w.real() - rhs);
    }
    rep.checks.push_back(
        {"threshold_comparison_chain", chain_worst <= 1e-9, chain_worst, 1e-9});

    finalize(rep);
    return rep;
}

VerifyReport verify_P1(const WeightedComb& omega, const WeightedComb& omega_prime,
                       const std::vector<FreqCandidate>& candidates,
                       const VanHoveSpec& spec, const Interval& freq_window) {
    if (compare_combs(omega, omega_prime, 1.0) != CompareVerdict::below)
        throw ScenarioError("verify_P1: reference comb is not below the enlarged comb");

    std::vector<FreqCandidate> cands;
    for (const auto& c : candidates)
        if (c.k >= freq_window.lo && c.k <= freq_window.hi) cands.push_back(c);
    if (cands.empty()) throw ScenarioError("verify_P1: no candidates in the window");

    SpectrumEstimate base = bragg_scan(omega, cands, spec);
    SpectrumEstimate enlarged = bragg_scan(omega_prime, cands, spec);
    double base_mass = 0.0, enlarged_mass = 0.0;
    for (const auto& e : base.entries)
        if (e.cls == PeakClass::bragg) base_mass += e.intensity_limit;
    for (const auto& e : enlarged.entries)
        if (e.cls == PeakClass::bragg) enlarged_mass += e.intensity_limit;

    VerifyReport rep;
    rep.theorem = "P1";
    rep.scenario = omega.generator_tag() + " <= " + omega_prime.generator_tag();
    rep.checks.push_back({"bragg_mass_retained", enlarged_mass >= 0.95 * base_mass,
                          enlarged_mass, 0.95 * base_mass});
    finalize(rep);
    return rep;
}

} // namespace braggkit
