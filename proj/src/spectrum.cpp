#include "braggkit/spectrum.hpp"

#include "braggkit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <thread>

namespace braggkit {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi_v<double>;

// Patch flattened to floats for the inner exponential sums.
struct FlatPatch {
    double volume = 0.0;
    std::vector<double> xs;
    std::vector<std::complex<double>> ws;
};

FlatPatch flatten(const WeightedComb& c, const VanHoveSpec& spec, int n) {
    if (n <= 0) throw DomainError("patch size must be positive");
    WeightedComb patch = restrict_comb(c, spec.window(n));
    FlatPatch fp;
    fp.volume = spec.volume(n);
    fp.xs.reserve(patch.size());
    fp.ws.reserve(patch.size());
    for (const auto& p : patch.points()) {
        fp.xs.push_back(p.x.to_float());
        fp.ws.push_back(p.w);
    }
    return fp;
}

std::complex<double> patch_coefficient(const FlatPatch& fp, double k) {
    std::complex<double> s{0.0, 0.0};
    for (std::size_t i = 0; i < fp.xs.size(); ++i)
        s += fp.ws[i] * std::polar(1.0, -kTwoPi * k * fp.xs[i]);
    return s / fp.volume;
}

int scan_thread_count(std::size_t work_items) {
    const char* env = std::getenv("BRAGG_THREADS");
    long t = 1;
    if (env) {
        char* end = nullptr;
        t = std::strtol(env, &end, 10);
        if (end == env || t < 0) {
            t = 1;
        } else if (t == 0) {
            t = static_cast<long>(std::thread::hardware_concurrency());
            if (t <= 0) t = 1;
        }
    }
    t = std::min<long>(t, 64);
    t = std::min<long>(t, static_cast<long>(work_items));
    return static_cast<int>(std::max<long>(t, 1));
}

} // namespace

std::string to_string(PeakClass cls) {
    switch (cls) {
    case PeakClass::bragg: return "bragg";
    case PeakClass::continuous: return "continuous";
    default: return "undecided";
    }
}

std::string to_string(CandidateOrigin origin) {
    switch (origin) {
    case CandidateOrigin::dual: return "dual";
    case CandidateOrigin::refined: return "refined";
    default: return "grid";
    }
}

FreqCandidate exact_candidate(const QuadValue& k, CandidateOrigin origin) {
    FreqCandidate fc;
    fc.k = k.to_float();
    fc.has_exact = true;
    fc.exact = k;
    fc.origin = origin;
    return fc;
}

FreqCandidate float_candidate(double k, CandidateOrigin origin) {
    FreqCandidate fc;
    fc.k = k;
    fc.origin = origin;
    return fc;
}

std::size_t SpectrumEstimate::bragg_count() const {
    std::size_t n = 0;
    for (const auto& e : entries)
        if (e.cls == PeakClass::bragg) ++n;
    return n;
}

bool ValueTable::has(const QuadValue& z) const {
    auto it = std::lower_bound(entries.begin(), entries.end(), z,
                               [](const AutocorrEntry& e, const QuadValue& v) {
                                   return quad_cmp(e.z, v) < 0;
                               });
    return it != entries.end() && it->z == z;
}

std::complex<double> ValueTable::value_at(const QuadValue& z) const {
    auto it = std::lower_bound(entries.begin(), entries.end(), z,
                               [](const AutocorrEntry& e, const QuadValue& v) {
                                   return quad_cmp(e.z, v) < 0;
                               });
    if (it == entries.end() || !(it->z == z)) return {0.0, 0.0};
    return it->value;
}

double ValueTable::max_abs() const {
    double m = 0.0;
    for (const auto& e : entries) m = std::max(m, std::abs(e.value));
    return m;
}

std::complex<double> fb_coefficient(const WeightedComb& c, double k,
                                    const VanHoveSpec& spec, int n) {
    return patch_coefficient(flatten(c, spec, n), k);
}

std::complex<double> fb_coefficient(const WeightedComb& c, const QuadValue& k,
                                    const VanHoveSpec& spec, int n) {
    return fb_coefficient(c, k.to_float(), spec, n);
}

std::vector<double> intensity_profile(const WeightedComb& c, double k,
                                      const VanHoveSpec& spec) {
    std::vector<double> out;
    out.reserve(spec.sizes.size());
    for (int n : spec.sizes) out.push_back(std::norm(fb_coefficient(c, k, spec, n)));
    return out;
}

PeakClass classify_peak(const std::vector<double>& profile, double epsilon,
                        double delta_rel) {
    if (profile.size() < 3)
        throw ValidationError("classify_peak: profile needs at least three sizes");
    double last = profile[profile.size() - 1];
    double prev = profile[profile.size() - 2];
    double prev2 = profile[profile.size() - 3];
    if (last > epsilon && std::abs(last - prev) <= delta_rel * last)
        return PeakClass::bragg;
    if (last <= 0.6 * prev && prev <= 0.6 * prev2) return PeakClass::continuous;
    return PeakClass::undecided;
}

SpectrumEstimate bragg_scan(const WeightedComb& c,
                            const std::vector<FreqCandidate>& candidates,
                            const VanHoveSpec& spec) {
    return bragg_scan(c, candidates, spec, 1e-3, 0.05);
}

SpectrumEstimate bragg_scan(const WeightedComb& c,
                            const std::vector<FreqCandidate>& candidates,
                            const VanHoveSpec& spec, double epsilon_scale,
                            double delta_rel) {
    if (candidates.empty()) throw ValidationError("bragg_scan: no candidates");
    if (!(epsilon_scale >= 0.0) || !(delta_rel >= 0.0))
        throw ValidationError("bragg_scan: thresholds must be nonnegative");
    if (spec.sizes.size() < 3)
        throw ValidationError("bragg_scan: needs at least three patch sizes");

    std::vector<FlatPatch> patches;
    patches.reserve(spec.sizes.size());
    for (int n : spec.sizes) patches.push_back(flatten(c, spec, n));

    SpectrumEstimate se;
    se.spec = spec;
    se.entries.resize(candidates.size());
    auto eval_range = [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            SpectrumEntry& e = se.entries[i];
            e.candidate = candidates[i];
            e.intensities.reserve(patches.size());
            for (const auto& fp : patches)
                e.intensities.push_back(std::norm(patch_coefficient(fp, e.candidate.k)));
        }
    };

    const std::size_t m = candidates.size();
    int threads = scan_thread_count(m);
    if (threads <= 1) {
        eval_range(0, m);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (int t = 0; t < threads; ++t) {
            std::size_t lo = m * t / threads;
            std::size_t hi = m * (t + 1) / threads;
            pool.emplace_back(eval_range, lo, hi);
        }
        for (auto& th : pool) th.join();
    }

    double max_last = 0.0;
    for (const auto& e : se.entries) max_last = std::max(max_last, e.intensities.back());
    se.epsilon = epsilon_scale * max_last;
    se.delta_rel = delta_rel;
    for (auto& e : se.entries) {
        e.cls = classify_peak(e.intensities, se.epsilon, se.delta_rel);
        if (e.cls == PeakClass::bragg) e.intensity_limit = e.intensities.back();
    }

    std::stable_sort(se.entries.begin(), se.entries.end(),
                     [](const SpectrumEntry& a, const SpectrumEntry& b) {
                         return a.candidate.k < b.candidate.k;
                     });

    if (se.bragg_count() > 0) {
        double lo = se.entries.front().candidate.k;
        double hi = se.entries.back().candidate.k;
        double prev = lo;
        double gap = 0.0;
        for (const auto& e : se.entries)
            if (e.cls == PeakClass::bragg) {
                gap = std::max(gap, e.candidate.k - prev);
                prev = e.candidate.k;
            }
        se.max_gap = std::max(gap, hi - prev);
    }
    return se;
}

double refine_peak(const WeightedComb& c, double k0, double radius,
                   const VanHoveSpec& spec) {
    if (!(radius > 0.0)) throw DomainError("refine_peak: radius must be positive");
    FlatPatch fp = flatten(c, spec, spec.last());
    auto intensity = [&](double k) { return std::norm(patch_coefficient(fp, k)); };

    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = k0 - radius;
    double b = k0 + radius;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = intensity(x1);
    double f2 = intensity(x2);
    while (b - a > 1e-9) {
        if (f1 > f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = intensity(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = intensity(x2);
        }
    }
    double best = 0.5 * (a + b);
    return intensity(best) > intensity(k0) ? best : k0;
}

std::complex<double> sap_resum(const SpectrumEstimate& se, const QuadValue& z) {
    double zf = z.to_float();
    std::complex<double> s{0.0, 0.0};
    bool any = false;
    for (const auto& e : se.entries)
        if (e.cls == PeakClass::bragg) {
            any = true;
            s += e.intensity_limit * std::polar(1.0, kTwoPi * e.candidate.k * zf);
        }
    if (!any) throw EmptySpectrumError("sap_resum: spectrum has no bragg entries");
    return s;
}

Decomposition decompose(const Autocorrelation& a, const SpectrumEstimate& se) {
    if (a.n() != se.spec.last())
        throw DomainError("decompose: autocorrelation size does not match the spectrum");
    std::vector<std::pair<double, double>> peaks;  // (k, I_inf)
    double cutoff = 0.0;
    for (const auto& e : se.entries)
        if (e.cls == PeakClass::bragg) {
            peaks.emplace_back(e.candidate.k, e.intensity_limit);
            cutoff = std::max(cutoff, std::abs(e.candidate.k));
        }
    if (peaks.empty()) throw EmptySpectrumError("decompose: spectrum has no bragg entries");

    Decomposition d;
    d.cutoff = cutoff;
    d.gamma_S.entries.reserve(a.entries().size());
    d.gamma_0.entries.reserve(a.entries().size());
    for (const auto& e : a.entries()) {
        double zf = e.z.to_float();
        std::complex<double> s{0.0, 0.0};
        for (const auto& [k, intensity] : peaks) {
            double fejer = cutoff > 0.0 ? 1.0 - std::abs(k) / cutoff : 1.0;
            s += fejer * intensity * std::polar(1.0, kTwoPi * k * zf);
        }
        if (cutoff > 0.0) s /= cutoff;
        d.gamma_S.entries.push_back({e.z, s});
        d.gamma_0.entries.push_back({e.z, e.value - s});
    }
    return d;
}

GramReport gram_psd(const ValueTable& values,
                    const std::vector<QuadValue>& sample_points,
                    double tolerance_factor) {
    if (sample_points.empty()) throw ValidationError("gram_psd: no sample points");
    if (sample_points.size() > 64)
        throw CapacityError("gram_psd: matrix dimension capped at 64");
    if (tolerance_factor < 0.0)
        throw ValidationError("gram_psd: tolerance factor must be nonnegative");

    const QuadValue zero;
    for (const auto& e : values.entries) {
        if (std::abs(e.value) <= 1e-9) continue;
        std::complex<double> mirror = values.value_at(zero - e.z);
        if (std::abs(mirror - std::conj(e.value)) > 1e-9)
            throw DomainError("gram_psd: table is not Hermitian");
    }

    const std::size_t n = sample_points.size();
    std::vector<std::complex<double>> m(n * n);
    GramReport rep;
    rep.dimension = n;
    rep.tolerance = tolerance_factor;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            QuadValue diff = sample_points[i] - sample_points[j];
            if (!values.has(diff)) rep.missing_entries = true;
            std::complex<double> v = values.value_at(diff);
            m[i * n + j] = v;
            if (i == j) rep.trace += v.real();
        }
    rep.min_eigenvalue = hermitian_eigenvalues(m, n).front();
    rep.pass = rep.min_eigenvalue >= -tolerance_factor * rep.trace;
    return rep;
}

} // namespace braggkit
