#include "braggkit/autocorr.hpp"
#include "braggkit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace braggkit {

Autocorrelation::Autocorrelation(std::vector<AutocorrEntry> entries, int n, double volume,
                                 double radius, std::string source_tag)
    : entries_(std::move(entries)), n_(n), volume_(volume), radius_(radius),
      tag_(std::move(source_tag)) {
    std::sort(entries_.begin(), entries_.end(),
              [](const AutocorrEntry& a, const AutocorrEntry& b) {
                  return quad_cmp(a.z, b.z) < 0;
              });
    for (std::size_t i = 0; i + 1 < entries_.size(); ++i)
        if (entries_[i].z == entries_[i + 1].z)
            throw ValidationError("duplicate autocorrelation coordinate");

    auto find = [&](const QuadValue& z) -> AutocorrEntry* {
        auto it = std::lower_bound(entries_.begin(), entries_.end(), z,
                                   [](const AutocorrEntry& e, const QuadValue& v) {
                                       return quad_cmp(e.z, v) < 0;
                                   });
        return (it != entries_.end() && it->z == z) ? &*it : nullptr;
    };

    for (auto& e : entries_) {
        int s = e.z.sign();
        if (s == 0) {
            if (std::abs(e.value.imag()) > 1e-9)
                throw ValidationError("autocorrelation mass at 0 is not real");
            e.value = {e.value.real(), 0.0};
            if (e.value.real() < -1e-9)
                throw ValidationError("autocorrelation mass at 0 is negative");
        } else if (s > 0) {
            AutocorrEntry* mirror = find(-e.z);
            if (!mirror) throw ValidationError("autocorrelation support is asymmetric");
            if (std::abs(mirror->value - std::conj(e.value)) > 1e-9)
                throw ValidationError("autocorrelation is not Hermitian");
            mirror->value = std::conj(e.value);
        }
    }
}

bool Autocorrelation::has(const QuadValue& z) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), z,
                               [](const AutocorrEntry& e, const QuadValue& v) {
                                   return quad_cmp(e.z, v) < 0;
                               });
    return it != entries_.end() && it->z == z;
}

std::complex<double> Autocorrelation::value_at(const QuadValue& z) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), z,
                               [](const AutocorrEntry& e, const QuadValue& v) {
                                   return quad_cmp(e.z, v) < 0;
                               });
    if (it != entries_.end() && it->z == z) return it->value;
    return {0.0, 0.0};
}

bool Autocorrelation::is_real(double tol) const {
    for (const auto& e : entries_)
        if (std::abs(e.value.imag()) > tol) return false;
    return true;
}

Autocorrelation autocorrelation(const WeightedComb& c, const VanHoveSpec& spec, int n,
                                double radius) {
    if (n <= 0) throw DomainError("patch size must be positive");
    if (!(radius > 0.0)) throw DomainError("autocorrelation radius must be > 0");
    Interval an = spec.window(n);
    if (!c.window().contains(an))
        throw IncompleteDataError("averaging window exceeds the certified comb window");

    WeightedComb patch = restrict_comb(c, an);
    double vol = spec.volume(n);
    std::string tag = c.generator_tag() + ":n=" + std::to_string(n);
    if (patch.empty()) return Autocorrelation({}, n, vol, radius, tag);

    const QuadValue bound = QuadValue::from_double(radius);
    const auto& pts = patch.points();

    double at_zero = 0.0;
    for (const auto& p : pts) at_zero += std::norm(p.w);

    // Positive differences only; sorted points make per-z accumulation run in
    // ascending y order. The negative half is the exact conjugate mirror.
    std::map<QuadValue, std::complex<double>> acc;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            QuadValue z = pts[j].x - pts[i].x;
            if (quad_cmp(z, bound) > 0) break;
            acc[z] += pts[j].w * std::conj(pts[i].w);
        }

    std::vector<AutocorrEntry> entries;
    entries.reserve(2 * acc.size() + 1);
    entries.push_back({QuadValue(0), {at_zero / vol, 0.0}});
    for (const auto& [z, v] : acc) {
        entries.push_back({z, v / vol});
        entries.push_back({-z, std::conj(v) / vol});
    }
    return Autocorrelation(std::move(entries), n, vol, radius, tag);
}

ConvergenceSeries convergence_series(const WeightedComb& c, const VanHoveSpec& spec,
                                     double radius) {
    ConvergenceSeries out;
    out.sizes = spec.sizes;
    std::vector<Autocorrelation> tables;
    tables.reserve(spec.sizes.size());
    for (int n : spec.sizes) tables.push_back(autocorrelation(c, spec, n, radius));

    std::vector<QuadValue> zs;
    for (const auto& t : tables)
        for (const auto& e : t.entries()) zs.push_back(e.z);
    std::sort(zs.begin(), zs.end(),
              [](const QuadValue& a, const QuadValue& b) { return quad_cmp(a, b) < 0; });
    zs.erase(std::unique(zs.begin(), zs.end()), zs.end());
    out.zs = std::move(zs);

    out.values.resize(out.zs.size());
    for (std::size_t zi = 0; zi < out.zs.size(); ++zi) {
        out.values[zi].reserve(tables.size());
        for (const auto& t : tables) out.values[zi].push_back(t.value_at(out.zs[zi]));
    }

    if (tables.size() >= 2) {
        const auto& last = tables[tables.size() - 1];
        const auto& prev = tables[tables.size() - 2];
        for (const QuadValue& z : out.zs)
            out.cauchy_stat = std::max(out.cauchy_stat,
                                       std::abs(last.value_at(z) - prev.value_at(z)));
    }
    return out;
}

Autocorrelation convolve_finite(const Autocorrelation& a, const WeightedComb& f) {
    std::map<QuadValue, std::complex<double>> acc;
    for (const auto& u : f.points())
        for (const auto& v : f.points()) {
            std::complex<double> coef = u.w * std::conj(v.w);
            QuadValue shift = u.x - v.x;
            for (const auto& e : a.entries()) acc[e.z + shift] += coef * e.value;
        }

    double spread = 0.0;
    if (!f.empty())
        spread = (f.points().back().x - f.points().front().x).to_float();

    std::vector<AutocorrEntry> entries;
    entries.reserve(acc.size());
    for (const auto& [z, v] : acc) entries.push_back({z, v});
    return Autocorrelation(std::move(entries), a.n(), a.volume(), a.radius() + spread,
                           a.source_tag() + "*" + f.generator_tag() + "~");
}

PointSet covering_set(const PointSet& lambda, const PointSet& gamma) {
    if (gamma.empty()) throw DomainError("covering source set is empty");
    for (const QuadValue& g : gamma.coords())
        if (!lambda.contains(g))
            throw DomainError("covering source is not a subset of the target set");

    const auto& gs = gamma.coords();
    std::vector<QuadValue> offsets;
    offsets.reserve(lambda.size());
    for (const QuadValue& x : lambda.coords()) {
        auto it = std::lower_bound(gs.begin(), gs.end(), x,
                                   [](const QuadValue& a, const QuadValue& b) {
                                       return quad_cmp(a, b) < 0;
                                   });
        const QuadValue* right = (it != gs.end()) ? &*it : nullptr;
        const QuadValue* left = (it != gs.begin()) ? &*(it - 1) : nullptr;
        const QuadValue* g = nullptr;
        if (!left) {
            g = right;
        } else if (!right) {
            g = left;
        } else {
            // Ties go to the smaller coordinate, i.e. the left neighbor.
            g = (quad_cmp(x - *left, *right - x) <= 0) ? left : right;
        }
        offsets.push_back(x - *g);
    }

    std::sort(offsets.begin(), offsets.end(),
              [](const QuadValue& a, const QuadValue& b) { return quad_cmp(a, b) < 0; });
    offsets.erase(std::unique(offsets.begin(), offsets.end()), offsets.end());

    // Pad one ulp outward: to_float may round an exact endpoint inside.
    Interval window{std::nextafter(offsets.front().to_float(),
                                   -std::numeric_limits<double>::infinity()),
                    std::nextafter(offsets.back().to_float(),
                                   std::numeric_limits<double>::infinity())};
    PointSet cover(offsets, window);

    for (const QuadValue& x : lambda.coords()) {
        bool covered = false;
        for (const QuadValue& ff : cover.coords())
            if (gamma.contains(x - ff)) {
                covered = true;
                break;
            }
        if (!covered) throw ScenarioError("covering construction failed to cover a point");
    }
    return cover;
}

OrderReport order_check(const Autocorrelation& a1, const Autocorrelation& a2,
                        double scale) {
    if (a1.n() != a2.n() || a1.radius() != a2.radius())
        throw DomainError("ordered tables must share patch size and radius");
    if (scale < 0.0) throw DomainError("ordering scale must be >= 0");
    if (!a1.is_real() || !a2.is_real())
        throw DomainError("ordering needs real-valued tables");

    std::vector<QuadValue> zs;
    for (const auto& e : a1.entries()) zs.push_back(e.z);
    for (const auto& e : a2.entries()) zs.push_back(e.z);
    std::sort(zs.begin(), zs.end(),
              [](const QuadValue& a, const QuadValue& b) { return quad_cmp(a, b) < 0; });
    zs.erase(std::unique(zs.begin(), zs.end()), zs.end());

    OrderReport rep;
    bool first = true;
    for (const QuadValue& z : zs) {
        double v = a1.value_at(z).real() - scale * a2.value_at(z).real();
        if (first || v > rep.max_violation) {
            rep.max_violation = v;
            rep.worst_z = z;
            first = false;
        }
    }
    rep.pass = rep.max_violation <= 1e-9;
    return rep;
}

} // namespace braggkit
