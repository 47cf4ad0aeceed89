#pragma once

#include "braggkit/comb.hpp"
#include "braggkit/exactnum.hpp"

#include <complex>
#include <string>
#include <vector>

namespace braggkit {

struct AutocorrEntry {
    QuadValue z;
    std::complex<double> value;
};

// Finite-patch autocorrelation: gamma_n({z}) for every realized difference z
// with |z| <= radius. Entries are sorted by z; construction canonicalizes
// Hermitian symmetry (value at -z = conjugate of value at z, exactly) and
// checks that the mass at 0 is real and nonnegative.
class Autocorrelation {
public:
    Autocorrelation() = default;
    Autocorrelation(std::vector<AutocorrEntry> entries, int n, double volume,
                    double radius, std::string source_tag);

    const std::vector<AutocorrEntry>& entries() const { return entries_; }
    int n() const { return n_; }
    double volume() const { return volume_; }
    double radius() const { return radius_; }
    const std::string& source_tag() const { return tag_; }
    bool empty() const { return entries_.empty(); }

    bool has(const QuadValue& z) const;
    // 0 for coordinates outside the table.
    std::complex<double> value_at(const QuadValue& z) const;
    // True when every entry's imaginary part is within tol of zero.
    bool is_real(double tol = 1e-12) const;

private:
    std::vector<AutocorrEntry> entries_;
    int n_ = 0;
    double volume_ = 0.0;
    double radius_ = 0.0;
    std::string tag_;
};

// gamma_n({z}) = (1/Vol(A_n)) sum over pairs x - y = z of w_x * conj(w_y),
// with x, y restricted to A_n = [-n*L0, n*L0]. Per-z sums accumulate in
// ascending coordinate order, so results are bitwise deterministic.
Autocorrelation autocorrelation(const WeightedComb& c, const VanHoveSpec& spec, int n,
                                double radius);

// Per-z value sequences across the van Hove sizes, plus the Cauchy statistic
// max_z |gamma_last(z) - gamma_prev(z)| over the union of supports.
struct ConvergenceSeries {
    std::vector<int> sizes;
    std::vector<QuadValue> zs;
    // values[zi][si]; absent entries are 0.
    std::vector<std::vector<std::complex<double>>> values;
    double cauchy_stat = 0.0;
};
ConvergenceSeries convergence_series(const WeightedComb& c, const VanHoveSpec& spec,
                                     double radius);

// Exact discrete convolution with the kernel delta_F * ~delta_F:
// result({z}) = sum over u, v in F of w_u * conj(w_v) * a({z - u + v}).
Autocorrelation convolve_finite(const Autocorrelation& a, const WeightedComb& f);

// F = deduplicated {x - g(x)} with g(x) the nearest gamma-point to each
// x in lambda (ties to the smaller coordinate). The covering property
// lambda subset of gamma + F is re-verified exactly before returning.
PointSet covering_set(const PointSet& lambda, const PointSet& gamma);

struct OrderReport {
    bool pass = false;
    // max over the union of supports of a1(z) - scale * a2(z).
    double max_violation = 0.0;
    QuadValue worst_z;
};

// pass iff a1({z}) <= scale * a2({z}) + 1e-9 everywhere on the union of
// supports. Both tables must be real, with equal patch size and radius.
OrderReport order_check(const Autocorrelation& a1, const Autocorrelation& a2,
                        double scale);

} // namespace braggkit
