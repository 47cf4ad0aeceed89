#pragma once

#include "braggkit/autocorr.hpp"
#include "braggkit/comb.hpp"
#include "braggkit/exactnum.hpp"
#include "braggkit/gram.hpp"

#include <complex>
#include <limits>
#include <string>
#include <vector>

namespace braggkit {

enum class PeakClass { bragg, continuous, undecided };

enum class CandidateOrigin { dual, grid, refined };

std::string to_string(PeakClass cls);
std::string to_string(CandidateOrigin origin);

// A frequency to probe. Dual-lattice candidates keep their exact coordinate;
// grid and refined candidates carry a float only.
struct FreqCandidate {
    double k = 0.0;
    bool has_exact = false;
    QuadValue exact;
    CandidateOrigin origin = CandidateOrigin::grid;
};

FreqCandidate exact_candidate(const QuadValue& k,
                              CandidateOrigin origin = CandidateOrigin::dual);
FreqCandidate float_candidate(double k, CandidateOrigin origin = CandidateOrigin::grid);

struct SpectrumEntry {
    FreqCandidate candidate;
    std::vector<double> intensities;  // I_n(k), one per van Hove size, in size order
    PeakClass cls = PeakClass::undecided;
    double intensity_limit = 0.0;  // I_inf estimate; meaningful for bragg entries
};

// Diffraction estimate over a finite candidate set. Entries are sorted by
// frequency. max_gap is the gap statistic of the bragg subset over the
// scanned window [min k, max k], boundary gaps included; +inf when the
// bragg subset is empty.
struct SpectrumEstimate {
    std::vector<SpectrumEntry> entries;
    VanHoveSpec spec{1.0, {1}};
    double epsilon = 0.0;     // absolute bragg intensity threshold used
    double delta_rel = 0.05;  // relative stabilization tolerance used
    double max_gap = std::numeric_limits<double>::infinity();

    std::size_t bragg_count() const;
};

// Sparse value table keyed by exact coordinates, sorted ascending.
// Absent keys read as zero.
struct ValueTable {
    std::vector<AutocorrEntry> entries;

    bool has(const QuadValue& z) const;
    std::complex<double> value_at(const QuadValue& z) const;
    double max_abs() const;
};

// Eberlein split of an autocorrelation table: gamma = gamma_S + gamma_0 with
// gamma_S resummed from the detected bragg peaks.
struct Decomposition {
    ValueTable gamma_S;
    ValueTable gamma_0;
    double cutoff = 0.0;  // max |k| over the bragg set used in the resummation
};

// Volume-normalized exponential sum over the restricted patch,
// c_n(k) = (1/Vol A_n) sum_x w_x e^{-2 pi i k x}.
std::complex<double> fb_coefficient(const WeightedComb& c, double k,
                                    const VanHoveSpec& spec, int n);
std::complex<double> fb_coefficient(const WeightedComb& c, const QuadValue& k,
                                    const VanHoveSpec& spec, int n);

// |c_n(k)|^2 for every patch size, in order.
std::vector<double> intensity_profile(const WeightedComb& c, double k,
                                      const VanHoveSpec& spec);

// Decision rule on an intensity profile (needs at least three sizes):
// bragg when the last value exceeds epsilon and the last doubling moved it
// by at most delta_rel relatively; continuous when the last two doublings
// each decayed by a factor <= 0.6; undecided otherwise.
PeakClass classify_peak(const std::vector<double>& profile, double epsilon,
                        double delta_rel);

// Profile + classification per candidate. The bragg threshold is
// 1e-3 x the largest final intensity over the candidate set. Per-candidate
// evaluation parallelizes over BRAGG_THREADS (default 1); results do not
// depend on the thread count.
SpectrumEstimate bragg_scan(const WeightedComb& c,
                            const std::vector<FreqCandidate>& candidates,
                            const VanHoveSpec& spec);

// Same scan with explicit thresholds: epsilon = epsilon_scale x the largest
// final intensity, delta_rel as given. The three-argument form uses
// epsilon_scale = 1e-3 and delta_rel = 0.05.
SpectrumEstimate bragg_scan(const WeightedComb& c,
                            const std::vector<FreqCandidate>& candidates,
                            const VanHoveSpec& spec, double epsilon_scale,
                            double delta_rel);

// Golden-section maximization of I_{n_last}(k) on [k0 - radius, k0 + radius]
// to bracket width 1e-9. Returns k0 itself unless a strictly better frequency
// was found.
double refine_peak(const WeightedComb& c, double k0, double radius,
                   const VanHoveSpec& spec);

// Truncated Fourier-Bohr series of the pure-point part at z:
// sum over bragg entries of I_inf(k) e^{+2 pi i k z}. No convergence
// correction is applied; see decompose for the normalized version.
std::complex<double> sap_resum(const SpectrumEstimate& se, const QuadValue& z);

// gamma_S({z}) = (1/K) sum_bragg (1 - |k|/K) I_inf(k) e^{2 pi i k z} with
// K = max detected |k| (plain sum when K = 0), gamma_0 = gamma - gamma_S on
// supp(gamma). The Fejer factor with the 1/K mean normalization keeps the
// truncated resummation of a Dirac comb spectrum bounded.
Decomposition decompose(const Autocorrelation& a, const SpectrumEstimate& se);

// Eigenvalue evidence for the Hermitian matrix [v(z_i - z_j)] built from the
// table (missing arguments read as 0 and are flagged). Verdict: min
// eigenvalue >= -tolerance_factor x trace.
GramReport gram_psd(const ValueTable& values,
                    const std::vector<QuadValue>& sample_points,
                    double tolerance_factor);

} // namespace braggkit
