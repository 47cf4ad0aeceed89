#pragma once

#include "braggkit/autocorr.hpp"
#include "braggkit/comb.hpp"
#include "braggkit/cps.hpp"
#include "braggkit/spectrum.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace braggkit {

struct CheckResult {
    std::string name;
    bool pass = false;
    double witness = 0.0;
    double tol = 0.0;
};

// One theorem instantiated as a reproducible experiment. All randomness in a
// scenario flows from the recorded seed; runtime_ms is pinned to 0 so that
// reports are byte-stable.
struct VerifyReport {
    std::string theorem;
    std::string scenario;
    std::uint64_t seed = 0;
    std::vector<CheckResult> checks;
    bool pass = false;
    long runtime_ms = 0;
};

// Shared experiment parameters for the scheme-driven suites.
struct VerifyParams {
    VanHoveSpec spec{1.0, {50, 100, 200, 400}};
    Interval interval{-400.0, 400.0};  // model comb generation window
    double radius = 20.0;              // autocorrelation truncation radius
    int coeff_bound = 8;               // dual candidate box half-width
    double gram_tolerance = 1e-8;      // relative PSD tolerance factor
    std::uint64_t seed = 42;
};

enum class SubcombRule { identity, internal_half, bernoulli };

std::string to_string(SubcombRule rule);

// Bernoulli(1/2) point selection: one draw per point in ascending coordinate
// order, keep when the unit draw is below 1/2. The shared generator behind
// every seeded scenario.
WeightedComb bernoulli_subcomb(const WeightedComb& c, std::uint64_t seed);

// gamma'_n <= C^2 gamma_n at every patch size, given omega' below C*omega.
VerifyReport verify_ordering(const WeightedComb& omega_prime, const WeightedComb& omega,
                             double C, const VanHoveSpec& spec, double radius);

// -C^2 gamma_n <= gamma'_n <= C^2 gamma_n at every patch size, given
// |omega'| <= C*omega.
VerifyReport verify_sandwich(const WeightedComb& omega_prime, const WeightedComb& omega,
                             double C, const VanHoveSpec& spec, double radius);

// Pure-point part of a dominated sub-comb stays in the positive cone:
// (a) resummed gamma'_S values nonnegative, (b) dominated by the matching
// resummation of the model comb, (c) Gram PSD, (d) support inside Lambda -
// Lambda. Both resummations use the same product-Fejer kernel over the
// complete dual coefficient box, so the comparison is truncation-matched.
VerifyReport verify_theorem_L1(const CPScheme& scheme, const WeightFn& weight,
                               SubcombRule rule, const VerifyParams& params);

// Relatively dense Bragg peaks for a thresholded sub-comb: support
// containment of both Eberlein parts, bragg set empty-or-dense against
// 2x the full comb's gap, the threshold-set covering chain
// omega <= (C2/C1) omega' * delta_F, all on the generated patch.
VerifyReport verify_T1(const CPScheme& scheme, const WeightFn& weight,
                       const WeightedComb& omega_prime, double C1,
                       const Interval& freq_window, const VerifyParams& params);

// Bragg mass monotonicity: omega <= omega' implies omega' keeps at least 95%
// of omega's bragg intensity over the scanned frequency window.
VerifyReport verify_P1(const WeightedComb& omega, const WeightedComb& omega_prime,
                       const std::vector<FreqCandidate>& candidates,
                       const VanHoveSpec& spec, const Interval& freq_window);

} // namespace braggkit
