#pragma once

#include "braggkit/autocorr.hpp"
#include "braggkit/comb.hpp"
#include "braggkit/spectrum.hpp"
#include "braggkit/verify.hpp"

#include <map>
#include <string>
#include <vector>

namespace braggkit {

// Shortest exact round-trip is not required; "%.17g" reproduces the double
// bit-for-bit on read-back and keeps every emitter byte-stable.
std::string format_double(double v);

// FNV-1a 64-bit over the bytes, rendered as 16 lowercase hex digits.
std::string fnv1a_hex(const std::string& data);

// Canonical config rendering: "key = value" lines sorted by key. The hash of
// this string is the config hash embedded in every output file.
std::string canonical_config(const std::map<std::string, std::string>& kv);

// Flat key-value text: one "key = value" per line, '#' starts a comment.
// Duplicate keys keep the last value.
std::map<std::string, std::string> parse_config_text(const std::string& text);
std::map<std::string, std::string> read_config_file(const std::string& path);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

// Comb file: "# config=<hex>", "# window a b", "# m <radicand>", then one
// "coordinate<TAB>weight" line per point. Coordinates use the exact textual
// form; weights are "%.17g" reals, or "(re,im)" when any weight is complex.
std::string comb_file_text(const WeightedComb& c, const std::string& config_hash);
void write_comb_file(const std::string& path, const WeightedComb& c,
                     const std::string& config_hash);
WeightedComb parse_comb_text(const std::string& text, const std::string& tag);
WeightedComb read_comb_file(const std::string& path);

// CSV columns: z_exact,z_float,value_real,value_imag,n,volume.
std::string autocorr_csv(const Autocorrelation& a, const std::string& config_hash);

// CSV columns: k_exact,k_float,I_n<size> per patch size,class,I_inf.
// I_inf is empty for candidates not classified bragg.
std::string spectrum_csv(const SpectrumEstimate& se, const std::string& config_hash);

// Inverse of spectrum_csv, sufficient for plotting: entries, classes and the
// recomputed max-gap statistic. The embedded config hash is returned through
// config_hash_out when present.
SpectrumEstimate parse_spectrum_csv(const std::string& text, std::string& config_hash_out);
SpectrumEstimate read_spectrum_csv(const std::string& path, std::string& config_hash_out);

// Summary report: thresholds, bragg census, max gap (null when undefined) and
// the bragg line positions.
std::string spectrum_json(const SpectrumEstimate& se, const std::string& config_hash);

// CSV columns: z_exact,z_float,gamma_S_real,gamma_S_imag,gamma_0_real,
// gamma_0_imag; the resummation cutoff rides in a header comment.
std::string decomposition_csv(const Decomposition& d, const std::string& config_hash);

// {"config_hash": ..., "reports": [{theorem, scenario, seed, checks: [{name,
// pass, witness, tol}], pass, runtime_ms}]}. Non-finite witnesses serialize
// as null.
std::string reports_json(const std::vector<VerifyReport>& reports,
                         const std::string& config_hash);

// Static stick plot: bragg sticks at full intensity, continuous candidates
// greyed at their last finite-patch value, the widest bragg gap bracketed.
std::string spectrum_svg(const SpectrumEstimate& se, const std::string& config_hash);

} // namespace braggkit
