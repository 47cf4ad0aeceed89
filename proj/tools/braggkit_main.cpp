#include "braggkit/autocorr.hpp"
#include "braggkit/comb.hpp"
#include "braggkit/cps.hpp"
#include "braggkit/errors.hpp"
#include "braggkit/exactnum.hpp"
#include "braggkit/io.hpp"
#include "braggkit/spectrum.hpp"
#include "braggkit/verify.hpp"

#include "CLI11.hpp"

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace {

using namespace braggkit;

const std::set<std::string> kSchemeFileKeys = {
    "preset",          "m",           "basis.v1",        "basis.v2",     "window.lo",
    "window.hi",       "weight.kind", "weight.halfwidth", "weight.height"};

const std::set<std::string> kRunKeys = {
    "scheme.path",          "scheme.preset",           "scheme.m",
    "scheme.basis.v1",      "scheme.basis.v2",         "scheme.window.lo",
    "scheme.window.hi",     "scheme.weight.kind",      "scheme.weight.halfwidth",
    "scheme.weight.height", "vanhove.L0",              "vanhove.sizes",
    "interval.lo",          "interval.hi",             "autocorr.radius",
    "autocorr.n",           "freq.lo",                 "freq.hi",
    "freq.candidates",      "freq.coeff_bound",        "freq.grid_step",
    "thresholds.epsilon_scale", "thresholds.delta_rel", "thresholds.gram_tolerance",
    "run.seed",             "run.theorem"};

// Resolved settings: config file values overridden by flags, with defaults
// filled in. The canonical rendering of this map is what the config hash
// covers.
struct Settings {
    std::map<std::string, std::string> kv;

    bool has(const std::string& key) const {
        auto it = kv.find(key);
        return it != kv.end() && !it->second.empty();
    }
    const std::string& raw(const std::string& key) const { return kv.at(key); }

    double number(const std::string& key) const {
        const std::string& text = kv.at(key);
        char* end = nullptr;
        double v = std::strtod(text.c_str(), &end);
        if (end == text.c_str() || *end != '\0')
            throw ValidationError("config " + key + ": cannot parse number '" + text + "'");
        return v;
    }
    long integer(const std::string& key) const {
        const std::string& text = kv.at(key);
        char* end = nullptr;
        long v = std::strtol(text.c_str(), &end, 10);
        if (end == text.c_str() || *end != '\0')
            throw ValidationError("config " + key + ": cannot parse integer '" + text + "'");
        return v;
    }
    std::uint64_t seed() const {
        const std::string& text = kv.at("run.seed");
        char* end = nullptr;
        unsigned long long v = std::strtoull(text.c_str(), &end, 10);
        if (end == text.c_str() || *end != '\0')
            throw ValidationError("config run.seed: cannot parse '" + text + "'");
        return v;
    }
};

std::vector<int> parse_sizes(const std::string& text) {
    std::vector<int> sizes;
    std::string cur;
    auto flush = [&] {
        if (cur.empty()) return;
        char* end = nullptr;
        long v = std::strtol(cur.c_str(), &end, 10);
        if (end == cur.c_str() || *end != '\0')
            throw ValidationError("config vanhove.sizes: cannot parse '" + cur + "'");
        sizes.push_back(static_cast<int>(v));
        cur.clear();
    };
    for (char ch : text) {
        if (ch == ',') {
            flush();
        } else if (ch != ' ') {
            cur.push_back(ch);
        }
    }
    flush();
    return sizes;
}

SchemeConfig scheme_config(const Settings& s) {
    SchemeConfig cfg;
    cfg.preset = s.raw("scheme.preset");
    if (s.has("scheme.m")) cfg.m = s.integer("scheme.m");
    if (s.has("scheme.basis.v1")) cfg.basis_v1 = s.raw("scheme.basis.v1");
    if (s.has("scheme.basis.v2")) cfg.basis_v2 = s.raw("scheme.basis.v2");
    if (s.has("scheme.window.lo")) cfg.window_lo = s.number("scheme.window.lo");
    if (s.has("scheme.window.hi")) cfg.window_hi = s.number("scheme.window.hi");
    if (s.has("scheme.weight.kind")) cfg.weight_kind = s.raw("scheme.weight.kind");
    if (s.has("scheme.weight.halfwidth"))
        cfg.weight_halfwidth = s.number("scheme.weight.halfwidth");
    if (s.has("scheme.weight.height")) cfg.weight_height = s.number("scheme.weight.height");
    return cfg;
}

VanHoveSpec vanhove_spec(const Settings& s) {
    return VanHoveSpec(s.number("vanhove.L0"), parse_sizes(s.raw("vanhove.sizes")));
}

Interval generation_interval(const Settings& s) {
    return {s.number("interval.lo"), s.number("interval.hi")};
}

std::optional<Interval> freq_window(const Settings& s) {
    if (!s.has("freq.lo") && !s.has("freq.hi")) return std::nullopt;
    if (!s.has("freq.lo") || !s.has("freq.hi"))
        throw ValidationError("freq.lo and freq.hi must be set together");
    Interval w{s.number("freq.lo"), s.number("freq.hi")};
    if (w.empty()) throw ValidationError("frequency window is empty");
    return w;
}

std::vector<FreqCandidate> make_candidates(const Settings& s, const CPScheme& scheme) {
    const std::string& source = s.raw("freq.candidates");
    std::optional<Interval> win = freq_window(s);
    std::vector<FreqCandidate> out;
    if (source == "dual") {
        int bound = static_cast<int>(s.integer("freq.coeff_bound"));
        for (const QuadValue& k : dual_candidates(scheme, bound)) {
            if (win && !interval_contains(*win, k)) continue;
            out.push_back(exact_candidate(k, CandidateOrigin::dual));
        }
    } else if (source == "grid") {
        if (!win)
            throw ValidationError("freq.candidates = grid requires freq.lo and freq.hi");
        double step = s.number("freq.grid_step");
        if (!(step > 0.0)) throw ValidationError("freq.grid_step must be > 0");
        QuadValue lo = QuadValue::from_double(win->lo);
        QuadValue dk = QuadValue::from_double(step);
        long count = static_cast<long>((win->hi - win->lo) / step + 1e-9);
        if (count > 2000000) throw CapacityError("frequency grid exceeds 2e6 candidates");
        for (long i = 0; i <= count; ++i)
            out.push_back(
                exact_candidate(lo + QuadValue(i) * dk, CandidateOrigin::grid));
    } else {
        throw ValidationError("freq.candidates must be 'dual' or 'grid', got '" + source +
                              "'");
    }
    if (out.empty()) throw ValidationError("candidate set is empty on the frequency window");
    return out;
}

std::string output_path(const std::string& out_dir, const std::string& name) {
    std::filesystem::create_directories(out_dir);
    return (std::filesystem::path(out_dir) / name).string();
}

WeightedComb load_comb(const std::string& path) {
    if (path.empty()) throw ValidationError("--comb <file> is required");
    return read_comb_file(path);
}

// Signed companion of the bernoulli rule: every weight is flipped to
// w * (2u - 1) with the same per-point unit draws, so |omega'| <= omega.
WeightedComb signed_subcomb(const WeightedComb& c, std::uint64_t seed) {
    std::mt19937_64 eng(seed);
    std::vector<CombPoint> pts;
    pts.reserve(c.size());
    for (const auto& p : c.points()) {
        double u = (eng() >> 11) * 0x1.0p-53;
        pts.push_back({p.x, p.w * (2.0 * u - 1.0)});
    }
    return WeightedComb(std::move(pts), c.window(), c.generator_tag() + "|signed");
}

// Points whose internal coordinate lies in the middle third of the scheme
// window; the threshold constant is the smallest surviving weight.
WeightedComb middle_third_subcomb(const CPScheme& scheme, const WeightedComb& c,
                                  double* C1_out) {
    const Interval& win = scheme.window();
    double len = win.hi - win.lo;
    Interval third{win.lo + len / 3.0, win.hi - len / 3.0};
    std::vector<CombPoint> kept;
    double C1 = 0.0;
    for (const auto& p : c.points()) {
        QuadValue internal = scheme.trivial_internal() ? QuadValue(0) : p.x.star();
        if (!interval_contains(third, internal)) continue;
        if (kept.empty() || p.w.real() < C1) C1 = p.w.real();
        kept.push_back(p);
    }
    if (kept.empty())
        throw ScenarioError("middle-third internal window selected no points");
    *C1_out = C1;
    return WeightedComb(std::move(kept), c.window(), c.generator_tag() + "|midthird");
}

int cmd_generate(const Settings& s, const std::string& out_dir,
                 const std::string& config_hash) {
    SchemeConfig cfg = scheme_config(s);
    CPScheme scheme = build_scheme(cfg);
    WeightFn weight = weight_from_config(cfg, scheme);
    WeightedComb comb = generate_model_comb(scheme, weight, generation_interval(s));
    std::string path = output_path(out_dir, "comb.txt");
    write_comb_file(path, comb, config_hash);
    std::cout << "wrote " << path << " (" << comb.size() << " points, scheme "
              << scheme.name() << ")\n";
    return 0;
}

int cmd_autocorr(const Settings& s, const std::string& comb_path, const std::string& out_dir,
                 const std::string& config_hash) {
    WeightedComb comb = load_comb(comb_path);
    VanHoveSpec spec = vanhove_spec(s);
    int n = s.has("autocorr.n") ? static_cast<int>(s.integer("autocorr.n")) : spec.last();
    Autocorrelation a = autocorrelation(comb, spec, n, s.number("autocorr.radius"));
    std::string path = output_path(out_dir, "autocorr.csv");
    write_text_file(path, autocorr_csv(a, config_hash));
    std::cout << "wrote " << path << " (" << a.entries().size() << " differences, n = " << n
              << ")\n";
    return 0;
}

SpectrumEstimate run_scan(const Settings& s, const WeightedComb& comb) {
    SchemeConfig cfg = scheme_config(s);
    CPScheme scheme = build_scheme(cfg);
    VanHoveSpec spec = vanhove_spec(s);
    return bragg_scan(comb, make_candidates(s, scheme), spec,
                      s.number("thresholds.epsilon_scale"),
                      s.number("thresholds.delta_rel"));
}

int cmd_diffract(const Settings& s, const std::string& comb_path, const std::string& out_dir,
                 const std::string& config_hash) {
    WeightedComb comb = load_comb(comb_path);
    if (comb.empty()) throw DomainError("comb file has no points");
    SpectrumEstimate se = run_scan(s, comb);
    std::string csv_path = output_path(out_dir, "spectrum.csv");
    write_text_file(csv_path, spectrum_csv(se, config_hash));
    std::string json_path = output_path(out_dir, "spectrum.json");
    write_text_file(json_path, spectrum_json(se, config_hash));
    std::cout << "wrote " << csv_path << " and " << json_path << " (" << se.bragg_count()
              << " bragg of " << se.entries.size() << " candidates)\n";
    return 0;
}

int cmd_decompose(const Settings& s, const std::string& comb_path,
                  const std::string& out_dir, const std::string& config_hash) {
    WeightedComb comb = load_comb(comb_path);
    if (comb.empty()) throw DomainError("comb file has no points");
    SpectrumEstimate se = run_scan(s, comb);
    VanHoveSpec spec = vanhove_spec(s);
    Autocorrelation a =
        autocorrelation(comb, spec, spec.last(), s.number("autocorr.radius"));
    Decomposition d = decompose(a, se);
    std::string path = output_path(out_dir, "decompose.csv");
    write_text_file(path, decomposition_csv(d, config_hash));
    std::cout << "wrote " << path << " (cutoff " << format_double(d.cutoff) << ", "
              << se.bragg_count() << " bragg lines)\n";
    return 0;
}

int cmd_verify(const Settings& s, const std::string& out_dir,
               const std::string& config_hash) {
    const std::string& theorem = s.raw("run.theorem");
    SchemeConfig cfg = scheme_config(s);
    CPScheme scheme = build_scheme(cfg);
    WeightFn weight = weight_from_config(cfg, scheme);

    VerifyParams params;
    params.spec = vanhove_spec(s);
    params.interval = generation_interval(s);
    params.radius = s.number("autocorr.radius");
    params.coeff_bound = static_cast<int>(s.integer("freq.coeff_bound"));
    params.gram_tolerance = s.number("thresholds.gram_tolerance");
    params.seed = s.seed();

    Interval fwin = freq_window(s).value_or(Interval{0.0, 10.0});

    std::vector<VerifyReport> reports;
    auto want = [&](const char* name) { return theorem == name || theorem == "all"; };

    WeightedComb model;
    auto model_comb = [&]() -> const WeightedComb& {
        if (model.empty() && model.window().empty())
            model = generate_model_comb(scheme, weight, params.interval);
        return model;
    };

    if (want("L4")) {
        WeightedComb sub = bernoulli_subcomb(model_comb(), params.seed);
        VerifyReport rep = verify_ordering(sub, model_comb(), 1.0, params.spec, params.radius);
        rep.seed = params.seed;
        reports.push_back(std::move(rep));
    }
    if (want("sandwich")) {
        WeightedComb sub = signed_subcomb(model_comb(), params.seed);
        VerifyReport rep = verify_sandwich(sub, model_comb(), 1.0, params.spec, params.radius);
        rep.seed = params.seed;
        reports.push_back(std::move(rep));
    }
    if (want("L1")) {
        for (SubcombRule rule :
             {SubcombRule::identity, SubcombRule::internal_half, SubcombRule::bernoulli})
            reports.push_back(verify_theorem_L1(scheme, weight, rule, params));
    }
    if (want("T1")) {
        double C1 = 0.0;
        WeightedComb sub = middle_third_subcomb(scheme, model_comb(), &C1);
        reports.push_back(verify_T1(scheme, weight, sub, C1, fwin, params));
    }
    if (want("P1")) {
        WeightedComb sub = bernoulli_subcomb(model_comb(), params.seed);
        std::vector<FreqCandidate> candidates;
        for (const QuadValue& k : dual_candidates(scheme, params.coeff_bound)) {
            if (!interval_contains(fwin, k)) continue;
            candidates.push_back(exact_candidate(k, CandidateOrigin::dual));
        }
        VerifyReport rep = verify_P1(sub, model_comb(), candidates, params.spec, fwin);
        rep.seed = params.seed;
        reports.push_back(std::move(rep));
    }
    if (reports.empty())
        throw ValidationError("unknown theorem '" + theorem +
                              "' (expected L1, L4, T1, P1, sandwich, or all)");

    std::string path = output_path(out_dir, "verify.json");
    write_text_file(path, reports_json(reports, config_hash));

    bool all_pass = true;
    for (const auto& rep : reports) {
        std::cout << (rep.pass ? "PASS" : "FAIL") << " " << rep.theorem << " [" << rep.scenario
                  << "]\n";
        all_pass = all_pass && rep.pass;
    }
    std::cout << "wrote " << path << "\nverdict: " << (all_pass ? "PASS" : "FAIL") << "\n";
    return all_pass ? 0 : 1;
}

int cmd_plot(const std::string& spectrum_path, const std::string& out_dir,
             const std::string& fallback_hash) {
    if (spectrum_path.empty()) throw ValidationError("--spectrum <file> is required");
    std::string embedded;
    SpectrumEstimate se = read_spectrum_csv(spectrum_path, embedded);
    const std::string& hash = embedded.empty() ? fallback_hash : embedded;
    std::string path = output_path(out_dir, "plot.svg");
    write_text_file(path, spectrum_svg(se, hash));
    std::cout << "wrote " << path << " (" << se.bragg_count() << " bragg sticks)\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    using namespace braggkit;

    CLI::App app{"weighted Dirac comb diffraction toolkit"};
    app.require_subcommand(1);

    std::string config_path, out_dir = ".", comb_path, spectrum_path;
    std::optional<std::string> preset, basis_v1, basis_v2, weight_kind, sizes, candidates;
    std::optional<long> m_opt;
    std::optional<double> window_lo, window_hi, halfwidth, height, L0, radius, freq_lo,
        freq_hi, grid_step, epsilon_scale, delta_rel, gram_tol;
    std::optional<int> coeff_bound, n_opt;
    std::optional<std::uint64_t> seed;
    std::vector<double> interval_flag;
    std::string theorem = "all";

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "flat key-value config file");
        sub->add_option("--out", out_dir, "output directory (default .)");
        sub->add_option("--seed", seed, "seed for every randomized scenario");
        sub->add_option("--preset", preset, "scheme preset: integer, zroot2, fibonacci");
        sub->add_option("--m", m_opt, "radicand of the coordinate field");
        sub->add_option("--basis-v1", basis_v1, "physical part of lattice generator 1");
        sub->add_option("--basis-v2", basis_v2, "physical part of lattice generator 2");
        sub->add_option("--window-lo", window_lo, "acceptance window lower end");
        sub->add_option("--window-hi", window_hi, "acceptance window upper end");
        sub->add_option("--weight", weight_kind,
                        "weight kind: indicator, tent, autoconv_step");
        sub->add_option("--halfwidth", halfwidth, "weight support half-width");
        sub->add_option("--height", height, "weight height");
        sub->add_option("--L0", L0, "van Hove base half-length");
        sub->add_option("--sizes", sizes, "comma-separated van Hove sizes");
        sub->add_option("--interval", interval_flag, "generation interval: LO HI")
            ->expected(2);
        sub->add_option("--radius", radius, "autocorrelation truncation radius");
        sub->add_option("--freq-lo", freq_lo, "frequency window lower end");
        sub->add_option("--freq-hi", freq_hi, "frequency window upper end");
        sub->add_option("--candidates", candidates, "candidate source: dual or grid");
        sub->add_option("--coeff-bound", coeff_bound, "dual coefficient box half-width");
        sub->add_option("--grid-step", grid_step, "grid candidate spacing");
        sub->add_option("--epsilon-scale", epsilon_scale,
                        "bragg threshold as a fraction of the strongest line");
        sub->add_option("--delta-rel", delta_rel, "relative stabilization tolerance");
        sub->add_option("--gram-tol", gram_tol, "relative PSD tolerance factor");
    };

    CLI::App* c_gen = app.add_subcommand("generate", "emit a model comb file");
    CLI::App* c_auto = app.add_subcommand("autocorr", "autocorrelation table of a comb file");
    CLI::App* c_diff = app.add_subcommand("diffract", "bragg scan of a comb file");
    CLI::App* c_dec = app.add_subcommand("decompose", "pure-point/residual split of a comb");
    CLI::App* c_ver = app.add_subcommand("verify", "run the theorem verification suites");
    CLI::App* c_plot = app.add_subcommand("plot", "render a spectrum CSV as SVG");
    for (CLI::App* sub : {c_gen, c_auto, c_diff, c_dec, c_ver, c_plot}) add_common(sub);
    for (CLI::App* sub : {c_auto, c_diff, c_dec})
        sub->add_option("--comb", comb_path, "input comb file");
    c_auto->add_option("--n", n_opt, "patch size (default: largest van Hove size)");
    c_ver->add_option("--theorem", theorem, "L1, L4, T1, P1, sandwich, or all");
    c_plot->add_option("--spectrum", spectrum_path, "input spectrum CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            std::cout << app.help();
            return 0;
        }
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return 2;
    }

    try {
        Settings s;
        s.kv = {{"scheme.preset", "zroot2"},
                {"scheme.m", ""},
                {"scheme.basis.v1", ""},
                {"scheme.basis.v2", ""},
                {"scheme.window.lo", ""},
                {"scheme.window.hi", ""},
                {"scheme.weight.kind", ""},
                {"scheme.weight.halfwidth", ""},
                {"scheme.weight.height", ""},
                {"vanhove.L0", "1"},
                {"vanhove.sizes", "50,100,200,400"},
                {"interval.lo", "-400"},
                {"interval.hi", "400"},
                {"autocorr.radius", "20"},
                {"autocorr.n", ""},
                {"freq.lo", ""},
                {"freq.hi", ""},
                {"freq.candidates", "dual"},
                {"freq.coeff_bound", "8"},
                {"freq.grid_step", "0.25"},
                {"thresholds.epsilon_scale", "0.001"},
                {"thresholds.delta_rel", "0.05"},
                {"thresholds.gram_tolerance", "1e-8"},
                {"run.seed", "42"},
                {"run.theorem", "all"}};

        if (!config_path.empty()) {
            std::map<std::string, std::string> file_kv = read_config_file(config_path);
            for (const auto& [k, v] : file_kv)
                if (!kRunKeys.count(k))
                    throw ValidationError("unknown config key '" + k + "'");
            auto path_it = file_kv.find("scheme.path");
            if (path_it != file_kv.end()) {
                for (const auto& [k, v] : read_config_file(path_it->second)) {
                    if (!kSchemeFileKeys.count(k))
                        throw ValidationError("unknown scheme key '" + k + "'");
                    if (!file_kv.count("scheme." + k)) s.kv["scheme." + k] = v;
                }
                file_kv.erase(path_it);
            }
            for (const auto& [k, v] : file_kv) s.kv[k] = v;
        }

        auto set_if = [&](const char* key, const auto& opt) {
            if (opt) s.kv[key] = *opt;
        };
        auto set_num = [&](const char* key, const auto& opt) {
            if (opt) s.kv[key] = format_double(static_cast<double>(*opt));
        };
        set_if("scheme.preset", preset);
        if (m_opt) s.kv["scheme.m"] = std::to_string(*m_opt);
        set_if("scheme.basis.v1", basis_v1);
        set_if("scheme.basis.v2", basis_v2);
        set_num("scheme.window.lo", window_lo);
        set_num("scheme.window.hi", window_hi);
        set_if("scheme.weight.kind", weight_kind);
        set_num("scheme.weight.halfwidth", halfwidth);
        set_num("scheme.weight.height", height);
        set_num("vanhove.L0", L0);
        set_if("vanhove.sizes", sizes);
        if (!interval_flag.empty()) {
            s.kv["interval.lo"] = format_double(interval_flag[0]);
            s.kv["interval.hi"] = format_double(interval_flag[1]);
        }
        set_num("autocorr.radius", radius);
        if (n_opt) s.kv["autocorr.n"] = std::to_string(*n_opt);
        set_num("freq.lo", freq_lo);
        set_num("freq.hi", freq_hi);
        set_if("freq.candidates", candidates);
        if (coeff_bound) s.kv["freq.coeff_bound"] = std::to_string(*coeff_bound);
        set_num("freq.grid_step", grid_step);
        set_num("thresholds.epsilon_scale", epsilon_scale);
        set_num("thresholds.delta_rel", delta_rel);
        set_num("thresholds.gram_tolerance", gram_tol);
        if (seed) s.kv["run.seed"] = std::to_string(*seed);
        if (c_ver->parsed()) s.kv["run.theorem"] = theorem;

        const std::string config_hash = fnv1a_hex(canonical_config(s.kv));

        if (c_gen->parsed()) return cmd_generate(s, out_dir, config_hash);
        if (c_auto->parsed()) return cmd_autocorr(s, comb_path, out_dir, config_hash);
        if (c_diff->parsed()) return cmd_diffract(s, comb_path, out_dir, config_hash);
        if (c_dec->parsed()) return cmd_decompose(s, comb_path, out_dir, config_hash);
        if (c_ver->parsed()) return cmd_verify(s, out_dir, config_hash);
        if (c_plot->parsed()) return cmd_plot(spectrum_path, out_dir, config_hash);
        return 2;
    } catch (const CapacityError& e) {
        std::cerr << "capacity error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
