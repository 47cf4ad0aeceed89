#include "braggkit/io.hpp"

#include "braggkit/errors.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

namespace braggkit {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::string cur;
    for (char ch : text) {
        if (ch == '\n') {
            lines.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    if (!cur.empty()) lines.push_back(cur);
    return lines;
}

std::vector<std::string> split_csv_row(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            cells.push_back(trim(cur));
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    cells.push_back(trim(cur));
    return cells;
}

double parse_number(const std::string& text, const char* what) {
    const std::string t = trim(text);
    char* end = nullptr;
    double v = std::strtod(t.c_str(), &end);
    if (end == t.c_str() || *end != '\0')
        throw ValidationError(std::string(what) + ": cannot parse number '" + text + "'");
    return v;
}

std::complex<double> parse_weight(const std::string& text) {
    const std::string t = trim(text);
    if (!t.empty() && t.front() == '(') {
        if (t.back() != ')')
            throw ValidationError("comb file: malformed complex weight '" + text + "'");
        std::size_t comma = t.find(',');
        if (comma == std::string::npos)
            throw ValidationError("comb file: malformed complex weight '" + text + "'");
        double re = parse_number(t.substr(1, comma - 1), "comb file");
        double im = parse_number(t.substr(comma + 1, t.size() - comma - 2), "comb file");
        return {re, im};
    }
    return {parse_number(t, "comb file"), 0.0};
}

// Largest gap left uncovered by the bragg lines: boundary gaps to the scanned
// frequency range plus consecutive bragg spacings. Mirrors the scan statistic
// so a CSV round trip reproduces it.
double recompute_max_gap(const SpectrumEstimate& se) {
    std::size_t nb = 0;
    for (const auto& e : se.entries)
        if (e.cls == PeakClass::bragg) ++nb;
    if (nb == 0 || se.entries.empty()) return std::numeric_limits<double>::infinity();
    double lo = se.entries.front().candidate.k;
    double hi = se.entries.back().candidate.k;
    double prev = lo;
    double gap = 0.0;
    for (const auto& e : se.entries) {
        if (e.cls != PeakClass::bragg) continue;
        gap = std::max(gap, e.candidate.k - prev);
        prev = e.candidate.k;
    }
    return std::max(gap, hi - prev);
}

nlohmann::ordered_json json_number_or_null(double v) {
    if (!std::isfinite(v)) return nullptr;
    return v;
}

} // namespace

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fnv1a_hex(const std::string& data) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char ch : data) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string canonical_config(const std::map<std::string, std::string>& kv) {
    std::string out;
    for (const auto& [k, v] : kv) {
        out += k;
        out += " = ";
        out += v;
        out += '\n';
    }
    return out;
}

std::map<std::string, std::string> parse_config_text(const std::string& text) {
    std::map<std::string, std::string> kv;
    int lineno = 0;
    for (const auto& raw : split_lines(text)) {
        ++lineno;
        std::string line = raw;
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ValidationError("config line " + std::to_string(lineno) +
                                  ": expected 'key = value', got '" + trim(raw) + "'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ValidationError("config line " + std::to_string(lineno) + ": empty key");
        kv[key] = value;
    }
    return kv;
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
    return parse_config_text(read_text_file(path));
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot open '" + path + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw ValidationError("write failed for '" + path + "'");
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string comb_file_text(const WeightedComb& c, const std::string& config_hash) {
    long m = 0;
    for (const auto& p : c.points()) {
        if (!p.x.is_rational()) {
            m = p.x.m();
            break;
        }
    }
    std::string out;
    out += "# config=" + config_hash + "\n";
    out += "# window " + format_double(c.window().lo) + " " + format_double(c.window().hi) +
           "\n";
    out += "# m " + std::to_string(m) + "\n";
    const bool complex_weights = c.has_complex_weight();
    for (const auto& p : c.points()) {
        out += p.x.to_string();
        out += '\t';
        if (complex_weights)
            out += "(" + format_double(p.w.real()) + "," + format_double(p.w.imag()) + ")";
        else
            out += format_double(p.w.real());
        out += '\n';
    }
    return out;
}

void write_comb_file(const std::string& path, const WeightedComb& c,
                     const std::string& config_hash) {
    write_text_file(path, comb_file_text(c, config_hash));
}

WeightedComb parse_comb_text(const std::string& text, const std::string& tag) {
    bool have_window = false;
    Interval window{0.0, -1.0};
    std::vector<CombPoint> pts;
    int lineno = 0;
    for (const auto& raw : split_lines(text)) {
        ++lineno;
        std::string line = trim(raw);
        if (line.empty()) continue;
        if (line.front() == '#') {
            std::istringstream hs(line.substr(1));
            std::string word;
            hs >> word;
            if (word == "window") {
                std::string a, b;
                if (!(hs >> a >> b))
                    throw ValidationError("comb file line " + std::to_string(lineno) +
                                          ": malformed window header");
                window.lo = parse_number(a, "comb file window");
                window.hi = parse_number(b, "comb file window");
                have_window = true;
            }
            continue;
        }
        std::size_t tab = line.find('\t');
        if (tab == std::string::npos)
            throw ValidationError("comb file line " + std::to_string(lineno) +
                                  ": expected 'coordinate<TAB>weight'");
        QuadValue x = QuadValue::parse(trim(line.substr(0, tab)));
        std::complex<double> w = parse_weight(line.substr(tab + 1));
        pts.push_back({x, w});
    }
    if (!have_window) throw ValidationError("comb file: missing '# window a b' header");
    return WeightedComb(std::move(pts), window, tag);
}

WeightedComb read_comb_file(const std::string& path) {
    return parse_comb_text(read_text_file(path), "file:" + path);
}

std::string autocorr_csv(const Autocorrelation& a, const std::string& config_hash) {
    std::string out;
    out += "# config=" + config_hash + "\n";
    out += "z_exact,z_float,value_real,value_imag,n,volume\n";
    const std::string n_str = std::to_string(a.n());
    const std::string vol_str = format_double(a.volume());
    for (const auto& e : a.entries()) {
        out += e.z.to_string();
        out += ',';
        out += format_double(e.z.to_float());
        out += ',';
        out += format_double(e.value.real());
        out += ',';
        out += format_double(e.value.imag());
        out += ',';
        out += n_str;
        out += ',';
        out += vol_str;
        out += '\n';
    }
    return out;
}

std::string spectrum_csv(const SpectrumEstimate& se, const std::string& config_hash) {
    std::string out;
    out += "# config=" + config_hash + "\n";
    out += "k_exact,k_float";
    for (int n : se.spec.sizes) out += ",I_n" + std::to_string(n);
    out += ",class,I_inf\n";
    for (const auto& e : se.entries) {
        if (e.candidate.has_exact) out += e.candidate.exact.to_string();
        out += ',';
        out += format_double(e.candidate.k);
        for (double v : e.intensities) {
            out += ',';
            out += format_double(v);
        }
        out += ',';
        out += to_string(e.cls);
        out += ',';
        if (e.cls == PeakClass::bragg) out += format_double(e.intensity_limit);
        out += '\n';
    }
    return out;
}

SpectrumEstimate parse_spectrum_csv(const std::string& text, std::string& config_hash_out) {
    config_hash_out.clear();
    std::vector<std::string> lines = split_lines(text);
    std::size_t i = 0;
    for (; i < lines.size(); ++i) {
        std::string line = trim(lines[i]);
        if (line.empty()) continue;
        if (line.rfind("# config=", 0) == 0) {
            config_hash_out = trim(line.substr(9));
            continue;
        }
        if (line.front() == '#') continue;
        break;
    }
    if (i >= lines.size()) throw ValidationError("spectrum csv: missing header row");

    std::vector<std::string> header = split_csv_row(lines[i]);
    if (header.size() < 5 || header[0] != "k_exact" || header[1] != "k_float" ||
        header[header.size() - 2] != "class" || header.back() != "I_inf")
        throw ValidationError("spectrum csv: unrecognized header row");
    std::vector<int> sizes;
    for (std::size_t c = 2; c + 2 < header.size(); ++c) {
        if (header[c].rfind("I_n", 0) != 0)
            throw ValidationError("spectrum csv: expected intensity column, got '" +
                                  header[c] + "'");
        sizes.push_back(static_cast<int>(parse_number(header[c].substr(3), "spectrum csv")));
    }
    if (sizes.empty()) throw ValidationError("spectrum csv: no intensity columns");

    SpectrumEstimate se;
    se.spec = VanHoveSpec(1.0, sizes);
    for (++i; i < lines.size(); ++i) {
        std::string line = trim(lines[i]);
        if (line.empty() || line.front() == '#') continue;
        std::vector<std::string> cells = split_csv_row(line);
        if (cells.size() != header.size())
            throw ValidationError("spectrum csv: row with " + std::to_string(cells.size()) +
                                  " cells, expected " + std::to_string(header.size()));
        SpectrumEntry e;
        double kf = parse_number(cells[1], "spectrum csv");
        if (!cells[0].empty()) {
            e.candidate = exact_candidate(QuadValue::parse(cells[0]), CandidateOrigin::dual);
        } else {
            e.candidate = float_candidate(kf, CandidateOrigin::grid);
        }
        for (std::size_t c = 0; c < sizes.size(); ++c)
            e.intensities.push_back(parse_number(cells[2 + c], "spectrum csv"));
        const std::string& cls = cells[header.size() - 2];
        if (cls == "bragg")
            e.cls = PeakClass::bragg;
        else if (cls == "continuous")
            e.cls = PeakClass::continuous;
        else if (cls == "undecided")
            e.cls = PeakClass::undecided;
        else
            throw ValidationError("spectrum csv: unknown class '" + cls + "'");
        if (!cells.back().empty())
            e.intensity_limit = parse_number(cells.back(), "spectrum csv");
        se.entries.push_back(std::move(e));
    }
    std::stable_sort(se.entries.begin(), se.entries.end(),
                     [](const SpectrumEntry& a, const SpectrumEntry& b) {
                         return a.candidate.k < b.candidate.k;
                     });
    se.max_gap = recompute_max_gap(se);
    return se;
}

SpectrumEstimate read_spectrum_csv(const std::string& path, std::string& config_hash_out) {
    return parse_spectrum_csv(read_text_file(path), config_hash_out);
}

std::string spectrum_json(const SpectrumEstimate& se, const std::string& config_hash) {
    nlohmann::ordered_json doc;
    doc["config_hash"] = config_hash;
    doc["L0"] = se.spec.L0;
    doc["sizes"] = se.spec.sizes;
    doc["epsilon"] = se.epsilon;
    doc["delta_rel"] = se.delta_rel;
    doc["candidate_count"] = se.entries.size();
    doc["bragg_count"] = se.bragg_count();
    doc["max_gap"] = json_number_or_null(se.max_gap);
    nlohmann::ordered_json bragg = nlohmann::ordered_json::array();
    for (const auto& e : se.entries) {
        if (e.cls != PeakClass::bragg) continue;
        nlohmann::ordered_json line;
        if (e.candidate.has_exact)
            line["k_exact"] = e.candidate.exact.to_string();
        else
            line["k_exact"] = nullptr;
        line["k_float"] = e.candidate.k;
        line["intensity"] = e.intensity_limit;
        bragg.push_back(std::move(line));
    }
    doc["bragg"] = std::move(bragg);
    return doc.dump(2) + "\n";
}

std::string decomposition_csv(const Decomposition& d, const std::string& config_hash) {
    std::string out;
    out += "# config=" + config_hash + "\n";
    out += "# cutoff " + format_double(d.cutoff) + "\n";
    out += "z_exact,z_float,gamma_S_real,gamma_S_imag,gamma_0_real,gamma_0_imag\n";
    const auto& s = d.gamma_S.entries;
    const auto& r = d.gamma_0.entries;
    std::size_t i = 0, j = 0;
    auto emit = [&](const QuadValue& z, std::complex<double> vs, std::complex<double> v0) {
        out += z.to_string();
        out += ',';
        out += format_double(z.to_float());
        out += ',';
        out += format_double(vs.real());
        out += ',';
        out += format_double(vs.imag());
        out += ',';
        out += format_double(v0.real());
        out += ',';
        out += format_double(v0.imag());
        out += '\n';
    };
    while (i < s.size() || j < r.size()) {
        if (j >= r.size() || (i < s.size() && quad_cmp(s[i].z, r[j].z) < 0)) {
            emit(s[i].z, s[i].value, {0.0, 0.0});
            ++i;
        } else if (i >= s.size() || quad_cmp(r[j].z, s[i].z) < 0) {
            emit(r[j].z, {0.0, 0.0}, r[j].value);
            ++j;
        } else {
            emit(s[i].z, s[i].value, r[j].value);
            ++i;
            ++j;
        }
    }
    return out;
}

std::string reports_json(const std::vector<VerifyReport>& reports,
                         const std::string& config_hash) {
    nlohmann::ordered_json doc;
    doc["config_hash"] = config_hash;
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& rep : reports) {
        nlohmann::ordered_json jr;
        jr["theorem"] = rep.theorem;
        jr["scenario"] = rep.scenario;
        jr["seed"] = rep.seed;
        nlohmann::ordered_json checks = nlohmann::ordered_json::array();
        for (const auto& c : rep.checks) {
            nlohmann::ordered_json jc;
            jc["name"] = c.name;
            jc["pass"] = c.pass;
            jc["witness"] = json_number_or_null(c.witness);
            jc["tol"] = json_number_or_null(c.tol);
            checks.push_back(std::move(jc));
        }
        jr["checks"] = std::move(checks);
        jr["pass"] = rep.pass;
        jr["runtime_ms"] = rep.runtime_ms;
        arr.push_back(std::move(jr));
    }
    doc["reports"] = std::move(arr);
    return doc.dump(2) + "\n";
}

namespace {

std::string fmt_label(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

std::string fmt_px(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

} // namespace

std::string spectrum_svg(const SpectrumEstimate& se, const std::string& config_hash) {
    constexpr double kW = 800.0, kH = 400.0;
    constexpr double kLeft = 60.0, kRight = 780.0, kTop = 24.0, kBase = 350.0;

    double kmin = 0.0, kmax = 1.0;
    if (!se.entries.empty()) {
        kmin = se.entries.front().candidate.k;
        kmax = se.entries.back().candidate.k;
    }
    if (kmax - kmin < 1e-12) {
        kmin -= 0.5;
        kmax += 0.5;
    }
    double ymax = 0.0;
    auto display_height = [](const SpectrumEntry& e) {
        return e.cls == PeakClass::bragg ? e.intensity_limit
                                         : (e.intensities.empty() ? 0.0 : e.intensities.back());
    };
    for (const auto& e : se.entries) ymax = std::max(ymax, display_height(e));
    if (ymax <= 0.0) ymax = 1.0;

    auto x_of = [&](double k) { return kLeft + (k - kmin) / (kmax - kmin) * (kRight - kLeft); };
    auto y_of = [&](double v) { return kBase - v / ymax * (kBase - kTop); };

    std::string svg;
    svg += "<!-- config=" + config_hash + " -->\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " + fmt_px(kW) + " " +
           fmt_px(kH) + "\" font-family=\"monospace\" font-size=\"12\">\n";
    svg += "<rect x=\"0\" y=\"0\" width=\"" + fmt_px(kW) + "\" height=\"" + fmt_px(kH) +
           "\" fill=\"#ffffff\"/>\n";

    for (double frac : {0.0, 0.5, 1.0}) {
        double v = frac * ymax;
        double y = y_of(v);
        svg += "<line x1=\"" + fmt_px(kLeft - 4) + "\" y1=\"" + fmt_px(y) + "\" x2=\"" +
               fmt_px(kRight) + "\" y2=\"" + fmt_px(y) +
               "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
        svg += "<text x=\"" + fmt_px(kLeft - 8) + "\" y=\"" + fmt_px(y + 4) +
               "\" text-anchor=\"end\" fill=\"#444444\">" + fmt_label(v) + "</text>\n";
    }
    for (double frac : {0.0, 0.5, 1.0}) {
        double k = kmin + frac * (kmax - kmin);
        double x = x_of(k);
        svg += "<line x1=\"" + fmt_px(x) + "\" y1=\"" + fmt_px(kBase) + "\" x2=\"" + fmt_px(x) +
               "\" y2=\"" + fmt_px(kBase + 5) + "\" stroke=\"#444444\" stroke-width=\"1\"/>\n";
        svg += "<text x=\"" + fmt_px(x) + "\" y=\"" + fmt_px(kBase + 18) +
               "\" text-anchor=\"middle\" fill=\"#444444\">" + fmt_label(k) + "</text>\n";
    }
    svg += "<line x1=\"" + fmt_px(kLeft) + "\" y1=\"" + fmt_px(kBase) + "\" x2=\"" +
           fmt_px(kRight) + "\" y2=\"" + fmt_px(kBase) +
           "\" stroke=\"#222222\" stroke-width=\"1\"/>\n";
    svg += "<line x1=\"" + fmt_px(kLeft) + "\" y1=\"" + fmt_px(kTop) + "\" x2=\"" +
           fmt_px(kLeft) + "\" y2=\"" + fmt_px(kBase) +
           "\" stroke=\"#222222\" stroke-width=\"1\"/>\n";

    for (const auto& e : se.entries) {
        if (e.cls == PeakClass::bragg) continue;
        double h = display_height(e);
        const char* color = e.cls == PeakClass::continuous ? "#c8c8c8" : "#d79b4a";
        svg += "<line x1=\"" + fmt_px(x_of(e.candidate.k)) + "\" y1=\"" + fmt_px(kBase) +
               "\" x2=\"" + fmt_px(x_of(e.candidate.k)) + "\" y2=\"" + fmt_px(y_of(h)) +
               "\" stroke=\"" + color + "\" stroke-width=\"1\"/>\n";
    }
    for (const auto& e : se.entries) {
        if (e.cls != PeakClass::bragg) continue;
        svg += "<line x1=\"" + fmt_px(x_of(e.candidate.k)) + "\" y1=\"" + fmt_px(kBase) +
               "\" x2=\"" + fmt_px(x_of(e.candidate.k)) + "\" y2=\"" +
               fmt_px(y_of(e.intensity_limit)) +
               "\" stroke=\"#1f3b73\" stroke-width=\"2.5\"/>\n";
    }

    double widest = 0.0, ga = 0.0, gb = 0.0;
    bool have_prev = false;
    double prev = 0.0;
    for (const auto& e : se.entries) {
        if (e.cls != PeakClass::bragg) continue;
        if (have_prev && e.candidate.k - prev > widest) {
            widest = e.candidate.k - prev;
            ga = prev;
            gb = e.candidate.k;
        }
        prev = e.candidate.k;
        have_prev = true;
    }
    if (widest > 0.0) {
        double y = kBase + 28.0;
        svg += "<line x1=\"" + fmt_px(x_of(ga)) + "\" y1=\"" + fmt_px(y) + "\" x2=\"" +
               fmt_px(x_of(gb)) + "\" y2=\"" + fmt_px(y) +
               "\" stroke=\"#b03030\" stroke-width=\"1.5\"/>\n";
        for (double gx : {ga, gb})
            svg += "<line x1=\"" + fmt_px(x_of(gx)) + "\" y1=\"" + fmt_px(y - 4) + "\" x2=\"" +
                   fmt_px(x_of(gx)) + "\" y2=\"" + fmt_px(y + 4) +
                   "\" stroke=\"#b03030\" stroke-width=\"1.5\"/>\n";
        svg += "<text x=\"" + fmt_px((x_of(ga) + x_of(gb)) / 2.0) + "\" y=\"" + fmt_px(y + 16) +
               "\" text-anchor=\"middle\" fill=\"#b03030\">gap " + fmt_label(widest) +
               "</text>\n";
    }
    if (!have_prev) {
        svg += "<text x=\"" + fmt_px((kLeft + kRight) / 2.0) + "\" y=\"" +
               fmt_px((kTop + kBase) / 2.0) +
               "\" text-anchor=\"middle\" fill=\"#888888\">no bragg peaks detected</text>\n";
    }

    double lx = kRight - 150.0;
    struct LegendRow {
        const char* color;
        const char* label;
        double width;
    };
    for (int r = 0; const LegendRow& row : {LegendRow{"#1f3b73", "bragg", 2.5},
                                            LegendRow{"#c8c8c8", "continuous", 1.0},
                                            LegendRow{"#d79b4a", "undecided", 1.0}}) {
        double y = kTop + 6.0 + 16.0 * r;
        svg += "<line x1=\"" + fmt_px(lx) + "\" y1=\"" + fmt_px(y) + "\" x2=\"" +
               fmt_px(lx + 24) + "\" y2=\"" + fmt_px(y) + "\" stroke=\"" + row.color +
               "\" stroke-width=\"" + fmt_label(row.width) + "\"/>\n";
        svg += "<text x=\"" + fmt_px(lx + 30) + "\" y=\"" + fmt_px(y + 4) +
               "\" fill=\"#444444\">" + row.label + "</text>\n";
        ++r;
    }

    svg += "</svg>\n";
    return svg;
}

} // namespace braggkit
