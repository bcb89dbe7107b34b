#pragma once

// Scenario runner behind the CLI: parses a line-oriented `key = value`
// config with [section] headers (or the JSON form emitted as
// resolved_config.json), dispatches to the propagate / amplitudes / kernels
// / verify commands and writes CSV/JSON artifacts. All floating output uses
// 17 significant digits so identical configs reproduce byte-identical files.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "oscprop/amplitudes.hpp"
#include "oscprop/cauchy.hpp"
#include "oscprop/coeffs.hpp"
#include "oscprop/drive.hpp"
#include "oscprop/kernels.hpp"
#include "oscprop/oracle.hpp"
#include "oscprop/propagators.hpp"

namespace oscprop {

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

}  // namespace detail

// Sections of string key/value pairs; records every key it hands out (with
// the resolved value) so the run can emit a re-runnable resolved config.
class KeyValueConfig {
public:
    static KeyValueConfig parse(const std::string& text) {
        std::size_t first = text.find_first_not_of(" \t\r\n");
        if (first != std::string::npos && text[first] == '{') return parse_json(text);
        return parse_ini(text);
    }

    bool has(const std::string& section, const std::string& key) const {
        auto s = sections_.find(section);
        return s != sections_.end() && s->second.count(key) > 0;
    }

    std::string get(const std::string& section, const std::string& key,
                    const std::string& fallback) const {
        std::string v = fallback;
        auto s = sections_.find(section);
        if (s != sections_.end()) {
            auto k = s->second.find(key);
            if (k != s->second.end()) v = k->second.value;
        }
        resolved_[section][key] = v;
        return v;
    }

    std::string require(const std::string& section, const std::string& key) const {
        auto s = sections_.find(section);
        if (s == sections_.end() || !s->second.count(key))
            throw ConfigError("missing required config field [" + section + "] " + key);
        resolved_[section][key] = s->second.at(key).value;
        return s->second.at(key).value;
    }

    double get_num(const std::string& section, const std::string& key, double fallback) const {
        if (!has(section, key)) {
            resolved_[section][key] = fmt17(fallback);
            return fallback;
        }
        return to_num(section, key, require(section, key));
    }

    double require_num(const std::string& section, const std::string& key) const {
        return to_num(section, key, require(section, key));
    }

    int get_int(const std::string& section, const std::string& key, int fallback) const {
        double v = get_num(section, key, fallback);
        if (v != std::floor(v))
            throw ConfigError("config field [" + section + "] " + key + " must be an integer" +
                              where(section, key));
        return static_cast<int>(v);
    }

    bool get_bool(const std::string& section, const std::string& key, bool fallback) const {
        std::string v = detail::lower(get(section, key, fallback ? "true" : "false"));
        if (v == "true" || v == "1" || v == "yes") return true;
        if (v == "false" || v == "0" || v == "no") return false;
        throw ConfigError("config field [" + section + "] " + key + " must be a boolean" +
                          where(section, key));
    }

    std::vector<double> require_list(const std::string& section, const std::string& key) const {
        std::string raw = require(section, key);
        std::vector<double> out;
        std::stringstream ss(raw);
        std::string item;
        while (std::getline(ss, item, ',')) {
            item = detail::trim(item);
            if (item.empty()) continue;
            out.push_back(to_num(section, key, item));
        }
        if (out.empty())
            throw ConfigError("config field [" + section + "] " + key + " is an empty list" +
                              where(section, key));
        return out;
    }

    nlohmann::json resolved_json() const {
        nlohmann::json j;
        for (const auto& [sec, kv] : resolved_)
            for (const auto& [key, val] : kv) j[sec][key] = val;
        return j;
    }

private:
    struct Entry {
        std::string value;
        int line = 0;
    };

    std::string where(const std::string& section, const std::string& key) const {
        auto s = sections_.find(section);
        if (s != sections_.end()) {
            auto k = s->second.find(key);
            if (k != s->second.end() && k->second.line > 0)
                return " (line " + std::to_string(k->second.line) + ")";
        }
        return "";
    }

    double to_num(const std::string& section, const std::string& key,
                  const std::string& raw) const {
        try {
            std::size_t pos = 0;
            double v = std::stod(raw, &pos);
            if (pos != raw.size()) throw std::invalid_argument(raw);
            return v;
        } catch (const std::exception&) {
            throw ConfigError("config field [" + section + "] " + key + " = '" + raw +
                              "' is not a number" + where(section, key));
        }
    }

    static KeyValueConfig parse_ini(const std::string& text) {
        KeyValueConfig cfg;
        std::stringstream ss(text);
        std::string line, section;
        int lineno = 0;
        while (std::getline(ss, line)) {
            ++lineno;
            std::string t = detail::trim(line);
            if (t.empty() || t[0] == '#' || t[0] == ';') continue;
            if (t.front() == '[') {
                if (t.back() != ']')
                    throw ConfigError("malformed section header at line " +
                                      std::to_string(lineno) + ": " + t);
                section = detail::lower(detail::trim(t.substr(1, t.size() - 2)));
                continue;
            }
            std::size_t eq = t.find('=');
            if (eq == std::string::npos)
                throw ConfigError("expected 'key = value' at line " + std::to_string(lineno) +
                                  ": " + t);
            if (section.empty())
                throw ConfigError("key outside any [section] at line " + std::to_string(lineno));
            std::string key = detail::lower(detail::trim(t.substr(0, eq)));
            std::string val = detail::trim(t.substr(eq + 1));
            cfg.sections_[section][key] = Entry{val, lineno};
        }
        return cfg;
    }

    static KeyValueConfig parse_json(const std::string& text) {
        KeyValueConfig cfg;
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(text);
        } catch (const std::exception& e) {
            throw ConfigError(std::string("malformed JSON config: ") + e.what());
        }
        for (auto& [sec, obj] : j.items()) {
            if (!obj.is_object()) throw ConfigError("JSON config section '" + sec + "' must be an object");
            for (auto& [key, val] : obj.items()) {
                std::string v = val.is_string() ? val.get<std::string>() : val.dump();
                cfg.sections_[detail::lower(sec)][detail::lower(key)] = Entry{v, 0};
            }
        }
        return cfg;
    }

    std::map<std::string, std::map<std::string, Entry>> sections_;
    mutable std::map<std::string, std::map<std::string, std::string>> resolved_;
};

namespace detail {

inline std::vector<std::pair<double, double>> read_two_column_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open CSV file '" + path + "'");
    std::vector<std::pair<double, double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        std::string t = trim(line);
        if (t.empty()) continue;
        std::stringstream ss(t);
        std::string a, b;
        if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',')) continue;
        try {
            rows.emplace_back(std::stod(a), std::stod(b));
        } catch (const std::exception&) {
            continue;  // header or comment row
        }
    }
    if (rows.size() < 4)
        throw ConfigError("CSV file '" + path + "' needs at least 4 numeric rows");
    std::sort(rows.begin(), rows.end());
    return rows;
}

// Named built-in drives plus tabulated CSV interpolated cubically.
inline TimeFunction build_time_function(const KeyValueConfig& cfg, const std::string& section,
                                        const std::string& prefix) {
    const std::string kind = lower(cfg.get(section, prefix + "kind", "constant"));
    const double offset = cfg.get_num(section, prefix + "offset", 0.0);
    if (kind == "constant") {
        const double v = cfg.get_num(section, prefix + "value", 0.0);
        return [v](double) { return v; };
    }
    if (kind == "cosine" || kind == "sine") {
        const double amp = cfg.get_num(section, prefix + "amplitude", 1.0);
        const double freq = cfg.get_num(section, prefix + "frequency", 1.0);
        if (kind == "cosine")
            return [=](double t) { return offset + amp * std::cos(freq * t); };
        return [=](double t) { return offset + amp * std::sin(freq * t); };
    }
    if (kind == "exp_decay") {
        const double amp = cfg.get_num(section, prefix + "amplitude", 1.0);
        const double rate = cfg.get_num(section, prefix + "rate", 1.0);
        return [=](double t) { return offset + amp * std::exp(-rate * t); };
    }
    if (kind == "poly") {
        std::vector<double> coeffs = cfg.require_list(section, prefix + "coeffs");
        return [=](double t) {
            double acc = 0.0;
            for (std::size_t k = coeffs.size(); k-- > 0;) acc = acc * t + coeffs[k];
            return acc + offset;
        };
    }
    if (kind == "csv") {
        auto rows = read_two_column_csv(cfg.require(section, prefix + "csv"));
        std::vector<double> ts, vs;
        for (auto& [a, b] : rows) {
            ts.push_back(a);
            vs.push_back(b);
        }
        auto spline = std::make_shared<CubicSpline<double>>(ts, vs);
        const double lo = ts.front(), hi = ts.back();
        return [spline, lo, hi](double t) { return (*spline)(std::clamp(t, lo, hi)); };
    }
    throw ConfigError("unknown drive kind '" + kind + "' for [" + section + "] " + prefix +
                      "kind");
}

inline DriveSpec build_drive(const KeyValueConfig& cfg, bool tdfreq) {
    TimeFunction f = build_time_function(cfg, "drive", "f_");
    TimeFunction g = build_time_function(cfg, "drive", "g_");
    if (tdfreq || cfg.has("drive", "omega_kind")) {
        TimeFunction om = build_time_function(cfg, "drive", "omega_");
        return DriveSpec(std::move(f), std::move(g), std::move(om));
    }
    return DriveSpec(std::move(f), std::move(g), cfg.get_num("drive", "omega", 1.0));
}

inline GridSpec build_grid(const KeyValueConfig& cfg) {
    GridSpec g;
    g.x_min = cfg.get_num("grid", "x_min", -12.0);
    g.x_max = cfg.get_num("grid", "x_max", 12.0);
    g.n_points = cfg.get_int("grid", "n_points", 769);
    if (!(g.x_max > g.x_min)) throw ConfigError("[grid] x_max must exceed x_min");
    if (g.n_points < 16) throw ConfigError("[grid] n_points must be >= 16");
    return g;
}

// `state` grammar: '+'-separated terms, each `[coef *] name(args)` with
// name in {gaussian(center,width,momentum), eigenstate(n), csv(path)}.
inline SampledWave build_initial(const KeyValueConfig& cfg, const GridSpec& grid) {
    const std::string expr = cfg.require("initial", "state");
    SampledWave wave = SampledWave::zeros(grid);
    std::stringstream ss(expr);
    std::string term;
    while (std::getline(ss, term, '+')) {
        term = trim(term);
        if (term.empty()) continue;
        double coef = 1.0;
        std::size_t star = term.find('*');
        std::size_t paren = term.find('(');
        if (star != std::string::npos && (paren == std::string::npos || star < paren)) {
            try {
                coef = std::stod(trim(term.substr(0, star)));
            } catch (const std::exception&) {
                throw ConfigError("bad coefficient in [initial] state term '" + term + "'");
            }
            term = trim(term.substr(star + 1));
            paren = term.find('(');
        }
        if (paren == std::string::npos || term.back() != ')')
            throw ConfigError("bad [initial] state term '" + term +
                              "': expected name(arg, ...)");
        const std::string name = lower(trim(term.substr(0, paren)));
        const std::string argstr = term.substr(paren + 1, term.size() - paren - 2);
        std::vector<std::string> args;
        std::stringstream as(argstr);
        std::string a;
        while (std::getline(as, a, ',')) args.push_back(trim(a));

        if (name == "gaussian") {
            if (args.size() != 3)
                throw ConfigError("[initial] gaussian needs (center, width, momentum)");
            const double c = std::stod(args[0]), w = std::stod(args[1]), p = std::stod(args[2]);
            if (!(w > 0.0)) throw ConfigError("[initial] gaussian width must be positive");
            const double norm = std::pow(kPi * w * w, -0.25);
            for (std::size_t i = 0; i < wave.values.size(); ++i) {
                const double x = wave.x(i);
                wave.values[i] += coef * norm * std::exp(-(x - c) * (x - c) / (2.0 * w * w)) *
                                  std::polar(1.0, p * x);
            }
        } else if (name == "eigenstate") {
            if (args.size() != 1) throw ConfigError("[initial] eigenstate needs (n)");
            const int n = std::stoi(args[0]);
            if (n < 0 || n > 512) throw ConfigError("[initial] eigenstate index out of range");
            for (std::size_t i = 0; i < wave.values.size(); ++i)
                wave.values[i] += coef * osc_wavefunction(static_cast<unsigned>(n), wave.x(i));
        } else if (name == "csv") {
            if (args.size() != 1) throw ConfigError("[initial] csv needs (path)");
            std::ifstream in(args[0]);
            if (!in) throw ConfigError("cannot open initial-state CSV '" + args[0] + "'");
            std::vector<double> xs;
            std::vector<std::complex<double>> vs;
            std::string line;
            while (std::getline(in, line)) {
                std::stringstream ls(trim(line));
                std::string c0, c1, c2;
                if (!std::getline(ls, c0, ',') || !std::getline(ls, c1, ',')) continue;
                double im = 0.0;
                if (std::getline(ls, c2, ',')) {
                    try {
                        im = std::stod(c2);
                    } catch (const std::exception&) {
                        continue;
                    }
                }
                try {
                    xs.push_back(std::stod(c0));
                    vs.emplace_back(std::stod(c1), im);
                } catch (const std::exception&) {
                    continue;
                }
            }
            if (xs.size() < 4) throw ConfigError("initial-state CSV needs >= 4 numeric rows");
            CubicSpline<std::complex<double>> spline(xs, vs);
            for (std::size_t i = 0; i < wave.values.size(); ++i) {
                const double x = wave.x(i);
                if (x >= xs.front() && x <= xs.back()) wave.values[i] += coef * spline(x);
            }
        } else {
            throw ConfigError("unknown [initial] state builder '" + name + "'");
        }
    }
    return wave;
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << content;
}

}  // namespace detail

struct RunResult {
    int exit_code = 0;
    std::string message;
    std::vector<std::string> artifacts;
};

namespace detail {

struct ScenarioContext {
    const KeyValueConfig& cfg;
    std::filesystem::path out_dir;
    int threads = 1;
    bool write_csv = true;
    bool write_json = true;
    std::vector<std::string>* artifacts = nullptr;

    std::string artifact(const std::string& name) const {
        std::string p = (out_dir / name).string();
        if (artifacts) artifacts->push_back(p);
        return p;
    }
};

inline void run_propagate(ScenarioContext& ctx) {
    const KeyValueConfig& cfg = ctx.cfg;
    const std::string variant = lower(cfg.get("scenario", "variant", "forced"));
    const GridSpec grid = build_grid(cfg);
    SampledWave initial = build_initial(cfg, grid);
    std::vector<double> times = cfg.require_list("times", "values");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (times[i] <= times[i - 1])
            throw ConfigError("[times] values must be strictly increasing");

    const bool diffusion = (variant == "diffusion");
    nlohmann::json diag = nlohmann::json::array();
    for (std::size_t ti = 0; ti < times.size(); ++ti) {
        const double t = times[ti];
        std::vector<std::string> warnings;
        SampledWave out;
        double omega_for_energy = 1.0;
        if (variant == "sho") {
            const double om = cfg.get_num("drive", "omega", 1.0);
            out = propagate_sho(om, t, initial, &warnings);
            omega_for_energy = om;
        } else if (variant == "forced") {
            DriveSpec drive = build_drive(cfg, false);
            out = propagate_forced(drive, t, initial, &warnings);
            omega_for_energy = drive.omega0;
        } else if (variant == "special") {
            const double om = cfg.get_num("drive", "omega", 1.0);
            const double mu = cfg.get_num("params", "mu", 0.25);
            out = propagate_special(om, mu, t, initial, &warnings);
            omega_for_energy = om;
        } else if (variant == "tdfreq") {
            DriveSpec drive = build_drive(cfg, true);
            out = propagate_tdfreq(drive, t, initial, &warnings);
        } else if (variant == "diffusion") {
            const double kappa = cfg.get_num("params", "kappa", 1.0);
            DriveSpec drive = build_drive(cfg, false);
            out = propagate_diffusion(kappa, drive.f, drive.g, t, initial, &warnings);
            omega_for_energy = 2.0 * kappa;
        } else if (variant == "physical") {
            PhysicalParams p;
            p.hbar = cfg.get_num("params", "hbar", 1.0);
            p.mass = cfg.get_num("params", "mass", 1.0);
            p.omega = cfg.get_num("params", "omega", 1.0);
            DriveSpec drive = build_drive(cfg, false);
            p.F = drive.f;
            p.Gvel = drive.g;
            out = propagate_physical(p, t, 0.0, initial, &warnings);
            omega_for_energy = p.omega > 0.0 ? p.omega : 1.0;
        } else {
            throw ConfigError("unknown propagate variant '" + variant + "'");
        }

        if (ctx.write_csv) {
            char name[32];
            std::snprintf(name, sizeof(name), "wave_%03zu.csv", ti);
            std::string body = diffusion ? "x,value\n" : "x,re,im\n";
            for (std::size_t i = 0; i < out.values.size(); ++i) {
                body += fmt17(out.x(i));
                body += ',';
                body += fmt17(out.values[i].real());
                if (!diffusion) {
                    body += ',';
                    body += fmt17(out.values[i].imag());
                }
                body += '\n';
            }
            write_text_file(ctx.artifact(name), body);
        }
        SpectralState st = project(out, 64);
        nlohmann::json entry;
        entry["t"] = t;
        entry["norm"] = out.l2_norm();
        entry["energy_expectation"] = energy_expectation(st, omega_for_energy);
        entry["parseval_defect"] = st.parseval_defect;
        entry["warnings"] = warnings;
        diag.push_back(entry);
    }
    if (ctx.write_json)
        write_text_file(ctx.artifact("diagnostics.json"), diag.dump(2) + "\n");
}

inline void run_amplitudes(ScenarioContext& ctx) {
    const KeyValueConfig& cfg = ctx.cfg;
    const std::string variant = lower(cfg.get("scenario", "variant", "general"));
    const double t = cfg.require_num("amplitudes", "t");
    const int N = cfg.get_int("amplitudes", "n", 32);
    if (N < 0 || N > 128) throw ConfigError("[amplitudes] n must lie in [0, 128]");

    AmplitudeMatrix M;
    if (variant == "general") {
        M = cnm_general(build_drive(cfg, false), t, static_cast<unsigned>(N));
    } else if (variant == "landau") {
        LandauParams p;
        p.hbar = cfg.get_num("params", "hbar", 1.0);
        p.mass = cfg.get_num("params", "mass", 1.0);
        p.light_speed = cfg.get_num("params", "light_speed", 1.0);
        p.charge_sign = cfg.get_num("params", "charge_sign", 1.0);
        p.H_field = cfg.get_num("params", "h_field", 1.0);
        p.mu_mag = cfg.get_num("params", "mu_mag", 0.0);
        p.spin_s = cfg.get_num("params", "spin_s", 0.5);
        p.sigma = cfg.get_num("params", "sigma", 0.5);
        p.p_x = cfg.get_num("params", "p_x", 0.0);
        p.p_z = cfg.get_num("params", "p_z", 0.0);
        const double t0 = cfg.get_num("amplitudes", "t0", 0.0);
        DriveSpec drive = build_drive(cfg, false);
        M = cnm_landau(p, drive.f, t, t0, static_cast<unsigned>(N));
    } else if (variant == "diffusion") {
        const double kappa = cfg.get_num("params", "kappa", 1.0);
        DriveSpec drive = build_drive(cfg, false);
        M = cnm_diffusion(kappa, drive.f, drive.g, t, static_cast<unsigned>(N));
    } else {
        throw ConfigError("unknown amplitudes variant '" + variant + "'");
    }

    if (ctx.write_csv) {
        std::string body = "n,m,re,im\n";
        for (unsigned n = 0; n <= M.N; ++n)
            for (unsigned m = 0; m <= M.N; ++m) {
                body += std::to_string(n);
                body += ',';
                body += std::to_string(m);
                body += ',';
                body += fmt17(M.at(n, m).real());
                body += ',';
                body += fmt17(M.at(n, m).imag());
                body += '\n';
            }
        write_text_file(ctx.artifact("amplitudes.csv"), body);
    }
    if (ctx.write_json) {
        nlohmann::json j;
        j["t"] = M.t;
        j["N"] = M.N;
        j["tail_bound"] = M.tail_bound;
        nlohmann::json norms = nlohmann::json::array();
        for (unsigned m = 0; m <= M.N; ++m) norms.push_back(std::sqrt(M.column_norm_sq(m)));
        j["column_norms"] = norms;
        write_text_file(ctx.artifact("summary.json"), j.dump(2) + "\n");
    }
}

inline void run_kernels(ScenarioContext& ctx) {
    const KeyValueConfig& cfg = ctx.cfg;
    const std::string kind =
        lower(cfg.has("kernel", "kind") ? cfg.get("kernel", "kind", "mehler")
                                        : cfg.get("scenario", "variant", "mehler"));
    const GridSpec gx = build_grid(cfg);
    const double y_min = cfg.get_num("grid", "y_min", gx.x_min);
    const double y_max = cfg.get_num("grid", "y_max", gx.x_max);
    const int ny = cfg.get_int("grid", "n_points_y", gx.n_points);

    std::function<std::complex<double>(double, double)> eval;
    bool real_valued = false;

    if (kind == "mehler" || kind == "gen_fourier" || kind == "special_g" ||
        kind == "l_kernel" || kind == "heat") {
        KernelSpec spec;
        spec.r = cfg.get_num("kernel", "r", 0.5);
        spec.tau = cfg.get_num("kernel", "tau", kPi / 2.0);
        spec.t = cfg.get_num("kernel", "t", 0.5);
        spec.omega = cfg.get_num("kernel", "omega", 1.0);
        spec.mu = cfg.get_num("kernel", "mu", 0.0);
        spec.eps = cfg.get_num("kernel", "eps", 0.0);
        spec.kappa = cfg.get_num("kernel", "kappa", 1.0);
        if (kind == "mehler") spec.kind = KernelKind::mehler;
        else if (kind == "gen_fourier") spec.kind = KernelKind::gen_fourier;
        else if (kind == "special_g") spec.kind = KernelKind::special_g;
        else if (kind == "l_kernel") spec.kind = KernelKind::l_kernel;
        else spec.kind = KernelKind::heat;
        real_valued = spec.real_valued();
        eval = [spec](double x, double y) { return spec.evaluate(x, y); };
    } else if (kind == "sho_prop") {
        const double om = cfg.get_num("kernel", "omega", 1.0);
        const double t = cfg.require_num("kernel", "t");
        eval = [om, t](double x, double y) { return sho_propagator(om, t, x, y); };
    } else if (kind == "forced_prop") {
        const double t = cfg.require_num("kernel", "t");
        auto prop = std::make_shared<ForcedPropagator>(build_drive(cfg, false), t);
        eval = [prop](double x, double y) { return (*prop)(x, y); };
    } else if (kind == "tdfreq_prop") {
        const double t = cfg.require_num("kernel", "t");
        auto prop = std::make_shared<TdfreqPropagator>(build_drive(cfg, true), t);
        eval = [prop](double x, double y) { return (*prop)(x, y); };
    } else if (kind == "diffusion_green") {
        const double t = cfg.require_num("kernel", "t");
        const double kappa = cfg.get_num("params", "kappa", 1.0);
        DriveSpec drive = build_drive(cfg, false);
        auto green = std::make_shared<DiffusionGreen>(kappa, drive.f, drive.g, t);
        real_valued = true;
        eval = [green](double x, double y) {
            return std::complex<double>((*green)(x, y), 0.0);
        };
    } else if (kind == "physical_prop") {
        const double t = cfg.require_num("kernel", "t");
        PhysicalParams p;
        p.hbar = cfg.get_num("params", "hbar", 1.0);
        p.mass = cfg.get_num("params", "mass", 1.0);
        p.omega = cfg.get_num("params", "omega", 1.0);
        DriveSpec drive = build_drive(cfg, false);
        p.F = drive.f;
        p.Gvel = drive.g;
        auto prop = std::make_shared<PhysicalPropagator>(p, t, 0.0);
        eval = [prop](double x, double y) { return (*prop)(x, y); };
    } else {
        throw ConfigError("unknown kernel kind '" + kind + "'");
    }

    const std::size_t nx = static_cast<std::size_t>(gx.n_points);
    const std::size_t nyz = static_cast<std::size_t>(ny);
    std::vector<std::complex<double>> table(nx * nyz);
    parallel_for(nx, ctx.threads, [&](std::size_t i) {
        const double x = gx.x_min + (gx.x_max - gx.x_min) * static_cast<double>(i) /
                                        (static_cast<double>(nx) - 1.0);
        for (std::size_t j = 0; j < nyz; ++j) {
            const double y =
                y_min + (y_max - y_min) * static_cast<double>(j) / (static_cast<double>(nyz) - 1.0);
            table[i * nyz + j] = eval(x, y);
        }
    });

    if (ctx.write_csv) {
        std::string body = real_valued ? "x,y,value\n" : "x,y,re,im\n";
        for (std::size_t i = 0; i < nx; ++i) {
            const double x = gx.x_min + (gx.x_max - gx.x_min) * static_cast<double>(i) /
                                            (static_cast<double>(nx) - 1.0);
            for (std::size_t j = 0; j < nyz; ++j) {
                const double y = y_min + (y_max - y_min) * static_cast<double>(j) /
                                             (static_cast<double>(nyz) - 1.0);
                body += fmt17(x);
                body += ',';
                body += fmt17(y);
                body += ',';
                body += fmt17(table[i * nyz + j].real());
                if (!real_valued) {
                    body += ',';
                    body += fmt17(table[i * nyz + j].imag());
                }
                body += '\n';
            }
        }
        write_text_file(ctx.artifact("kernel.csv"), body);
    }
}

// Bundled analytic-vs-oracle comparisons; each returns its achieved metric.
inline bool run_verify(ScenarioContext& ctx) {
    const KeyValueConfig& cfg = ctx.cfg;
    const std::string which = lower(cfg.get("verify", "cases", "all"));
    auto wanted = [&](const std::string& name) {
        return which == "all" || which.find(name) != std::string::npos;
    };

    nlohmann::json report = nlohmann::json::array();
    bool all_pass = true;
    auto add_case = [&](const std::string& name, double metric, double tol, bool pass) {
        nlohmann::json j;
        j["case"] = name;
        j["L2_error"] = metric;
        j["tolerance"] = tol;
        j["pass"] = pass;
        report.push_back(j);
        all_pass = all_pass && pass;
    };

    const GridSpec grid{-12.0, 12.0, 1537};
    auto gaussian = [](double x) {
        return std::complex<double>(std::pow(kPi, -0.25) * std::exp(-(x - 0.5) * (x - 0.5) / 2.0),
                                    0.0);
    };

    if (wanted("sho_eigenphase")) {
        // drive-free oscillator: CN must reproduce the ground-state phase
        DriveSpec drive(DriveSpec::zero, DriveSpec::zero, 1.0);
        FDConfig fd{1.0 / 64.0, 1.0 / 2048.0, -12.0, 12.0};
        SampledWave psi0 = SampledWave::sample(
            grid, [](double x) { return std::complex<double>(osc_wavefunction(0, x), 0.0); });
        SampledWave cn = crank_nicolson_evolve(Equation::schrodinger, drive, 0.0, fd, psi0, 1.0);
        SampledWave exact = SampledWave::sample(
            GridSpec{fd.x_min, fd.x_max, static_cast<int>(cn.n_points())}, [](double x) {
                return std::polar(1.0, -0.5) * osc_wavefunction(0, x);
            });
        const double err = l2_distance(cn, exact);
        add_case("sho_eigenphase", err, 1e-5, err < 1e-5);
    }
    if (wanted("schrodinger_fho12")) {
        DriveSpec drive([](double s) { return 2.0 * std::cos(s); }, DriveSpec::zero, 1.0);
        FDConfig fd{1.0 / 64.0, 1.0 / 4096.0, -12.0, 12.0};
        SampledWave psi0 = SampledWave::sample(grid, gaussian);
        SampledWave cn = crank_nicolson_evolve(Equation::schrodinger, drive, 0.0, fd, psi0, 1.0);
        SampledWave analytic = propagate_forced(
            drive, 1.0,
            SampledWave::sample(GridSpec{fd.x_min, fd.x_max, static_cast<int>(cn.n_points())},
                                gaussian));
        const double err = l2_distance(cn, analytic);
        add_case("schrodinger_fho12", err, 1e-4, err < 1e-4);
    }
    if (wanted("diffusion_eps_drive")) {
        const double kappa = 0.75, eps = 0.4;
        TimeFunction f = [=](double s) { return -eps * std::cosh((2.0 * kappa - 1.0) * s); };
        TimeFunction g = [=](double s) { return eps * std::sinh((2.0 * kappa - 1.0) * s); };
        DriveSpec drive(f, g, 1.0);
        FDConfig fd{1.0 / 64.0, 1.0 / 4096.0, -12.0, 12.0};
        SampledWave u0 = SampledWave::sample(grid, gaussian);
        SampledWave cn = crank_nicolson_evolve(Equation::diffusion, drive, kappa, fd, u0, 0.5);
        SampledWave analytic = propagate_diffusion(
            kappa, f, g, 0.5,
            SampledWave::sample(GridSpec{fd.x_min, fd.x_max, static_cast<int>(cn.n_points())},
                                gaussian));
        const double err = l2_distance(cn, analytic);
        add_case("diffusion_eps_drive", err, 1e-4, err < 1e-4);
    }
    if (wanted("cn_order2")) {
        // halving dx and dt should shrink the eigenphase error ~4x
        DriveSpec drive(DriveSpec::zero, DriveSpec::zero, 1.0);
        SampledWave psi0 = SampledWave::sample(
            grid, [](double x) { return std::complex<double>(osc_wavefunction(0, x), 0.0); });
        auto err_at = [&](double dx, double dt) {
            FDConfig fd{dx, dt, -12.0, 12.0};
            SampledWave cn =
                crank_nicolson_evolve(Equation::schrodinger, drive, 0.0, fd, psi0, 1.0);
            SampledWave exact = SampledWave::sample(
                GridSpec{fd.x_min, fd.x_max, static_cast<int>(cn.n_points())},
                [](double x) { return std::polar(1.0, -0.5) * osc_wavefunction(0, x); });
            return l2_distance(cn, exact);
        };
        const double e1 = err_at(1.0 / 16.0, 1.0 / 64.0);
        const double e2 = err_at(1.0 / 32.0, 1.0 / 128.0);
        const double ratio = e1 / e2;
        add_case("cn_order2_ratio", ratio, 3.0, ratio > 3.0 && ratio < 5.5);
    }

    if (ctx.write_json)
        write_text_file(ctx.artifact("verify_report.json"), report.dump(2) + "\n");
    return all_pass;
}

}  // namespace detail

// Parses and executes one scenario. Exit codes: 0 success, 2 config error,
// 3 numeric-domain error, 4 verification failure.
inline RunResult run_scenario(const std::string& config_text, const std::string& out_dir,
                              int threads = 1, const std::string& command_override = "") {
    RunResult result;
    try {
        KeyValueConfig cfg = KeyValueConfig::parse(config_text);
        std::string command = detail::lower(cfg.get("scenario", "command",
                                                    command_override.empty() ? ""
                                                                             : command_override));
        if (command.empty()) throw ConfigError("missing [scenario] command");
        if (!command_override.empty() && command != detail::lower(command_override))
            throw ConfigError("[scenario] command '" + command +
                              "' does not match CLI subcommand '" + command_override + "'");

        detail::ScenarioContext ctx{cfg, std::filesystem::path(out_dir), threads, true, true,
                                    &result.artifacts};
        std::filesystem::create_directories(ctx.out_dir);
        ctx.write_csv = cfg.get_bool("output", "csv", true);
        ctx.write_json = cfg.get_bool("output", "json", true);

        bool verify_ok = true;
        if (command == "propagate") detail::run_propagate(ctx);
        else if (command == "amplitudes") detail::run_amplitudes(ctx);
        else if (command == "kernels") detail::run_kernels(ctx);
        else if (command == "verify") verify_ok = detail::run_verify(ctx);
        else throw ConfigError("unknown command '" + command + "'");

        detail::write_text_file(ctx.artifact("resolved_config.json"),
                                cfg.resolved_json().dump(2) + "\n");
        if (!verify_ok) {
            result.exit_code = 4;
            result.message = "verification failure: see verify_report.json";
        }
    } catch (const ConfigError& e) {
        result.exit_code = 2;
        result.message = e.what();
    } catch (const QuadratureError& e) {
        result.exit_code = 3;
        result.message = e.what();
    } catch (const std::domain_error& e) {
        result.exit_code = 3;
        result.message = e.what();
    } catch (const std::invalid_argument& e) {
        result.exit_code = 3;
        result.message = e.what();
    }
    return result;
}

}  // namespace oscprop
