#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "subscatter/barrier.hpp"
#include "subscatter/constants.hpp"
#include "subscatter/errors.hpp"

namespace subscatter {

enum class RunMode { stationary, packet, times, scan, doubleslit, validate };

inline RunMode parse_mode(const std::string& s) {
    if (s == "stationary") return RunMode::stationary;
    if (s == "packet") return RunMode::packet;
    if (s == "times") return RunMode::times;
    if (s == "scan") return RunMode::scan;
    if (s == "doubleslit") return RunMode::doubleslit;
    if (s == "validate") return RunMode::validate;
    throw ConfigError("unknown mode: " + s);
}

inline const char* mode_name(RunMode m) {
    switch (m) {
        case RunMode::stationary: return "stationary";
        case RunMode::packet: return "packet";
        case RunMode::times: return "times";
        case RunMode::scan: return "scan";
        case RunMode::doubleslit: return "doubleslit";
        case RunMode::validate: return "validate";
    }
    return "?";
}

struct ScanSpec {
    std::string variable = "d";  // "d" or "l"
    double from = 2.0;
    double to = 30.0;
    std::size_t steps = 15;
};

struct SlitScenario {
    double a = 27.0;
    double d = 10.0;
    double k = 1.0;
    double L = 15000.0;
    double y_half = 4000.0;
    std::size_t y_count = 1601;
};

struct GridSpec {
    std::size_t k_count = 4097;
    std::optional<double> x_min, x_max;
    std::size_t x_count = 8193;
    double t_start = 0.0;
    std::optional<double> t_stop;
    std::size_t t_samples = 400;
};

struct Scenario {
    PhysicalConstants physics;
    std::optional<BarrierSpec> barrier;
    double l0 = 10.0;
    std::optional<double> k0;
    std::optional<double> E0;
    GridSpec grids;
    RunMode mode = RunMode::times;
    ScanSpec scan;
    SlitScenario slits;
    std::string out_dir = "out";
    std::set<std::string> formats = {"csv", "json", "svg"};

    double central_k() const {
        if (k0) return *k0;
        if (E0) return physics.wavenumber(*E0);
        throw ConfigError("scenario: packet needs k0 or E0");
    }

    void validate() const {
        physics.validate();
        if (k0 && E0) throw ConfigError("scenario: k0 and E0 are mutually exclusive");
        if (mode != RunMode::doubleslit && mode != RunMode::validate) {
            if (!barrier) throw ConfigError("scenario: barrier section required");
            (void)central_k();
        }
        if (!(l0 > 0.0)) throw ConfigError("scenario: l0 must be positive");
        for (const auto& f : formats)
            if (f != "csv" && f != "json" && f != "svg")
                throw ConfigError("scenario: unknown output format " + f);
        if (mode == RunMode::scan && scan.variable != "d" && scan.variable != "l")
            throw ConfigError("scenario: scan variable must be d or l");
    }
};

namespace detail {

// Flat key/value view of a config: "section.key" -> (value, source line).
struct RawConfig {
    std::map<std::string, std::pair<std::string, int>> kv;
    std::string source;

    bool has(const std::string& key) const { return kv.count(key) > 0; }

    std::string get_str(const std::string& key, const std::string& fallback) const {
        auto it = kv.find(key);
        return it == kv.end() ? fallback : it->second.first;
    }

    double get_num(const std::string& key, std::optional<double> fallback = {}) const {
        auto it = kv.find(key);
        if (it == kv.end()) {
            if (fallback) return *fallback;
            throw ConfigError(source + ": missing required field '" + key + "'");
        }
        try {
            std::size_t pos = 0;
            const double v = std::stod(it->second.first, &pos);
            if (pos != it->second.first.size()) throw std::invalid_argument("trailing");
            return v;
        } catch (const std::exception&) {
            throw ConfigError(source + ":" + std::to_string(it->second.second) +
                              ": field '" + key + "' is not a number: " +
                              it->second.first);
        }
    }
};

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline RawConfig parse_ini(const std::string& text, const std::string& source) {
    RawConfig cfg;
    cfg.source = source;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find_first_of("#;");
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError(source + ":" + std::to_string(lineno) +
                                  ": malformed section header");
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(source + ":" + std::to_string(lineno) +
                              ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError(source + ":" + std::to_string(lineno) + ": empty key");
        cfg.kv[section.empty() ? key : section + "." + key] = {val, lineno};
    }
    return cfg;
}

inline void flatten_json(const nlohmann::json& j, const std::string& prefix,
                         RawConfig& cfg) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
        if (it->is_object()) {
            flatten_json(*it, key, cfg);
        } else if (it->is_string()) {
            cfg.kv[key] = {it->get<std::string>(), 0};
        } else if (it->is_boolean()) {
            cfg.kv[key] = {it->get<bool>() ? "true" : "false", 0};
        } else if (it->is_array()) {
            std::string v;
            for (const auto& e : *it) {
                if (!v.empty()) v += ",";
                v += e.is_string() ? e.get<std::string>() : nlohmann::to_string(e);
            }
            cfg.kv[key] = {v, 0};
        } else {
            cfg.kv[key] = {nlohmann::to_string(*it), 0};
        }
    }
}

inline BarrierSpec parse_barrier(const RawConfig& cfg) {
    const std::string type = cfg.get_str("barrier.type", "rectangular");
    if (type == "rectangular") {
        return BarrierSpec::rectangular(cfg.get_num("barrier.a"), cfg.get_num("barrier.b"),
                                        cfg.get_num("barrier.V0"));
    }
    if (type == "double_rect") {
        return BarrierSpec::double_rect(cfg.get_num("barrier.a"), cfg.get_num("barrier.d"),
                                        cfg.get_num("barrier.l"), cfg.get_num("barrier.V0"));
    }
    if (type == "delta") {
        return BarrierSpec::delta(cfg.get_num("barrier.a"), cfg.get_num("barrier.W"));
    }
    if (type == "piecewise") {
        std::vector<Segment> segs;
        std::istringstream ss(cfg.get_str("barrier.segments", ""));
        std::string item;
        while (std::getline(ss, item, ',')) {
            const auto colon = item.find(':');
            if (colon == std::string::npos)
                throw ConfigError(cfg.source +
                                  ": barrier.segments entries must be width:V");
            segs.push_back(Segment{std::stod(trim(item.substr(0, colon))),
                                   std::stod(trim(item.substr(colon + 1)))});
        }
        return BarrierSpec::symmetric_piecewise(cfg.get_num("barrier.a"), segs);
    }
    throw ConfigError(cfg.source + ": unknown barrier.type '" + type + "'");
}

}  // namespace detail

inline Scenario scenario_from_raw(const detail::RawConfig& cfg) {
    Scenario sc;
    sc.physics.mass_ratio = cfg.get_num("physics.mass_ratio", 0.067);
    sc.physics.hbar = cfg.get_num("physics.hbar", units::hbar);
    if (cfg.has("barrier.type") || cfg.has("barrier.a")) sc.barrier = detail::parse_barrier(cfg);
    sc.l0 = cfg.get_num("packet.l0", 10.0);
    if (cfg.has("packet.k0")) sc.k0 = cfg.get_num("packet.k0");
    if (cfg.has("packet.E0")) sc.E0 = cfg.get_num("packet.E0");
    sc.grids.k_count = static_cast<std::size_t>(cfg.get_num("grids.k_count", 4097.0));
    if (cfg.has("grids.x_min")) sc.grids.x_min = cfg.get_num("grids.x_min");
    if (cfg.has("grids.x_max")) sc.grids.x_max = cfg.get_num("grids.x_max");
    sc.grids.x_count = static_cast<std::size_t>(cfg.get_num("grids.x_count", 8193.0));
    sc.grids.t_start = cfg.get_num("grids.t_start", 0.0);
    if (cfg.has("grids.t_stop")) sc.grids.t_stop = cfg.get_num("grids.t_stop");
    sc.grids.t_samples = static_cast<std::size_t>(cfg.get_num("grids.t_samples", 400.0));
    sc.mode = parse_mode(cfg.get_str("run.mode", "times"));
    sc.scan.variable = cfg.get_str("run.scan_variable", "d");
    sc.scan.from = cfg.get_num("run.scan_from", 2.0);
    sc.scan.to = cfg.get_num("run.scan_to", 30.0);
    sc.scan.steps = static_cast<std::size_t>(cfg.get_num("run.scan_steps", 15.0));
    sc.slits.a = cfg.get_num("doubleslit.a", 27.0);
    sc.slits.d = cfg.get_num("doubleslit.d", 10.0);
    sc.slits.k = cfg.get_num("doubleslit.k", 1.0);
    sc.slits.L = cfg.get_num("doubleslit.L", 15000.0);
    sc.slits.y_half = cfg.get_num("doubleslit.y_half", 4000.0);
    sc.slits.y_count = static_cast<std::size_t>(cfg.get_num("doubleslit.y_count", 1601.0));
    sc.out_dir = cfg.get_str("output.directory", "out");
    const std::string fmts = cfg.get_str("output.formats", "csv,json,svg");
    sc.formats.clear();
    std::istringstream fs(fmts);
    std::string f;
    while (std::getline(fs, f, ',')) {
        f = detail::trim(f);
        if (!f.empty()) sc.formats.insert(f);
    }
    sc.validate();
    return sc;
}

// Parses a scenario file; JSON when the first non-space character is '{',
// key/value sections otherwise.
inline Scenario load_scenario(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(text);
        } catch (const nlohmann::json::parse_error& e) {
            throw ConfigError(path + ": JSON parse error: " + std::string(e.what()));
        }
        detail::RawConfig cfg;
        cfg.source = path;
        detail::flatten_json(j, "", cfg);
        return scenario_from_raw(cfg);
    }
    return scenario_from_raw(detail::parse_ini(text, path));
}

// Canonical serialization used for the scenario hash in artifact headers.
inline std::string canonical_scenario(const Scenario& sc) {
    std::ostringstream os;
    os.precision(17);
    os << "mode=" << mode_name(sc.mode) << ";mass=" << sc.physics.mass_ratio
       << ";hbar=" << sc.physics.hbar << ";l0=" << sc.l0;
    if (sc.k0) os << ";k0=" << *sc.k0;
    if (sc.E0) os << ";E0=" << *sc.E0;
    if (sc.barrier) {
        os << ";bar=a" << sc.barrier->a();
        for (const auto& s : sc.barrier->segments()) os << "," << s.width << ":" << s.V;
        if (sc.barrier->is<Delta>()) os << ",delta:" << sc.barrier->as<Delta>().W;
    }
    os << ";kn=" << sc.grids.k_count << ";xn=" << sc.grids.x_count;
    if (sc.grids.x_min) os << ";x0=" << *sc.grids.x_min;
    if (sc.grids.x_max) os << ";x1=" << *sc.grids.x_max;
    os << ";t0=" << sc.grids.t_start;
    if (sc.grids.t_stop) os << ";t1=" << *sc.grids.t_stop;
    os << ";tn=" << sc.grids.t_samples;
    os << ";scan=" << sc.scan.variable << "," << sc.scan.from << "," << sc.scan.to << ","
       << sc.scan.steps;
    os << ";slit=" << sc.slits.a << "," << sc.slits.d << "," << sc.slits.k << ","
       << sc.slits.L << "," << sc.slits.y_half << "," << sc.slits.y_count;
    return os.str();
}

inline std::string scenario_hash(const Scenario& sc) {
    const std::string s = canonical_scenario(sc);
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace subscatter
