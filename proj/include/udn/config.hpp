#pragma once

#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "udn/episode.hpp"
#include "udn/errors.hpp"
#include "udn/grid.hpp"
#include "udn/params.hpp"

namespace udn {

// Full experiment description. Everything here is settable from the plain-text
// config format below and from --set key=value overrides.
struct ExperimentConfig {
    MfgParams mfg;
    SolverGrid grid{101, 101};
    PicardConfig picard;

    SimParams sim;
    int n_sbs = 16;
    std::vector<double> isd_values{3.5, 5.75};
    std::vector<int> k_values{2, 5};
    double pathloss_exponent = 3.0;
    double shadowing_db = 4.0;
    int n_seeds = 20;
    uint64_t base_seed = 1;

    std::string output_dir = "out";
};

namespace detail {

inline std::string trim(const std::string& s) {
    size_t a = 0, b = s.size();
    while (a < b && std::isspace((unsigned char)s[a])) ++a;
    while (b > a && std::isspace((unsigned char)s[b - 1])) --b;
    return s.substr(a, b - a);
}

inline double parse_double(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing");
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': not a number: '" + v + "'");
    }
}

inline long long parse_int(const std::string& key, const std::string& v) {
    try {
        size_t pos = 0;
        const long long x = std::stoll(v, &pos);
        if (pos != v.size()) throw std::invalid_argument("trailing");
        return x;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': not an integer: '" + v + "'");
    }
}

inline std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> out;
    std::string cur;
    std::stringstream ss(v);
    while (std::getline(ss, cur, ',')) out.push_back(trim(cur));
    if (out.empty()) out.push_back("");
    return out;
}

inline std::string fmt_g(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

} // namespace detail

// Applies a single "key = value" assignment; throws ConfigError for unknown
// keys, malformed values, and domain violations (message names the key).
inline void apply_config_entry(ExperimentConfig& c, const std::string& key,
                               const std::string& value) {
    using detail::parse_double;
    using detail::parse_int;
    auto bad = [&](const std::string& why) {
        throw ConfigError("config key '" + key + "': " + why + " (got '" + value + "')");
    };

    if (key == "mfg.omega") {
        c.mfg.omega = parse_double(key, value);
        if (c.mfg.omega <= 0) bad("must be > 0");
    } else if (key == "mfg.sigma2") {
        c.mfg.sigma2 = parse_double(key, value);
        if (c.mfg.sigma2 <= 0) bad("must be > 0");
    } else if (key == "mfg.eta") {
        c.mfg.eta = parse_double(key, value);
        if (c.mfg.eta < 0) bad("must be >= 0");
    } else if (key == "mfg.p_max") {
        c.mfg.p_max = parse_double(key, value);
        if (c.mfg.p_max <= 0) bad("must be > 0");
    } else if (key == "mfg.p0") {
        c.mfg.p0 = parse_double(key, value);
        if (c.mfg.p0 <= 0) bad("must be > 0");
    } else if (key == "mfg.a_bar") {
        c.mfg.a_bar = parse_double(key, value);
        if (c.mfg.a_bar < 0) bad("must be >= 0");
    } else if (key == "mfg.terminal_coeff") {
        c.mfg.terminal_coeff = parse_double(key, value);
        if (c.mfg.terminal_coeff < 0) bad("must be >= 0");
    } else if (key == "mfg.mean_gain") {
        c.mfg.mean_gain = parse_double(key, value);
        if (c.mfg.mean_gain <= 0) bad("must be > 0");
    } else if (key == "mfg.viscosity_eps") {
        c.mfg.viscosity_eps = parse_double(key, value);
        if (c.mfg.viscosity_eps <= 0) bad("must be > 0");
    } else if (key == "grid.n_q") {
        c.grid.n_q = (int)parse_int(key, value);
        if (c.grid.n_q < 3) bad("must be >= 3");
    } else if (key == "grid.n_t") {
        c.grid.n_t = (int)parse_int(key, value);
        if (c.grid.n_t < 2) bad("must be >= 2");
    } else if (key == "grid.q_max") {
        c.grid.q_max = parse_double(key, value);
        if (c.grid.q_max <= 0) bad("must be > 0");
    } else if (key == "grid.horizon_T") {
        c.grid.horizon_T = parse_double(key, value);
        if (c.grid.horizon_T <= 0) bad("must be > 0");
    } else if (key == "picard.tol") {
        c.picard.tol = parse_double(key, value);
        if (c.picard.tol <= 0) bad("must be > 0");
    } else if (key == "picard.max_iter") {
        c.picard.max_iter = (int)parse_int(key, value);
        if (c.picard.max_iter < 1) bad("must be >= 1");
    } else if (key == "picard.damping") {
        c.picard.damping = parse_double(key, value);
        if (!(c.picard.damping > 0 && c.picard.damping <= 1)) bad("must be in (0, 1]");
    } else if (key == "scheduler.V") {
        c.sim.sched_V = parse_double(key, value);
    } else if (key == "scheduler.floor_eps") {
        c.sim.floor_eps = parse_double(key, value);
        if (c.sim.floor_eps <= 0) bad("must be > 0");
    } else if (key == "scheduler.pf_ema") {
        c.sim.pf_ema = parse_double(key, value);
        if (!(c.sim.pf_ema > 0 && c.sim.pf_ema <= 1)) bad("must be in (0, 1]");
    } else if (key == "sim.n_sbs") {
        c.n_sbs = (int)parse_int(key, value);
        if (c.n_sbs < 1) bad("must be >= 1");
    } else if (key == "sim.isd") {
        c.isd_values.clear();
        for (const auto& tok : detail::split_list(value)) {
            const double x = parse_double(key, tok);
            if (x < 2.0) bad("each value must be >= 2 (the minimum site separation)");
            c.isd_values.push_back(x);
        }
    } else if (key == "sim.k") {
        c.k_values.clear();
        for (const auto& tok : detail::split_list(value)) {
            const long long x = parse_int(key, tok);
            if (x < 1) bad("each value must be >= 1");
            c.k_values.push_back((int)x);
        }
    } else if (key == "sim.n_slots") {
        c.sim.n_slots = (int)parse_int(key, value);
        if (c.sim.n_slots < 1) bad("must be >= 1");
    } else if (key == "sim.updates_per_slot") {
        c.sim.updates_per_slot = (int)parse_int(key, value);
        if (c.sim.updates_per_slot < 1) bad("must be >= 1");
    } else if (key == "sim.warmup_slots") {
        c.sim.warmup_slots = (int)parse_int(key, value);
        if (c.sim.warmup_slots < 0) bad("must be >= 0");
    } else if (key == "sim.slot_T") {
        c.sim.slot_T = parse_double(key, value);
        if (c.sim.slot_T <= 0) bad("must be > 0");
    } else if (key == "sim.queue_capacity") {
        c.sim.queue_capacity = parse_double(key, value);
        if (c.sim.queue_capacity <= 0) bad("must be > 0");
    } else if (key == "sim.pathloss_exponent") {
        c.pathloss_exponent = parse_double(key, value);
        if (c.pathloss_exponent <= 0) bad("must be > 0");
    } else if (key == "sim.shadowing_db") {
        c.shadowing_db = parse_double(key, value);
        if (c.shadowing_db < 0) bad("must be >= 0");
    } else if (key == "sim.n_seeds") {
        c.n_seeds = (int)parse_int(key, value);
        if (c.n_seeds < 1) bad("must be >= 1");
    } else if (key == "sim.base_seed") {
        const long long x = parse_int(key, value);
        if (x < 0) bad("must be >= 0");
        c.base_seed = (uint64_t)x;
    } else if (key == "baseline.fixed_power") {
        c.sim.fixed_power = parse_double(key, value);
        if (c.sim.fixed_power < 0) bad("must be >= 0");
    } else if (key == "output.dir") {
        if (value.empty()) bad("must be non-empty");
        c.output_dir = value;
    } else {
        throw ConfigError("unknown config key '" + key + "'");
    }
}

// Cross-field checks that individual assignments cannot see.
inline void validate_config(const ExperimentConfig& c) {
    if (c.sim.warmup_slots >= c.sim.n_slots)
        throw ConfigError("config key 'sim.warmup_slots': must be < sim.n_slots");
    if (c.isd_values.empty()) throw ConfigError("config key 'sim.isd': needs at least one value");
    if (c.k_values.empty()) throw ConfigError("config key 'sim.k': needs at least one value");
}

// Text format: one "key = value" per line; '#' starts a comment; blank lines
// ignored. List-valued keys take comma-separated entries.
inline ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig c;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) +
                              ": expected 'key = value', got '" + line + "'");
        const std::string key = detail::trim(line.substr(0, eq));
        const std::string value = detail::trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
        apply_config_entry(c, key, value);
    }
    validate_config(c);
    return c;
}

inline ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

// "key=value" as passed to --set.
inline void apply_override(ExperimentConfig& c, const std::string& assignment) {
    const size_t eq = assignment.find('=');
    if (eq == std::string::npos)
        throw ConfigError("override '" + assignment + "': expected key=value");
    apply_config_entry(c, detail::trim(assignment.substr(0, eq)),
                       detail::trim(assignment.substr(eq + 1)));
}

// Canonical dump; parse_config_text(serialize_config(c)) reproduces c.
inline std::string serialize_config(const ExperimentConfig& c) {
    using detail::fmt_g;
    std::ostringstream o;
    o << "mfg.omega = " << fmt_g(c.mfg.omega) << "\n";
    o << "mfg.sigma2 = " << fmt_g(c.mfg.sigma2) << "\n";
    o << "mfg.eta = " << fmt_g(c.mfg.eta) << "\n";
    o << "mfg.p_max = " << fmt_g(c.mfg.p_max) << "\n";
    o << "mfg.p0 = " << fmt_g(c.mfg.p0) << "\n";
    o << "mfg.a_bar = " << fmt_g(c.mfg.a_bar) << "\n";
    o << "mfg.terminal_coeff = " << fmt_g(c.mfg.terminal_coeff) << "\n";
    o << "mfg.mean_gain = " << fmt_g(c.mfg.mean_gain) << "\n";
    o << "mfg.viscosity_eps = " << fmt_g(c.mfg.viscosity_eps) << "\n";
    o << "grid.n_q = " << c.grid.n_q << "\n";
    o << "grid.n_t = " << c.grid.n_t << "\n";
    o << "grid.q_max = " << fmt_g(c.grid.q_max) << "\n";
    o << "grid.horizon_T = " << fmt_g(c.grid.horizon_T) << "\n";
    o << "picard.tol = " << fmt_g(c.picard.tol) << "\n";
    o << "picard.max_iter = " << c.picard.max_iter << "\n";
    o << "picard.damping = " << fmt_g(c.picard.damping) << "\n";
    o << "scheduler.V = " << fmt_g(c.sim.sched_V) << "\n";
    o << "scheduler.floor_eps = " << fmt_g(c.sim.floor_eps) << "\n";
    o << "scheduler.pf_ema = " << fmt_g(c.sim.pf_ema) << "\n";
    o << "sim.n_sbs = " << c.n_sbs << "\n";
    o << "sim.isd = ";
    for (size_t i = 0; i < c.isd_values.size(); ++i)
        o << (i ? ", " : "") << fmt_g(c.isd_values[i]);
    o << "\n";
    o << "sim.k = ";
    for (size_t i = 0; i < c.k_values.size(); ++i) o << (i ? ", " : "") << c.k_values[i];
    o << "\n";
    o << "sim.n_slots = " << c.sim.n_slots << "\n";
    o << "sim.updates_per_slot = " << c.sim.updates_per_slot << "\n";
    o << "sim.warmup_slots = " << c.sim.warmup_slots << "\n";
    o << "sim.slot_T = " << fmt_g(c.sim.slot_T) << "\n";
    o << "sim.queue_capacity = " << fmt_g(c.sim.queue_capacity) << "\n";
    o << "sim.pathloss_exponent = " << fmt_g(c.pathloss_exponent) << "\n";
    o << "sim.shadowing_db = " << fmt_g(c.shadowing_db) << "\n";
    o << "sim.n_seeds = " << c.n_seeds << "\n";
    o << "sim.base_seed = " << c.base_seed << "\n";
    o << "baseline.fixed_power = " << fmt_g(c.sim.fixed_power) << "\n";
    o << "output.dir = " << c.output_dir << "\n";
    return o.str();
}

} // namespace udn
