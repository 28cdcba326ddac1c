#pragma once

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <type_traits>
#include <vector>

#include "com.hpp"
#include "density.hpp"
#include "entropy.hpp"
#include "errors.hpp"
#include "grid.hpp"
#include "propagator.hpp"
#include "pulse.hpp"

namespace sfent {

/// Complete description of a simulation; print-config writes every field.
struct SimConfig {
    CylGrid grid = make_grid(150.0, 80.0, 0.2, 0.2);
    double mu = 0.999456;

    double dt = 0.01;
    double t_max = 330.0;
    double cadence = 1.0;

    PulseSpec pulse;
    SplitOrder order = SplitOrder::strang2;
    bool cusp_correction = true;

    ItpOptions itp;

    ComSpec com;  ///< com.M = 0 resolves to the total mass

    double core_extent = 12.0;  ///< in units of com.sigma
    int core_points = 0;        ///< 0: lattice-aligned with the relative grid
    Interp interp = Interp::cubic;
    double x_cadence = 5.0;
    double x_extent = 0.0;   ///< 0: rho_max
    double x_spacing = 0.0;  ///< 0: drho

    double threshold = kDefaultThreshold;
    bool linear_entropies = true;
    bool entropies = true;

    std::string ground_state;  ///< SFW1 path; empty means compute by imaginary time
    double snapshot_every = 0.0;
    int threads = 0;  ///< OpenMP threads, 0 = runtime default; results do not depend on it

    ReducedMass masses() const { return ReducedMass::from_mu(mu); }

    ComSpec resolved_com() const {
        ComSpec c = com;
        if (c.M == 0.0) c.M = masses().M();
        return c;
    }

    /// Core grid: spacing dz (or core_points nodes) over +-core_extent*sigma.
    Grid1D core_grid(double spacing) const {
        const double ext = core_extent * com.sigma;
        if (core_points == 0) return Grid1D::centred(ext, spacing);
        const double h = 2.0 * ext / (core_points - 1);
        return Grid1D::uniform(core_points, -ext, h);
    }

    Grid1D x_grid() const {
        const double h = x_spacing > 0.0 ? x_spacing : grid.drho;
        const double ext = x_extent > 0.0 ? x_extent : grid.rho_max();
        return Grid1D::centred(ext, h);
    }

    TransformSpec transform(const Grid1D& rel) const {
        const ReducedMass m = masses();
        TransformSpec ts;
        ts.alpha_e = m.alpha_e();
        ts.alpha_c = m.alpha_c();
        ts.core = core_grid(rel.spacing);
        ts.interp = interp;
        return ts;
    }

    void validate() const {
        grid.validate();
        if (!(mu > 0.0 && mu < 1.0)) throw ConfigError("mass.mu must lie in (0, 1)");
        if (!(dt > 0.0)) throw ConfigError("time.dt must be positive");
        if (!(t_max >= 0.0)) throw ConfigError("time.t_max must be >= 0");
        if (!(cadence > 0.0)) throw ConfigError("time.cadence must be positive");
        pulse.validate();
        if (!(itp.tau > 0.0) || !(itp.tau_min > 0.0) || itp.tau_min > itp.tau)
            throw ConfigError("itp.tau and itp.tau_min must satisfy 0 < tau_min <= tau");
        if (!(itp.tol > 0.0)) throw ConfigError("itp.tol must be positive");
        if (itp.max_steps < 1) throw ConfigError("itp.max_steps must be positive");
        resolved_com().validate();
        if (!(core_extent >= 8.0)) throw ConfigError("reduction.core_extent must be at least 8 (sigma units)");
        if (core_points != 0 && core_points < 3) throw ConfigError("reduction.core_points must be 0 or >= 3");
        if (!(x_cadence > 0.0)) throw ConfigError("reduction.x_cadence must be positive");
        const double r = x_cadence / cadence;
        if (std::abs(r - std::round(r)) > 1e-9) throw ConfigError("reduction.x_cadence must be a multiple of time.cadence");
        if (x_extent < 0.0 || x_extent > grid.rho_max()) throw ConfigError("reduction.x_extent must lie in [0, rho_max]");
        if (x_spacing < 0.0) throw ConfigError("reduction.x_spacing must be >= 0");
        if (!(threshold > 0.0 && threshold < 1e-3)) throw ConfigError("entropy.threshold must lie in (0, 1e-3)");
        if (snapshot_every < 0.0) throw ConfigError("output.snapshot_every must be >= 0");
        if (threads < 0) throw ConfigError("run.threads must be >= 0");
    }
};

enum class Preset { desk, full };

inline Preset preset_from_string(const std::string& s) {
    if (s == "desk") return Preset::desk;
    if (s == "full") return Preset::full;
    throw ConfigError("unknown preset '" + s + "' (expected desk or full)");
}

/// desk: z in [-150, 150], rho <= 80; full: z in [-500, 500], rho <= 300 with composed4.
inline SimConfig preset(Preset p) {
    SimConfig c;
    if (p == Preset::full) {
        c.grid = make_grid(500.0, 300.0, 0.2, 0.2);
        c.order = SplitOrder::composed4;
    }
    return c;
}

namespace cfg {

inline std::string fmt(double v) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, r.ptr);
}

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline double to_double(const std::string& key, const std::string& v) {
    double out = 0.0;
    const auto r = std::from_chars(v.data(), v.data() + v.size(), out);
    if (r.ec != std::errc() || r.ptr != v.data() + v.size() || !std::isfinite(out))
        throw ConfigError("'" + key + "': expected a number, got '" + v + "'");
    return out;
}

inline long to_long(const std::string& key, const std::string& v) {
    long out = 0;
    const auto r = std::from_chars(v.data(), v.data() + v.size(), out);
    if (r.ec != std::errc() || r.ptr != v.data() + v.size())
        throw ConfigError("'" + key + "': expected an integer, got '" + v + "'");
    return out;
}

inline bool to_bool(const std::string& key, const std::string& v) {
    if (v == "true") return true;
    if (v == "false") return false;
    throw ConfigError("'" + key + "': expected true or false, got '" + v + "'");
}

struct Field {
    std::function<std::string(SimConfig&)> get;
    std::function<void(SimConfig&, const std::string&, const std::string&)> set;
};

/// Every key in print order.
inline const std::vector<std::pair<std::string, Field>>& fields() {
    static const std::vector<std::pair<std::string, Field>> table = [] {
        std::vector<std::pair<std::string, Field>> t;
        auto num = [&t](const char* key, auto member) {
            t.push_back({key, {[member](SimConfig& c) { return fmt(member(c)); },
                               [member](SimConfig& c, const std::string& k, const std::string& v) {
                                   member(c) = to_double(k, v);
                               }}});
        };
        auto integer = [&t](const char* key, auto member) {
            t.push_back({key, {[member](SimConfig& c) { return std::to_string(member(c)); },
                               [member](SimConfig& c, const std::string& k, const std::string& v) {
                                   member(c) = static_cast<std::remove_reference_t<decltype(member(c))>>(to_long(k, v));
                               }}});
        };
        auto boolean = [&t](const char* key, auto member) {
            t.push_back({key, {[member](SimConfig& c) { return std::string(member(c) ? "true" : "false"); },
                               [member](SimConfig& c, const std::string& k, const std::string& v) {
                                   member(c) = to_bool(k, v);
                               }}});
        };
        integer("grid.n_z", [](SimConfig& c) -> int& { return c.grid.n_z; });
        integer("grid.n_rho", [](SimConfig& c) -> int& { return c.grid.n_rho; });
        num("grid.dz", [](SimConfig& c) -> double& { return c.grid.dz; });
        num("grid.drho", [](SimConfig& c) -> double& { return c.grid.drho; });
        num("grid.z_min", [](SimConfig& c) -> double& { return c.grid.z_min; });
        num("mass.mu", [](SimConfig& c) -> double& { return c.mu; });
        num("time.dt", [](SimConfig& c) -> double& { return c.dt; });
        num("time.t_max", [](SimConfig& c) -> double& { return c.t_max; });
        num("time.cadence", [](SimConfig& c) -> double& { return c.cadence; });
        num("pulse.F", [](SimConfig& c) -> double& { return c.pulse.F; });
        num("pulse.T", [](SimConfig& c) -> double& { return c.pulse.T; });
        num("pulse.cep", [](SimConfig& c) -> double& { return c.pulse.cep; });
        t.push_back({"pulse.envelope",
                     {[](SimConfig& c) { return to_string(c.pulse.envelope); },
                      [](SimConfig& c, const std::string&, const std::string& v) { c.pulse.envelope = envelope_from_string(v); }}});
        t.push_back({"solver.order",
                     {[](SimConfig& c) { return to_string(c.order); },
                      [](SimConfig& c, const std::string&, const std::string& v) { c.order = split_order_from_string(v); }}});
        boolean("solver.cusp_correction", [](SimConfig& c) -> bool& { return c.cusp_correction; });
        num("itp.tau", [](SimConfig& c) -> double& { return c.itp.tau; });
        num("itp.tau_min", [](SimConfig& c) -> double& { return c.itp.tau_min; });
        num("itp.tol", [](SimConfig& c) -> double& { return c.itp.tol; });
        integer("itp.max_steps", [](SimConfig& c) -> long& { return c.itp.max_steps; });
        num("com.sigma", [](SimConfig& c) -> double& { return c.com.sigma; });
        num("com.M", [](SimConfig& c) -> double& { return c.com.M; });
        num("reduction.core_extent", [](SimConfig& c) -> double& { return c.core_extent; });
        integer("reduction.core_points", [](SimConfig& c) -> int& { return c.core_points; });
        t.push_back({"reduction.interp",
                     {[](SimConfig& c) { return std::string(c.interp == Interp::cubic ? "cubic" : "linear"); },
                      [](SimConfig& c, const std::string& k, const std::string& v) {
                          if (v == "cubic") c.interp = Interp::cubic;
                          else if (v == "linear") c.interp = Interp::linear;
                          else throw ConfigError("'" + k + "': expected cubic or linear, got '" + v + "'");
                      }}});
        num("reduction.x_cadence", [](SimConfig& c) -> double& { return c.x_cadence; });
        num("reduction.x_extent", [](SimConfig& c) -> double& { return c.x_extent; });
        num("reduction.x_spacing", [](SimConfig& c) -> double& { return c.x_spacing; });
        num("entropy.threshold", [](SimConfig& c) -> double& { return c.threshold; });
        boolean("entropy.linear", [](SimConfig& c) -> bool& { return c.linear_entropies; });
        boolean("entropy.enabled", [](SimConfig& c) -> bool& { return c.entropies; });
        t.push_back({"output.ground_state",
                     {[](SimConfig& c) { return c.ground_state; },
                      [](SimConfig& c, const std::string&, const std::string& v) { c.ground_state = v; }}});
        num("output.snapshot_every", [](SimConfig& c) -> double& { return c.snapshot_every; });
        integer("run.threads", [](SimConfig& c) -> int& { return c.threads; });
        return t;
    }();
    return table;
}

}  // namespace cfg

/// Apply one key = value assignment.
inline void set_option(SimConfig& c, const std::string& key, const std::string& value) {
    for (const auto& [k, f] : cfg::fields())
        if (k == key) {
            f.set(c, key, value);
            return;
        }
    throw ConfigError("unknown config key '" + key + "'");
}

/**
 * @brief Parse flat "key = value" text on top of a base config. '#' starts a
 * comment; blank lines are ignored; repeated keys are an error.
 */
inline SimConfig parse_config(std::istream& is, SimConfig base = {}) {
    std::string line;
    int lineno = 0;
    std::map<std::string, int> seen;
    while (std::getline(is, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = cfg::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = cfg::trim(line.substr(0, eq));
        const std::string value = cfg::trim(line.substr(eq + 1));
        if (seen.count(key))
            throw ConfigError("line " + std::to_string(lineno) + ": '" + key + "' repeats line " +
                              std::to_string(seen[key]));
        seen[key] = lineno;
        set_option(base, key, value);
    }
    return base;
}

inline SimConfig parse_config_text(const std::string& text, SimConfig base = {}) {
    std::istringstream is(text);
    return parse_config(is, base);
}

inline SimConfig load_config(const std::string& path, SimConfig base = {}) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open config '" + path + "'");
    return parse_config(is, base);
}

/// Fully resolved text form; parse_config(print_config(c)) reproduces c.
inline std::string print_config(const SimConfig& c) {
    SimConfig r = c;
    r.com = c.resolved_com();
    std::ostringstream os;
    std::string section;
    for (const auto& [k, f] : cfg::fields()) {
        const std::string s = k.substr(0, k.find('.'));
        if (s != section) {
            if (!section.empty()) os << '\n';
            section = s;
        }
        os << k << " = " << f.get(r) << '\n';
    }
    return os.str();
}

}  // namespace sfent
