// Unit system, master parameter record, validation, and key=value config parsing.
//
// Natural units throughout: hbar = 1, the dipole decay rate gamma is the unit
// of rate, and the cavity wave number k is the unit of inverse length. Hence
// lengths are measured in 1/k, momenta in hbar*k, energies and temperatures in
// hbar*gamma. The atomic mass enters only through the recoil frequency
// omega_rec = hbar k^2 / (2 m).
#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace cavcool {

struct SystemParams {
    double gamma = 1.0;          // atomic dipole decay rate (half the spontaneous rate 2*gamma)
    double kappa = 1.0;          // cavity field decay rate, units of gamma
    double delta_a = -3.0;       // pump-atom detuning  Delta_A = omega_p - omega_A
    double delta_c = -3.0;       // pump-cavity detuning Delta_C = omega_p - omega_C
    double eta = 0.01;           // coherent pump amplitude, units of gamma
    double g_single = 3.0;       // single-mode vacuum Rabi coupling, units of gamma
    double recoil_freq = 1.2e-3; // omega_rec = hbar k^2/(2m), units of gamma (Rb D2 scale)
    double u2bar = 0.4;          // mean squared axial projection of the spontaneous recoil
    double k_atom_ratio = 1.0;   // k_A / k

    // mass in natural units (hbar = k = 1): m = 1/(2 omega_rec)
    double mass() const { return 1.0 / (2.0 * recoil_freq); }
};

// Returns the record unchanged if all invariants hold; otherwise throws
// std::invalid_argument naming every violated field.
inline SystemParams validate(const SystemParams& p) {
    std::vector<std::string> bad;
    if (!(p.gamma > 0.0)) bad.push_back("gamma must be positive");
    if (!(p.kappa > 0.0)) bad.push_back("kappa must be positive");
    if (!(p.eta >= 0.0)) bad.push_back("eta must be non-negative");
    if (!(p.g_single >= 0.0)) bad.push_back("g_single must be non-negative");
    if (!(p.recoil_freq > 0.0)) bad.push_back("recoil_freq must be positive");
    if (!(p.u2bar > 0.0 && p.u2bar <= 1.0)) bad.push_back("u2bar must lie in (0,1]");
    if (!(p.k_atom_ratio > 0.0)) bad.push_back("k_atom_ratio must be positive");
    if (!std::isfinite(p.delta_a)) bad.push_back("delta_a must be finite");
    if (!std::isfinite(p.delta_c)) bad.push_back("delta_c must be finite");
    if (!bad.empty()) {
        std::string msg;
        for (std::size_t i = 0; i < bad.size(); ++i) {
            if (i) msg += "; ";
            msg += bad[i];
        }
        throw std::invalid_argument(msg);
    }
    return p;
}

// Low-saturation advisory check. The linear-response results hold only while
// the atomic excitation stays well below one.
struct SaturationCheck {
    bool pass = true;
    double excitation = 0.0;
    double threshold = 0.1;
};

inline SaturationCheck saturation_guard(double excitation, double threshold = 0.1) {
    if (excitation < 0.0) throw std::invalid_argument("excitation must be non-negative");
    return SaturationCheck{excitation <= threshold, excitation, threshold};
}

// ---------------------------------------------------------------------------
// Plain-text configuration: one `key = value` pair per line, `#` comments.
// A line `[section]` prefixes subsequent keys as "section.key"; dotted keys
// may also be written directly. Duplicate keys are an error.
// ---------------------------------------------------------------------------

using ConfigMap = std::map<std::string, std::string>;

namespace detail {

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

} // namespace detail

inline ConfigMap parse_config_text(std::istream& in, const std::string& origin) {
    ConfigMap map;
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        if (line.front() == '[' && line.back() == ']') {
            section = detail::trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument(origin + ":" + std::to_string(lineno) +
                                        ": expected key = value");
        std::string key = detail::trim(line.substr(0, eq));
        std::string val = detail::trim(line.substr(eq + 1));
        if (key.empty())
            throw std::invalid_argument(origin + ":" + std::to_string(lineno) + ": empty key");
        if (!section.empty()) key = section + "." + key;
        if (map.count(key))
            throw std::invalid_argument(origin + ":" + std::to_string(lineno) +
                                        ": duplicate key '" + key + "'");
        map[key] = val;
    }
    return map;
}

inline ConfigMap parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
    return parse_config_text(in, path);
}

// Applies one "key=value" override (CLI --set); later values win.
inline void apply_override(ConfigMap& map, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos)
        throw std::invalid_argument("--set expects key=value, got '" + assignment + "'");
    const std::string key = detail::trim(assignment.substr(0, eq));
    const std::string val = detail::trim(assignment.substr(eq + 1));
    if (key.empty()) throw std::invalid_argument("--set with empty key");
    map[key] = val;
}

namespace detail {

inline double parse_double(const std::string& key, const std::string& val) {
    std::size_t pos = 0;
    double x = 0.0;
    try {
        x = std::stod(val, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("key '" + key + "': cannot parse '" + val + "' as number");
    }
    if (pos != val.size())
        throw std::invalid_argument("key '" + key + "': trailing garbage in '" + val + "'");
    return x;
}

inline long long parse_int(const std::string& key, const std::string& val) {
    std::size_t pos = 0;
    long long x = 0;
    try {
        x = std::stoll(val, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("key '" + key + "': cannot parse '" + val + "' as integer");
    }
    if (pos != val.size())
        throw std::invalid_argument("key '" + key + "': trailing garbage in '" + val + "'");
    return x;
}

inline bool parse_bool(const std::string& key, const std::string& val) {
    if (val == "true" || val == "1" || val == "on" || val == "yes") return true;
    if (val == "false" || val == "0" || val == "off" || val == "no") return false;
    throw std::invalid_argument("key '" + key + "': expected boolean, got '" + val + "'");
}

} // namespace detail

} // namespace cavcool
