// Binds the flat key=value configuration (file plus --set overrides) to the
// typed settings of every module. Unknown keys are an error.
#pragma once

#include <cstdio>
#include <map>
#include <set>
#include <string>
#include <type_traits>
#include <utility>

#include "cavcool/cmsim.hpp"
#include "cavcool/modes.hpp"
#include "cavcool/params.hpp"

namespace cavcool {

struct Settings {
    SystemParams params;
    ModeSet modes;
    TrajectoryConfig sim;
    double delta_diff = -50.0; // fixed detuning difference for the scan rules
};

inline Settings settings_from_map(const ConfigMap& map) {
    using detail::parse_bool;
    using detail::parse_double;
    using detail::parse_int;

    Settings s;
    s.modes.g_single = s.params.g_single;
    std::set<std::string> seen;
    auto take = [&](const std::string& key) -> const std::string* {
        const auto it = map.find(key);
        if (it == map.end()) return nullptr;
        seen.insert(key);
        return &it->second;
    };
    auto number = [&](const std::string& key, double& field) {
        if (const auto* v = take(key)) field = parse_double(key, *v);
    };
    auto integer = [&](const std::string& key, auto& field) {
        if (const auto* v = take(key)) field = static_cast<std::decay_t<decltype(field)>>(parse_int(key, *v));
    };
    auto boolean = [&](const std::string& key, bool& field) {
        if (const auto* v = take(key)) field = parse_bool(key, *v);
    };

    number("gamma", s.params.gamma);
    number("kappa", s.params.kappa);
    number("delta_a", s.params.delta_a);
    number("delta_c", s.params.delta_c);
    number("eta", s.params.eta);
    number("recoil_freq", s.params.recoil_freq);
    number("u2bar", s.params.u2bar);
    number("k_atom_ratio", s.params.k_atom_ratio);
    if (const auto* v = take("g_single")) {
        s.params.g_single = parse_double("g_single", *v);
        s.modes.g_single = s.params.g_single;
    }

    integer("n_index_max", s.modes.n_index_max);
    number("gouy_scale_k", s.modes.gouy_scale);
    boolean("envelope_on", s.modes.envelope_on);

    number("delta_diff", s.delta_diff);

    if (const auto* v = take("simulate.source")) {
        if (*v == "frozen")
            s.sim.source = TrajectoryConfig::Source::frozen;
        else if (*v == "position-resolved" || *v == "position_resolved")
            s.sim.source = TrajectoryConfig::Source::position_resolved;
        else
            throw std::invalid_argument("simulate.source must be 'frozen' or 'position-resolved'");
    }
    number("simulate.dt", s.sim.dt);
    integer("simulate.n_steps", s.sim.n_steps);
    integer("simulate.n_trajectories", s.sim.n_trajectories);
    integer("simulate.seed", s.sim.seed);
    number("simulate.p_spread", s.sim.p_spread);
    boolean("simulate.include_mean_force", s.sim.include_mean_force);
    integer("simulate.n_record", s.sim.n_record);
    number("simulate.f_p", s.sim.frozen.f_p);
    number("simulate.beta", s.sim.frozen.beta);
    number("simulate.diffusion", s.sim.frozen.diffusion);

    for (const auto& [key, value] : map)
        if (!seen.count(key)) throw std::invalid_argument("unknown config key '" + key + "'");

    s.params = validate(s.params);
    check_mode_set(s.modes);
    return s;
}

// Resolved settings echoed into output manifests.
inline std::vector<std::pair<std::string, std::string>> settings_to_lines(const Settings& s) {
    std::vector<std::pair<std::string, std::string>> out;
    auto num = [](double v) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    out.emplace_back("gamma", num(s.params.gamma));
    out.emplace_back("kappa", num(s.params.kappa));
    out.emplace_back("delta_a", num(s.params.delta_a));
    out.emplace_back("delta_c", num(s.params.delta_c));
    out.emplace_back("eta", num(s.params.eta));
    out.emplace_back("g_single", num(s.params.g_single));
    out.emplace_back("recoil_freq", num(s.params.recoil_freq));
    out.emplace_back("u2bar", num(s.params.u2bar));
    out.emplace_back("k_atom_ratio", num(s.params.k_atom_ratio));
    out.emplace_back("n_index_max", std::to_string(s.modes.n_index_max));
    out.emplace_back("gouy_scale_k", num(s.modes.gouy_scale));
    out.emplace_back("envelope_on", s.modes.envelope_on ? "true" : "false");
    out.emplace_back("delta_diff", num(s.delta_diff));
    return out;
}

} // namespace cavcool
