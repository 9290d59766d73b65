// cavcool: friction, diffusion, steady-state temperature, and scattering
// budget for a laser-driven atom in a (possibly degenerate multimode) high-Q
// cavity, with a small quantum oracle for cross-validation and a Langevin
// trajectory simulator.
//
// Units: rates and detunings in units of the dipole decay rate gamma, lengths
// in 1/k, momenta in hbar k, temperatures in hbar gamma / k_B. To convert to
// SI, multiply rates by your gamma (e.g. Rb: gamma = 2e7 / s, treated as the
// dipole decay rate, half the population decay) and temperatures by
// hbar*gamma/k_B.

#include <cstdio>
#include <exception>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cavcool/cmsim.hpp"
#include "cavcool/config.hpp"
#include "cavcool/csv.hpp"
#include "cavcool/linres.hpp"
#include "cavcool/modes.hpp"
#include "cavcool/oracle.hpp"
#include "cavcool/params.hpp"
#include "cavcool/thermo.hpp"
#include "cavcool/verify.hpp"

namespace {

using namespace cavcool;

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = cavcool::detail::trim(item);
        if (item.empty()) continue;
        out.push_back(static_cast<int>(cavcool::detail::parse_int("n-list", item)));
    }
    if (out.empty()) throw std::invalid_argument("empty N list");
    return out;
}

void warn_saturation(double excitation) {
    const auto check = saturation_guard(excitation);
    if (!check.pass)
        std::cerr << "warning: atomic excitation " << excitation << " exceeds the low-saturation "
                  << "threshold " << check.threshold << "; linear response is unreliable\n";
}

std::string fmt(double x) { return format_double(x); }

void print_report(const ThermoReport& r) {
    std::printf("  beta_avg        = %.10g   (hbar k^2)\n", r.beta_avg);
    std::printf("  d_dip_avg       = %.10g   ((hbar k)^2 gamma)\n", r.d_dip_avg);
    std::printf("  d_rec_avg       = %.10g\n", r.d_rec_avg);
    std::printf("  d_total_avg     = %.10g\n", r.d_avg);
    std::printf("  excitation_avg  = %.10g\n", r.excitation_avg);
    if (r.cooling) {
        std::printf("  temperature     = %.10g   (hbar gamma / k_B)\n", r.temperature);
        std::printf("  cooling_time    = %.10g   (1/gamma)\n", r.cooling_time);
        std::printf("  n_spontaneous   = %.10g   (photons per cooling time)\n", r.n_spont);
    } else {
        std::printf("  heating (beta_avg >= 0): no steady-state temperature\n");
    }
}

int run_coeffs(const Settings& s, double z) {
    const auto mc = motion_coefficients(s.params, s.modes, z);
    warn_saturation(mc.excitation);
    std::printf("coefficients at kz = %.10g:\n", z);
    std::printf("  f_p        = %.10g   (hbar k gamma)\n", mc.f_p);
    std::printf("  beta       = %.10g   (hbar k^2)\n", mc.beta);
    std::printf("  d_dip      = %.10g   ((hbar k)^2 gamma)\n", mc.d_dip);
    std::printf("  d_rec      = %.10g\n", mc.d_rec);
    std::printf("  excitation = %.10g\n", mc.excitation);
    double total_photons = 0.0;
    for (const double n : mc.photons) total_photons += n;
    std::printf("  photons    = %.10g (sum over %zu modes)\n", total_photons, mc.photons.size());
    std::printf("wavelength-averaged report at kz = %.10g:\n", z);
    print_report(thermo_report(s.params, s.modes, z));
    return 0;
}

int run_map(const Settings& s, const GridSpec& grid, const std::string& out) {
    const auto rows = detuning_map(s.params, s.modes, grid);
    RunManifest man;
    man.subcommand = "map";
    man.resolved = settings_to_lines(s);
    man.resolved.emplace_back("map.da_min", fmt(grid.a_min));
    man.resolved.emplace_back("map.da_max", fmt(grid.a_max));
    man.resolved.emplace_back("map.da_count", std::to_string(grid.a_count));
    man.resolved.emplace_back("map.dc_min", fmt(grid.c_min));
    man.resolved.emplace_back("map.dc_max", fmt(grid.c_max));
    man.resolved.emplace_back("map.dc_count", std::to_string(grid.c_count));
    man.out_path = out;
    CsvWriter csv(out, man, {"delta_a", "delta_c", "beta", "d_total", "cooling", "temperature"});
    for (const auto& r : rows)
        csv.row({fmt(r.delta_a), fmt(r.delta_c), fmt(r.beta_avg), fmt(r.d_avg),
                 r.cooling ? "1" : "0", fmt(r.temperature)});
    csv.commit();
    std::printf("wrote %zu grid rows to %s\n", rows.size(), out.c_str());
    return 0;
}

int run_modes_scan(const Settings& s, const std::vector<int>& n_list, const std::string& out) {
    const auto rows = modes_scan(s.params, s.modes, n_list, s.delta_diff);
    RunManifest man;
    man.subcommand = "modes-scan";
    man.resolved = settings_to_lines(s);
    std::string joined;
    for (const int n : n_list) joined += (joined.empty() ? "" : ",") + std::to_string(n);
    man.resolved.emplace_back("modes_scan.n_list", joined);
    man.out_path = out;
    CsvWriter csv(out, man, {"N", "g_eff", "T", "N_ph"});
    double worst_excitation = 0.0;
    for (const auto& r : rows) {
        csv.row({std::to_string(r.n_index_max), fmt(r.g_eff), fmt(r.report.temperature),
                 fmt(r.report.n_spont)});
        worst_excitation = std::max(worst_excitation, r.report.excitation_avg);
    }
    csv.commit();
    warn_saturation(worst_excitation);
    std::printf("wrote %zu scan rows to %s\n", rows.size(), out.c_str());
    return 0;
}

int run_position_scan(const Settings& s, double z_max, int points, bool max_g_retune,
                      const std::string& out) {
    if (points < 2) throw std::invalid_argument("--points must be >= 2");
    std::vector<double> z_list{0.0};
    const double z_lo = s.modes.gouy_scale / 300.0;
    for (int i = 0; i < points - 1; ++i)
        z_list.push_back(z_lo * std::pow(z_max / z_lo, static_cast<double>(i) / (points - 2)));
    const auto rows = position_scan(s.params, s.modes, z_list, s.delta_diff,
                                    max_g_retune ? RetuneRule::max_g : RetuneRule::envelope_sum);
    RunManifest man;
    man.subcommand = "position-scan";
    man.resolved = settings_to_lines(s);
    man.resolved.emplace_back("position_scan.z_max", fmt(z_max));
    man.resolved.emplace_back("position_scan.points", std::to_string(points));
    man.resolved.emplace_back("position_scan.retune", max_g_retune ? "max-g" : "envelope-sum");
    man.out_path = out;
    CsvWriter csv(out, man, {"z", "T_over_T0"});
    for (const auto& r : rows) csv.row({fmt(r.z), fmt(r.t_ratio)});
    csv.commit();
    std::printf("wrote %zu scan rows to %s\n", rows.size(), out.c_str());
    return 0;
}

int run_simulate(const Settings& s, const std::string& out) {
    const auto stats = simulate(s.sim, s.params, s.modes);
    RunManifest man;
    man.subcommand = "simulate";
    man.resolved = settings_to_lines(s);
    man.resolved.emplace_back("simulate.dt", fmt(stats.dt));
    man.resolved.emplace_back("simulate.n_steps", std::to_string(stats.n_steps));
    man.resolved.emplace_back("simulate.n_trajectories", std::to_string(s.sim.n_trajectories));
    man.out_path = out;
    man.seed = std::to_string(s.sim.seed);
    CsvWriter csv(out, man, {"t", "p2_mean", "p2_stderr"});
    for (std::size_t i = 0; i < stats.t.size(); ++i)
        csv.row({fmt(stats.t[i]), fmt(stats.p2_mean[i]), fmt(stats.p2_stderr[i])});
    csv.commit();
    std::printf("kinetic temperature = %.10g +- %.10g (hbar gamma / k_B)\n", stats.temperature,
                stats.temperature_stderr);
    if (stats.recoil_flag)
        std::cerr << "warning: estimate below 10x the recoil temperature; outside the "
                  << "semiclassical validity range\n";
    std::printf("wrote %zu time points to %s\n", stats.t.size(), out.c_str());
    return 0;
}

int run_verify(const Settings& s, int n_random, std::uint64_t seed) {
    const auto checks = verification_suite(s.params, n_random, seed);
    bool all_pass = true;
    std::printf("%-58s %13s %13s %9s %8s  %s\n", "check", "closed form", "oracle", "rel dev",
                "tol", "status");
    for (const auto& c : checks) {
        all_pass = all_pass && c.pass;
        std::printf("%-58s %13.6g %13.6g %9.2e %8.0e  %s\n", c.name.c_str(), c.reference, c.value,
                    c.rel_dev, c.tolerance, c.pass ? "PASS" : "FAIL");
    }
    std::printf(all_pass ? "all checks passed\n" : "verification FAILED\n");
    return all_pass ? 0 : 2;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"cavity-cooling coefficients, scans, verification, and trajectory simulation"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path, out_path;
    std::vector<std::string> sets;
    app.add_option("--config", config_path, "key = value configuration file");
    app.add_option("--out", out_path, "output CSV path");
    app.add_option("--set", sets, "override a config key, e.g. --set kappa=0.1")
        ->take_all()
        ->expected(-1);

    auto* coeffs = app.add_subcommand("coeffs", "print coefficients and the averaged report");
    double coeffs_z = 0.0;
    coeffs->add_option("--z", coeffs_z, "axial position kz");

    auto* map = app.add_subcommand("map", "wavelength-averaged friction over a detuning grid");
    GridSpec grid;
    map->add_option("--da-min", grid.a_min);
    map->add_option("--da-max", grid.a_max);
    map->add_option("--da-count", grid.a_count);
    map->add_option("--dc-min", grid.c_min);
    map->add_option("--dc-max", grid.c_max);
    map->add_option("--dc-count", grid.c_count);

    auto* mscan = app.add_subcommand("modes-scan", "temperature and photon budget vs mode number");
    std::string n_list_text = "0,1,2,4,8,16,32,48,64,96,128";
    mscan->add_option("--n-list", n_list_text, "comma-separated N values");

    auto* pscan = app.add_subcommand("position-scan", "normalized temperature vs axial position");
    double z_max = 0.0;
    int points = 72;
    bool max_g_retune = false;
    pscan->add_option("--z-max", z_max, "largest kz (default 3x gouy_scale_k)");
    pscan->add_option("--points", points, "number of scan positions");
    pscan->add_flag("--retune-max-g", max_g_retune,
                    "re-derive detunings from the max of G over a wavelength instead of the "
                    "envelope-scaled effective coupling");

    auto* sim = app.add_subcommand("simulate", "ensemble Langevin trajectories");
    auto* verify = app.add_subcommand("verify", "closed forms vs the quantum oracle");
    int n_random = 20;
    std::uint64_t verify_seed = 20240901u;
    verify->add_option("--random", n_random, "number of random comparison points");
    verify->add_option("--seed", verify_seed, "random point seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        ConfigMap map_cfg;
        if (!config_path.empty()) map_cfg = parse_config_file(config_path);
        for (const auto& assignment : sets) apply_override(map_cfg, assignment);
        const Settings settings = settings_from_map(map_cfg);

        if (coeffs->parsed()) return run_coeffs(settings, coeffs_z);
        if (map->parsed())
            return run_map(settings, grid, out_path.empty() ? "map.csv" : out_path);
        if (mscan->parsed())
            return run_modes_scan(settings, parse_int_list(n_list_text),
                                  out_path.empty() ? "modes_scan.csv" : out_path);
        if (pscan->parsed()) {
            const double zm = z_max > 0.0 ? z_max : 3.0 * settings.modes.gouy_scale;
            return run_position_scan(settings, zm, points, max_g_retune,
                                     out_path.empty() ? "position_scan.csv" : out_path);
        }
        if (sim->parsed())
            return run_simulate(settings, out_path.empty() ? "simulate.csv" : out_path);
        if (verify->parsed()) return run_verify(settings, n_random, verify_seed);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
