// Wavelength-averaged thermodynamics: steady-state temperature, cooling time,
// spontaneous-photon budget, and the scan generators for detuning maps,
// mode-number scans, and axial position scans.
//
// A uniform position distribution over one wavelength is assumed, so the
// temperature is the ratio of the averaged diffusion and friction
// coefficients and is independent of the pump strength.
#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "cavcool/linres.hpp"
#include "cavcool/modes.hpp"
#include "cavcool/parallel.hpp"
#include "cavcool/params.hpp"

namespace cavcool {

struct ThermoReport {
    double beta_avg = 0.0;       // averaged friction (hbar k^2)
    double d_avg = 0.0;          // averaged total diffusion (hbar k)^2 gamma
    double d_dip_avg = 0.0;      //   dipole-fluctuation part
    double d_rec_avg = 0.0;      //   spontaneous-recoil part
    double excitation_avg = 0.0; // averaged <sigma^dag sigma>
    bool cooling = false;        // beta_avg < 0
    // populated only when cooling:
    double temperature = std::numeric_limits<double>::quiet_NaN();  // k_B T in hbar gamma
    double cooling_time = std::numeric_limits<double>::quiet_NaN(); // m/(2|beta|), in 1/gamma
    double n_spont = std::numeric_limits<double>::quiet_NaN();      // emissions per cooling time
};

namespace detail {

// Composite Simpson over [a, b] with n panels (n even).
template <class F>
double simpson(F&& f, double a, double b, int n, double* abs_mean = nullptr) {
    const double h = (b - a) / n;
    double acc = f(a) + f(b);
    double am = std::abs(f(a)) + std::abs(f(b));
    for (int i = 1; i < n; ++i) {
        const double fi = f(a + i * h);
        acc += (i % 2 ? 4.0 : 2.0) * fi;
        am += std::abs(fi);
    }
    if (abs_mean) *abs_mean = am / (n + 1);
    return acc * h / 3.0;
}

} // namespace detail

// Mean of `f` over one wavelength starting at z_center: (k/2pi) * integral.
// Composite Simpson starting at 256 panels, doubling until the Richardson
// difference falls below rel_tol; failure past 1024 panels is an error.
template <class F>
double spatial_average(F&& f, double z_center, int panels = 256, double rel_tol = 1e-6) {
    const double a = z_center, b = z_center + 2.0 * M_PI;
    double abs_mean = 0.0;
    double prev = detail::simpson(f, a, b, panels) / (b - a);
    for (int n = 2 * panels; n <= 4 * panels; n *= 2) {
        const double cur = detail::simpson(f, a, b, n, &abs_mean) / (b - a);
        const double scale = std::max(std::abs(cur), 1e-3 * abs_mean);
        if (std::abs(cur - prev) <= rel_tol * scale || scale == 0.0) return cur;
        prev = cur;
    }
    throw std::runtime_error("spatial_average: no convergence beyond 1024 panels");
}

namespace detail {

// One-sweep wavelength average of all point coefficients (shared mode sums).
inline PointCoefficients averaged_coefficients(const SystemParams& p, const ModeSet& ms,
                                               double z_center, int panels = 256,
                                               double rel_tol = 1e-6) {
    const double a = z_center, b = z_center + 2.0 * M_PI;
    auto sweep = [&](int n, PointCoefficients& out, double& abs_beta_mean) {
        const double h = (b - a) / n;
        PointCoefficients acc;
        double am = 0.0;
        for (int i = 0; i <= n; ++i) {
            const auto c = point_coefficients(p, ms, a + i * h);
            const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
            acc.f_p += w * c.f_p;
            acc.beta += w * c.beta;
            acc.d_dip += w * c.d_dip;
            acc.d_rec += w * c.d_rec;
            acc.excitation += w * c.excitation;
            am += std::abs(c.beta);
        }
        const double norm = h / 3.0 / (b - a);
        out.f_p = acc.f_p * norm;
        out.beta = acc.beta * norm;
        out.d_dip = acc.d_dip * norm;
        out.d_rec = acc.d_rec * norm;
        out.excitation = acc.excitation * norm;
        abs_beta_mean = am / (n + 1);
    };
    PointCoefficients prev, cur;
    double abs_beta = 0.0;
    sweep(panels, prev, abs_beta);
    for (int n = 2 * panels; n <= 4 * panels; n *= 2) {
        sweep(n, cur, abs_beta);
        const double scale = std::max(std::abs(cur.beta), 1e-3 * abs_beta);
        if (scale == 0.0 || std::abs(cur.beta - prev.beta) <= rel_tol * scale) return cur;
        prev = cur;
    }
    throw std::runtime_error("averaged_coefficients: no convergence beyond 1024 panels");
}

} // namespace detail

// k_B T = d_avg / (2 |beta_avg|); requires a cooling steady state.
inline double temperature(double beta_avg, double d_avg) {
    if (!(beta_avg < 0.0)) throw std::runtime_error("no cooling steady state (beta_avg >= 0)");
    return d_avg / (2.0 * std::abs(beta_avg));
}

// Expected spontaneous emissions within one cooling time tau_c = m/(2|beta|):
// rate 2 gamma <sigma^dag sigma> times tau_c. With m = 1/(2 omega_rec) this is
// gamma * excitation / (2 omega_rec |beta|).
inline double spontaneous_photon_count(double excitation_avg, double beta_avg,
                                       double recoil_freq, double gamma = 1.0) {
    if (!(beta_avg < 0.0)) throw std::runtime_error("no cooling steady state (beta_avg >= 0)");
    const double tau_c = 1.0 / (4.0 * recoil_freq * std::abs(beta_avg));
    return 2.0 * gamma * excitation_avg * tau_c;
}

// Full wavelength-averaged report at z_center.
inline ThermoReport thermo_report(const SystemParams& p, const ModeSet& ms, double z_center = 0.0) {
    const auto c = detail::averaged_coefficients(p, ms, z_center);
    ThermoReport r;
    r.beta_avg = c.beta;
    r.d_dip_avg = c.d_dip;
    r.d_rec_avg = c.d_rec;
    r.d_avg = c.d_dip + c.d_rec;
    r.excitation_avg = c.excitation;
    r.cooling = c.beta < 0.0;
    if (r.cooling) {
        r.temperature = temperature(c.beta, r.d_avg);
        r.cooling_time = 1.0 / (4.0 * p.recoil_freq * std::abs(c.beta));
        r.n_spont = spontaneous_photon_count(c.excitation, c.beta, p.recoil_freq, p.gamma);
    }
    return r;
}

// ---------------------------------------------------------------------------
// scan generators
// ---------------------------------------------------------------------------

struct GridSpec {
    double a_min = -10.0, a_max = 10.0;
    int a_count = 101;
    double c_min = -10.0, c_max = 10.0;
    int c_count = 101;
};

struct MapPoint {
    double delta_a = 0.0, delta_c = 0.0;
    double beta_avg = 0.0, d_avg = 0.0;
    bool cooling = false;
    double temperature = std::numeric_limits<double>::quiet_NaN();
};

// Wavelength-averaged coefficients on a rectangular detuning grid; rows
// ordered by (delta_a index, delta_c index).
inline std::vector<MapPoint> detuning_map(const SystemParams& base, const ModeSet& ms,
                                          const GridSpec& grid, double z_center = 0.0) {
    if (grid.a_count < 1 || grid.c_count < 1)
        throw std::invalid_argument("grid counts must be >= 1");
    const std::size_t total =
        static_cast<std::size_t>(grid.a_count) * static_cast<std::size_t>(grid.c_count);
    std::vector<MapPoint> out(total);
    parallel_for(total, [&](std::size_t idx) {
        const int ia = static_cast<int>(idx) / grid.c_count;
        const int ic = static_cast<int>(idx) % grid.c_count;
        SystemParams p = base;
        p.delta_a = grid.a_count == 1
                        ? grid.a_min
                        : grid.a_min + (grid.a_max - grid.a_min) * ia / (grid.a_count - 1);
        p.delta_c = grid.c_count == 1
                        ? grid.c_min
                        : grid.c_min + (grid.c_max - grid.c_min) * ic / (grid.c_count - 1);
        const auto c = detail::averaged_coefficients(p, ms, z_center);
        MapPoint& mp = out[idx];
        mp.delta_a = p.delta_a;
        mp.delta_c = p.delta_c;
        mp.beta_avg = c.beta;
        mp.d_avg = c.d_total();
        mp.cooling = c.beta < 0.0;
        if (mp.cooling) mp.temperature = temperature(c.beta, mp.d_avg);
    }, 4);
    return out;
}

struct ModesScanRow {
    int n_index_max = 0;
    double g_eff = 0.0;
    ThermoReport report;
};

// Fig.-4-style scan: for each N the family is folded into one effective mode
// with coupling g_eff(N), the detunings are re-derived from the fixed
// difference, and the waist-averaged report is produced.
inline std::vector<ModesScanRow> modes_scan(const SystemParams& base, const ModeSet& ms,
                                            const std::vector<int>& n_list, double delta_diff) {
    std::vector<ModesScanRow> out(n_list.size());
    parallel_for(n_list.size(), [&](std::size_t i) {
        const int N = n_list[i];
        const double g_eff = effective_coupling(N, ms.g_single);
        const DetuningPair det = resonant_detunings(g_eff, delta_diff);
        SystemParams p = base;
        p.delta_a = det.delta_a;
        p.delta_c = det.delta_c;
        ModeSet eff = ms;
        eff.n_index_max = 0;
        eff.g_single = g_eff;
        out[i] = ModesScanRow{N, g_eff, thermo_report(p, eff, 0.0)};
    });
    return out;
}

enum class RetuneRule {
    envelope_sum, // detunings from the envelope-scaled waist coupling (default)
    max_g         // detunings from the max of G over the local wavelength
};

struct PositionScanRow {
    double z = 0.0;
    double g_loc = 0.0;
    double delta_a = 0.0, delta_c = 0.0;
    ThermoReport report;
    double t_ratio = std::numeric_limits<double>::quiet_NaN(); // T(z)/T(0)
};

// Fig.-5-style scan: at each z the detunings are re-derived from the local
// coupling and the full Gouy-dephased sums are wavelength-averaged. The
// temperature is normalized by its value at the waist.
inline std::vector<PositionScanRow> position_scan(const SystemParams& base, const ModeSet& ms,
                                                  const std::vector<double>& z_list,
                                                  double delta_diff,
                                                  RetuneRule rule = RetuneRule::envelope_sum) {
    auto evaluate = [&](double z) {
        PositionScanRow row;
        row.z = z;
        row.g_loc = rule == RetuneRule::envelope_sum ? envelope_coupling(ms, z)
                                                     : local_coupling(ms, z);
        const DetuningPair det = resonant_detunings(row.g_loc, delta_diff);
        row.delta_a = det.delta_a;
        row.delta_c = det.delta_c;
        SystemParams p = base;
        p.delta_a = det.delta_a;
        p.delta_c = det.delta_c;
        row.report = thermo_report(p, ms, z);
        return row;
    };
    const PositionScanRow origin = evaluate(0.0);
    if (!origin.report.cooling)
        throw std::runtime_error("position_scan: no cooling at the waist, nothing to normalize by");
    std::vector<PositionScanRow> out(z_list.size());
    parallel_for(z_list.size(), [&](std::size_t i) {
        out[i] = evaluate(z_list[i]);
        if (out[i].report.cooling)
            out[i].t_ratio = out[i].report.temperature / origin.report.temperature;
    });
    return out;
}

} // namespace cavcool
