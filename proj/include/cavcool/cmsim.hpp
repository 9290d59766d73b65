// Semiclassical center-of-mass Langevin integrator,
//
//     dx = (p/m) dt
//     dp = [f_p(x) + beta(x) p/m] dt + sqrt(D(x) dt) * N(0,1),
//
// Euler-Maruyama with coefficients either frozen constants or the
// position-resolved closed forms. Trajectories draw their noise from a
// counter-based generator keyed by (seed, trajectory, step), so the ensemble
// is reproducible independent of scheduling and may be partitioned freely.
#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "cavcool/linres.hpp"
#include "cavcool/modes.hpp"
#include "cavcool/parallel.hpp"
#include "cavcool/params.hpp"

namespace cavcool {

namespace rng {

// splitmix64 finalizer as a counter hash
inline std::uint64_t mix(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

inline std::uint64_t key(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    return mix(mix(mix(seed) ^ 0xA0761FC5B593F7FDull * (stream + 1)) ^
               0xD1B54A32D192ED03ull * (counter + 1));
}

inline double to_unit(std::uint64_t h) { // (0, 1]
    return (static_cast<double>(h >> 11) + 1.0) * 0x1.0p-53;
}

// standard normal from (seed, stream, counter) via Box-Muller
inline double normal(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
    const double u1 = to_unit(key(seed, stream, 2 * counter));
    const double u2 = to_unit(key(seed, stream, 2 * counter + 1));
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

} // namespace rng

struct FrozenCoefficients {
    double f_p = 0.0;
    double beta = -1.0;
    double diffusion = 1.0;
};

struct TrajectoryConfig {
    enum class Source { frozen, position_resolved };
    Source source = Source::frozen;
    FrozenCoefficients frozen;

    double dt = 0.0;            // 1/gamma units; 0 selects an automatic step
    long n_steps = 0;           // 0 selects ~12 momentum relaxation times
    int n_trajectories = 1000;
    std::uint64_t seed = 1;
    double p_spread = 0.0;      // initial momentum std dev (hbar k)
    bool include_mean_force = true;
    int n_record = 200;         // stored points of the <p^2>(t) series
};

struct TrajectoryStats {
    std::vector<double> t;
    std::vector<double> p2_mean;
    std::vector<double> p2_stderr;
    double temperature = 0.0;        // kinetic estimate over the second half (hbar gamma)
    double temperature_stderr = 0.0; // batch-means error over trajectories
    bool recoil_flag = false;        // estimate below 10 T_rec: semiclassics invalid
    double dt = 0.0;
    long n_steps = 0;
};

namespace detail {

struct CoefficientField {
    const SystemParams* params = nullptr;
    const ModeSet* modes = nullptr;
    bool frozen = false;
    PointCoefficients constants;
    bool include_f_p = true;

    PointCoefficients at(double x) const {
        if (frozen) return constants;
        PointCoefficients c = point_coefficients(*params, *modes, x);
        if (!include_f_p) c.f_p = 0.0;
        return c;
    }
};

// scale of |beta| over one wavelength, for the stability guard and auto-dt
inline double max_abs_beta(const CoefficientField& field) {
    if (field.frozen) return std::abs(field.constants.beta);
    double worst = 0.0;
    for (int i = 0; i < 128; ++i)
        worst = std::max(worst, std::abs(field.at(i * 2.0 * M_PI / 128).beta));
    return worst;
}

inline double averaged(const CoefficientField& field, double PointCoefficients::*member) {
    if (field.frozen) return field.constants.*member;
    double acc = 0.0;
    for (int i = 0; i < 256; ++i) acc += field.at(i * 2.0 * M_PI / 256).*member;
    return acc / 256.0;
}

} // namespace detail

// Ensemble Euler-Maruyama run. Errors: an unphysical negative sampled
// diffusion aborts with the offending position; the stability guard
// dt*max|beta|/m < 0.01 is enforced up front.
inline TrajectoryStats simulate(const TrajectoryConfig& cfg, const SystemParams& p,
                                const ModeSet& ms) {
    if (cfg.n_trajectories < 1) throw std::invalid_argument("n_trajectories must be >= 1");
    if (cfg.n_record < 2) throw std::invalid_argument("n_record must be >= 2");

    detail::CoefficientField field;
    field.params = &p;
    field.modes = &ms;
    field.include_f_p = cfg.include_mean_force;
    if (cfg.source == TrajectoryConfig::Source::frozen) {
        field.frozen = true;
        field.constants.f_p = cfg.include_mean_force ? cfg.frozen.f_p : 0.0;
        field.constants.beta = cfg.frozen.beta;
        field.constants.d_dip = cfg.frozen.diffusion;
        field.constants.d_rec = 0.0;
    }

    const double m = p.mass();
    const double beta_max = detail::max_abs_beta(field);
    const double d_avg = detail::averaged(field, &detail::PointCoefficients::d_dip) +
                         detail::averaged(field, &detail::PointCoefficients::d_rec);
    const double beta_avg = detail::averaged(field, &detail::PointCoefficients::beta);

    double dt = cfg.dt;
    if (dt <= 0.0) {
        if (!(beta_max > 0.0))
            throw std::invalid_argument("automatic dt needs nonzero friction; set dt explicitly");
        dt = 0.005 * m / beta_max;
        // resolve the wavelength at the characteristic speed
        double p_char = cfg.p_spread;
        if (beta_avg < 0.0 && d_avg > 0.0)
            p_char = std::max(p_char, 3.0 * std::sqrt(d_avg * m / (2.0 * std::abs(beta_avg))));
        if (p_char > 0.0 && !field.frozen) dt = std::min(dt, 0.2 * m / p_char);
    }
    if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
    if (beta_max > 0.0 && dt * beta_max / m >= 0.01)
        throw std::invalid_argument("stability guard violated: dt*max|beta|/m = " +
                                    std::to_string(dt * beta_max / m) + " >= 0.01");

    long n_steps = cfg.n_steps;
    if (n_steps <= 0) {
        if (!(beta_max > 0.0))
            throw std::invalid_argument("automatic n_steps needs nonzero friction");
        const double relax = m / (2.0 * beta_max);
        n_steps = static_cast<long>(std::ceil(12.0 * relax / dt));
        if (n_steps > 4000000)
            throw std::invalid_argument(
                "reaching the stationary state needs " + std::to_string(n_steps) +
                " steps per trajectory; cooling is slow at this pump strength -- raise eta or "
                "set simulate.n_steps explicitly");
    }

    const int n_rec = std::min<long>(cfg.n_record, n_steps);
    const long stride = std::max<long>(1, n_steps / n_rec);
    std::vector<long> record_steps;
    for (long s = stride; s <= n_steps; s += stride) record_steps.push_back(s);
    const std::size_t n_points = record_steps.size();

    const int n_traj = cfg.n_trajectories;
    // fixed 64-trajectory chunks reduced in chunk order: results do not depend
    // on the worker count
    const int chunk_size = 64;
    const int n_chunks = (n_traj + chunk_size - 1) / chunk_size;
    std::vector<std::vector<double>> chunk_p2(n_chunks), chunk_p4(n_chunks);
    std::vector<std::vector<double>> chunk_tavg(n_chunks); // per-trajectory time-avg of p^2
    const long half_start = n_steps / 2;

    parallel_for(static_cast<std::size_t>(n_chunks), [&](std::size_t ci) {
        const int t_begin = static_cast<int>(ci) * chunk_size;
        const int t_end = std::min(t_begin + chunk_size, n_traj);
        auto& acc_p2 = chunk_p2[ci];
        auto& acc_p4 = chunk_p4[ci];
        acc_p2.assign(n_points, 0.0);
        acc_p4.assign(n_points, 0.0);
        auto& tavg = chunk_tavg[ci];
        for (int traj = t_begin; traj < t_end; ++traj) {
            // deterministic initial conditions from the same counter stream
            double x = 2.0 * M_PI * rng::to_unit(rng::key(cfg.seed, traj, ~0ull));
            double pm = cfg.p_spread * rng::normal(cfg.seed, traj, ~1ull & 0x7FFFFFFFFFFFFFFFull);
            double tail_sum = 0.0;
            long tail_count = 0;
            std::size_t rec = 0;
            for (long step = 1; step <= n_steps; ++step) {
                const auto c = field.at(x);
                const double d_total = c.d_total();
                if (d_total < 0.0)
                    throw std::runtime_error("negative diffusion sampled at x = " +
                                             std::to_string(x));
                const double noise = rng::normal(cfg.seed, traj, static_cast<std::uint64_t>(step));
                x += pm / m * dt;
                pm += (c.f_p + c.beta * pm / m) * dt + std::sqrt(d_total * dt) * noise;
                if (step > half_start) {
                    tail_sum += pm * pm;
                    ++tail_count;
                }
                if (rec < n_points && step == record_steps[rec]) {
                    acc_p2[rec] += pm * pm;
                    acc_p4[rec] += pm * pm * pm * pm;
                    ++rec;
                }
            }
            tavg.push_back(tail_count ? tail_sum / tail_count : pm * pm);
        }
    });

    TrajectoryStats stats;
    stats.dt = dt;
    stats.n_steps = n_steps;
    stats.t.resize(n_points);
    stats.p2_mean.resize(n_points);
    stats.p2_stderr.resize(n_points);
    std::vector<double> sum_p2(n_points, 0.0), sum_p4(n_points, 0.0);
    for (int ci = 0; ci < n_chunks; ++ci)
        for (std::size_t j = 0; j < n_points; ++j) {
            sum_p2[j] += chunk_p2[ci][j];
            sum_p4[j] += chunk_p4[ci][j];
        }
    for (std::size_t j = 0; j < n_points; ++j) {
        stats.t[j] = record_steps[j] * dt;
        const double mean = sum_p2[j] / n_traj;
        const double var = std::max(0.0, sum_p4[j] / n_traj - mean * mean);
        stats.p2_mean[j] = mean;
        stats.p2_stderr[j] = std::sqrt(var / n_traj);
    }

    double s = 0.0, s2 = 0.0;
    for (int ci = 0; ci < n_chunks; ++ci)
        for (const double v : chunk_tavg[ci]) {
            s += v;
            s2 += v * v;
        }
    const double mean_tail = s / n_traj;
    const double var_tail = std::max(0.0, s2 / n_traj - mean_tail * mean_tail);
    stats.temperature = mean_tail / m;
    stats.temperature_stderr = std::sqrt(var_tail / n_traj) / m;
    // semiclassical validity floor: T_rec = 1/(2m) = omega_rec
    stats.recoil_flag = stats.temperature < 10.0 * p.recoil_freq;
    return stats;
}

// Exponential fit of the <p^2>(t) relaxation. Returns the decay rate, to be
// compared with 2|beta|/m. Requires the run to start well above the
// stationary level; non-monotone relaxation in the fit window is an error.
inline double cooling_curve(const TrajectoryStats& stats) {
    const std::size_t n = stats.p2_mean.size();
    if (n < 8) throw std::invalid_argument("too few recorded points for a decay fit");
    // stationary level from the last 20%
    double p2_inf = 0.0;
    const std::size_t tail_begin = n - std::max<std::size_t>(1, n / 5);
    for (std::size_t i = tail_begin; i < n; ++i) p2_inf += stats.p2_mean[i];
    p2_inf /= n - tail_begin;

    const double p2_0 = stats.p2_mean.front();
    if (!(p2_0 > 3.0 * p2_inf))
        throw std::runtime_error("no decay: initial <p^2> is not well above the stationary level");

    // fit region: excess above the floor still dominates the noise
    const double cutoff = p2_inf + 0.15 * (p2_0 - p2_inf);
    std::vector<double> ts, logs;
    int backsteps = 0;
    for (std::size_t i = 0; i < n && stats.p2_mean[i] > cutoff; ++i) {
        if (i > 0 && stats.p2_mean[i] > stats.p2_mean[i - 1]) ++backsteps;
        ts.push_back(stats.t[i]);
        logs.push_back(std::log(stats.p2_mean[i] - p2_inf));
    }
    if (ts.size() < 4) throw std::runtime_error("decay region too short to fit");
    if (backsteps * 3 > static_cast<int>(ts.size()))
        throw std::runtime_error("non-monotone relaxation: " + std::to_string(backsteps) +
                                 " upward steps in the fit window");

    // least squares slope of log(p2 - p2_inf) vs t
    double st = 0.0, sl = 0.0, stt = 0.0, stl = 0.0;
    const double nn = static_cast<double>(ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i) {
        st += ts[i];
        sl += logs[i];
        stt += ts[i] * ts[i];
        stl += ts[i] * logs[i];
    }
    const double slope = (nn * stl - st * sl) / (nn * stt - st * st);
    if (!(slope < 0.0)) throw std::runtime_error("fitted relaxation rate is not a decay");
    return -slope;
}

} // namespace cavcool
