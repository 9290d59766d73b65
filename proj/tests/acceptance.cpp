// Acceptance suite: runs every release criterion at its pinned tolerance and
// prints one PASS/FAIL line per criterion. Exit status 0 only when all pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "cavcool/cmsim.hpp"
#include "cavcool/linres.hpp"
#include "cavcool/modes.hpp"
#include "cavcool/oracle.hpp"
#include "cavcool/thermo.hpp"
#include "cavcool/verify.hpp"

using namespace cavcool;

namespace {

int failures = 0;

void report(int number, const std::string& label, bool pass, const std::string& detail) {
    std::printf("[%s] criterion %2d: %s (%s)\n", pass ? "PASS" : "FAIL", number, label.c_str(),
                detail.c_str());
    if (!pass) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

ModeSet bare_single_mode(double g) {
    ModeSet ms;
    ms.n_index_max = 0;
    ms.g_single = g;
    ms.gouy_scale = 1e30;
    ms.envelope_on = false;
    return ms;
}

CouplingSums single_sums(double g, double dg) {
    CouplingSums s;
    s.G = g * g;
    s.Gamma = g * dg;
    s.dG_dz = 2.0 * g * dg;
    s.sum_dg_sq = dg * dg;
    return s;
}

char buf[256];

bool random_friction_ok = false, random_diffusion_ok = false;
double worst_friction_dev = 0.0, worst_diffusion_dev = 0.0;

void run_random_points() {
    std::mt19937_64 gen(20240901u);
    std::uniform_real_distribution<double> det(-5.0, 5.0);
    std::uniform_real_distribution<double> gdist(0.3, 3.0);
    std::uniform_real_distribution<double> kzdist(0.15, 1.42);
    const double kappas[3] = {0.1, 1.0, 10.0};
    int ok_b = 0, ok_d = 0;
    const int n = 20;
    for (int i = 0; i < n; ++i) {
        SystemParams p = headline_params();
        p.kappa = kappas[i % 3];
        p.delta_a = det(gen);
        p.delta_c = det(gen);
        const double g0 = gdist(gen), kz = kzdist(gen);
        const double g = g0 * std::cos(kz), dg = -g0 * std::sin(kz);
        const auto db =
            cavcool::detail::closed_vs_oracle(p, g, dg, cavcool::detail::Quantity::friction_q);
        const auto dd =
            cavcool::detail::closed_vs_oracle(p, g, dg, cavcool::detail::Quantity::diffusion_q);
        worst_friction_dev = std::max(worst_friction_dev, db.dev);
        worst_diffusion_dev = std::max(worst_diffusion_dev, dd.dev);
        if (cavcool::detail::pass_with_envelope(p, g, dg, cavcool::detail::Quantity::friction_q,
                                                1e-3, db.dev))
            ++ok_b;
        if (cavcool::detail::pass_with_envelope(p, g, dg, cavcool::detail::Quantity::diffusion_q,
                                                1e-2, dd.dev))
            ++ok_d;
    }
    random_friction_ok = ok_b == n;
    random_diffusion_ok = ok_d == n;
}

void criterion_1() {
    const auto t0 = std::chrono::steady_clock::now();
    const SystemParams p = headline_params();
    const double kz = M_PI / 4.0;
    const double g = 3.0 * std::cos(kz), dg = -3.0 * std::sin(kz);
    const auto sys = build_liouvillian(p, {g}, {dg}, HilbertConfig{});
    LiouvillianSolver solver(sys);
    const double closed = friction(p, single_sums(g, dg));
    const double dev = std::abs(solver.friction() - closed) / std::abs(closed);
    const double elapsed = seconds_since(t0);
    std::snprintf(buf, sizeof buf, "headline rel dev %.2e in %.3f s, worst random %.2e", dev,
                  elapsed, worst_friction_dev);
    report(1, "friction: Liouvillian oracle vs closed form, headline point + 20 random",
           dev <= 1e-3 && elapsed < 1.0 && random_friction_ok, buf);
}

void criterion_2() {
    const SystemParams p = headline_params();
    const double kz = M_PI / 4.0;
    const double g = 3.0 * std::cos(kz), dg = -3.0 * std::sin(kz);
    const auto sys = build_liouvillian(p, {g}, {dg}, HilbertConfig{});
    const double closed = diffusion_dipole(p, single_sums(g, dg));
    const double dev = std::abs(oracle_diffusion(sys) - closed) / std::abs(closed);
    std::snprintf(buf, sizeof buf, "headline rel dev %.2e, worst random %.2e", dev,
                  worst_diffusion_dev);
    report(2, "diffusion: regression oracle vs closed form, same points",
           dev <= 1e-2 && random_diffusion_ok, buf);
}

void criterion_3() {
    std::mt19937_64 gen(77);
    std::uniform_real_distribution<double> da(-6.0, -0.5);
    std::uniform_real_distribution<double> dc(-2.0, -0.05);
    std::uniform_real_distribution<double> kzdist(0.15, 1.42);
    double worst = 0.0;
    int ok = 0;
    for (int i = 0; i < 10; ++i) {
        SystemParams p = headline_params();
        p.kappa = (i % 2) ? 0.1 : 0.5;
        p.delta_a = da(gen);
        p.delta_c = dc(gen);
        const double kz = kzdist(gen);
        const auto rep = swap_symmetry_check(p, 0.3 * std::cos(kz), -0.3 * std::sin(kz), 4);
        worst = std::max(worst, rep.rel_dev);
        if (rep.rel_dev <= 1e-3) ++ok;
    }
    // equal detunings, kappa != gamma: the two drives are physically different
    SystemParams p = headline_params();
    p.kappa = 0.1;
    p.delta_a = p.delta_c = -0.5;
    const auto rep = swap_symmetry_check(p, 0.3 * std::cos(0.7), -0.3 * std::sin(0.7), 4);
    const double split = std::abs(rep.beta_oracle_atom - rep.beta_oracle_cavity) /
                         std::abs(rep.beta_oracle_cavity);
    std::snprintf(buf, sizeof buf, "worst swap dev %.2e at 10 points, drive split %.1f%%", worst,
                  100.0 * split);
    report(3, "pump-exchange symmetry (Delta_A,gamma)<->(Delta_C,kappa)",
           ok == 10 && split > 0.05, buf);
}

void criterion_4() {
    std::mt19937_64 gen(101);
    std::uniform_real_distribution<double> det(-8.0, 8.0);
    std::uniform_real_distribution<double> kdist(0.1, 10.0);
    std::uniform_real_distribution<double> gdist(0.1, 4.0);
    std::uniform_real_distribution<double> kzdist(0.05, 1.5);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        SystemParams p;
        p.kappa = kdist(gen);
        p.delta_a = det(gen);
        p.delta_c = det(gen);
        p.eta = 0.01;
        const double g0 = gdist(gen), kz = kzdist(gen);
        const auto s = single_sums(g0 * std::cos(kz), -g0 * std::sin(kz));
        SystemParams q = p;
        q.delta_a = -p.delta_a;
        q.delta_c = -p.delta_c;
        const double ba = friction(p, s), bb = friction(q, s);
        const double scale = std::max({std::abs(ba), std::abs(bb), 1e-300});
        worst = std::max(worst, std::abs(ba + bb) / scale);
    }
    std::snprintf(buf, sizeof buf, "worst asymmetry %.2e over 1000 draws", worst);
    report(4, "odd parity: beta(dA,dC) = -beta(-dA,-dC)", worst <= 1e-10, buf);
}

void criterion_5() {
    SystemParams p;
    p.kappa = 10.0;
    p.g_single = 0.5;
    p.eta = 0.01;
    const auto ms = bare_single_mode(0.5);
    SystemParams cool = p, heat = p;
    cool.delta_a = cool.delta_c = -5.0;
    heat.delta_a = heat.delta_c = 5.0;
    const double b_cool = cavcool::detail::averaged_coefficients(cool, ms, 0.0).beta;
    const double b_heat = cavcool::detail::averaged_coefficients(heat, ms, 0.0).beta;
    std::snprintf(buf, sizeof buf, "beta(-5,-5) = %.3e, beta(+5,+5) = %.3e", b_cool, b_heat);
    report(5, "bad-cavity sign structure: cooling for red, heating for blue detuning",
           b_cool < 0.0 && b_heat > 0.0, buf);
}

void criterion_6() {
    // exact rational check of sum w_n = (2N+1)!!/(2N)!! for N <= 10
    bool rational_ok = true;
    for (int N = 0; N <= 10; ++N) {
        long long sum_num = 0;
        for (int n = 0; n <= N; ++n) {
            long long odd = 1;
            for (int j = 1; j <= n; ++j) odd *= 2 * j - 1;
            long long rest = 1;
            for (int j = n + 1; j <= N; ++j) rest *= 2 * j;
            sum_num += odd * rest;
        }
        long long target = 1;
        for (int j = 0; j <= N; ++j) target *= 2 * j + 1;
        rational_ok = rational_ok && sum_num == target;
    }
    // floating point to N = 128
    bool float_ok = true;
    double sum = 0.0;
    for (int N = 0; N <= 128; ++N) {
        sum += onaxis_weight(N);
        float_ok = float_ok &&
                   std::abs(sum - double_factorial_ratio(N)) <= 1e-12 * double_factorial_ratio(N);
    }
    // the waist sum of the multimode set collapses onto g_eff^2
    bool geff_ok = true;
    for (const int N : {1, 4, 16}) {
        ModeSet ms = bare_single_mode(0.7);
        ms.n_index_max = N;
        const double G0 = coupling_sums(ms, 0.0).G;
        const double ge = effective_coupling(N, 0.7);
        geff_ok = geff_ok && std::abs(G0 - ge * ge) <= 1e-12 * ge * ge;
    }
    std::snprintf(buf, sizeof buf, "rational %s, float %s, G(0)=g_eff^2 %s",
                  rational_ok ? "ok" : "BAD", float_ok ? "ok" : "BAD", geff_ok ? "ok" : "BAD");
    report(6, "effective-coupling law (2N+1)!!/(2N)!!", rational_ok && float_ok && geff_ok, buf);
}

void criterion_7() {
    const auto t0 = std::chrono::steady_clock::now();
    // the scan points of the temperature-vs-g_eff figure: doubling steps in N
    const std::vector<int> n_list{0, 1, 2, 4, 8, 16, 32, 48, 64, 96, 128};
    bool ok = true;
    std::string note;
    for (const double chain_kappa : {1.0, 0.1}) {
        SystemParams p;
        p.kappa = chain_kappa;
        p.g_single = 3.0 * chain_kappa; // g = 3 gamma and 3 gamma/10 chains
        p.eta = 0.01;
        ModeSet ms = bare_single_mode(p.g_single);
        const auto rows = modes_scan(p, ms, n_list, -50.0);
        // strict decrease over the scan points N = 0, 1, 2, 4, 8
        for (int i = 1; i <= 4; ++i)
            ok = ok && rows[i].report.cooling &&
                 rows[i].report.temperature < rows[i - 1].report.temperature;
        // convergence from N = 96 to 128
        const double t96 = rows[9].report.temperature, t128 = rows[10].report.temperature;
        ok = ok && std::abs(t128 - t96) / t96 < 0.05;
        if (chain_kappa == 0.1) {
            // sub-Doppler with a small number of modes
            ok = ok && rows[4].report.temperature < 0.5;
            // the photon budget crosses below one within N in [32, 128]
            bool crossed = false;
            for (std::size_t i = 0; i < n_list.size(); ++i)
                if (n_list[i] >= 32 && rows[i].report.n_spont < 1.0) crossed = true;
            ok = ok && crossed;
            note = "T(N=8) = " + std::to_string(rows[4].report.temperature) +
                   ", N_ph(64/96/128) = " + std::to_string(rows[8].report.n_spont) + "/" +
                   std::to_string(rows[9].report.n_spont) + "/" +
                   std::to_string(rows[10].report.n_spont);
        }
    }
    const double elapsed = seconds_since(t0);
    ok = ok && elapsed < 60.0;
    std::snprintf(buf, sizeof buf, "%s, %.2f s", note.c_str(), elapsed);
    report(7, "mode-number scan trends for both cavity chains", ok, buf);
}

void criterion_8() {
    SystemParams p;
    p.kappa = 0.1;
    p.g_single = 0.3;
    p.eta = 0.01;
    bool ok = true;
    std::string note;
    for (const int N : {4, 8, 16}) {
        ModeSet ms;
        ms.n_index_max = N;
        ms.g_single = 0.3;
        const double z0 = ms.gouy_scale;
        std::vector<double> zs{0.0};
        for (int i = 0; i < 40; ++i)
            zs.push_back(z0 / 100.0 * std::pow(300.0, i / 39.0)); // up to 3 z0
        const auto rows = position_scan(p, ms, zs, -50.0);
        double t_min = 1e300, z_min = 0.0;
        for (const auto& r : rows)
            if (r.report.cooling && r.t_ratio < t_min) {
                t_min = r.t_ratio;
                z_min = r.z;
            }
        const double z_pred = M_PI * (2.0 * z0) / (4.0 * (2.0 * N + 1.0));
        const bool dip_band = t_min > 0.7 && t_min < 0.95;
        const bool dip_place = z_min > z_pred / 2.0 && z_min < z_pred * 2.0;
        const bool rises = rows.back().t_ratio > 1.0;
        ok = ok && dip_band && dip_place && rises;
        if (N == 8) {
            std::snprintf(buf, sizeof buf, "N=8: min T/T0 = %.3f at z = %.0f (predicted %.0f)",
                          t_min, z_min, z_pred);
            note = buf;
        }
    }
    report(8, "position-scan temperature dip from Gouy dephasing, N in {4,8,16}", ok, note);
}

void criterion_9() {
    // frozen coefficients: Ornstein-Uhlenbeck stationary variance
    TrajectoryConfig cfg;
    cfg.source = TrajectoryConfig::Source::frozen;
    cfg.frozen.beta = -0.2;
    cfg.frozen.diffusion = 0.8;
    cfg.n_trajectories = 10000;
    cfg.seed = 2024;
    SystemParams p;
    const auto ms = bare_single_mode(3.0);
    const auto frozen_stats = simulate(cfg, p, ms);
    const double expected = cfg.frozen.diffusion * p.mass() / (2.0 * std::abs(cfg.frozen.beta));
    const double frozen_dev = std::abs(frozen_stats.p2_mean.back() - expected) / expected;

    // position-resolved run against the averaged-coefficient ratio
    SystemParams pr = headline_params();
    pr.eta = 0.5;
    const auto ref = thermo_report(pr, ms);
    TrajectoryConfig cfg2;
    cfg2.source = TrajectoryConfig::Source::position_resolved;
    cfg2.n_trajectories = 2000;
    cfg2.seed = 7;
    const auto pos_stats = simulate(cfg2, pr, ms);
    const double pos_dev = std::abs(pos_stats.temperature - ref.temperature) / ref.temperature;

    std::snprintf(buf, sizeof buf, "frozen dev %.2f%%, position-resolved dev %.1f%%",
                  100.0 * frozen_dev, 100.0 * pos_dev);
    report(9, "Langevin simulator consistency (stationary variance, thermo ratio)",
           frozen_dev < 0.05 && pos_dev < 0.25, buf);
}

void criterion_10() {
    bool ok = true;
    // eta = 0 zeroes amplitudes, force, friction, diffusion
    SystemParams p = headline_params();
    p.eta = 0.0;
    const auto ms = bare_single_mode(3.0);
    const auto st = steady_state(p, ms, 0.7);
    ok = ok && std::abs(st.s0) == 0.0 && std::abs(st.s1) == 0.0;
    const auto c = cavcool::detail::point_coefficients(p, ms, 0.7);
    ok = ok && c.f_p == 0.0 && c.beta == 0.0 && c.d_dip == 0.0 && c.d_rec == 0.0;

    // g -> 0 recovers the free-space excitation and recoil diffusion continuously
    SystemParams q = headline_params();
    q.eta = 0.02;
    const double kz = 0.6;
    const double exc_free = q.eta * q.eta / (q.gamma * q.gamma + q.delta_a * q.delta_a);
    const double drec_free = 2.0 * q.u2bar * q.gamma * exc_free;
    const auto s_small = single_sums(1e-6 * std::cos(kz), -1e-6 * std::sin(kz));
    const double exc_small = excitation_formula(q, s_small);
    ok = ok && std::abs(exc_small - exc_free) <= 1e-5 * exc_free;
    ok = ok && std::abs(diffusion_recoil(q, exc_small) - drec_free) <= 1e-5 * drec_free;
    ok = ok && std::abs(friction(q, s_small)) < 1e-12;
    ok = ok && std::abs(diffusion_dipole(q, s_small)) < 1e-12;
    report(10, "trivial limits: eta = 0 and g -> 0", ok, "free-space continuity at g = 1e-6");
}

} // namespace

int main() {
    run_random_points();
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    if (failures) {
        std::printf("%d criterion(s) FAILED\n", failures);
        return 1;
    }
    std::printf("all acceptance criteria passed\n");
    return 0;
}
