// Cross-validation of the closed-form coefficients against the truncated-Fock
// oracle: friction from the velocity expansion, diffusion from the regression
// theorem, the pump-exchange symmetry, and the supporting invariants. Shared
// by the `verify` CLI subcommand and the acceptance suite.
//
// The closed forms are exact in the zero-saturation limit while the oracle
// keeps the full two-level atom, so a residual deviation of order eta^2 is
// physical. A point that misses its tolerance still passes when halving eta
// shrinks the deviation by the expected quadratic factor.
#pragma once

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "cavcool/linres.hpp"
#include "cavcool/modes.hpp"
#include "cavcool/oracle.hpp"
#include "cavcool/params.hpp"

namespace cavcool {

struct VerifyCheck {
    std::string name;
    double reference = 0.0; // closed form
    double value = 0.0;     // oracle
    double rel_dev = 0.0;
    double tolerance = 0.0;
    bool pass = false;
};

namespace detail {

inline double rel_dev(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    if (scale < 1e-300) return 0.0;
    return std::abs(a - b) / scale;
}

inline CouplingSums single_mode_sums(double g, double dg) {
    CouplingSums s;
    s.G = g * g;
    s.Gamma = g * dg;
    s.dG_dz = 2.0 * g * dg;
    s.sum_dg_sq = dg * dg;
    return s;
}

struct PointDeviation {
    double closed = 0.0;
    double oracle = 0.0;
    double dev = 0.0;
};

enum class Quantity { friction_q, diffusion_q };

inline PointDeviation closed_vs_oracle(const SystemParams& p, double g, double dg, Quantity q,
                                       int n_max = 3) {
    const CouplingSums sums = single_mode_sums(g, dg);
    HilbertConfig cfg;
    cfg.n_max = n_max;
    const auto sys = build_liouvillian(p, {g}, {dg}, cfg);
    LiouvillianSolver solver(sys);
    PointDeviation out;
    if (q == Quantity::friction_q) {
        out.closed = friction(p, sums);
        out.oracle = solver.friction();
    } else {
        out.closed = diffusion_dipole(p, sums);
        out.oracle = solver.diffusion();
    }
    out.dev = rel_dev(out.closed, out.oracle);
    return out;
}

// tolerance check with the eta^2-scaling fallback: a miss is accepted when the
// deviation at eta/2 drops by at least the factor 2.5 expected from
// linearization error (exact scaling would give 4)
inline bool pass_with_envelope(const SystemParams& p, double g, double dg, Quantity q, double tol,
                               double dev) {
    if (dev <= tol) return true;
    SystemParams half = p;
    half.eta = p.eta / 2.0;
    const auto at_half = closed_vs_oracle(half, g, dg, q);
    return at_half.dev <= dev / 2.5 && dev < 0.05;
}

} // namespace detail

// The headline verification point: kappa = gamma, g = 3 gamma,
// Delta_A = Delta_C = -3 gamma, kz = pi/4, eta = 0.01 gamma.
inline SystemParams headline_params() {
    SystemParams p;
    p.kappa = 1.0;
    p.g_single = 3.0;
    p.delta_a = -3.0;
    p.delta_c = -3.0;
    p.eta = 0.01;
    return p;
}

inline std::vector<VerifyCheck> verification_suite(const SystemParams& base, int n_random = 20,
                                                   std::uint64_t seed = 20240901u) {
    using detail::Quantity;
    std::vector<VerifyCheck> checks;
    auto push = [&](const std::string& name, double ref, double val, double tol, bool pass) {
        // rows with a zero reference carry the deviation itself in `val`
        const double dev = ref == 0.0 ? std::abs(val) : detail::rel_dev(ref, val);
        checks.push_back(VerifyCheck{name, ref, val, dev, tol, pass});
    };

    // headline point at kz = pi/4
    {
        SystemParams p = base;
        const double kz = M_PI / 4.0;
        const double g = p.g_single * std::cos(kz);
        const double dg = -p.g_single * std::sin(kz);
        const auto sums = detail::single_mode_sums(g, dg);

        HilbertConfig cfg;
        const auto sys = build_liouvillian(p, {g}, {dg}, cfg);
        LiouvillianSolver solver(sys);

        const double beta_cf = friction(p, sums);
        const double beta_or = solver.friction();
        push("friction: closed form vs velocity-expansion oracle", beta_cf, beta_or, 1e-3,
             detail::rel_dev(beta_cf, beta_or) <= 1e-3);

        const double dd_cf = diffusion_dipole(p, sums);
        const double dd_or = solver.diffusion();
        push("diffusion: closed form vs regression oracle", dd_cf, dd_or, 1e-2,
             detail::rel_dev(dd_cf, dd_or) <= 1e-2);

        const double ex_cf = excitation_formula(p, sums);
        const double ex_or = solver.excitation();
        push("excitation: closed form vs oracle", ex_cf, ex_or, 1e-3,
             detail::rel_dev(ex_cf, ex_or) <= 1e-3);

        const double f_cf = mean_force(p, sums);
        const double f_or = solver.mean_force();
        push("mean force: closed form vs oracle", f_cf, f_or, 1e-3,
             detail::rel_dev(f_cf, f_or) <= 1e-3);

        push("generator trace defect", 0.0, trace_defect(sys), 1e-12, trace_defect(sys) < 1e-12);

        // cutoff robustness: n_max 3 -> 4
        HilbertConfig cfg4 = cfg;
        cfg4.n_max = 4;
        const auto sys4 = build_liouvillian(p, {g}, {dg}, cfg4);
        const double beta4 = LiouvillianSolver(sys4).friction();
        push("cutoff robustness: friction n_max 3 vs 4", beta_or, beta4, 1e-6,
             detail::rel_dev(beta_or, beta4) < 1e-6);
    }

    // random single-mode points: detunings in [-5,5]^2, kappa in {0.1, 1, 10}
    {
        std::mt19937_64 gen(seed);
        std::uniform_real_distribution<double> det(-5.0, 5.0);
        std::uniform_real_distribution<double> gdist(0.3, 3.0);
        std::uniform_real_distribution<double> kzdist(0.15, 1.42);
        const double kappas[3] = {0.1, 1.0, 10.0};
        int pass_b = 0, pass_d = 0;
        double worst_b = 0.0, worst_d = 0.0;
        for (int i = 0; i < n_random; ++i) {
            SystemParams p = base;
            p.kappa = kappas[i % 3];
            p.delta_a = det(gen);
            p.delta_c = det(gen);
            p.eta = 0.01;
            const double g0 = gdist(gen);
            const double kz = kzdist(gen);
            const double g = g0 * std::cos(kz), dg = -g0 * std::sin(kz);
            const auto db = detail::closed_vs_oracle(p, g, dg, Quantity::friction_q);
            const auto dd = detail::closed_vs_oracle(p, g, dg, Quantity::diffusion_q);
            worst_b = std::max(worst_b, db.dev);
            worst_d = std::max(worst_d, dd.dev);
            if (detail::pass_with_envelope(p, g, dg, Quantity::friction_q, 1e-3, db.dev)) ++pass_b;
            if (detail::pass_with_envelope(p, g, dg, Quantity::diffusion_q, 1e-2, dd.dev)) ++pass_d;
        }
        push("friction at " + std::to_string(n_random) + " random points (worst rel dev)", 0.0,
             worst_b, 1e-3, pass_b == n_random);
        push("diffusion at " + std::to_string(n_random) + " random points (worst rel dev)", 0.0,
             worst_d, 1e-2, pass_d == n_random);
    }

    // pump-exchange symmetry at asymmetric points
    {
        std::mt19937_64 gen(seed + 1);
        std::uniform_real_distribution<double> da(-6.0, -0.5);
        std::uniform_real_distribution<double> dc(-2.0, -0.05);
        std::uniform_real_distribution<double> kzdist(0.15, 1.42);
        double worst = 0.0;
        int ok = 0;
        const int n_swap = 10;
        for (int i = 0; i < n_swap; ++i) {
            SystemParams p = headline_params();
            p.kappa = (i % 2) ? 0.1 : 0.5;
            p.delta_a = da(gen);
            p.delta_c = dc(gen);
            const double g0 = 0.3;
            const double kz = kzdist(gen);
            const auto rep = swap_symmetry_check(p, g0 * std::cos(kz), -g0 * std::sin(kz), 4);
            worst = std::max(worst, rep.rel_dev);
            if (rep.rel_dev <= 1e-3) ++ok;
        }
        push("pump-exchange symmetry at 10 asymmetric points (worst rel dev)", 0.0, worst, 1e-3,
             ok == n_swap);

        // the two drive configurations are physically different at equal detunings
        SystemParams p = headline_params();
        p.kappa = 0.1;
        p.g_single = 0.3;
        p.delta_a = p.delta_c = -0.5;
        const auto rep = swap_symmetry_check(p, 0.3 * std::cos(0.7), -0.3 * std::sin(0.7), 4);
        const double split = detail::rel_dev(rep.beta_oracle_atom, rep.beta_oracle_cavity);
        push("atom vs cavity drive differ at equal detunings (rel split)", rep.beta_oracle_atom,
             rep.beta_oracle_cavity, 0.05, split > 0.05);
    }

    return checks;
}

} // namespace cavcool
