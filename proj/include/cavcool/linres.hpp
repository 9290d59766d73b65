// Closed-form linear-response results for the driven atom coupled to the
// degenerate mode family: determinant, semiclassical steady state, first-order
// velocity amplitudes, mean force, friction, and both diffusion channels.
//
// Conventions: beta is force per unit velocity (units hbar k^2), so the
// momentum equation reads  dp/dt = f_p + beta * p/m + noise  and beta < 0
// damps the motion. All coefficients scale exactly as eta^2.
#pragma once

#include <complex>
#include <stdexcept>
#include <vector>

#include "cavcool/modes.hpp"
#include "cavcool/params.hpp"

namespace cavcool {

using complexd = std::complex<double>;

// Semiclassical internal amplitudes: zeroth order (s0, alphas) and the
// per-velocity first-order corrections (s1, alphas1).
struct InternalSteadyState {
    complexd s0{0.0, 0.0};
    std::vector<complexd> alphas;
    complexd s1{0.0, 0.0};
    std::vector<complexd> alphas1;
};

// Position-resolved motion coefficients. Units: f_p in hbar k gamma, beta in
// hbar k^2, diffusion in (hbar k)^2 gamma.
struct MotionCoefficients {
    double f_p = 0.0;
    double beta = 0.0;
    double d_dip = 0.0;
    double d_rec = 0.0;
    double excitation = 0.0;
    std::vector<double> photons;
};

// D(Omega) = (kappa - i Delta_C - i Omega)(gamma - i Delta_A - i Omega) + G
inline complexd determinant(const SystemParams& p, const CouplingSums& s, double omega = 0.0) {
    const complexd iw(0.0, omega);
    return (complexd(p.kappa, -p.delta_c) - iw) * (complexd(p.gamma, -p.delta_a) - iw) + s.G;
}

namespace detail {

// shared scalar pieces of the closed forms at one position
struct ResponseScalars {
    double G, dG, sum_dg_sq;
    double D2;   // |D(0)|^2
};

inline ResponseScalars response_scalars(const SystemParams& p, const CouplingSums& s) {
    ResponseScalars r;
    r.G = s.G;
    r.dG = s.dG_dz;
    r.sum_dg_sq = s.sum_dg_sq;
    const complexd D = determinant(p, s);
    r.D2 = std::norm(D);
    if (!(r.D2 > 0.0)) throw std::runtime_error("singular linear-response determinant");
    return r;
}

} // namespace detail

// Semiclassical steady state and first-order velocity amplitudes at z.
inline InternalSteadyState steady_state(const SystemParams& p, const ModeSet& ms, double z) {
    check_mode_set(ms);
    const CouplingSums sums = coupling_sums(ms, z);
    const complexd D = determinant(p, sums);
    if (!(std::norm(D) > 0.0)) throw std::runtime_error("singular linear-response determinant");

    const int N = ms.n_index_max;
    const int M = ms.mode_count();
    InternalSteadyState st;
    st.alphas.resize(M);
    st.alphas1.resize(M);

    const complexd C(p.kappa, -p.delta_c);  // kappa - i Delta_C
    const complexd A(p.gamma, -p.delta_a);  // gamma - i Delta_A
    st.s0 = p.eta * C / D;

    const complexd Gam = sums.Gamma;        // sum g_i dz(g_i^*)
    const double dG = sums.dG_dz;
    const complexd D2c = D * D, D3c = D2c * D;
    st.s1 = p.eta / D3c * (C * C - sums.G) * dG + p.eta / D2c * Gam;

    int idx = 0;
    for (int n = 0; n <= N; ++n) {
        for (int m = 0; m <= N; ++m, ++idx) {
            const double gi = mode_amplitude(ms, n, m, z);  // real mode functions
            const double dgi = mode_gradient(ms, n, m, z);
            st.alphas[idx] = p.eta * gi / D;
            st.alphas1[idx] = p.eta / D3c * (A + C) * gi * dG
                              - p.eta / D2c / C * (D * dgi - gi * Gam);
        }
    }
    return st;
}

// <sigma^dag sigma> = |s0|^2 = eta^2 (kappa^2 + Delta_C^2)/|D|^2
inline double atomic_excitation(const InternalSteadyState& st) { return std::norm(st.s0); }

inline double excitation_formula(const SystemParams& p, const CouplingSums& s) {
    const auto r = detail::response_scalars(p, s);
    return p.eta * p.eta * (p.kappa * p.kappa + p.delta_c * p.delta_c) / r.D2;
}

// per-mode photon numbers |alpha_i|^2
inline std::vector<double> photon_numbers(const InternalSteadyState& st) {
    std::vector<double> out(st.alphas.size());
    for (std::size_t i = 0; i < st.alphas.size(); ++i) out[i] = std::norm(st.alphas[i]);
    return out;
}

// Mean radiative force from the amplitude expectation of the force operator,
// f_p = i sum_i (dz g_i)(s0^* alpha_i - alpha_i^* s0) for real mode functions.
inline double mean_force_operator(const ModeSet& ms, double z, const InternalSteadyState& st) {
    const int N = ms.n_index_max;
    complexd x{0.0, 0.0};
    int idx = 0;
    for (int n = 0; n <= N; ++n)
        for (int m = 0; m <= N; ++m, ++idx)
            x += mode_gradient(ms, n, m, z) * std::conj(st.s0) * st.alphas[idx];
    return -2.0 * x.imag();
}

// Closed form obtained by substituting the steady state: -eta^2 Delta_C (dz G)/|D|^2.
inline double mean_force(const SystemParams& p, const CouplingSums& s) {
    const auto r = detail::response_scalars(p, s);
    return -p.eta * p.eta * p.delta_c * r.dG / r.D2;
}

// Friction coefficient for a standing-wave cavity (real mode functions),
// force per unit velocity. |D|^4 and |D|^6 are powers of |D|^2 so large
// detunings do not suffer catastrophic cancellation.
inline double friction(const SystemParams& p, const CouplingSums& s) {
    const auto r = detail::response_scalars(p, s);
    const double eta2 = p.eta * p.eta;
    const double ga = p.gamma, ka = p.kappa, dA = p.delta_a, dC = p.delta_c;
    const double kc2 = ka * ka + dC * dC;
    const double dG2 = r.dG * r.dG;
    const double D2 = r.D2, D4 = D2 * D2, D6 = D4 * D2;

    const double t1 = -(eta2 / D4) * dG2 *
                      (ka * dA + 2.0 * dC * (ka + ga + ka * (ka * ga - dC * dA + r.G / 2.0) / kc2));
    const double t2 = 4.0 * (eta2 / D6) * dG2 * dC * (ka * dA + ga * dC) *
                      (ka * ka * dA + ga * ga * dC + (dA + dC) * (dA * dC - r.G));
    const double t3 = 4.0 * (eta2 / D2) * (ka * dC / kc2) * r.sum_dg_sq;
    return t1 + t2 + t3;
}

// Dipole-fluctuation momentum diffusion (real mode functions).
inline double diffusion_dipole(const SystemParams& p, const CouplingSums& s) {
    const auto r = detail::response_scalars(p, s);
    const double eta2 = p.eta * p.eta;
    return 2.0 * (eta2 / r.D2) *
           (p.kappa * r.sum_dg_sq +
            r.dG * r.dG * p.delta_c * (p.kappa * p.delta_a + p.gamma * p.delta_c) / r.D2);
}

// Spontaneous-recoil momentum diffusion, 2 k_A^2 u2bar gamma <sigma^dag sigma>.
inline double diffusion_recoil(const SystemParams& p, double excitation) {
    const double ka2 = p.k_atom_ratio * p.k_atom_ratio;
    return 2.0 * ka2 * p.u2bar * p.gamma * excitation;
}

namespace detail {

// Allocation-free coefficient bundle for scan/average/simulation hot paths.
struct PointCoefficients {
    double f_p = 0.0;
    double beta = 0.0;
    double d_dip = 0.0;
    double d_rec = 0.0;
    double excitation = 0.0;

    double d_total() const { return d_dip + d_rec; }
};

inline PointCoefficients point_coefficients(const SystemParams& p, const CouplingSums& s) {
    PointCoefficients c;
    c.excitation = excitation_formula(p, s);
    c.f_p = mean_force(p, s);
    c.beta = friction(p, s);
    c.d_dip = diffusion_dipole(p, s);
    c.d_rec = diffusion_recoil(p, c.excitation);
    return c;
}

inline PointCoefficients point_coefficients(const SystemParams& p, const ModeSet& ms, double z) {
    return point_coefficients(p, coupling_sums(ms, z));
}

} // namespace detail

// Full coefficient record at one position, per-mode photon numbers included.
inline MotionCoefficients motion_coefficients(const SystemParams& p, const ModeSet& ms, double z) {
    const CouplingSums sums = coupling_sums(ms, z);
    const auto c = detail::point_coefficients(p, sums);
    MotionCoefficients out;
    out.f_p = c.f_p;
    out.beta = c.beta;
    out.d_dip = c.d_dip;
    out.d_rec = c.d_rec;
    out.excitation = c.excitation;
    out.photons = photon_numbers(steady_state(p, ms, z));
    return out;
}

} // namespace cavcool
