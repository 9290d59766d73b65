// Degenerate transverse-mode family of a confocal cavity.
//
// Modes carry even transverse indices (2n, 2m) with 0 <= n,m <= N, all sharing
// the resonance frequency. Along the axis the mode (n,m) contributes
//
//     g_{nm}(z) = g * sqrt(w_n w_m) * E(z) * cos(k z - (2n+2m+1) atan(z/z0)),
//
// where w_n = (2n-1)!!/(2n)!! is the squared on-axis amplitude of the even
// Hermite-Gaussian of order 2n, E(z) = (1+(z/z0)^2)^(-1/2) is the axial
// envelope, and the atan term is the index-dependent Gouy phase that dephases
// the family away from the waist. At z = 0 the family collapses onto one
// effective mode with coupling g_eff = g (2N+1)!!/(2N)!!.
#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace cavcool {

struct ModeSet {
    int n_index_max = 0;               // N: indices run over 0..N in each direction
    double g_single = 3.0;             // peak coupling of the fundamental mode
    double gouy_scale = 2.0 * M_PI * 1e4; // k*z0, axial scale of the Gouy phase
    bool envelope_on = true;           // apply the axial amplitude envelope

    int mode_count() const { return (n_index_max + 1) * (n_index_max + 1); }
};

inline void check_mode_set(const ModeSet& ms) {
    if (ms.n_index_max < 0) throw std::invalid_argument("n_index_max must be >= 0");
    if (!(ms.gouy_scale > 0.0)) throw std::invalid_argument("gouy_scale must be positive");
    if (!(ms.g_single >= 0.0)) throw std::invalid_argument("g_single must be non-negative");
}

// Aggregate sums over the mode family feeding the closed-form coefficients:
//   G        = sum |g_i|^2
//   Gamma    = sum g_i d/dz g_i^*          (real mode functions: real)
//   dG_dz    = d/dz G = Gamma + Gamma^*
//   sum_dg_sq= sum (d/dz g_i)^2
struct CouplingSums {
    double G = 0.0;
    std::complex<double> Gamma{0.0, 0.0};
    double dG_dz = 0.0;
    double sum_dg_sq = 0.0;
};

// w_n = (2n-1)!!/(2n)!!, evaluated as a running product of ratios (2j-1)/(2j)
// so large n cannot overflow.
inline double onaxis_weight(int n) {
    if (n < 0) throw std::invalid_argument("mode index must be >= 0");
    double w = 1.0;
    for (int j = 1; j <= n; ++j) w *= (2.0 * j - 1.0) / (2.0 * j);
    return w;
}

// (2N+1)!!/(2N)!! as a running product; equals sum_{n<=N} w_n.
inline double double_factorial_ratio(int N) {
    if (N < 0) throw std::invalid_argument("mode index must be >= 0");
    double r = 1.0;
    for (int j = 1; j <= N; ++j) r *= (2.0 * j + 1.0) / (2.0 * j);
    return r;
}

// Effective single-mode coupling of the degenerate family at the waist.
inline double effective_coupling(int N, double g) {
    if (g < 0.0) throw std::invalid_argument("coupling must be non-negative");
    return g * double_factorial_ratio(N);
}

namespace detail {

struct AxialFactors {
    double envelope;     // E(z)
    double envelope_d;   // dE/dz
    double gouy;         // atan(z/z0)
    double gouy_d;       // d/dz atan(z/z0)
};

inline AxialFactors axial_factors(const ModeSet& ms, double z) {
    const double z0 = ms.gouy_scale;
    const double u = z / z0;
    AxialFactors f;
    f.gouy = std::atan(u);
    f.gouy_d = z0 / (z0 * z0 + z * z);
    if (ms.envelope_on) {
        const double s = 1.0 / std::sqrt(1.0 + u * u);
        f.envelope = s;
        f.envelope_d = -(z / (z0 * z0)) * s * s * s;
    } else {
        f.envelope = 1.0;
        f.envelope_d = 0.0;
    }
    return f;
}

} // namespace detail

// Coupling of mode (2n, 2m) at axial position z (k = 1).
inline double mode_amplitude(const ModeSet& ms, int n, int m, double z) {
    if (n < 0 || m < 0 || n > ms.n_index_max || m > ms.n_index_max)
        throw std::invalid_argument("mode indices out of range");
    const auto f = detail::axial_factors(ms, z);
    const double amp = ms.g_single * std::sqrt(onaxis_weight(n) * onaxis_weight(m));
    const double q = 2.0 * n + 2.0 * m + 1.0;
    return amp * f.envelope * std::cos(z - q * f.gouy);
}

// Exact analytic derivative of mode_amplitude, Gouy and envelope terms included.
inline double mode_gradient(const ModeSet& ms, int n, int m, double z) {
    if (n < 0 || m < 0 || n > ms.n_index_max || m > ms.n_index_max)
        throw std::invalid_argument("mode indices out of range");
    const auto f = detail::axial_factors(ms, z);
    const double amp = ms.g_single * std::sqrt(onaxis_weight(n) * onaxis_weight(m));
    const double q = 2.0 * n + 2.0 * m + 1.0;
    const double phase = z - q * f.gouy;
    const double dphase = 1.0 - q * f.gouy_d;
    return amp * (f.envelope_d * std::cos(phase) - f.envelope * std::sin(phase) * dphase);
}

// All four aggregate sums over the (N+1)^2 modes in one pass.
inline CouplingSums coupling_sums(const ModeSet& ms, double z) {
    check_mode_set(ms);
    const auto f = detail::axial_factors(ms, z);
    const int N = ms.n_index_max;

    // running per-direction weights, w_n = w_{n-1} (2n-1)/(2n)
    std::vector<double> w(static_cast<std::size_t>(N) + 1);
    w[0] = 1.0;
    for (int n = 1; n <= N; ++n) w[n] = w[n - 1] * (2.0 * n - 1.0) / (2.0 * n);

    CouplingSums s;
    for (int n = 0; n <= N; ++n) {
        for (int m = 0; m <= N; ++m) {
            const double amp = ms.g_single * std::sqrt(w[n] * w[m]);
            const double q = 2.0 * n + 2.0 * m + 1.0;
            const double phase = z - q * f.gouy;
            const double dphase = 1.0 - q * f.gouy_d;
            const double c = std::cos(phase), sn = std::sin(phase);
            const double gi = amp * f.envelope * c;
            const double dgi = amp * (f.envelope_d * c - f.envelope * sn * dphase);
            s.G += gi * gi;
            s.Gamma += gi * dgi;   // real mode functions
            s.sum_dg_sq += dgi * dgi;
        }
    }
    s.dG_dz = 2.0 * s.Gamma.real();
    return s;
}

// Local antinode coupling after dephasing: sqrt of the maximum of G over one
// wavelength past z, from a 256-point grid plus one Newton refinement of the
// bracketed stationary point.
inline double local_coupling(const ModeSet& ms, double z, int grid_points = 256) {
    check_mode_set(ms);
    if (grid_points < 256) grid_points = 256;
    const double period = 2.0 * M_PI;
    const double h = period / grid_points;
    double best_z = z, best_g = coupling_sums(ms, z).G;
    for (int i = 1; i < grid_points; ++i) {
        const double zi = z + i * h;
        const double Gi = coupling_sums(ms, zi).G;
        if (Gi > best_g) {
            best_g = Gi;
            best_z = zi;
        }
    }
    // one Newton step on dG/dz = 0, second derivative by central difference
    const double eps = h / 8.0;
    const double d0 = coupling_sums(ms, best_z).dG_dz;
    const double dp = coupling_sums(ms, best_z + eps).dG_dz;
    const double dm = coupling_sums(ms, best_z - eps).dG_dz;
    const double curv = (dp - dm) / (2.0 * eps);
    if (std::abs(curv) > 0.0) {
        const double zn = best_z - d0 / curv;
        if (std::abs(zn - best_z) < h) {
            const double Gn = coupling_sums(ms, zn).G;
            if (Gn > best_g) best_g = Gn;
        }
    }
    return std::sqrt(best_g);
}

// Dephasing-insensitive local coupling: the waist effective coupling scaled by
// the axial envelope (root-sum-square of the per-mode envelopes).
inline double envelope_coupling(const ModeSet& ms, double z) {
    check_mode_set(ms);
    const auto f = detail::axial_factors(ms, z);
    return effective_coupling(ms.n_index_max, ms.g_single) * f.envelope;
}

// The unique detuning pair with Delta_A * Delta_C = g_loc^2 and
// Delta_A - Delta_C = delta_diff (< 0), both negative. The product condition
// puts the lower dressed state on resonance with the pump at an antinode; the
// difference is fixed because only the pump frequency is scanned.
struct DetuningPair {
    double delta_a = 0.0;
    double delta_c = 0.0;
};

inline DetuningPair resonant_detunings(double g_loc, double delta_diff) {
    if (g_loc < 0.0) throw std::invalid_argument("coupling must be non-negative");
    if (!(delta_diff < 0.0))
        throw std::invalid_argument("delta_diff must be negative (red-detuned pump scan)");
    const double d = std::abs(delta_diff);
    // Delta_C solves x^2 + d x - g^2 = 0; written to avoid cancellation at small g.
    const double delta_c = -2.0 * g_loc * g_loc / (d + std::sqrt(d * d + 4.0 * g_loc * g_loc));
    return DetuningPair{delta_c + delta_diff, delta_c};
}

} // namespace cavcool
