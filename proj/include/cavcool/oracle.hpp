// Independent verification engine: a truncated-Fock open-system solver that
// recomputes force, friction, and dipole diffusion from first principles,
// without the closed-form linear response.
//
// The generator keeps the full two-level atom (no linearization of the
// inversion), so agreement with the closed forms is expected only up to
// O(eta^2) corrections. Friction comes from the velocity expansion of the
// steady state (rho = rho0 + v rho1), diffusion from the zero-frequency force
// noise via the quantum regression theorem. All solves are dense; the trace
// constraint is imposed by bordering the generator instead of pseudo-inverses.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>
#include <vector>

#include "cavcool/linres.hpp"
#include "cavcool/params.hpp"

namespace cavcool {

struct HilbertConfig {
    int n_modes = 1; // 1 or 2
    int n_max = 3;   // Fock cutoff per mode
    enum class Pump { atom, cavity };
    Pump pump_target = Pump::atom;

    int dim() const {
        int d = 2;
        for (int i = 0; i < n_modes; ++i) d *= n_max + 1;
        return d;
    }
};

inline void check_hilbert(const HilbertConfig& c) {
    if (c.n_modes != 1 && c.n_modes != 2)
        throw std::invalid_argument("oracle supports 1 or 2 modes");
    if (c.n_max < 1) throw std::invalid_argument("n_max must be >= 1");
    if (c.dim() > 64)
        throw std::invalid_argument("Hilbert dimension exceeds 64; the oracle is desk-scale");
}

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

namespace detail {

inline Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

// column-major vectorization, so vec(A X B) = (B^T kron A) vec(X)
inline Vector vec(const Matrix& x) {
    return Eigen::Map<const Vector>(x.data(), x.size());
}

inline Matrix unvec(const Vector& v, Eigen::Index n) {
    return Eigen::Map<const Matrix>(v.data(), n, n);
}

} // namespace detail

struct OracleSystem {
    HilbertConfig config;
    SystemParams params;
    std::vector<double> couplings; // g_i(z)
    std::vector<double> gradients; // dz g_i(z)
    Matrix sigma;
    std::vector<Matrix> mode_ops;
    Matrix hamiltonian;
    Matrix force;       // i sum_i dg_i (sigma^dag a_i - a_i^dag sigma)
    Matrix liouvillian; // dim^2 x dim^2 generator
};

// Generator -i[H,.] + dissipators with collapse rates 2*gamma (atom) and
// 2*kappa (each mode); the pump drives sigma or the first mode.
inline OracleSystem build_liouvillian(const SystemParams& p, const std::vector<double>& g,
                                      const std::vector<double>& dg, const HilbertConfig& config) {
    check_hilbert(config);
    if (static_cast<int>(g.size()) != config.n_modes || dg.size() != g.size())
        throw std::invalid_argument("couplings/gradients must match n_modes");

    const int nf = config.n_max + 1;
    const std::complex<double> I(0.0, 1.0);

    Matrix sig2 = Matrix::Zero(2, 2);
    sig2(0, 1) = 1.0; // |g><e|
    Matrix af = Matrix::Zero(nf, nf);
    for (int n = 1; n < nf; ++n) af(n - 1, n) = std::sqrt(static_cast<double>(n));
    const Matrix ia = Matrix::Identity(2, 2);
    const Matrix iff = Matrix::Identity(nf, nf);

    OracleSystem sys;
    sys.config = config;
    sys.params = p;
    sys.couplings = g;
    sys.gradients = dg;
    if (config.n_modes == 1) {
        sys.sigma = detail::kron(sig2, iff);
        sys.mode_ops = {detail::kron(ia, af)};
    } else {
        sys.sigma = detail::kron(detail::kron(sig2, iff), iff);
        sys.mode_ops = {detail::kron(detail::kron(ia, af), iff),
                        detail::kron(detail::kron(ia, iff), af)};
    }

    const int d = config.dim();
    Matrix H = -p.delta_a * (sys.sigma.adjoint() * sys.sigma);
    for (const auto& a : sys.mode_ops) H -= p.delta_c * (a.adjoint() * a);
    if (config.pump_target == HilbertConfig::Pump::atom) {
        H -= I * p.eta * (sys.sigma - Matrix(sys.sigma.adjoint()));
    } else {
        H -= I * p.eta * (sys.mode_ops[0] - Matrix(sys.mode_ops[0].adjoint()));
    }
    for (int i = 0; i < config.n_modes; ++i)
        H -= I * g[i] * (sys.sigma.adjoint() * sys.mode_ops[i] -
                         sys.mode_ops[i].adjoint() * sys.sigma);
    sys.hamiltonian = H;

    Matrix F = Matrix::Zero(d, d);
    for (int i = 0; i < config.n_modes; ++i)
        F += I * dg[i] * (sys.sigma.adjoint() * sys.mode_ops[i] -
                          sys.mode_ops[i].adjoint() * sys.sigma);
    sys.force = F;

    const Matrix id = Matrix::Identity(d, d);
    Matrix L = -I * (detail::kron(id, H) - detail::kron(H.transpose(), id));
    std::vector<Matrix> collapse;
    collapse.push_back(std::sqrt(2.0 * p.gamma) * sys.sigma);
    for (const auto& a : sys.mode_ops) collapse.push_back(std::sqrt(2.0 * p.kappa) * a);
    for (const auto& c : collapse) {
        const Matrix cdc = c.adjoint() * c;
        L += detail::kron(c.conjugate(), c);
        L -= 0.5 * detail::kron(id, cdc);
        L -= 0.5 * detail::kron(cdc.transpose(), id);
    }
    sys.liouvillian = std::move(L);
    return sys;
}

// max |vec(I)^T L| — the trace functional must annihilate the generator
inline double trace_defect(const OracleSystem& sys) {
    const int d = sys.config.dim();
    const Vector t = detail::vec(Matrix::Identity(d, d));
    return (t.transpose() * sys.liouvillian).cwiseAbs().maxCoeff();
}

// Factors the trace-bordered generator once and serves the steady state and
// all traceless solves from the same decomposition.
class LiouvillianSolver {
  public:
    explicit LiouvillianSolver(const OracleSystem& sys) : sys_(&sys) {
        const int d = sys.config.dim();
        const Eigen::Index n2 = static_cast<Eigen::Index>(d) * d;
        Matrix bordered = Matrix::Zero(n2 + 1, n2 + 1);
        bordered.topLeftCorner(n2, n2) = sys.liouvillian;
        const Vector t = detail::vec(Matrix::Identity(d, d));
        bordered.block(0, n2, n2, 1) = t;
        bordered.block(n2, 0, 1, n2) = t.transpose();
        lu_.compute(bordered);
        if (lu_.rcond() < 1e-14)
            throw std::runtime_error("bordered Liouvillian is ill-conditioned (rcond = " +
                                     std::to_string(lu_.rcond()) + "); kernel may be degenerate");
        solve_steady();
    }

    const Matrix& steady() const { return rho0_; }

    // Solve L X = B with tr X = 0; B must be traceless (range of L).
    Matrix solve_traceless(const Matrix& rhs) const {
        const int d = sys_->config.dim();
        const Eigen::Index n2 = static_cast<Eigen::Index>(d) * d;
        Vector b(n2 + 1);
        b.head(n2) = detail::vec(rhs);
        b(n2) = 0.0;
        const Vector x = lu_.solve(b);
        return detail::unvec(x.head(n2), d);
    }

    double expectation(const Matrix& op, const Matrix& rho) const {
        return (op * rho).trace().real();
    }

    double excitation() const {
        return expectation(Matrix(sys_->sigma.adjoint() * sys_->sigma), rho0_);
    }

    double photon_number(int mode) const {
        const Matrix& a = sys_->mode_ops.at(mode);
        return expectation(Matrix(a.adjoint() * a), rho0_);
    }

    double mean_force() const { return expectation(sys_->force, rho0_); }

    // beta = Tr(F rho1) with L rho1 = dz(rho0) and L dz(rho0) = -dz(L) rho0.
    double friction() const {
        const std::complex<double> I(0.0, 1.0);
        // dz(L) rho = -i [dz(H), rho] with dz(H) = -F
        const Matrix dL_rho0 = I * (sys_->force * rho0_ - rho0_ * sys_->force);
        const Matrix drho0 = solve_traceless(-dL_rho0);
        const Matrix rho1 = solve_traceless(drho0);
        return expectation(sys_->force, rho1);
    }

    // Zero-frequency force-noise spectral density by the regression theorem:
    // D = 2 Re Tr[F (-L)^{-1} (F rho0 - <F> rho0)], solved on the traceless
    // subspace where -L is invertible.
    double diffusion() const {
        const double f_mean = mean_force();
        const Matrix operand = sys_->force * rho0_ - f_mean * rho0_;
        const Matrix y = solve_traceless(-operand);
        return 2.0 * (sys_->force * y).trace().real();
    }

  private:
    void solve_steady() {
        const int d = sys_->config.dim();
        const Eigen::Index n2 = static_cast<Eigen::Index>(d) * d;
        Vector b = Vector::Zero(n2 + 1);
        b(n2) = 1.0;
        const Vector x = lu_.solve(b);
        Matrix rho = detail::unvec(x.head(n2), d);
        rho = 0.5 * (rho + Matrix(rho.adjoint())); // hermitize
        rho /= rho.trace().real();
        const double residual = (sys_->liouvillian * detail::vec(rho)).cwiseAbs().maxCoeff();
        if (residual > 1e-10)
            throw std::runtime_error("steady-state residual " + std::to_string(residual) +
                                     " exceeds 1e-10");
        check_cutoff(rho);
        rho0_ = std::move(rho);
    }

    // population of any basis state with a mode at the Fock ceiling
    void check_cutoff(const Matrix& rho) const {
        const int nf = sys_->config.n_max + 1;
        double top = 0.0;
        for (int s = 0; s < sys_->config.dim(); ++s) {
            int rem = s % (sys_->config.n_modes == 1 ? nf : nf * nf);
            bool at_top = false;
            if (sys_->config.n_modes == 1) {
                at_top = rem == nf - 1;
            } else {
                at_top = (rem / nf == nf - 1) || (rem % nf == nf - 1);
            }
            if (at_top) top += rho(s, s).real();
        }
        if (top > 1e-6)
            throw std::runtime_error("Fock cutoff too small: top-level population " +
                                     std::to_string(top));
    }

    const OracleSystem* sys_;
    Eigen::PartialPivLU<Matrix> lu_;
    Matrix rho0_;
};

// one-shot wrappers
inline Matrix steady_density(const OracleSystem& sys) { return LiouvillianSolver(sys).steady(); }

inline double oracle_force(const OracleSystem& sys, const Matrix& rho) {
    return (sys.force * rho).trace().real();
}

inline double oracle_friction(const OracleSystem& sys) { return LiouvillianSolver(sys).friction(); }

inline double oracle_diffusion(const OracleSystem& sys) {
    return LiouvillianSolver(sys).diffusion();
}

// ---------------------------------------------------------------------------
// swap symmetry: pumping the cavity instead of the atom reproduces the
// atom-pumped closed forms with (Delta_A, gamma) <-> (Delta_C, kappa).
// ---------------------------------------------------------------------------

struct SwapReport {
    double beta_oracle_cavity = 0.0;  // cavity-pumped oracle at the given params
    double beta_closed_swapped = 0.0; // closed form at exchanged parameters
    double rel_dev = 0.0;
    double beta_oracle_atom = 0.0;    // atom-pumped oracle at the same (unswapped) params
};

inline SwapReport swap_symmetry_check(const SystemParams& p, double g, double dg, int n_max = 3) {
    HilbertConfig cav;
    cav.n_modes = 1;
    cav.n_max = n_max;
    cav.pump_target = HilbertConfig::Pump::cavity;
    const auto sys_cav = build_liouvillian(p, {g}, {dg}, cav);

    HilbertConfig atom = cav;
    atom.pump_target = HilbertConfig::Pump::atom;
    const auto sys_atom = build_liouvillian(p, {g}, {dg}, atom);

    SystemParams swapped = p;
    std::swap(swapped.gamma, swapped.kappa);
    std::swap(swapped.delta_a, swapped.delta_c);
    CouplingSums sums;
    sums.G = g * g;
    sums.Gamma = g * dg;
    sums.dG_dz = 2.0 * g * dg;
    sums.sum_dg_sq = dg * dg;

    SwapReport rep;
    rep.beta_oracle_cavity = oracle_friction(sys_cav);
    rep.beta_closed_swapped = friction(swapped, sums);
    rep.beta_oracle_atom = oracle_friction(sys_atom);
    const double scale = std::max(std::abs(rep.beta_oracle_cavity), 1e-300);
    rep.rel_dev = std::abs(rep.beta_oracle_cavity - rep.beta_closed_swapped) / scale;
    return rep;
}

} // namespace cavcool
