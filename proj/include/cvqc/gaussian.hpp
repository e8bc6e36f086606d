#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "cvqc/convention.hpp"
#include "cvqc/gates.hpp"

namespace cvqc {

/**
 * @brief n-mode Gaussian state: mean vector and covariance matrix in
 * (q1,p1,...,qn,pn) ordering, vacuum variance 1/2.
 *
 * The constructor asserts symmetry of the covariance and the uncertainty
 * condition cov + (i/2) Omega >= 0 (eigenvalue floor -1e-10).
 */
struct GaussianState {
    GaussianState(Eigen::VectorXd mean_in, Eigen::MatrixXd cov_in);

    int n_modes() const { return static_cast<int>(mean.size()) / 2; }

    /// 2x2 covariance block of a single mode.
    Eigen::Matrix2d mode_cov(int mode) const { return cov.block<2, 2>(2 * mode, 2 * mode); }
    Eigen::Vector2d mode_mean(int mode) const { return mean.segment<2>(2 * mode); }

    Eigen::VectorXd mean;
    Eigen::MatrixXd cov;
};

GaussianState vacuum(int n_modes);
GaussianState coherent(std::complex<double> alpha);
/// Single-mode squeezed vacuum S(r)|0>: cov diag(e^{-2r}/2, e^{2r}/2).
GaussianState squeezed_vacuum(double r);
/// Single-mode thermal state with mean photon number n_bar.
GaussianState thermal(double n_bar);
/// Tensor product (block concatenation) of two Gaussian states.
GaussianState tensor(const GaussianState& a, const GaussianState& b);
/// Two-mode squeezed vacuum with parameter r (EPR resource).
GaussianState two_mode_squeezed(double r);

/// Affine phase-space action (S, d) of a Gaussian gate on n modes:
/// mean -> S mean + d, cov -> S cov S^T. Throws on U3.
struct SymplecticAction {
    Eigen::MatrixXd s;
    Eigen::VectorXd d;
};
SymplecticAction gate_action(const GateOp& gate, int n_modes);

GaussianState apply_gate(const GaussianState& state, const GateOp& gate);
GaussianState apply_program(const GaussianState& state, const GateWord& program);

/// Pure-loss beamsplitter channel with amplitude transmission t on one mode:
/// mean -> t mean, cov block -> t^2 cov + (1 - t^2) (1/2 + excess) I.
GaussianState apply_loss(const GaussianState& state, double t, int mode = 0,
                         double excess_noise = 0.0);

/// Ensemble-average description of a random displacement with per-quadrature
/// variance v_enc on one mode: cov += v_enc I, mean untouched.
GaussianState encrypt_ensemble(const GaussianState& state, double v_enc_quadrature,
                               int mode = 0);

/// Tr rho^2 = 1 / (2^n sqrt(det cov)).
double purity(const GaussianState& state);

/// Uhlmann fidelity F = Tr sqrt(sqrt(rho0) rho1 sqrt(rho0)) between two
/// single-mode Gaussian states (closed form). For pure states F = |<a|b>|,
/// e.g. coherent pairs give exp(-|alpha-beta|^2 / 2).
double gaussian_fidelity(const GaussianState& s1, const GaussianState& s2);

/// W(q,p) of a single-mode Gaussian state.
double wigner_gaussian_point(const GaussianState& state, double q, double p);

/// Column-major grid evaluation: result(i,j) = W(q[i], p[j]).
Eigen::MatrixXd wigner_gaussian(const GaussianState& state,
                                const Eigen::VectorXd& q_grid,
                                const Eigen::VectorXd& p_grid);

/// ChecksS Omega S^T = Omega to `tol`.
bool is_symplectic(const Eigen::MatrixXd& s, double tol = 1e-12);

// --- Gaussian measurements (used by the protocol layer) ---

/// Homodyne measurement of one quadrature (0 = q, 1 = p) on `mode`. Samples
/// the outcome and returns it with the conditional state on the remaining
/// modes (state must have >= 2 modes for a conditional to exist; for a
/// single-mode state the conditional is empty and signalled by n_modes 0).
struct HomodyneResult {
    double outcome;
    Eigen::VectorXd cond_mean; // remaining modes
    Eigen::MatrixXd cond_cov;
};
HomodyneResult homodyne_gaussian(const GaussianState& state, int mode, int quadrature,
                                 double sample_u01_normal);

/// Heterodyne (double-quadrature, vacuum-penalty) measurement on `mode`.
struct HeterodyneResult {
    Eigen::Vector2d outcome;
    Eigen::VectorXd cond_mean;
    Eigen::MatrixXd cond_cov;
};
HeterodyneResult heterodyne_gaussian(const GaussianState& state, int mode,
                                     const Eigen::Vector2d& std_normal_pair);

} // namespace cvqc
