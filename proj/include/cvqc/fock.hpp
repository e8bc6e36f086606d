#pragma once

#include <complex>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "cvqc/gates.hpp"
#include "cvqc/gaussian.hpp"
#include "cvqc/rng.hpp"

namespace cvqc::fock {

using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

/**
 * @brief Density matrix on a truncated number basis (dim levels per mode,
 * 1 or 2 modes). Trace deficit ("leak") accumulates as operations push
 * population past the truncation edge and is tracked explicitly.
 */
struct FockDensity {
    int dim = 0;
    int n_modes = 1;
    CMat rho;

    double trace() const { return rho.trace().real(); }
    double leak() const { return 1.0 - trace(); }

    /// Hermiticity/trace/positivity sanity check (throws on violation).
    void validate(double eig_floor = -1e-8) const;
};

/// Pure state on the truncated basis; the cheap path for two-mode circuits.
/// Mode 0 is the major index: amp(n0 * dim + n1).
struct FockVector {
    int dim = 0;
    int n_modes = 1;
    CVec amp;

    double norm2() const { return amp.squaredNorm(); }
    double leak() const { return 1.0 - norm2(); }
    FockDensity to_density() const;
};

// --- state preparation ---

FockDensity vacuum_density(int dim, int n_modes = 1);
FockVector vacuum_vector(int dim, int n_modes = 1);
/// Coherent state |alpha> with exact closed-form amplitudes.
FockVector coherent_vector(std::complex<double> alpha, int dim);
FockDensity thermal_density(double n_bar, int dim);
/// Finitely squeezed momentum eigenstate: p-variance e^{-2 r_anc}/2.
FockDensity momentum_eigenstate_approx(double r_anc, int dim);
FockVector momentum_eigenstate_vector(double r_anc, int dim);
/// Fock realization of a single-mode Gaussian state (Williamson + gates).
FockDensity from_gaussian(const GaussianState& gs, int dim);

// --- operators ---

/// Truncated ladder/quadrature matrices: a, q = (a+a^+)/sqrt(2), p.
CMat ladder(int dim);
CMat q_matrix(int dim);
CMat p_matrix(int dim);

/// Parameter budget for which a `dim`-level simulation stays faithful
/// (leak under ~1e-4): max displacement modulus, squeezing, cubic strength.
struct TruncationBudget {
    double max_alpha;
    double max_r;
    double max_t3;
};
TruncationBudget budget(int dim);

/**
 * @brief Gate matrix on the truncated space with a label.
 *
 * Built by exponentiating the Hermitian generator on a padded space
 * (pad = 2 dim) and projecting, so bulk matrix elements match the infinite-
 * dimensional gate and trace loss is physical truncation leak. Fourier and
 * rotation gates are exact diagonals. `within_budget` is warning-level:
 * out-of-budget parameters still return a matrix.
 */
struct OperatorMatrix {
    CMat u;
    GateOp op;
    int dim = 0;
    bool within_budget = true;
    std::string label;
};

/// Single-mode gates, plus CZ as a full two-mode matrix (dim^2 x dim^2).
OperatorMatrix build_gate(const GateOp& gate, int dim);

FockDensity apply(const OperatorMatrix& op, const FockDensity& state);
FockVector apply(const OperatorMatrix& op, const FockVector& state);
/// Applies a single-mode operator to one mode of a (1- or 2-mode) vector.
FockVector apply_on_mode(const OperatorMatrix& op, const FockVector& state, int mode);
/// CZ on a two-mode vector without materializing the dim^2 matrix.
FockVector apply_cz(const FockVector& state);

FockDensity tensor(const FockDensity& a, const FockDensity& b);
FockVector tensor(const FockVector& a, const FockVector& b);
FockDensity partial_trace(const FockDensity& state, int keep_mode);

/// Exact pure-loss channel (Kraus sum) on a single-mode density matrix.
FockDensity apply_loss_fock(const FockDensity& state, double t);

// --- measurement ---

struct Marginal {
    Eigen::VectorXd grid;
    Eigen::VectorXd pdf; // density at grid points
    double mass;         // integral over the grid
};

/// p-quadrature marginal on `mode`, computed in the momentum representation.
Marginal p_marginal(const FockDensity& state, int mode, const Eigen::VectorXd& grid);
Marginal p_marginal(const FockVector& state, int mode, const Eigen::VectorXd& grid);

Eigen::VectorXd default_quadrature_grid();

/// Inverse-CDF draw from a gridded marginal (exact at grid resolution).
double sample_marginal(const Marginal& m, Rng& rng);

struct HomodyneOutcome {
    double outcome = 0.0;
    /// Conditional state of the remaining mode; absent for single-mode input.
    std::optional<FockDensity> conditional;
};
struct HomodyneOutcomeVec {
    double outcome = 0.0;
    std::optional<FockVector> conditional;
};

/// Single-shot homodyne of p on `mode`: samples the marginal, projects,
/// renormalizes. Throws if the marginal mass on the grid is below 0.999.
HomodyneOutcome homodyne_p(const FockDensity& state, int mode, Rng& rng,
                           const Eigen::VectorXd& grid = default_quadrature_grid());
HomodyneOutcomeVec homodyne_p(const FockVector& state, int mode, Rng& rng,
                              const Eigen::VectorXd& grid = default_quadrature_grid());

// --- figures of merit ---

/// Uhlmann fidelity Tr sqrt(sqrt(rho0) rho1 sqrt(rho0)).
double fock_fidelity(const FockDensity& rho0, const FockDensity& rho1);
double fock_fidelity(const FockVector& a, const FockVector& b);

/// First and symmetrized second moments of one mode: (mean_q, mean_p) and
/// 2x2 covariance, for cross-checks against the Gaussian engine.
struct ModeMoments {
    Eigen::Vector2d mean;
    Eigen::Matrix2d cov;
};
ModeMoments moments(const FockDensity& state, int mode = 0);
ModeMoments moments(const FockVector& state, int mode = 0);
double mean_photon_number(const FockDensity& state, int mode = 0);

/// Wigner function on a rectangular grid; result(i,j) = W(q(i), p(j)).
/// Throws if the mass on the grid deviates from the trace by more than 1e-3.
Eigen::MatrixXd wigner_fock(const FockDensity& state, const Eigen::VectorXd& q_grid,
                            const Eigen::VectorXd& p_grid);

/// Hermite functions psi_n(x), n < dim, as a dim x |grid| matrix.
Eigen::MatrixXd hermite_functions(const Eigen::VectorXd& grid, int dim);

} // namespace cvqc::fock
