#include "cvqc/gaussian.hpp"

#include <cmath>
#include <stdexcept>

namespace cvqc {

namespace {

void check_mode(int mode, int n_modes) {
    if (mode < 0 || mode >= n_modes) throw std::out_of_range("gate targets invalid mode index");
}

} // namespace

GaussianState::GaussianState(Eigen::VectorXd mean_in, Eigen::MatrixXd cov_in)
    : mean(std::move(mean_in)), cov(std::move(cov_in)) {
    const auto n = mean.size();
    if (n < 2 || n % 2 != 0 || cov.rows() != n || cov.cols() != n)
        throw std::invalid_argument("GaussianState: mean/cov dimensions inconsistent");

    const double scale = std::max(1.0, cov.cwiseAbs().maxCoeff());
    if ((cov - cov.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
        throw std::invalid_argument("GaussianState: covariance not symmetric");
    cov = 0.5 * (cov + cov.transpose().eval());

    // Uncertainty condition: cov + (i/2) Omega >= 0.
    Eigen::MatrixXcd m = cov.cast<std::complex<double>>();
    m += std::complex<double>(0.0, 0.5) * symplectic_form(static_cast<int>(n) / 2).cast<std::complex<double>>();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -1e-10)
        throw std::invalid_argument("GaussianState: covariance violates the uncertainty relation");
}

GaussianState vacuum(int n_modes) {
    if (n_modes < 1) throw std::invalid_argument("vacuum: n_modes must be >= 1");
    return {Eigen::VectorXd::Zero(2 * n_modes),
            kVacuumVariance * Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes)};
}

GaussianState coherent(std::complex<double> alpha) {
    GaussianState s = vacuum(1);
    s.mean << std::sqrt(2.0) * alpha.real(), std::sqrt(2.0) * alpha.imag();
    return s;
}

GaussianState squeezed_vacuum(double r) {
    Eigen::MatrixXd cov(2, 2);
    cov << kVacuumVariance * std::exp(-2.0 * r), 0.0, 0.0, kVacuumVariance * std::exp(2.0 * r);
    return {Eigen::VectorXd::Zero(2), cov};
}

GaussianState thermal(double n_bar) {
    if (n_bar < 0.0) throw std::invalid_argument("thermal: n_bar must be >= 0");
    return {Eigen::VectorXd::Zero(2),
            (2.0 * n_bar + 1.0) * kVacuumVariance * Eigen::MatrixXd::Identity(2, 2)};
}

GaussianState tensor(const GaussianState& a, const GaussianState& b) {
    const auto na = a.mean.size(), nb = b.mean.size();
    Eigen::VectorXd mean(na + nb);
    mean << a.mean, b.mean;
    Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(na + nb, na + nb);
    cov.topLeftCorner(na, na) = a.cov;
    cov.bottomRightCorner(nb, nb) = b.cov;
    return {std::move(mean), std::move(cov)};
}

GaussianState two_mode_squeezed(double r) {
    const double c = kVacuumVariance * std::cosh(2.0 * r);
    const double s = kVacuumVariance * std::sinh(2.0 * r);
    Eigen::MatrixXd cov(4, 4);
    cov << c, 0, s, 0,
           0, c, 0, -s,
           s, 0, c, 0,
           0, -s, 0, c;
    return {Eigen::VectorXd::Zero(4), cov};
}

SymplecticAction gate_action(const GateOp& gate, int n_modes) {
    SymplecticAction act{Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes),
                         Eigen::VectorXd::Zero(2 * n_modes)};
    if (gate.kind != GateKind::Phase) check_mode(gate.mode, n_modes);
    const int q = 2 * gate.mode, p = 2 * gate.mode + 1;
    switch (gate.kind) {
        case GateKind::X:
            act.d(q) = gate.a;
            break;
        case GateKind::Z:
            act.d(p) = gate.a;
            break;
        case GateKind::Displace:
            act.d(q) = gate.a;
            act.d(p) = gate.b;
            break;
        case GateKind::U2:
            act.s(p, q) = 2.0 * gate.a;
            break;
        case GateKind::Fourier:
            act.s(q, q) = 0.0; act.s(q, p) = -1.0;
            act.s(p, q) = 1.0; act.s(p, p) = 0.0;
            break;
        case GateKind::Squeeze:
            act.s(q, q) = std::exp(-gate.a);
            act.s(p, p) = std::exp(gate.a);
            break;
        case GateKind::Rotate: {
            const double c = std::cos(gate.a), s = std::sin(gate.a);
            act.s(q, q) = c; act.s(q, p) = -s;
            act.s(p, q) = s; act.s(p, p) = c;
            break;
        }
        case GateKind::CZ: {
            check_mode(gate.mode2, n_modes);
            if (gate.mode2 == gate.mode) throw std::invalid_argument("CZ needs distinct modes");
            const int q2 = 2 * gate.mode2, p2 = 2 * gate.mode2 + 1;
            act.s(p, q2) = 1.0;
            act.s(p2, q) = 1.0;
            break;
        }
        case GateKind::Phase:
            break;
        case GateKind::U3:
            throw std::invalid_argument("U3 is not Gaussian; use the Fock backend");
    }
    return act;
}

GaussianState apply_gate(const GaussianState& state, const GateOp& gate) {
    const auto act = gate_action(gate, state.n_modes());
    return {act.s * state.mean + act.d, act.s * state.cov * act.s.transpose()};
}

GaussianState apply_program(const GaussianState& state, const GateWord& program) {
    GaussianState out = state;
    for (const auto& g : program) out = apply_gate(out, g);
    return out;
}

GaussianState apply_loss(const GaussianState& state, double t, int mode, double excess_noise) {
    if (t < 0.0 || t > 1.0) throw std::invalid_argument("apply_loss: t must lie in [0,1]");
    if (excess_noise < 0.0) throw std::invalid_argument("apply_loss: excess noise must be >= 0");
    check_mode(mode, state.n_modes());
    const int n = state.n_modes();
    Eigen::MatrixXd s = Eigen::MatrixXd::Identity(2 * n, 2 * n);
    s(2 * mode, 2 * mode) = t;
    s(2 * mode + 1, 2 * mode + 1) = t;
    Eigen::MatrixXd cov = s * state.cov * s.transpose();
    const double injected = (1.0 - t * t) * (kVacuumVariance + excess_noise);
    cov(2 * mode, 2 * mode) += injected;
    cov(2 * mode + 1, 2 * mode + 1) += injected;
    return {s * state.mean, std::move(cov)};
}

GaussianState encrypt_ensemble(const GaussianState& state, double v_enc_quadrature, int mode) {
    if (v_enc_quadrature < 0.0) throw std::invalid_argument("encrypt_ensemble: variance must be >= 0");
    check_mode(mode, state.n_modes());
    Eigen::MatrixXd cov = state.cov;
    cov(2 * mode, 2 * mode) += v_enc_quadrature;
    cov(2 * mode + 1, 2 * mode + 1) += v_enc_quadrature;
    return {state.mean, std::move(cov)};
}

double purity(const GaussianState& state) {
    const double det = state.cov.determinant();
    if (det <= 0.0) throw std::runtime_error("purity: singular covariance");
    return 1.0 / (std::pow(2.0, state.n_modes()) * std::sqrt(det));
}

double gaussian_fidelity(const GaussianState& s1, const GaussianState& s2) {
    if (s1.n_modes() != 1 || s2.n_modes() != 1)
        throw std::invalid_argument("gaussian_fidelity: single-mode states only");
    const Eigen::Matrix2d v1 = s1.cov, v2 = s2.cov;
    const Eigen::Matrix2d sum = v1 + v2;
    const Eigen::Vector2d du = s2.mean - s1.mean;

    // Single-mode closed form in vacuum-1/2 units:
    //   F^2 = 2 exp(-du^T (V1+V2)^{-1} du / 2) / (sqrt(L + d) - sqrt(d)),
    //   L = 4 det(V1+V2), d = (4 det V1 - 1)(4 det V2 - 1).
    // The difference of square roots is evaluated as L / (sqrt(L+d)+sqrt(d)).
    const double lam = 4.0 * sum.determinant();
    const double del = std::max(0.0, (4.0 * v1.determinant() - 1.0) * (4.0 * v2.determinant() - 1.0));
    const double quad = du.dot(sum.inverse() * du);
    const double f2 = 2.0 * (std::sqrt(lam + del) + std::sqrt(del)) / lam * std::exp(-0.5 * quad);
    return std::sqrt(std::min(1.0, f2));
}

double wigner_gaussian_point(const GaussianState& state, double q, double p) {
    if (state.n_modes() != 1) throw std::invalid_argument("wigner_gaussian: single mode only");
    const Eigen::Matrix2d sigma = state.cov;
    const double det = sigma.determinant();
    if (det <= 0.0) throw std::runtime_error("wigner_gaussian: singular covariance");
    Eigen::Vector2d d(q - state.mean(0), p - state.mean(1));
    const double quad = d.dot(sigma.inverse() * d);
    return std::exp(-0.5 * quad) / (2.0 * M_PI * std::sqrt(det));
}

Eigen::MatrixXd wigner_gaussian(const GaussianState& state, const Eigen::VectorXd& q_grid,
                                const Eigen::VectorXd& p_grid) {
    Eigen::MatrixXd w(q_grid.size(), p_grid.size());
    for (Eigen::Index j = 0; j < p_grid.size(); ++j)
        for (Eigen::Index i = 0; i < q_grid.size(); ++i)
            w(i, j) = wigner_gaussian_point(state, q_grid(i), p_grid(j));
    return w;
}

bool is_symplectic(const Eigen::MatrixXd& s, double tol) {
    const int n = static_cast<int>(s.rows()) / 2;
    const Eigen::MatrixXd omega = symplectic_form(n);
    return (s * omega * s.transpose() - omega).cwiseAbs().maxCoeff() <= tol;
}

namespace {

/// Splits mean/cov into the measured mode (a) and the rest (b).
struct Partition {
    Eigen::Vector2d mean_a;
    Eigen::VectorXd mean_b;
    Eigen::Matrix2d va;
    Eigen::MatrixXd vb;
    Eigen::MatrixXd c; // cross block, rows = rest, cols = measured mode
};

Partition partition(const GaussianState& state, int mode) {
    const int n = state.n_modes();
    check_mode(mode, n);
    std::vector<int> rest;
    for (int k = 0; k < 2 * n; ++k)
        if (k != 2 * mode && k != 2 * mode + 1) rest.push_back(k);
    Partition p;
    p.mean_a = state.mean.segment<2>(2 * mode);
    p.va = state.cov.block<2, 2>(2 * mode, 2 * mode);
    p.mean_b.resize(rest.size());
    p.vb.resize(rest.size(), rest.size());
    p.c.resize(rest.size(), 2);
    for (size_t i = 0; i < rest.size(); ++i) {
        p.mean_b(i) = state.mean(rest[i]);
        p.c(i, 0) = state.cov(rest[i], 2 * mode);
        p.c(i, 1) = state.cov(rest[i], 2 * mode + 1);
        for (size_t j = 0; j < rest.size(); ++j) p.vb(i, j) = state.cov(rest[i], rest[j]);
    }
    return p;
}

} // namespace

HomodyneResult homodyne_gaussian(const GaussianState& state, int mode, int quadrature,
                                 double std_normal) {
    if (quadrature != 0 && quadrature != 1)
        throw std::invalid_argument("homodyne_gaussian: quadrature must be 0 (q) or 1 (p)");
    Partition p = partition(state, mode);
    const double var = p.va(quadrature, quadrature);
    const double m = p.mean_a(quadrature) + std::sqrt(var) * std_normal;
    HomodyneResult res;
    res.outcome = m;
    const Eigen::VectorXd cross = p.c.col(quadrature);
    res.cond_mean = p.mean_b + cross * ((m - p.mean_a(quadrature)) / var);
    res.cond_cov = p.vb - cross * cross.transpose() / var;
    return res;
}

HeterodyneResult heterodyne_gaussian(const GaussianState& state, int mode,
                                     const Eigen::Vector2d& std_normal_pair) {
    Partition p = partition(state, mode);
    const Eigen::Matrix2d meas = p.va + kVacuumVariance * Eigen::Matrix2d::Identity();
    const Eigen::Matrix2d l = meas.llt().matrixL();
    HeterodyneResult res;
    res.outcome = p.mean_a + l * std_normal_pair;
    const Eigen::Matrix2d inv = meas.inverse();
    res.cond_mean = p.mean_b + p.c * inv * (res.outcome - p.mean_a);
    res.cond_cov = p.vb - p.c * inv * p.c.transpose();
    return res;
}

GateKind gate_kind_from_name(const std::string& name) {
    if (name == "X") return GateKind::X;
    if (name == "Z") return GateKind::Z;
    if (name == "D") return GateKind::Displace;
    if (name == "U2") return GateKind::U2;
    if (name == "U3") return GateKind::U3;
    if (name == "F") return GateKind::Fourier;
    if (name == "CZ") return GateKind::CZ;
    if (name == "S") return GateKind::Squeeze;
    if (name == "R") return GateKind::Rotate;
    if (name == "phase") return GateKind::Phase;
    throw std::invalid_argument("unknown gate name: " + name);
}

} // namespace cvqc
