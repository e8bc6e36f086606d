#include "cvqc/fock.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <mutex>
#include <stdexcept>

namespace cvqc::fock {

namespace {

using Cd = std::complex<double>;
constexpr Cd kI{0.0, 1.0};

void require_single_mode(const GateOp& g) {
    if (g.kind == GateKind::CZ) throw std::invalid_argument("expected a single-mode gate");
}

int padded_dim(int dim) { return 2 * dim; }

/// exp(i H) for Hermitian H via eigendecomposition.
CMat exp_i_hermitian(const CMat& h) {
    Eigen::SelfAdjointEigenSolver<CMat> es(h);
    const Eigen::VectorXd& lam = es.eigenvalues();
    CVec phases(lam.size());
    for (Eigen::Index k = 0; k < lam.size(); ++k) phases(k) = std::exp(kI * lam(k));
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

/// Cached eigendecomposition of the padded q matrix (shared by Z, U2, U3, CZ).
struct QEigen {
    Eigen::VectorXd lam;
    CMat vec;
};
const QEigen& q_eigen(int pad) {
    static std::mutex mu;
    static std::map<int, QEigen> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(pad);
    if (it == cache.end()) {
        Eigen::SelfAdjointEigenSolver<CMat> es(q_matrix(pad));
        it = cache.emplace(pad, QEigen{es.eigenvalues(), es.eigenvectors()}).first;
    }
    return it->second;
}

/// exp(i f(q)) on the padded space, projected to dim.
CMat q_function_gate(int dim, const std::function<double(double)>& f) {
    const int pad = padded_dim(dim);
    const QEigen& qe = q_eigen(pad);
    CVec phases(pad);
    for (int k = 0; k < pad; ++k) phases(k) = std::exp(kI * f(qe.lam(k)));
    CMat u = qe.vec * phases.asDiagonal() * qe.vec.adjoint();
    return u.topLeftCorner(dim, dim);
}

} // namespace

void FockDensity::validate(double eig_floor) const {
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-10)
        throw std::runtime_error("FockDensity: not Hermitian");
    const double tr = trace();
    if (tr > 1.0 + 1e-9 || tr < 0.0) throw std::runtime_error("FockDensity: bad trace");
    Eigen::SelfAdjointEigenSolver<CMat> es(rho, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < eig_floor)
        throw std::runtime_error("FockDensity: negative eigenvalue beyond tolerance");
}

FockDensity FockVector::to_density() const {
    return {dim, n_modes, amp * amp.adjoint()};
}

FockDensity vacuum_density(int dim, int n_modes) {
    FockVector v = vacuum_vector(dim, n_modes);
    return v.to_density();
}

FockVector vacuum_vector(int dim, int n_modes) {
    if (dim < 4) throw std::invalid_argument("fock: dim must be >= 4");
    const int total = n_modes == 1 ? dim : dim * dim;
    FockVector v{dim, n_modes, CVec::Zero(total)};
    v.amp(0) = 1.0;
    return v;
}

FockVector coherent_vector(std::complex<double> alpha, int dim) {
    if (dim < 4) throw std::invalid_argument("fock: dim must be >= 4");
    FockVector v{dim, 1, CVec::Zero(dim)};
    // c_n = e^{-|a|^2/2} a^n / sqrt(n!)
    Cd c = std::exp(-0.5 * std::norm(alpha));
    for (int n = 0; n < dim; ++n) {
        v.amp(n) = c;
        c *= alpha / std::sqrt(double(n + 1));
    }
    return v;
}

FockDensity thermal_density(double n_bar, int dim) {
    if (dim < 4) throw std::invalid_argument("fock: dim must be >= 4");
    FockDensity d{dim, 1, CMat::Zero(dim, dim)};
    for (int n = 0; n < dim; ++n)
        d.rho(n, n) = std::pow(n_bar / (1.0 + n_bar), n) / (1.0 + n_bar);
    return d;
}

FockVector momentum_eigenstate_vector(double r_anc, int dim) {
    if (r_anc < 0.0) throw std::invalid_argument("momentum_eigenstate: r_anc must be >= 0");
    // p-squeezed vacuum: S(-r)|0> has p-variance e^{-2r}/2
    FockVector v = vacuum_vector(dim);
    return apply(build_gate(gate_squeeze(-r_anc), dim), v);
}

FockDensity momentum_eigenstate_approx(double r_anc, int dim) {
    return momentum_eigenstate_vector(r_anc, dim).to_density();
}

FockDensity from_gaussian(const GaussianState& gs, int dim) {
    if (gs.n_modes() != 1) throw std::invalid_argument("from_gaussian: single mode only");
    // Williamson for one mode: cov = nu * R(th) diag(e^{-2r}, e^{2r}) R(th)^T / 2
    const Eigen::Matrix2d cov = gs.cov;
    const double det = cov.determinant();
    const double nu = 2.0 * std::sqrt(det); // = 2 n_bar + 1
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(cov);
    const double lo = es.eigenvalues()(0), hi = es.eigenvalues()(1);
    const double r = 0.25 * std::log(hi / lo);
    // eigenvector of the small (squeezed) eigenvalue is the rotated q axis
    Eigen::Vector2d v = es.eigenvectors().col(0);
    const double theta = std::atan2(v(1), v(0));
    FockDensity rho = thermal_density(0.5 * (nu - 1.0), dim);
    rho = apply(build_gate(gate_squeeze(r), dim), rho);
    rho = apply(build_gate(gate_rotate(theta), dim), rho);
    rho = apply(build_gate(gate_displace(gs.mean(0), gs.mean(1)), dim), rho);
    return rho;
}

CMat ladder(int dim) {
    CMat a = CMat::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(double(n));
    return a;
}

CMat q_matrix(int dim) {
    const CMat a = ladder(dim);
    return (a + a.adjoint()) / std::sqrt(2.0);
}

CMat p_matrix(int dim) {
    const CMat a = ladder(dim);
    return (a - a.adjoint()) * (-kI / std::sqrt(2.0));
}

TruncationBudget budget(int dim) {
    const double s = std::sqrt(dim / 64.0);
    return {2.0 * s, std::asinh(std::sinh(1.2) * s), 0.3 * (dim / 64.0)};
}

OperatorMatrix build_gate(const GateOp& gate, int dim) {
    if (dim < 4) throw std::invalid_argument("build_gate: dim must be >= 4");
    const TruncationBudget b = budget(dim);
    OperatorMatrix out;
    out.op = gate;
    out.dim = dim;
    out.label = gate_name(gate.kind);

    const int pad = padded_dim(dim);
    switch (gate.kind) {
        case GateKind::Rotate:
        case GateKind::Fourier: {
            // exact diagonals: R = e^{i t n}, F = e^{i pi/4} e^{i pi n / 2}
            const double theta = gate.kind == GateKind::Rotate ? gate.a : M_PI / 2.0;
            const Cd global = gate.kind == GateKind::Rotate ? Cd{1.0, 0.0}
                                                            : std::exp(kI * (M_PI / 4.0));
            CVec d(dim);
            for (int n = 0; n < dim; ++n) d(n) = global * std::exp(kI * (theta * n));
            out.u = d.asDiagonal();
            return out;
        }
        case GateKind::Phase: {
            out.u = std::exp(kI * gate.a) * CMat::Identity(dim, dim);
            return out;
        }
        case GateKind::Z: {
            out.u = q_function_gate(dim, [&](double q) { return gate.a * q; });
            out.within_budget = std::abs(gate.a) / std::sqrt(2.0) <= b.max_alpha;
            return out;
        }
        case GateKind::U2: {
            out.u = q_function_gate(dim, [&](double q) { return gate.a * q * q; });
            // a shear of strength T squeezes with sinh r = |T| exactly
            out.within_budget = std::asinh(std::abs(gate.a)) <= b.max_r;
            return out;
        }
        case GateKind::U3: {
            out.u = q_function_gate(dim, [&](double q) { return gate.a * q * q * q; });
            out.within_budget = std::abs(gate.a) <= b.max_t3;
            return out;
        }
        case GateKind::X:
        case GateKind::Displace: {
            const double q_shift = gate.a;
            const double p_shift = gate.kind == GateKind::X ? 0.0 : gate.b;
            // D(Q,P) = exp(i (P q - Q p))
            CMat h = p_shift * q_matrix(pad) - q_shift * p_matrix(pad);
            out.u = exp_i_hermitian(h).topLeftCorner(dim, dim);
            out.within_budget =
                std::sqrt(q_shift * q_shift + p_shift * p_shift) / std::sqrt(2.0) <= b.max_alpha;
            return out;
        }
        case GateKind::Squeeze: {
            const CMat a = ladder(pad);
            CMat h = -kI * gate.a * 0.5 * (a * a - (a * a).adjoint().eval());
            out.u = exp_i_hermitian(h).topLeftCorner(dim, dim);
            out.within_budget = std::abs(gate.a) <= b.max_r;
            return out;
        }
        case GateKind::CZ: {
            if (dim > 32)
                throw std::invalid_argument(
                    "build_gate: CZ matrix limited to dim <= 32; use apply_cz on vectors");
            const QEigen& qe = q_eigen(pad);
            // exp(i q (x) q) = (V (x) V) diag(e^{i li lj}) (V (x) V)^+, projected.
            // Index convention |n0 n1> -> n0*dim + n1.
            const CMat proj = qe.vec.topRows(dim); // dim x pad
            CMat t(dim * dim, pad * pad);
            for (int n0 = 0; n0 < dim; ++n0)
                for (int n1 = 0; n1 < dim; ++n1)
                    for (int a = 0; a < pad; ++a)
                        for (int bb = 0; bb < pad; ++bb)
                            t(n0 * dim + n1, a * pad + bb) = proj(n0, a) * proj(n1, bb);
            CVec phases(pad * pad);
            for (int a = 0; a < pad; ++a)
                for (int bb = 0; bb < pad; ++bb)
                    phases(a * pad + bb) = std::exp(kI * (qe.lam(a) * qe.lam(bb)));
            out.u = t * phases.asDiagonal() * t.adjoint();
            return out;
        }
    }
    throw std::logic_error("build_gate: unhandled gate");
}

FockDensity apply(const OperatorMatrix& op, const FockDensity& state) {
    const int expect = state.n_modes == 1 ? state.dim : state.dim * state.dim;
    if (op.u.rows() != expect) throw std::invalid_argument("apply: dimension mismatch");
    FockDensity out{state.dim, state.n_modes, op.u * state.rho * op.u.adjoint()};
    return out;
}

FockVector apply(const OperatorMatrix& op, const FockVector& state) {
    const int expect = state.n_modes == 1 ? state.dim : state.dim * state.dim;
    if (op.u.rows() != expect) throw std::invalid_argument("apply: dimension mismatch");
    return {state.dim, state.n_modes, op.u * state.amp};
}

FockVector apply_on_mode(const OperatorMatrix& op, const FockVector& state, int mode) {
    if (op.u.rows() != state.dim) throw std::invalid_argument("apply_on_mode: dimension mismatch");
    if (state.n_modes == 1) {
        if (mode != 0) throw std::out_of_range("apply_on_mode: bad mode");
        return {state.dim, 1, op.u * state.amp};
    }
    if (mode < 0 || mode > 1) throw std::out_of_range("apply_on_mode: bad mode");
    const int d = state.dim;
    Eigen::Map<const CMat> psi(state.amp.data(), d, d); // psi(n1, n0): col-major, mode0 major
    FockVector out{d, 2, CVec(d * d)};
    Eigen::Map<CMat> res(out.amp.data(), d, d);
    if (mode == 0)
        res = psi * op.u.transpose();
    else
        res = op.u * psi;
    return out;
}

FockVector apply_cz(const FockVector& state) {
    if (state.n_modes != 2) throw std::invalid_argument("apply_cz: two-mode state required");
    const int d = state.dim, pad = padded_dim(state.dim);
    const QEigen& qe = q_eigen(pad);
    const CMat proj = qe.vec.topRows(d); // d x pad
    Eigen::Map<const CMat> psi(state.amp.data(), d, d);
    CMat mid = proj.adjoint() * psi.transpose() * proj.conjugate(); // pad x pad, indices (e0, e1)
    for (int r = 0; r < pad; ++r)
        for (int c = 0; c < pad; ++c) mid(r, c) *= std::exp(kI * (qe.lam(r) * qe.lam(c)));
    CMat back = proj * mid * proj.transpose(); // (n0, n1)
    FockVector out{d, 2, CVec(d * d)};
    Eigen::Map<CMat> res(out.amp.data(), d, d);
    res = back.transpose();
    return out;
}

FockDensity apply_loss_fock(const FockDensity& state, double t) {
    if (state.n_modes != 1) throw std::invalid_argument("apply_loss_fock: single mode only");
    if (t < 0.0 || t > 1.0) throw std::invalid_argument("apply_loss_fock: t in [0,1]");
    const int d = state.dim;
    const double tau = t * t;
    // Kraus operators K_k = sqrt((1-tau)^k / k!) tau^{n/2} a^k
    CMat out = CMat::Zero(d, d);
    CMat ak = CMat::Identity(d, d);
    const CMat a = ladder(d);
    Eigen::VectorXd tau_half_n(d);
    for (int n = 0; n < d; ++n) tau_half_n(n) = std::pow(tau, 0.5 * n);
    double log_coeff = 0.0; // log((1-tau)^k / k!)
    for (int k = 0; k < d; ++k) {
        if (k > 0) {
            ak = a * ak;
            if (tau >= 1.0) break;
            log_coeff += std::log1p(-tau) - std::log(double(k));
        }
        CMat kr = std::sqrt(std::exp(log_coeff)) * (tau_half_n.asDiagonal() * ak);
        out += kr * state.rho * kr.adjoint();
    }
    return {d, 1, out};
}

Eigen::MatrixXd hermite_functions(const Eigen::VectorXd& grid, int dim) {
    Eigen::MatrixXd h(dim, grid.size());
    const Eigen::ArrayXd x = grid.array();
    Eigen::ArrayXd prev = std::pow(M_PI, -0.25) * (-0.5 * x.square()).exp();
    h.row(0) = prev.matrix().transpose();
    if (dim == 1) return h;
    Eigen::ArrayXd cur = std::sqrt(2.0) * x * prev;
    h.row(1) = cur.matrix().transpose();
    for (int n = 1; n + 1 < dim; ++n) {
        Eigen::ArrayXd next =
            std::sqrt(2.0 / (n + 1)) * x * cur - std::sqrt(double(n) / (n + 1)) * prev;
        h.row(n + 1) = next.matrix().transpose();
        prev.swap(cur);
        cur.swap(next);
    }
    return h;
}

Eigen::VectorXd default_quadrature_grid() { return Eigen::VectorXd::LinSpaced(2001, -10.0, 10.0); }

namespace {

/// Momentum-representation transform: applies F^+ to `mode` so the q-basis
/// machinery below reads out p statistics.
template <typename State>
State to_momentum_frame(const State& state, int mode) {
    OperatorMatrix fdag = build_gate(gate_fourier(), state.dim);
    fdag.u = fdag.u.adjoint().eval();
    if constexpr (std::is_same_v<State, FockVector>) {
        return apply_on_mode(fdag, state, mode);
    } else {
        if (state.n_modes == 1) return apply(fdag, state);
        // two-mode density: F^+ is diagonal in the number basis, so the
        // embedding reduces to elementwise phases
        const int d = state.dim;
        CVec diag(d);
        for (int n = 0; n < d; ++n) diag(n) = fdag.u(n, n);
        FockDensity out = state;
        for (int i = 0; i < d * d; ++i)
            for (int j = 0; j < d * d; ++j) {
                const int ni = mode == 0 ? i / d : i % d;
                const int nj = mode == 0 ? j / d : j % d;
                out.rho(i, j) *= diag(ni) * std::conj(diag(nj));
            }
        return out;
    }
}

} // namespace

Marginal p_marginal(const FockDensity& state, int mode, const Eigen::VectorXd& grid) {
    FockDensity rot = to_momentum_frame(state, mode);
    const int d = state.dim;
    const Eigen::MatrixXd h = hermite_functions(grid, d);
    Marginal m{grid, Eigen::VectorXd(grid.size()), 0.0};
    if (state.n_modes == 1) {
        const CMat tmp = rot.rho * h.cast<Cd>();
        for (Eigen::Index k = 0; k < grid.size(); ++k)
            m.pdf(k) = std::max(0.0, (h.col(k).cast<Cd>().adjoint() * tmp.col(k)).value().real());
    } else {
        // trace out the unmeasured mode: pdf(x) = sum_s <x,s|rho|x,s>
        for (Eigen::Index k = 0; k < grid.size(); ++k) {
            double v = 0.0;
            for (int s = 0; s < d; ++s) {
                Cd acc = 0.0;
                for (int n = 0; n < d; ++n)
                    for (int nn = 0; nn < d; ++nn) {
                        const int i = mode == 0 ? n * d + s : s * d + n;
                        const int j = mode == 0 ? nn * d + s : s * d + nn;
                        acc += h(n, k) * rot.rho(i, j) * h(nn, k);
                    }
                v += acc.real();
            }
            m.pdf(k) = std::max(0.0, v);
        }
    }
    const double dx = grid(1) - grid(0);
    m.mass = m.pdf.sum() * dx;
    return m;
}

Marginal p_marginal(const FockVector& state, int mode, const Eigen::VectorXd& grid) {
    FockVector rot = to_momentum_frame(state, mode);
    const int d = state.dim;
    const Eigen::MatrixXd h = hermite_functions(grid, d);
    Marginal m{grid, Eigen::VectorXd(grid.size()), 0.0};
    if (state.n_modes == 1) {
        const CVec amps = h.cast<Cd>().transpose() * rot.amp;
        m.pdf = amps.cwiseAbs2();
    } else {
        Eigen::Map<const CMat> psi(rot.amp.data(), d, d); // (n1, n0)
        // amplitude matrix phi(x, other) for the measured mode
        CMat phi = mode == 0 ? CMat(h.cast<Cd>().transpose() * psi.transpose())
                             : CMat(h.cast<Cd>().transpose() * psi);
        m.pdf = phi.cwiseAbs2().rowwise().sum();
    }
    const double dx = grid(1) - grid(0);
    m.mass = m.pdf.sum() * dx;
    return m;
}

double sample_marginal(const Marginal& m, Rng& rng) {
    const double dx = m.grid(1) - m.grid(0);
    const double u = uniform(rng, 0.0, m.mass);
    double acc = 0.0;
    for (Eigen::Index k = 0; k < m.grid.size(); ++k) {
        acc += m.pdf(k) * dx;
        if (acc >= u) return m.grid(k);
    }
    return m.grid(m.grid.size() - 1);
}

HomodyneOutcome homodyne_p(const FockDensity& state, int mode, Rng& rng,
                           const Eigen::VectorXd& grid) {
    Marginal m = p_marginal(state, mode, grid);
    if (m.mass < 0.999 * state.trace())
        throw std::runtime_error("homodyne_p: marginal mass below 0.999, grid too coarse/narrow");
    HomodyneOutcome out;
    out.outcome = sample_marginal(m, rng);
    if (state.n_modes == 2) {
        FockDensity rot = to_momentum_frame(state, mode);
        const int d = state.dim;
        const Eigen::MatrixXd h = hermite_functions(Eigen::VectorXd::Constant(1, out.outcome), d);
        CMat cond = CMat::Zero(d, d);
        for (int s = 0; s < d; ++s)
            for (int ss = 0; ss < d; ++ss) {
                Cd acc = 0.0;
                for (int n = 0; n < d; ++n)
                    for (int nn = 0; nn < d; ++nn) {
                        const int i = mode == 0 ? n * d + s : s * d + n;
                        const int j = mode == 0 ? nn * d + ss : ss * d + nn;
                        acc += h(n, 0) * rot.rho(i, j) * h(nn, 0);
                    }
                cond(s, ss) = acc;
            }
        const double tr = cond.trace().real();
        if (tr <= 0.0) throw std::runtime_error("homodyne_p: zero-probability branch");
        out.conditional = FockDensity{d, 1, cond * (state.trace() / tr)};
    }
    return out;
}

HomodyneOutcomeVec homodyne_p(const FockVector& state, int mode, Rng& rng,
                              const Eigen::VectorXd& grid) {
    Marginal m = p_marginal(state, mode, grid);
    if (m.mass < 0.999 * state.norm2())
        throw std::runtime_error("homodyne_p: marginal mass below 0.999, grid too coarse/narrow");
    HomodyneOutcomeVec out;
    out.outcome = sample_marginal(m, rng);
    if (state.n_modes == 2) {
        FockVector rot = to_momentum_frame(state, mode);
        const int d = state.dim;
        const Eigen::MatrixXd h = hermite_functions(Eigen::VectorXd::Constant(1, out.outcome), d);
        Eigen::Map<const CMat> psi(rot.amp.data(), d, d);
        CVec cond(d);
        for (int s = 0; s < d; ++s) {
            Cd acc = 0.0;
            for (int n = 0; n < d; ++n) acc += h(n, 0) * (mode == 0 ? psi(s, n) : psi(n, s));
            cond(s) = acc;
        }
        const double nrm = cond.norm();
        if (nrm <= 0.0) throw std::runtime_error("homodyne_p: zero-probability branch");
        out.conditional = FockVector{d, 1, cond * (std::sqrt(state.norm2()) / nrm)};
    }
    return out;
}

double fock_fidelity(const FockDensity& rho0, const FockDensity& rho1) {
    if (rho0.rho.rows() != rho1.rho.rows())
        throw std::invalid_argument("fock_fidelity: dimension mismatch");
    if (rho0.trace() < 0.99 || rho1.trace() < 0.99)
        throw std::invalid_argument("fock_fidelity: traces below 0.99 (too much leak)");
    Eigen::SelfAdjointEigenSolver<CMat> es0(rho0.rho);
    if (es0.eigenvalues().minCoeff() < -1e-8)
        throw std::invalid_argument("fock_fidelity: input not PSD within tolerance");
    CVec sq = es0.eigenvalues().cwiseMax(0.0).cwiseSqrt().cast<Cd>();
    const CMat sqrt0 = es0.eigenvectors() * sq.asDiagonal() * es0.eigenvectors().adjoint();
    const CMat m = sqrt0 * rho1.rho * sqrt0;
    Eigen::SelfAdjointEigenSolver<CMat> es(m, Eigen::EigenvaluesOnly);
    double f = 0.0;
    for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k)
        f += std::sqrt(std::max(0.0, es.eigenvalues()(k)));
    return f;
}

double fock_fidelity(const FockVector& a, const FockVector& b) {
    return std::abs(a.amp.dot(b.amp)); // Eigen dot conjugates the first factor
}

FockDensity partial_trace(const FockDensity& state, int keep_mode) {
    if (state.n_modes != 2) throw std::invalid_argument("partial_trace: two-mode state required");
    const int d = state.dim;
    FockDensity out{d, 1, CMat::Zero(d, d)};
    for (int n = 0; n < d; ++n)
        for (int m = 0; m < d; ++m)
            for (int s = 0; s < d; ++s) {
                const int i = keep_mode == 0 ? n * d + s : s * d + n;
                const int j = keep_mode == 0 ? m * d + s : s * d + m;
                out.rho(n, m) += state.rho(i, j);
            }
    return out;
}

FockDensity tensor(const FockDensity& a, const FockDensity& b) {
    if (a.n_modes != 1 || b.n_modes != 1 || a.dim != b.dim)
        throw std::invalid_argument("tensor: two single-mode states of equal dim required");
    const int d = a.dim;
    FockDensity out{d, 2, CMat(d * d, d * d)};
    for (int i = 0; i < d * d; ++i)
        for (int j = 0; j < d * d; ++j)
            out.rho(i, j) = a.rho(i / d, j / d) * b.rho(i % d, j % d);
    return out;
}

FockVector tensor(const FockVector& a, const FockVector& b) {
    if (a.n_modes != 1 || b.n_modes != 1 || a.dim != b.dim)
        throw std::invalid_argument("tensor: two single-mode states of equal dim required");
    const int d = a.dim;
    FockVector out{d, 2, CVec(d * d)};
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) out.amp(i * d + j) = a.amp(i) * b.amp(j);
    return out;
}

ModeMoments moments(const FockDensity& state, int mode) {
    if (state.n_modes == 2) return moments(partial_trace(state, mode), 0);
    const int d = state.dim;
    const CMat q1 = q_matrix(d), p1 = p_matrix(d);
    auto expect = [&](const CMat& op) { return (op * state.rho).trace().real() / state.trace(); };
    ModeMoments mm;
    mm.mean << expect(q1), expect(p1);
    const CMat qq = q1 * q1, pp = p1 * p1, qp = 0.5 * (q1 * p1 + p1 * q1);
    mm.cov(0, 0) = expect(qq) - mm.mean(0) * mm.mean(0);
    mm.cov(1, 1) = expect(pp) - mm.mean(1) * mm.mean(1);
    mm.cov(0, 1) = mm.cov(1, 0) = expect(qp) - mm.mean(0) * mm.mean(1);
    return mm;
}

ModeMoments moments(const FockVector& state, int mode) {
    const int d = state.dim;
    const OperatorMatrix q_op{q_matrix(d), {}, d, true, "q"};
    const OperatorMatrix p_op{p_matrix(d), {}, d, true, "p"};
    const double n2 = state.norm2();
    auto expect = [&](const OperatorMatrix& op) {
        return state.amp.dot(apply_on_mode(op, state, mode).amp).real() / n2;
    };
    auto expect2 = [&](const OperatorMatrix& a, const OperatorMatrix& b) {
        const FockVector va = apply_on_mode(a, state, mode);
        const FockVector vb = apply_on_mode(b, state, mode);
        return va.amp.dot(vb.amp).real() / n2; // <a psi | b psi> real part
    };
    ModeMoments mm;
    mm.mean << expect(q_op), expect(p_op);
    mm.cov(0, 0) = expect2(q_op, q_op) - mm.mean(0) * mm.mean(0);
    mm.cov(1, 1) = expect2(p_op, p_op) - mm.mean(1) * mm.mean(1);
    mm.cov(0, 1) = mm.cov(1, 0) = expect2(q_op, p_op) - mm.mean(0) * mm.mean(1);
    return mm;
}

double mean_photon_number(const FockDensity& state, int mode) {
    const ModeMoments mm = moments(state, mode);
    return 0.5 * (mm.cov(0, 0) + mm.cov(1, 1) + mm.mean(0) * mm.mean(0) +
                  mm.mean(1) * mm.mean(1) - 1.0);
}

Eigen::MatrixXd wigner_fock(const FockDensity& state, const Eigen::VectorXd& q_grid,
                            const Eigen::VectorXd& p_grid) {
    if (state.n_modes != 1) throw std::invalid_argument("wigner_fock: single mode only");
    const int d = state.dim;
    Eigen::MatrixXd w(q_grid.size(), p_grid.size());
    std::vector<Cd> mrow(d), mprev(d), mcur(d);
    for (Eigen::Index j = 0; j < p_grid.size(); ++j) {
        const double p = p_grid(j);
        for (Eigen::Index i = 0; i < q_grid.size(); ++i) {
            const double q = q_grid(i);
            const double u = 2.0 * (q * q + p * p);
            const Cd wz = std::sqrt(2.0) * Cd(q, p);
            // top row: M_{0,k} = w^k e^{-u/2} / (pi sqrt(k!))
            mrow[0] = std::exp(-0.5 * u) / M_PI;
            for (int k = 1; k < d; ++k) mrow[k] = mrow[k - 1] * wz / std::sqrt(double(k));
            double acc = state.rho(0, 0).real() * mrow[0].real();
            for (int k = 1; k < d; ++k) acc += 2.0 * (state.rho(0, k) * mrow[k]).real();
            // down each diagonal k: 3-term recurrence in n
            for (int k = 0; k < d; ++k) {
                Cd m_nm2{0.0, 0.0};
                Cd m_nm1 = mrow[k];
                for (int n = 1; n + k < d; ++n) {
                    const double denom = std::sqrt(double(n) * (n + k));
                    Cd m_n = ((u - 2.0 * n + 1.0 - k) / denom) * m_nm1 -
                             std::sqrt((double(n - 1) * (n + k - 1)) / (double(n) * (n + k))) * m_nm2;
                    if (k == 0)
                        acc += (state.rho(n, n) * m_n).real();
                    else
                        acc += 2.0 * (state.rho(n, n + k) * m_n).real();
                    m_nm2 = m_nm1;
                    m_nm1 = m_n;
                }
            }
            w(i, j) = acc;
        }
    }
    const double cell = (q_grid(1) - q_grid(0)) * (p_grid(1) - p_grid(0));
    if (std::abs(w.sum() * cell - state.trace()) > 1e-3)
        throw std::runtime_error("wigner_fock: significant mass escapes the grid");
    return w;
}

} // namespace cvqc::fock
