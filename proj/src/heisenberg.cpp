#include "cvqc/heisenberg.hpp"

#include <cmath>
#include <stdexcept>

#include "cvqc/gaussian.hpp"

namespace cvqc {

PolyMap PolyMap::identity(int n_modes) {
    PolyMap m;
    m.n_modes = n_modes;
    m.images.reserve(2 * n_modes);
    for (int k = 0; k < 2 * n_modes; ++k) m.images.push_back(Poly::variable(2 * n_modes, k));
    return m;
}

bool PolyMap::preserves_brackets(long double tol) const {
    const int nv = 2 * n_modes;
    auto bracket = [&](const Poly& f, const Poly& g) {
        Poly out = Poly::constant(nv, 0);
        for (int m = 0; m < n_modes; ++m) {
            out += f.derivative(2 * m) * g.derivative(2 * m + 1) -
                   f.derivative(2 * m + 1) * g.derivative(2 * m);
        }
        return out;
    };
    for (int i = 0; i < n_modes; ++i) {
        for (int j = 0; j < n_modes; ++j) {
            const Poly qq = bracket(images[2 * i], images[2 * j]);
            const Poly pp = bracket(images[2 * i + 1], images[2 * j + 1]);
            const Poly qp = bracket(images[2 * i], images[2 * j + 1]);
            if (!qq.is_zero(tol) || !pp.is_zero(tol)) return false;
            const Poly want = Poly::constant(nv, i == j ? 1 : 0);
            if (!qp.equals(want, tol)) return false;
        }
    }
    return true;
}

bool PolyMap::equals(const PolyMap& o, long double tol) const {
    if (n_modes != o.n_modes) return false;
    for (size_t k = 0; k < images.size(); ++k)
        if (!images[k].equals(o.images[k], tol)) return false;
    return true;
}

int word_modes(const GateWord& word) {
    int n = 1;
    for (const auto& g : word) {
        n = std::max(n, g.mode + 1);
        if (g.kind == GateKind::CZ) n = std::max(n, g.mode2 + 1);
    }
    return n;
}

namespace {

/// Heisenberg images of a single gate: image of each canonical coordinate
/// under conjugation G^dagger (.) G.
PolyMap gate_map(const GateOp& g, int n_modes) {
    PolyMap m = PolyMap::identity(n_modes);
    const int nv = 2 * n_modes;
    const int q = 2 * g.mode, p = 2 * g.mode + 1;
    auto var = [&](int k) { return Poly::variable(nv, k); };
    auto cst = [&](long double c) { return Poly::constant(nv, c); };
    switch (g.kind) {
        case GateKind::X:
            m.images[q] += cst(g.a);
            break;
        case GateKind::Z:
            m.images[p] += cst(g.a);
            break;
        case GateKind::Displace:
            m.images[q] += cst(g.a);
            m.images[p] += cst(g.b);
            break;
        case GateKind::U2:
            m.images[p] += cst(2.0L * (long double)g.a) * var(q);
            break;
        case GateKind::U3:
            m.images[p] += cst(3.0L * (long double)g.a) * var(q) * var(q);
            break;
        case GateKind::Fourier:
            m.images[q] = cst(-1) * var(p);
            m.images[p] = var(q);
            break;
        case GateKind::CZ: {
            const int q2 = 2 * g.mode2, p2 = 2 * g.mode2 + 1;
            m.images[p] += var(q2);
            m.images[p2] += var(q);
            break;
        }
        case GateKind::Squeeze:
            m.images[q] = cst(std::exp(-(long double)g.a)) * var(q);
            m.images[p] = cst(std::exp((long double)g.a)) * var(p);
            break;
        case GateKind::Rotate: {
            const long double c = std::cos((long double)g.a), s = std::sin((long double)g.a);
            m.images[q] = cst(c) * var(q) - cst(s) * var(p);
            m.images[p] = cst(s) * var(q) + cst(c) * var(p);
            break;
        }
        case GateKind::Phase:
            break;
    }
    return m;
}

} // namespace

PolyMap heisenberg(const GateWord& word, int n_modes) {
    const int n = n_modes > 0 ? n_modes : word_modes(word);
    PolyMap acc = PolyMap::identity(n);
    bool first = true;
    for (const auto& g : word) {
        PolyMap gm = gate_map(g, n);
        if (first) {
            acc = std::move(gm);
            first = false;
            continue;
        }
        // word = [W..., g] conjugates as W^+ g^+ (.) g W: substitute the
        // accumulated images into g's polynomials.
        PolyMap next;
        next.n_modes = n;
        next.images.reserve(2 * n);
        for (int k = 0; k < 2 * n; ++k) next.images.push_back(gm.images[k].substitute(acc.images));
        acc = std::move(next);
    }
    return acc;
}

GateWord encryption_word(const std::vector<EncKeyPair>& enc) {
    GateWord w;
    for (int m = 0; m < static_cast<int>(enc.size()); ++m)
        w.push_back(gate_displace(enc[m].first, enc[m].second, m));
    return w;
}

GateWord table1_correction(const GateOp& gate, const std::vector<EncKeyPair>& enc) {
    if (enc.empty()) throw std::invalid_argument("table1_correction: missing keys");
    const auto [Q, P] = enc[gate.mode];
    const double T = gate.a;
    switch (gate.kind) {
        case GateKind::Z:
        case GateKind::X:
            return {gate_z(-P, gate.mode), gate_x(-Q, gate.mode)};
        case GateKind::U2:
            return {gate_z(-2.0 * Q * T - P, gate.mode), gate_x(-Q, gate.mode)};
        case GateKind::U3:
            return {gate_u2(-3.0 * Q * T, gate.mode), gate_z(3.0 * Q * Q * T - P, gate.mode),
                    gate_x(-Q, gate.mode)};
        case GateKind::Fourier:
            return {gate_z(-Q, gate.mode), gate_x(P, gate.mode)};
        case GateKind::CZ: {
            if (enc.size() < 2) throw std::invalid_argument("CZ correction needs two key pairs");
            const auto [Q1, P1] = enc[gate.mode];
            const auto [Q2, P2] = enc[gate.mode2];
            return {gate_z(-Q2 - P1, gate.mode), gate_x(-Q1, gate.mode),
                    gate_z(-Q1 - P2, gate.mode2), gate_x(-Q2, gate.mode2)};
        }
        default:
            throw std::invalid_argument("no decryption row for gate " + gate_name(gate.kind));
    }
}

VerifyReport verify_word(const GateOp& gate, const std::vector<EncKeyPair>& enc,
                         const GateWord& correction) {
    const int n = std::max(word_modes({gate}), static_cast<int>(enc.size()));
    GateWord full = encryption_word(enc);
    full.push_back(gate);
    full.insert(full.end(), correction.begin(), correction.end());

    const PolyMap lhs = heisenberg(full, n);
    const PolyMap rhs = heisenberg({gate}, n);
    VerifyReport rep;
    rep.ok = lhs.equals(rhs);
    if (!rep.ok) {
        for (int k = 0; k < 2 * n; ++k) {
            const Poly diff = lhs.images[k] - rhs.images[k];
            if (diff.is_zero()) continue;
            rep.residual += (k % 2 == 0 ? "q" : "p") + std::to_string(k / 2) + ": " + diff.str() + "; ";
        }
    }
    return rep;
}

VerifyReport verify_correction(const GateOp& gate, const std::vector<EncKeyPair>& enc) {
    return verify_word(gate, enc, table1_correction(gate, enc));
}

Eigen::VectorXd propagate_displacement(const Eigen::VectorXd& v, const GateOp& gate,
                                       int n_modes) {
    if (gate.kind == GateKind::U3)
        throw std::invalid_argument("propagate_displacement: U3 is not a linear map");
    return gate_action(gate, n_modes).s * v;
}

GateWord slide(const GateWord& correction, const GateOp& gate) {
    const int n = std::max(word_modes(correction), word_modes({gate}));
    GateWord out;
    for (const auto& c : correction) {
        switch (c.kind) {
            case GateKind::Phase:
                out.push_back(c);
                break;
            case GateKind::X:
            case GateKind::Z:
            case GateKind::Displace: {
                Eigen::VectorXd v = Eigen::VectorXd::Zero(2 * n);
                const int q = 2 * c.mode, p = 2 * c.mode + 1;
                if (c.kind == GateKind::X) v(q) = c.a;
                else if (c.kind == GateKind::Z) v(p) = c.a;
                else { v(q) = c.a; v(p) = c.b; }
                if (gate.kind == GateKind::U3) {
                    // D(Q,P) through U3(T): circuit order X(Q), U2(-3QT),
                    // Z(P + 3Q^2 T); the shear lands between the shifts.
                    const double Q = v(2 * gate.mode);
                    const double P = v(2 * gate.mode + 1);
                    if (c.mode == gate.mode && Q != 0.0) {
                        out.push_back(gate_x(Q, gate.mode));
                        out.push_back(gate_u2(-3.0 * gate.a * Q, gate.mode));
                        out.push_back(gate_z(P + 3.0 * gate.a * Q * Q, gate.mode));
                        break;
                    }
                }
                // displacement vector transforms by S^{-1} under G^+ D G
                Eigen::VectorXd w = v;
                if (gate.kind != GateKind::U3) {
                    const auto act = gate_action(gate, n);
                    w = act.s.inverse() * v;
                }
                for (int m = 0; m < n; ++m) {
                    if (w(2 * m) != 0.0 || w(2 * m + 1) != 0.0)
                        out.push_back(gate_displace(w(2 * m), w(2 * m + 1), m));
                }
                break;
            }
            case GateKind::U2: {
                switch (gate.kind) {
                    case GateKind::Z:
                    case GateKind::U2:
                    case GateKind::U3:
                    case GateKind::CZ:
                    case GateKind::Phase:
                        out.push_back(c); // q-diagonal on q-diagonal
                        break;
                    case GateKind::X:
                    case GateKind::Displace: {
                        // U2(A) through X(Q): exp(iA(q+Q)^2) up to phase
                        const double Q = (gate.mode == c.mode) ? gate.a : 0.0;
                        out.push_back(c);
                        if (Q != 0.0) out.push_back(gate_z(2.0 * c.a * Q, c.mode));
                        break;
                    }
                    case GateKind::Squeeze:
                        out.push_back(gate_u2(c.a * std::exp(-2.0 * gate.a), c.mode));
                        break;
                    default:
                        throw std::domain_error(
                            "slide: U2 element does not slide through " + gate_name(gate.kind));
                }
                break;
            }
            default:
                throw std::invalid_argument("slide: correction may only contain X/Z/D/U2/phase");
        }
    }
    return out;
}

ProgramCorrection compose_program_correction(const GateWord& program,
                                             const std::vector<EncKeyPair>& enc) {
    const int n = std::max(word_modes(program), static_cast<int>(enc.size()));
    ProgramCorrection out;
    Eigen::VectorXd u = Eigen::VectorXd::Zero(2 * n);
    for (int m = 0; m < static_cast<int>(enc.size()); ++m) {
        u(2 * m) = enc[m].first;
        u(2 * m + 1) = enc[m].second;
    }
    for (int i = 0; i < static_cast<int>(program.size()); ++i) {
        const GateOp& g = program[i];
        if (g.kind == GateKind::U3) {
            const double q_key = u(2 * g.mode);
            out.server_shears.emplace_back(i, -3.0 * g.a * q_key);
            out.gadget_indices.push_back(i);
            u(2 * g.mode + 1) -= 3.0 * g.a * q_key * q_key;
        } else {
            u = propagate_displacement(u, g, n);
        }
    }
    out.pending = u;
    for (int m = 0; m < n; ++m) {
        out.correction.push_back(gate_z(-u(2 * m + 1), m));
        out.correction.push_back(gate_x(-u(2 * m), m));
    }
    return out;
}

} // namespace cvqc
