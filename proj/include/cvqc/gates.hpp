#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace cvqc {

/// Gate vocabulary shared by the Gaussian engine, the Fock backend and the
/// symbolic Heisenberg layer. U3 is the only non-Gaussian member.
enum class GateKind {
    X,        // X(Q) = exp(-i Q p), shifts q by Q
    Z,        // Z(P) = exp(i P q), shifts p by P
    Displace, // D(Q,P) = phase * Z(P) X(Q); alpha = (Q + iP)/sqrt(2)
    U2,       // exp(i T q^2), shear p -> p + 2 T q
    U3,       // exp(i T q^3), non-Gaussian, p -> p + 3 T q^2
    Fourier,  // exp(i pi/4 (q^2 + p^2)), (q,p) -> (-p,q)
    CZ,       // exp(i q_a q_b), two-mode
    Squeeze,  // S(r) = exp(r(a^2 - a^+2)/2), (q,p) -> (e^-r q, e^r p)
    Rotate,   // R(t) = exp(i t a^+ a), phase-space rotation
    Phase,    // global phase, identity on (q,p)
};

/// One gate application. `a` is the main parameter (Q, P, T, r, theta or the
/// phase), `b` is only used by Displace (the p-shift). `mode`/`mode2` are
/// zero-based targets; `mode2` is only read for CZ.
struct GateOp {
    GateKind kind = GateKind::Phase;
    double a = 0.0;
    double b = 0.0;
    int mode = 0;
    int mode2 = 1;
};

using GateWord = std::vector<GateOp>;

inline GateOp gate_x(double q_shift, int mode = 0) { return {GateKind::X, q_shift, 0.0, mode, 0}; }
inline GateOp gate_z(double p_shift, int mode = 0) { return {GateKind::Z, p_shift, 0.0, mode, 0}; }
inline GateOp gate_displace(double q_shift, double p_shift, int mode = 0) {
    return {GateKind::Displace, q_shift, p_shift, mode, 0};
}
inline GateOp gate_u2(double t, int mode = 0) { return {GateKind::U2, t, 0.0, mode, 0}; }
inline GateOp gate_u3(double t, int mode = 0) { return {GateKind::U3, t, 0.0, mode, 0}; }
inline GateOp gate_fourier(int mode = 0) { return {GateKind::Fourier, 0.0, 0.0, mode, 0}; }
inline GateOp gate_cz(int mode_a = 0, int mode_b = 1) { return {GateKind::CZ, 1.0, 0.0, mode_a, mode_b}; }
inline GateOp gate_squeeze(double r, int mode = 0) { return {GateKind::Squeeze, r, 0.0, mode, 0}; }
inline GateOp gate_rotate(double theta, int mode = 0) { return {GateKind::Rotate, theta, 0.0, mode, 0}; }
inline GateOp gate_phase(double phi) { return {GateKind::Phase, phi, 0.0, 0, 0}; }

inline bool is_gaussian(GateKind k) { return k != GateKind::U3; }

inline bool is_two_mode(GateKind k) { return k == GateKind::CZ; }

inline std::string gate_name(GateKind k) {
    switch (k) {
        case GateKind::X: return "X";
        case GateKind::Z: return "Z";
        case GateKind::Displace: return "D";
        case GateKind::U2: return "U2";
        case GateKind::U3: return "U3";
        case GateKind::Fourier: return "F";
        case GateKind::CZ: return "CZ";
        case GateKind::Squeeze: return "S";
        case GateKind::Rotate: return "R";
        case GateKind::Phase: return "phase";
    }
    throw std::logic_error("unknown gate kind");
}

GateKind gate_kind_from_name(const std::string& name);

} // namespace cvqc
