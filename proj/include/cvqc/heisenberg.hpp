#pragma once

#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "cvqc/gates.hpp"
#include "cvqc/poly.hpp"

namespace cvqc {

/// Exact polynomial action of conjugation by a gate word on the canonical
/// coordinates: images[2m] is the image of q_m, images[2m+1] of p_m.
struct PolyMap {
    int n_modes = 0;
    std::vector<Poly> images;

    static PolyMap identity(int n_modes);

    /// Canonical commutation structure, evaluated as Poisson brackets of the
    /// images: {q_i, p_j} = delta_ij, {q_i, q_j} = {p_i, p_j} = 0.
    bool preserves_brackets(long double tol = 1e-9L) const;

    bool equals(const PolyMap& o, long double tol = Poly::kCoeffTol) const;
};

/// Number of modes a word touches (highest target index + 1, at least 1).
int word_modes(const GateWord& word);

/// Heisenberg map of a word in circuit order (first element acts first).
PolyMap heisenberg(const GateWord& word, int n_modes = 0);

/// Per-mode encryption displacement (Q, P).
using EncKeyPair = std::pair<double, double>;

/// The printed decryption row for a single gate under encryption D(Q,P)
/// (two pairs for CZ), as a circuit-order word.
GateWord table1_correction(const GateOp& gate, const std::vector<EncKeyPair>& enc);

/// Encryption word D(Q,P) per mode, circuit order.
GateWord encryption_word(const std::vector<EncKeyPair>& enc);

struct VerifyReport {
    bool ok = false;
    std::string residual; // per-variable polynomial difference when not ok
};

/// Checks heisenberg(correction after gate after D(enc)) == heisenberg(gate).
VerifyReport verify_word(const GateOp& gate, const std::vector<EncKeyPair>& enc,
                         const GateWord& correction);

/// Same with the correction taken from the decryption table.
VerifyReport verify_correction(const GateOp& gate, const std::vector<EncKeyPair>& enc);

/// Conjugation C' = G^dagger C G of a correction word (elements restricted to
/// X/Z/Displace/U2/Phase) through one gate, expressed again as such a word:
/// heisenberg(C' then G) == heisenberg(G then C). Sliding a U2 element
/// through Fourier or Rotate has no such form and throws; sliding X through
/// U3 emits a U2 element.
GateWord slide(const GateWord& correction, const GateOp& gate);

/// Pending-displacement transport through one Gaussian gate: the displacement
/// vector v of a correction scheduled after the gate obeys v -> S v with S
/// the gate's phase-space matrix.
Eigen::VectorXd propagate_displacement(const Eigen::VectorXd& v, const GateOp& gate,
                                       int n_modes);

struct ProgramCorrection {
    /// Final client correction, displacements only (circuit order).
    GateWord correction;
    /// Residual displacement vector the correction undoes (per-mode q,p).
    Eigen::VectorXd pending;
    /// For each U3 in the program: (program index, shear the gadget must
    /// discharge, i.e. the total U2 parameter A+B = -3 Q T at that point).
    std::vector<std::pair<int, double>> server_shears;
    std::vector<int> gadget_indices; // indices of U3 elements
};

/// Folds the per-gate decryption rules over a program: Gaussian gates update
/// the pending key displacement by their symplectic matrix; each U3 leaves a
/// shear for the gadget to discharge and adds -3 T Q^2 to the pending p shift.
ProgramCorrection compose_program_correction(const GateWord& program,
                                             const std::vector<EncKeyPair>& enc);

} // namespace cvqc
