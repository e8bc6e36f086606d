#pragma once

#include <complex>

#include "cvqc/gaussian.hpp"
#include "cvqc/rng.hpp"

namespace cvqc::test {

/// Random physical single-mode Gaussian state: rotated squeezed thermal state
/// with a random displacement. Bounded parameters keep it representable in a
/// modest Fock truncation for cross-backend checks.
inline GaussianState random_single_mode_state(Rng& rng, double max_disp = 1.0,
                                              double max_r = 0.6, double max_nbar = 0.8) {
    const double theta = uniform(rng, 0.0, 2.0 * M_PI);
    const double r = uniform(rng, -max_r, max_r);
    const double nbar = uniform(rng, 0.0, max_nbar);
    GaussianState s = thermal(nbar);
    s = apply_gate(s, gate_squeeze(r));
    s = apply_gate(s, gate_rotate(theta));
    s = apply_gate(s, gate_displace(uniform(rng, -max_disp, max_disp),
                                    uniform(rng, -max_disp, max_disp)));
    return s;
}

inline std::complex<double> random_alpha(Rng& rng, double max_abs = 1.0) {
    return {uniform(rng, -max_abs, max_abs), uniform(rng, -max_abs, max_abs)};
}

} // namespace cvqc::test
