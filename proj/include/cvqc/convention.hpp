#pragma once

#include <Eigen/Dense>

namespace cvqc {

// Quadrature convention used throughout: [q, p] = i, a = (q + ip)/sqrt(2),
// vacuum quadrature variance 1/2. Mean vectors and covariance matrices are
// ordered (q1, p1, q2, p2, ...). Shot-noise units (SNU) rescale variances so
// that vacuum = 1, i.e. a factor of 2.

inline constexpr double kVacuumVariance = 0.5;

/// Factor converting internal variances to shot-noise units.
inline constexpr double kSnuPerInternal = 2.0;

inline constexpr double variance_to_snu(double v) { return v * kSnuPerInternal; }
inline constexpr double variance_from_snu(double v) { return v / kSnuPerInternal; }

/// Per-quadrature displacement variance equivalent to an alpha-plane
/// encryption Gaussian of variance delta_sq per component (q = sqrt(2) Re a).
inline constexpr double quad_variance_from_alpha_delta_sq(double delta_sq) {
    return 2.0 * delta_sq;
}

/// Standard symplectic form Omega for n modes in (q1,p1,...) ordering:
/// block-diagonal copies of [[0,1],[-1,0]].
inline Eigen::MatrixXd symplectic_form(int n_modes) {
    Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * n_modes, 2 * n_modes);
    for (int k = 0; k < n_modes; ++k) {
        omega(2 * k, 2 * k + 1) = 1.0;
        omega(2 * k + 1, 2 * k) = -1.0;
    }
    return omega;
}

} // namespace cvqc
