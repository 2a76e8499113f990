#pragma once

namespace qgad {

/// Numerical tolerances used across the library. All solvers and verifiers
/// read from one record so test calibration has a single source.
struct Tolerances {
    // Pauli algebra
    double coefficient_merge = 1e-12;  ///< absolute; merged coefficients below this are dropped
    double coefficient_rule_rel = 1e-12;  ///< relative check of the per-register coefficient product

    // Linear algebra
    double eigen_residual = 1e-9;       ///< ||Hv - Ev|| <= eigen_residual * ||H|| per pair
    double orthonormality = 1e-10;      ///< pairwise eigenvector orthonormality
    double density_trace = 1e-10;       ///< |tr(rho) - 1|
    double density_psd = 1e-10;         ///< min eigenvalue >= -density_psd
    double degenerate_boundary = 1e-9;  ///< gap < degenerate_boundary * max(1, ||H||) flags the split unreliable
    double hermitian_imag = 1e-10;      ///< allowed imaginary part of Hermitian expectations

    // Perturbation engine
    double proportionality = 1e-10;  ///< ||A^(m) - alpha P0|| check for sub-leading orders
    double overlap_abort = 0.5;      ///< minimum overlap between tracked subspace and aux ground block
    double exponent_operator = 0.3;  ///< pass tolerance for operator-residual exponents
    double exponent_state = 0.2;     ///< pass tolerance for state-distance exponents
    double residual_floor = 1e-13;   ///< residuals below floor * scale are numerical noise

    static const Tolerances& defaults();
};

inline const Tolerances& Tolerances::defaults() {
    static const Tolerances tol{};
    return tol;
}

}  // namespace qgad
