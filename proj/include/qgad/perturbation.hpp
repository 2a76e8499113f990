#pragma once

#include <string>
#include <vector>

#include "qgad/config.hpp"
#include "qgad/gadgets.hpp"
#include "qgad/linalg.hpp"

namespace qgad {

enum class Series { U, A };

/// Index tuples of the Bloch expansion, lexicographically sorted.
/// U-series(m): length m, sum m, prefix sums l_1+..+l_p >= p for p < m.
/// A-series(m): length m-1, sum m-1, prefix sums >= p for p <= m-2.
std::vector<std::vector<int>> staircase_indices(int m, Series series);

/// Spectral cache of an unperturbed Hamiltonian: distinct levels, ground
/// projector and the resolvent powers S^l built from them. Exact (solver-free)
/// when the matrix is structurally diagonal.
class UnperturbedSystem {
  public:
    explicit UnperturbedSystem(const Operator& h0,
                               const Tolerances& tol = Tolerances::defaults());

    double ground_energy() const { return energies_.front(); }
    /// Gap between the ground level and the first excited level.
    double gap() const;
    Eigen::Index dim() const { return dim_; }
    const DenseMatrix& ground_projector() const { return projectors_.front(); }
    /// S^0 = -P0; S^l = sum_{j!=0} (E_0 - E_j)^-l P_j for l > 0.
    DenseMatrix resolvent_power(int ell) const;

  private:
    Eigen::Index dim_ = 0;
    std::vector<double> energies_;        // distinct levels, ascending
    std::vector<DenseMatrix> projectors_;  // one per level
};

/// Free-function form of S^l for a given unperturbed Hamiltonian.
DenseMatrix resolvent_power(const Operator& h0, int ell,
                            const Tolerances& tol = Tolerances::defaults());

struct BlochResult {
    std::vector<DenseMatrix> per_order;  ///< per_order[m-1] = A^(m), lambda powers folded in
    DenseMatrix total;                   ///< A^(<= order)
    bool convergence_warning = false;    ///< ||lambda V|| >= gamma/4
};

/// Degenerate Bloch expansion A^(<=order) assembled over the A-series
/// staircases with operator products evaluated left to right.
BlochResult bloch_expansion(const Operator& h0, const Operator& v, double lambda, int order,
                            const Tolerances& tol = Tolerances::defaults());

/// Combinatorial constant of the cyclic XX gadget: enumerate all k!
/// application orders of the (sigma_j, a_j) pairs, multiply the intermediate
/// Hamming-weight penalties, and sum the inverses. Always positive; the sign
/// bookkeeping of the expansion is validated against bloch_expansion in the
/// test suite.
double xi_constant(int k);

/// Shift-polynomial coefficients alpha_m for m <= order < k: the expansion
/// below order k is (sum_m alpha_m lambda^m) P0. Returned vector has alpha[m]
/// at index m (alpha_0 = alpha_1 = 0).
std::vector<double> shift_polynomial(const GadgetModel& g, int order,
                                     const Tolerances& tol = Tolerances::defaults());

struct EffectiveDecomposition {
    double lambda = 0;
    double a_fit = 0;     ///< coefficient of H_target (x) P_plus
    double b_fit = 0;     ///< coefficient of the tracked-subspace projector
    double residual = 0;  ///< operator norm of H_eff minus the fitted pair
    int d = 0;            ///< tracked dimension, 2^n
    bool shifted = true;  ///< E_0^(0) subtracted
    double overlap = 0;   ///< tr(Pi (I (x) P_plus)) / d
};

/// Diagonalizes H_aux + lambda V, restricts to the 2^n lowest levels and fits
/// a * (H_target (x) P_plus) + b * Pi by least squares over the tracked
/// eigenbasis entries. P_plus projects the auxiliaries onto their unperturbed
/// ground configuration.
EffectiveDecomposition effective_hamiltonian(const GadgetModel& g, double lambda,
                                             bool shifted = true,
                                             const Tolerances& tol = Tolerances::defaults());

struct ScalingReport {
    std::vector<double> lambda_grid;
    std::vector<EffectiveDecomposition> decompositions;  // theorem 1 / theorem 3
    std::vector<double> distances;                       // corollary 1
    double fitted_exponent = 0;
    double exponent_stderr = 0;  ///< one-sigma confidence from the OLS fit
    bool passed = false;
    std::string diagnosis;
};

/// Residual-exponent check of the effective-Hamiltonian error term: fits
/// log(residual) against log(lambda) and expects order+1 within tolerance,
/// with a_fit > 0 throughout.
ScalingReport verify_theorem1(const GadgetModel& g, std::vector<double> grid,
                              bool override_lambda_max = false,
                              const Tolerances& tol = Tolerances::defaults());

/// Ground-state closeness check: Frobenius distance between the reduced
/// gadget ground state and the target ground projector, expected to vanish
/// at least linearly in lambda. Requires a non-degenerate target ground state.
ScalingReport verify_corollary1(const GadgetModel& g, std::vector<double> grid,
                                bool override_lambda_star = false,
                                const Tolerances& tol = Tolerances::defaults());

/// Measurement-gadget check: a_fit/lambda^3 -> 1 and residual exponent >= 4
/// within tolerance.
ScalingReport verify_theorem3(const GadgetModel& g, std::vector<double> grid,
                              bool override_lambda_max = false,
                              const Tolerances& tol = Tolerances::defaults());

/// || P0 H_eff(exact, shifted) P0 - A^(<=order) || on the unperturbed ground
/// block. The conjugation by the perturbed-basis operator is not constructed;
/// both sides are compared at the P0 level where it drops out up to the
/// next order.
double bloch_exact_deviation(const GadgetModel& g, double lambda, int order,
                             const Tolerances& tol = Tolerances::defaults());

/// Ordinary least squares for y = intercept + slope * x.
struct LineFit {
    double slope = 0;
    double intercept = 0;
    double slope_stderr = 0;
};
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

/// Geometric grid with `count` points from start to stop inclusive.
std::vector<double> geometric_grid(double start, double stop, int count);

}  // namespace qgad
