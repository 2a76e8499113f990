#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "qgad/config.hpp"
#include "qgad/pauli.hpp"

namespace qgad {

using Complex = std::complex<double>;
using DenseMatrix = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;
using SparseMatrix = Eigen::SparseMatrix<Complex>;

/// Basis convention used everywhere: bit q of a basis index is the state of
/// qubit q, so a full-register operator is kron(high qubits, ..., qubit 0).

enum class Storage { Auto, Dense, Sparse };

/// A materialized Hamiltonian. Dense up to dense_qubit_cap qubits, sparse
/// row-compressed beyond (matrix-vector products only).
class Operator {
  public:
    static constexpr int dense_qubit_cap = 14;
    static constexpr int sparse_qubit_cap = 26;

    int n_qubits() const { return n_qubits_; }
    Eigen::Index dim() const { return Eigen::Index(1) << n_qubits_; }
    bool is_dense() const { return is_dense_; }
    bool hermitian() const { return hermitian_; }
    const DenseMatrix& dense() const;
    const SparseMatrix& sparse() const;
    StateVector apply(const StateVector& x) const;

    friend Operator to_operator(const PauliSum& h, Storage storage);

  private:
    int n_qubits_ = 0;
    bool is_dense_ = true;
    bool hermitian_ = true;
    DenseMatrix dense_;
    SparseMatrix sparse_;
};

/// Materializes sum(c_s * tensor of Paulis). Auto picks dense storage up to
/// Operator::dense_qubit_cap qubits.
Operator to_operator(const PauliSum& h, Storage storage = Storage::Auto);

/// The d lowest eigenpairs of a Hermitian operator, values ascending.
struct Spectrum {
    Eigen::VectorXd values;           // size d
    DenseMatrix vectors;              // dim x d, orthonormal columns
    std::optional<double> gap_above;  // E_d - E_{d-1} when d < dim
    /// False when the split at the boundary is closer than
    /// degenerate_boundary * max(1, ||H||): the tracked subspace is then not
    /// well defined and verifiers must move their lambda grid.
    bool boundary_reliable = true;
};

/// Dense solver at or below the dense cap, restarted block Krylov with full
/// reorthogonalization above it. Throws NumericError on non-convergence.
Spectrum lowest_eigenpairs(const Operator& op, int d,
                           const Tolerances& tol = Tolerances::defaults());

class DensityOperator {
  public:
    DensityOperator(DenseMatrix rho, int n_qubits,
                    const Tolerances& tol = Tolerances::defaults());
    const DenseMatrix& matrix() const { return rho_; }
    int n_qubits() const { return n_qubits_; }

  private:
    DenseMatrix rho_;
    int n_qubits_ = 0;
};

/// Reduced state on `keep` (indices into the full register, any order;
/// output qubit i corresponds to keep[i]).
DensityOperator partial_trace(const StateVector& state, const std::vector<int>& keep,
                              int n_qubits, const Tolerances& tol = Tolerances::defaults());
DensityOperator partial_trace(const DensityOperator& rho, const std::vector<int>& keep,
                              const Tolerances& tol = Tolerances::defaults());

/// <psi|H|psi>. Asserts the imaginary part is below tol.hermitian_imag.
double expectation(const Operator& op, const StateVector& psi,
                   const Tolerances& tol = Tolerances::defaults());
/// Matrix-free expectation of a Pauli sum; the state may be wider than the
/// sum's declared register.
double expectation(const PauliSum& h, const StateVector& psi,
                   const Tolerances& tol = Tolerances::defaults());

/// Matrix-free application of a single Pauli string (phase included).
StateVector apply_pauli_string(const PauliString& p, const StateVector& psi);

enum class NormMode { Bound, Exact };

/// Bound: sum of |coefficients| (each Pauli string has unit norm).
/// Exact: largest singular value; requires the dense cap.
double operator_norm(const PauliSum& h, NormMode mode);

}  // namespace qgad
