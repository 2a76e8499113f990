#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "qgad/config.hpp"
#include "qgad/pauli.hpp"

namespace qgad {

enum class GadgetKind { ThreeLocal, KLocal, Recipe, Measurement };

std::string to_string(GadgetKind kind);
GadgetKind gadget_kind_from_string(const std::string& name);

/// A constructed gadget Hamiltonian H_aux + lambda * V together with its
/// register layout and convergence bound. Target qubits occupy 0..n_target-1,
/// auxiliary qubits n_target..total_qubits-1.
struct GadgetModel {
    GadgetKind kind = GadgetKind::ThreeLocal;
    PauliSum target;          ///< weight >= 1 terms, width n_target
    double scalar_shift = 0;  ///< identity part of the input, never gadgetized
    std::uint32_t n_target = 0;
    std::uint32_t total_qubits = 0;
    std::vector<std::vector<std::uint32_t>> aux_registers;  ///< one per target term; one pooled register for Measurement
    PauliSum h_aux;  ///< unperturbed part, width total_qubits
    PauliSum v;      ///< perturbation (coefficients folded in), width total_qubits
    int k_prime = 3;
    int order = 0;  ///< perturbative order at which the target is recovered
    double lambda_max = 0;
    double ground_energy_unperturbed = 0;
    std::vector<std::vector<int>> measurement_subsets;  ///< M_s; measurement gadgets only

    /// H_aux + lambda * V.
    PauliSum hamiltonian(double lambda) const;
    std::vector<int> target_qubit_list() const;
    std::vector<int> aux_qubit_list() const;
};

/// Convergence bound 1/4 * (sum_s |c_s| + r(k-1))^-1 with k the maximum term
/// weight and r the term count.
double lambda_max(const PauliSum& target);

/// Three-local gadget: one k-qubit register per term (k = max weight),
/// projector penalties, cyclic XX couplings; mixed weights are padded with
/// pure auxiliary terms so every term contributes at order k.
GadgetModel build_three_local(const PauliSum& target);

/// Locality-k' variant: each perturbation term bundles k'-2 target factors,
/// registers shrink to ceil(k/(k'-2)) qubits. k' = 3 reproduces
/// build_three_local exactly.
GadgetModel build_k_local(const PauliSum& target, int k_prime);

struct RecipeSpec {
    enum class CoefficientRule { FirstTerm, Spread };

    int register_width = 0;            ///< k
    PauliSum penalization;             ///< H on local qubits 0..k-1
    std::vector<PauliString> factors;  ///< a_1..a_k on the local register
    CoefficientRule rule = CoefficientRule::FirstTerm;
};

/// The penalization/perturbation pair this library's own gadget is built from.
RecipeSpec def1_recipe(int k);
/// Pairwise ZZ penalties with single-X perturbation factors; rejected by the
/// validator because the penalization ground space is two-dimensional.
RecipeSpec jordan_farhi_recipe(int k);

struct RecipeCheck {
    std::string name;
    bool passed = false;
    std::string witness;        ///< offending subset / deviation magnitude; empty when passed
    int witness_dimension = 0;  ///< ground-space dimension for the uniqueness check
};

struct RecipeReport {
    std::vector<RecipeCheck> checks;
    bool passed = false;
};

/// Brute-force validation of the recipe conditions on a <=12 qubit register:
/// (i) unique ground state, (ii) the full factor product fixes it,
/// (iii) all proper sub-products (index order) have zero ground matrix
/// element, (iv) every factor squares to identity.
RecipeReport validate_recipe(const RecipeSpec& spec,
                             const Tolerances& tol = Tolerances::defaults());

GadgetModel build_from_recipe(const PauliSum& target, const RecipeSpec& spec,
                              const Tolerances& tol = Tolerances::defaults());

/// Axis-homogeneous parts with disjoint supports; x*y*z reconstructs the
/// input with phase +1.
std::array<PauliString, 3> decompose_xyz(const PauliString& term);

struct MeasurementLayout {
    int q = 0;                              ///< auxiliary width (even)
    std::vector<std::vector<int>> subsets;  ///< M_s, odd subsets of {1..q/2}
    std::vector<double> c_tilde;            ///< cbrt(c_s |M_s|^2)
};

/// Readout gadget: -sum Z penalties on q = 2(ceil(log2 r)+1) auxiliaries,
/// X/Y/Z parts of each term coupled through paired tau operators. Recovers
/// the target at third order.
GadgetModel build_measurement_gadget(const PauliSum& target);
/// Same with an explicit subset assignment (M_s must be distinct and odd).
GadgetModel build_measurement_gadget(const PauliSum& target,
                                     const std::vector<std::vector<int>>& subsets);
MeasurementLayout measurement_layout(const GadgetModel& g);

/// Partition of all gadget terms into at most four qubitwise-commuting
/// measurement groups: aux-Z, then target-X/Y/Z against aux-X. Empty groups
/// are dropped.
std::vector<std::vector<PauliTerm>> measurement_groups(const GadgetModel& g);

/// Permutation (old index -> new index) that places each auxiliary qubit
/// right after the target qubit its coupling acts on. ThreeLocal only.
std::vector<std::uint32_t> interleave_order(const GadgetModel& g);

/// Relabels every qubit of a sum through perm (old -> new).
PauliSum apply_permutation(const PauliSum& sum, const std::vector<std::uint32_t>& perm);

}  // namespace qgad
