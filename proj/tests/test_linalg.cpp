#include "doctest.h"

#include <Eigen/Eigenvalues>

#include "oracles.hpp"
#include "qgad/errors.hpp"
#include "qgad/gadgets.hpp"
#include "qgad/linalg.hpp"

using namespace qgad;

namespace {

/// Independent partial-trace oracle: iterates over all full-index pairs and
/// accumulates entries whose environment bits agree.
DenseMatrix reshape_trace_oracle(const StateVector& psi, const std::vector<int>& keep, int n) {
    const auto dim = static_cast<std::uint64_t>(psi.size());
    const auto dk = std::uint64_t(1) << keep.size();
    auto gather = [&](std::uint64_t full) {
        std::uint64_t out = 0;
        for (std::size_t i = 0; i < keep.size(); ++i)
            if (full >> keep[i] & 1) out |= 1ULL << i;
        return out;
    };
    std::uint64_t keep_mask = 0;
    for (int q : keep) keep_mask |= 1ULL << q;
    const std::uint64_t env_mask = ((n >= 64 ? 0 : (1ULL << n)) - 1) & ~keep_mask;
    DenseMatrix rho = DenseMatrix::Zero(static_cast<Eigen::Index>(dk), static_cast<Eigen::Index>(dk));
    for (std::uint64_t i = 0; i < dim; ++i)
        for (std::uint64_t j = 0; j < dim; ++j)
            if ((i & env_mask) == (j & env_mask))
                rho(static_cast<Eigen::Index>(gather(i)), static_cast<Eigen::Index>(gather(j))) +=
                    psi(static_cast<Eigen::Index>(i)) * std::conj(psi(static_cast<Eigen::Index>(j)));
    return rho;
}

StateVector random_state(SplitMix64& rng, int n) {
    StateVector psi(Eigen::Index(1) << n);
    for (Eigen::Index i = 0; i < psi.size(); ++i)
        psi(i) = Complex(rng.uniform(-1, 1), rng.uniform(-1, 1));
    psi.normalize();
    return psi;
}

}  // namespace

TEST_SUITE_BEGIN("linalg");

TEST_CASE("projector term materializes as diag(0, 1)") {
    const PauliSum proj = parse_pauli_sum("0.5 []\n-0.5 [Z0]");
    const Operator op = to_operator(proj);
    CHECK(op.dense()(0, 0) == Complex(0, 0));
    CHECK(op.dense()(1, 1) == Complex(1, 0));
    CHECK(op.dense()(0, 1) == Complex(0, 0));
}

TEST_CASE("projector sum is the Hamming-weight diagonal") {
    // sum_j |1><1|_j on 3 qubits
    PauliSum sum = PauliSum::zero(3);
    for (std::uint32_t j = 0; j < 3; ++j)
        sum += PauliSum::from_terms({{0.5, PauliString()}, {-0.5, PauliString::single(Axis::Z, j)}}, 3);
    const Operator op = to_operator(sum);
    for (int b = 0; b < 8; ++b)
        CHECK(op.dense()(b, b).real() == doctest::Approx(__builtin_popcount(b)).epsilon(1e-15));
}

TEST_CASE("X is the off-diagonal unit matrix") {
    const Operator op = to_operator(parse_pauli_sum("1.0 [X0]"));
    CHECK(op.dense()(0, 1) == Complex(1, 0));
    CHECK(op.dense()(1, 0) == Complex(1, 0));
    CHECK(op.dense()(0, 0) == Complex(0, 0));
}

TEST_CASE("materialization matches the kron oracle") {
    SplitMix64 rng(23);
    for (int trial = 0; trial < 20; ++trial) {
        const PauliSum h = oracle::random_sum(rng, 5, 4, 4);
        const Operator op = to_operator(h);
        CHECK((op.dense() - oracle::sum_matrix(h, 5)).norm() < 1e-12);
    }
}

TEST_CASE("sparse storage agrees with dense") {
    SplitMix64 rng(29);
    const PauliSum h = oracle::random_sum(rng, 6, 6, 4);
    const Operator dense = to_operator(h, Storage::Dense);
    const Operator sparse = to_operator(h, Storage::Sparse);
    const StateVector psi = random_state(rng, 6);
    CHECK((dense.apply(psi) - sparse.apply(psi)).norm() < 1e-12);
}

TEST_CASE("dense eigensolver matches the oracle and meets its invariants") {
    SplitMix64 rng(31);
    const Tolerances& tol = Tolerances::defaults();
    for (int trial = 0; trial < 10; ++trial) {
        const PauliSum h = oracle::random_sum(rng, 5, 5, 4);
        const Operator op = to_operator(h);
        const Spectrum spec = lowest_eigenpairs(op, 6);

        Eigen::SelfAdjointEigenSolver<DenseMatrix> es(oracle::sum_matrix(h, 5));
        const double norm = operator_norm(h, NormMode::Exact);
        for (int j = 0; j < 6; ++j) {
            CHECK(spec.values(j) == doctest::Approx(es.eigenvalues()(j)).epsilon(1e-10));
            const double residual =
                (op.dense() * spec.vectors.col(j) - spec.values(j) * spec.vectors.col(j)).norm();
            CHECK(residual <= tol.eigen_residual * std::max(1.0, norm));
        }
        const DenseMatrix gram = spec.vectors.adjoint() * spec.vectors;
        CHECK((gram - DenseMatrix::Identity(6, 6)).norm() < tol.orthonormality * 6);
    }
}

TEST_CASE("iterative solver agrees with dense diagonalization on 8 qubits") {
    SplitMix64 rng(37);
    for (int trial = 0; trial < 3; ++trial) {
        const PauliSum h = oracle::random_sum(rng, 8, 8, 5);
        const Operator dense = to_operator(h, Storage::Dense);
        const Operator sparse = to_operator(h, Storage::Sparse);
        const Spectrum ds = lowest_eigenpairs(dense, 4);
        const Spectrum ss = lowest_eigenpairs(sparse, 4);
        for (int j = 0; j < 4; ++j)
            CHECK(ss.values(j) == doctest::Approx(ds.values(j)).epsilon(1e-8));
    }
}

TEST_CASE("identity operator yields degenerate unit eigenvalues") {
    const PauliSum id = parse_pauli_sum("qubits: 2\n1.0 []");
    const Spectrum spec = lowest_eigenpairs(to_operator(id), 3);
    for (int j = 0; j < 3; ++j) CHECK(spec.values(j) == doctest::Approx(1.0));
    CHECK_FALSE(spec.boundary_reliable);  // boundary inside a degenerate level
}

TEST_CASE("gadget penalty Hamiltonians have the advertised ground data") {
    const GadgetModel g3 = build_three_local(parse_pauli_sum("1.0 [Z0 Z1 Z2]"));
    const Spectrum s3 = lowest_eigenpairs(to_operator(g3.h_aux), 1);
    CHECK(s3.values(0) == doctest::Approx(0.0).epsilon(1e-14));

    const GadgetModel gm = build_measurement_gadget(parse_pauli_sum("1.0 [X0 Y1 Z2]"));
    const int q = static_cast<int>(gm.total_qubits - gm.n_target);
    const Spectrum sm = lowest_eigenpairs(to_operator(gm.h_aux), 1);
    CHECK(sm.values(0) == doctest::Approx(-q).epsilon(1e-14));
    CHECK(gm.ground_energy_unperturbed == doctest::Approx(-q));
}

TEST_CASE("partial trace of a product state is the pure reduced state") {
    SplitMix64 rng(41);
    StateVector psi = random_state(rng, 2);
    StateVector full = StateVector::Zero(16);
    full.head(4) = psi;  // aux qubits 2,3 in |00>
    const DensityOperator rho = partial_trace(full, {0, 1}, 4);
    CHECK((rho.matrix() - psi * psi.adjoint()).norm() < 1e-12);
}

TEST_CASE("partial trace of a Bell pair is maximally mixed") {
    StateVector bell = StateVector::Zero(4);
    bell(0) = bell(3) = 1.0 / std::sqrt(2.0);
    const DensityOperator rho = partial_trace(bell, {0}, 2);
    CHECK((rho.matrix() - DenseMatrix::Identity(2, 2) / 2).norm() < 1e-12);
}

TEST_CASE("partial trace matches the reshape oracle on random states") {
    SplitMix64 rng(43);
    for (int trial = 0; trial < 20; ++trial) {
        const StateVector psi = random_state(rng, 4);
        const DensityOperator rho = partial_trace(psi, {0, 1}, 4);
        CHECK((rho.matrix() - reshape_trace_oracle(psi, {0, 1}, 4)).norm() < 1e-12);
        const DensityOperator swapped = partial_trace(psi, {3, 1}, 4);
        CHECK((swapped.matrix() - reshape_trace_oracle(psi, {3, 1}, 4)).norm() < 1e-12);
    }
}

TEST_CASE("partial trace preserves trace and positivity") {
    SplitMix64 rng(47);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 2 + static_cast<int>(rng.uniform_index(5));
        const StateVector psi = random_state(rng, n);
        std::vector<int> keep = {static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(n)))};
        const DensityOperator rho = partial_trace(psi, keep, n);  // ctor checks the trace
        Eigen::SelfAdjointEigenSolver<DenseMatrix> es(rho.matrix(), Eigen::EigenvaluesOnly);
        CHECK(es.eigenvalues()(0) >= -Tolerances::defaults().density_psd);
    }
}

TEST_CASE("expectation basics") {
    StateVector zero = StateVector::Zero(2);
    zero(0) = 1;
    CHECK(expectation(parse_pauli_sum("1.0 [Z0]"), zero) == doctest::Approx(1.0));

    StateVector ones = StateVector::Zero(32);
    ones(31) = 1;
    CHECK(expectation(parse_pauli_sum("1.0 [Z0 Z1 Z2 Z3 Z4]"), ones) == doctest::Approx(-1.0));
}

TEST_CASE("gadget ground expectation is self-consistent") {
    const GadgetModel g = build_three_local(parse_pauli_sum("1.0 [Z0 Z1 Z2]"));
    const PauliSum h = g.hamiltonian(0.02);
    const Operator op = to_operator(h);
    const Spectrum spec = lowest_eigenpairs(op, 1);
    CHECK(expectation(op, spec.vectors.col(0)) == doctest::Approx(spec.values(0)).epsilon(1e-10));
}

TEST_CASE("operator norms") {
    CHECK(operator_norm(parse_pauli_sum("1.0 [X0 X1]"), NormMode::Bound) == doctest::Approx(1.0));
    CHECK(operator_norm(parse_pauli_sum("1.0 [X0 X1]"), NormMode::Exact) == doctest::Approx(1.0));

    const GadgetModel g = build_three_local(parse_pauli_sum("1.0 [Z0 Z1 Z2]"));
    CHECK(operator_norm(g.v, NormMode::Bound) == doctest::Approx(3.0));

    const PauliSum xz = parse_pauli_sum("1.0 [X0]\n1.0 [Z0]");
    CHECK(operator_norm(xz, NormMode::Bound) == doctest::Approx(2.0));
    CHECK(operator_norm(xz, NormMode::Exact) == doctest::Approx(std::sqrt(2.0)));

    SplitMix64 rng(53);
    for (int trial = 0; trial < 10; ++trial) {
        const PauliSum h = oracle::random_sum(rng, 4, 4, 3);
        CHECK(operator_norm(h, NormMode::Bound) >=
              operator_norm(h, NormMode::Exact) - 1e-12);
    }
}

TEST_CASE("caps are enforced") {
    const PauliSum wide = parse_pauli_sum("qubits: 16\n1.0 [Z0]");
    CHECK_THROWS_AS(to_operator(wide, Storage::Dense), DimensionError);
    CHECK_THROWS_AS(operator_norm(wide, NormMode::Exact), DimensionError);
    CHECK_NOTHROW(to_operator(wide, Storage::Sparse));
}

TEST_SUITE_END();
