#include "doctest.h"

#include <cmath>

#include "oracles.hpp"
#include "qgad/errors.hpp"
#include "qgad/gadgets.hpp"
#include "qgad/perturbation.hpp"

using namespace qgad;

TEST_SUITE_BEGIN("perturbation");

TEST_CASE("staircase tuples for the lowest orders") {
    CHECK(staircase_indices(1, Series::A) == std::vector<std::vector<int>>{{}});
    CHECK(staircase_indices(2, Series::A) == std::vector<std::vector<int>>{{1}});
    CHECK(staircase_indices(3, Series::A) == std::vector<std::vector<int>>{{1, 1}, {2, 0}});
    CHECK(staircase_indices(1, Series::U) == std::vector<std::vector<int>>{{1}});
    CHECK(staircase_indices(2, Series::U) == std::vector<std::vector<int>>{{1, 1}, {2, 0}});
}

TEST_CASE("staircase enumeration equals the exhaustive filter") {
    for (int m = 1; m <= 8; ++m) {
        CHECK(staircase_indices(m, Series::A) == oracle::exhaustive_staircases(m - 1, m - 1, m - 2));
        CHECK(staircase_indices(m, Series::U) == oracle::exhaustive_staircases(m, m, m - 1));
    }
    CHECK_THROWS_AS(staircase_indices(13, Series::A), DimensionError);
}

TEST_CASE("resolvent powers of the projector penalty") {
    const GadgetModel g = build_three_local(parse_pauli_sum("1.0 [Z0 Z1 Z2]"));
    const Operator h0 = to_operator(g.h_aux, Storage::Dense);
    const UnperturbedSystem sys(h0);
    CHECK(sys.ground_energy() == doctest::Approx(0.0));
    CHECK(sys.gap() == doctest::Approx(1.0));

    const DenseMatrix s1 = sys.resolvent_power(1);
    // diagonal -1/w on auxiliary Hamming weight w, zero on the ground block
    for (int aux = 0; aux < 8; ++aux) {
        const int w = __builtin_popcount(aux);
        for (int t = 0; t < 8; ++t) {
            const Eigen::Index idx = aux * 8 + t;
            const double expected = (w == 0) ? 0.0 : -1.0 / w;
            CHECK(s1(idx, idx).real() == doctest::Approx(expected).epsilon(1e-14));
        }
    }

    const DenseMatrix s0 = sys.resolvent_power(0);
    CHECK((s0 + sys.ground_projector()).norm() == doctest::Approx(0.0));

    // S^l P0 = 0 for l > 0
    CHECK((s1 * sys.ground_projector()).norm() == doctest::Approx(0.0).epsilon(1e-14));

    // gapless input is rejected
    const PauliSum id = parse_pauli_sum("qubits: 2\n1.0 []");
    CHECK_THROWS_AS(UnperturbedSystem(to_operator(id, Storage::Dense)), NumericError);
}

TEST_CASE("first orders of the expansion for the single-term gadget") {
    const GadgetModel g = build_three_local(parse_pauli_sum("1.0 [Z0 Z1 Z2]"));
    const Operator h0 = to_operator(g.h_aux, Storage::Dense);
    const Operator v = to_operator(g.v, Storage::Dense);
    const double lambda = 0.01;
    const BlochResult bloch = bloch_expansion(h0, v, lambda, 3);
    CHECK_FALSE(bloch.convergence_warning);

    // every v term expels the ground space: A^(1) = 0 exactly
    CHECK(bloch.per_order[0].norm() == 0.0);

    // A^(<=2) = -(lambda^2 k / 2) P0
    const UnperturbedSystem sys(h0);
    const DenseMatrix expected = -lambda * lambda * 1.5 * sys.ground_projector();
    CHECK((bloch.per_order[0] + bloch.per_order[1] - expected).norm() < 1e-10);

    // A^(3) = (lambda^3 / Xi) H_target (x) P_plus with Xi = 2/3
    const double xi = xi_constant(3);
    CHECK(xi == doctest::Approx(2.0 / 3.0));
    DenseMatrix target_block = DenseMatrix::Zero(64, 64);
    const DenseMatrix target = oracle::sum_matrix(g.target, 3);
    target_block.topLeftCorner(8, 8) = target;  // auxiliaries |000> occupy the lowest block
    CHECK((bloch.per_order[2] - std::pow(lambda, 3) / xi * target_block).norm() < 1e-12);
}

TEST_CASE("expansion warns outside the convergence region") {
    const GadgetModel g = build_three_local(parse_pauli_sum("1.0 [Z0 Z1 Z2]"));
    const Operator h0 = to_operator(g.h_aux, Storage::Dense);
    const Operator v = to_operator(g.v, Storage::Dense);
    const BlochResult bloch = bloch_expansion(h0, v, 1.0, 2);
    CHECK(bloch.convergence_warning);
}

TEST_CASE("xi constant enumerates application orders") {
    // k = 3: six orders, every one with intermediate weights (2, 2)
    CHECK(xi_constant(3) == doctest::Approx(2.0 / 3.0));
    // k = 2: two orders, single intermediate of weight 2
    CHECK(xi_constant(2) == doctest::Approx(1.0));
    CHECK_THROWS_AS(xi_constant(1), DimensionError);
    CHECK_THROWS_AS(xi_constant(11), DimensionError);

    // sub-exponential growth of |log Xi| on the supported range
    for (int k = 2; k <= 8; ++k) {
        const double xi = xi_constant(k);
        CHECK(xi > 0);
        CHECK(std::abs(std::log(xi)) <= 2.0 * k * std::log(k + 1.0));
    }
}

TEST_CASE("xi matches the coefficient extracted from exact diagonalization") {
    for (int k : {2, 3}) {
        std::string text = "1.0 [";
        for (int j = 0; j < k; ++j) text += "Z" + std::to_string(j) + " ";
        text.back() = ']';
        const GadgetModel g = build_three_local(parse_pauli_sum(text));
        const double lambda = g.lambda_max / 10;
        const EffectiveDecomposition dec = effective_hamiltonian(g, lambda);
        CHECK(dec.a_fit * xi_constant(k) / std::pow(lambda, k) ==
              doctest::Approx(1.0).epsilon(0.01));
    }
}

TEST_CASE("xi matches the fourth-order expansion coefficient") {
    const GadgetModel g = build_three_local(parse_pauli_sum("1.0 [Z0 Z1 Z2 Z3]"));
    const Operator h0 = to_operator(g.h_aux, Storage::Dense);
    const Operator v = to_operator(g.v, Storage::Dense);
    const BlochResult bloch = bloch_expansion(h0, v, 1.0, 4);
    // On the auxiliary ground block the order-4 coefficient is
    // alpha_4 * I + (1/Xi) * H_target; projecting onto the traceless target
    // direction isolates 1/Xi.
    const DenseMatrix target = oracle::sum_matrix(g.target, 4);
    const DenseMatrix block = bloch.per_order[3].topLeftCorner(16, 16);
    const double coefficient =
        (target.adjoint() * block).trace().real() / (target.adjoint() * target).trace().real();
    CHECK(coefficient * xi_constant(4) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("shift polynomial of the single-term gadget") {
    const GadgetModel g = build_three_local(parse_pauli_sum("1.0 [Z0 Z1 Z2]"));
    const auto alpha = shift_polynomial(g, 2);
    REQUIRE(alpha.size() == 3);
    CHECK(alpha[1] == doctest::Approx(0.0));        // A^(1) = 0
    CHECK(alpha[2] == doctest::Approx(-1.5));       // -k/2
    CHECK_THROWS_AS(shift_polynomial(g, 3), ValidationError);  // order >= k

    // odd orders vanish for homogeneous weight-4 gadgets
    const GadgetModel g4 = build_three_local(parse_pauli_sum("1.0 [Z0 Z1 Z2 Z3]"));
    const auto alpha4 = shift_polynomial(g4, 3);
    CHECK(alpha4[2] == doctest::Approx(-2.0));
    CHECK(alpha4[3] == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("effective decomposition vanishes with lambda") {
    const GadgetModel g = build_three_local(parse_pauli_sum("1.0 [Z0 Z1 Z2]"));
    const EffectiveDecomposition dec = effective_hamiltonian(g, 1e-5);
    CHECK(std::abs(dec.a_fit) < 1e-9);
    CHECK(std::abs(dec.b_fit) < 1e-9);
    CHECK(dec.residual < 1e-9);
    CHECK(dec.overlap > 0.99);
    CHECK(dec.d == 8);
}

TEST_CASE("b_fit tracks the shift polynomial") {
    const GadgetModel g = build_three_local(parse_pauli_sum("1.0 [Z0 Z1 Z2]"));
    const auto alpha = shift_polynomial(g, 2);
    for (double lambda : {0.005, 0.01, 0.02}) {
        const EffectiveDecomposition dec = effective_hamiltonian(g, lambda);
        CHECK(std::abs(dec.b_fit - alpha[2] * lambda * lambda) <
              50 * std::pow(lambda, 4) + 1e-12);
    }
}

TEST_CASE("spread coefficients give the same effective target coupling") {
    const PauliSum target = parse_pauli_sum("0.7 [Z0 X1 Z2]");
    RecipeSpec spread = def1_recipe(3);
    spread.rule = RecipeSpec::CoefficientRule::Spread;
    const GadgetModel a = build_from_recipe(target, def1_recipe(3));
    const GadgetModel b = build_from_recipe(target, spread);
    const EffectiveDecomposition da = effective_hamiltonian(a, 0.01);
    const EffectiveDecomposition db = effective_hamiltonian(b, 0.01);
    CHECK(da.a_fit == doctest::Approx(db.a_fit).epsilon(1e-3));
}

TEST_CASE("theorem-1 verifier passes the two-body gadget") {
    const GadgetModel g = build_three_local(parse_pauli_sum("1.0 [Z0 Z1]"));
    const auto grid = geometric_grid(g.lambda_max / 20, g.lambda_max / 2, 5);
    const ScalingReport report = verify_theorem1(g, grid);
    CHECK(report.passed);
    CHECK(report.fitted_exponent == doctest::Approx(3.0).epsilon(0.1));
    for (const auto& dec : report.decompositions) CHECK(dec.a_fit > 0);
}

TEST_CASE("theorem-1 verifier guards the grid") {
    const GadgetModel g = build_three_local(parse_pauli_sum("1.0 [Z0 Z1]"));
    CHECK_THROWS_AS(verify_theorem1(g, {g.lambda_max / 2, 2 * g.lambda_max}), ValidationError);
    CHECK_NOTHROW(verify_theorem1(g, {g.lambda_max / 2, 2 * g.lambda_max}, true));
    const GadgetModel passthrough = build_three_local(parse_pauli_sum("1.0 [X0]"));
    CHECK_THROWS_AS(verify_theorem1(passthrough, {0.01, 0.02}), ValidationError);
}

TEST_CASE("corollary-1 verifier rejects degenerate targets") {
    const GadgetModel g = build_three_local(parse_pauli_sum("1.0 [Z0 Z1 Z2]"));
    const auto grid = geometric_grid(g.lambda_max / 20, g.lambda_max / 2, 5);
    CHECK_THROWS_AS(verify_corollary1(g, grid), NumericError);
    try {
        verify_corollary1(g, grid);
    } catch (const NumericError& e) {
        CHECK(std::string(e.what()).find("degenerate target ground space") != std::string::npos);
    }
}

TEST_CASE("corollary-1 verifier passes a non-degenerate transverse-field target") {
    const PauliSum target = parse_pauli_sum("1.0 [Z0 Z1]\n0.3 [X0]\n0.2 [X1]");
    {
        // unique ground state by construction; double-check the gap
        const Operator op = to_operator(target, Storage::Dense);
        Eigen::SelfAdjointEigenSolver<DenseMatrix> es(op.dense(), Eigen::EigenvaluesOnly);
        REQUIRE(es.eigenvalues()(1) - es.eigenvalues()(0) > 1e-3);
    }
    const GadgetModel g = build_three_local(target);
    const auto grid = geometric_grid(g.lambda_max / 20, g.lambda_max / 2, 5);
    const ScalingReport report = verify_corollary1(g, grid);
    CHECK(report.passed);
    CHECK(report.fitted_exponent >= 0.8);
    CHECK(std::is_sorted(report.distances.begin(), report.distances.end()));
    CHECK(report.distances.front() < report.distances.back());
}

TEST_CASE("third-order coefficient is independent of the subset assignment") {
    const PauliSum target = parse_pauli_sum("0.8 [X0 Z1]\n-0.5 [Y0]\n0.3 [Z0 Z1]");
    const GadgetModel a = build_measurement_gadget(target);
    REQUIRE(a.measurement_subsets.size() == 3);
    std::vector<std::vector<int>> permuted = {a.measurement_subsets[2], a.measurement_subsets[0],
                                              a.measurement_subsets[1]};
    const GadgetModel b = build_measurement_gadget(target, permuted);
    const double lambda = std::min(a.lambda_max, b.lambda_max) / 10;
    const EffectiveDecomposition da = effective_hamiltonian(a, lambda);
    const EffectiveDecomposition db = effective_hamiltonian(b, lambda);
    CHECK(da.a_fit == doctest::Approx(db.a_fit).epsilon(1e-4));
}

TEST_CASE("theorem-3 verifier checks the measurement gadget") {
    const GadgetModel g = build_measurement_gadget(parse_pauli_sum("1.0 [X0 Y1 Z2]"));
    const auto grid = geometric_grid(g.lambda_max / 20, g.lambda_max / 2, 5);
    const ScalingReport report = verify_theorem3(g, grid);
    CHECK(report.passed);
    CHECK(report.fitted_exponent >= 3.7);

    const GadgetModel wrong = build_three_local(parse_pauli_sum("1.0 [Z0 Z1]"));
    CHECK_THROWS_AS(verify_theorem3(wrong, grid), ValidationError);
}

TEST_CASE("low orders of the expansion stay proportional to the ground projector") {
    SplitMix64 rng(83);
    for (int trial = 0; trial < 3; ++trial) {
        const PauliString s = oracle::random_string(rng, 3, 3);
        if (s.weight() < 3) continue;
        const GadgetModel g = build_three_local(
            PauliSum::from_terms({{1.0 + rng.uniform(0.0, 1.0), s}}, 3));
        const Operator h0 = to_operator(g.h_aux, Storage::Dense);
        const Operator v = to_operator(g.v, Storage::Dense);
        const UnperturbedSystem sys(h0);
        const BlochResult bloch = bloch_expansion(h0, v, 0.02, 2);
        for (const auto& am : bloch.per_order) {
            const DenseMatrix p0 = sys.ground_projector();
            CHECK((p0 * am * p0 - am).norm() < 1e-10 * std::max(1.0, am.norm()));
        }
    }
}

TEST_CASE("exact and perturbative effective Hamiltonians agree at the tracked order") {
    // Halving lambda should shrink the deviation by ~2^(order+1) on small
    // instances of every shape: k in {2, 3}, r in {1, 2}.
    struct Instance {
        const char* text;
        int order;
    };
    const Instance instances[] = {
        {"1.0 [Z0 Z1 Z2]", 3},
        {"1.0 [X0 Y1 Z2]", 3},
        {"0.8 [Z0 Z1 Z2]\n0.5 [X0 X1 X2]", 3},
        {"1.0 [Z0 Z1]", 2},
        {"1.0 [Z0 Z1]\n0.6 [X1 X2]", 2},
    };
    for (const Instance& inst : instances) {
        const GadgetModel g = build_three_local(parse_pauli_sum(inst.text));
        const double lambda = g.lambda_max / 4;
        const double d1 = bloch_exact_deviation(g, lambda, inst.order);
        const double d2 = bloch_exact_deviation(g, lambda / 2, inst.order);
        const double slope = std::log2(d1 / d2);
        // At least order+1; the k=2 cycle decays one order faster still
        // because odd orders vanish (two identical couplings per register).
        CHECK(slope >= inst.order + 1 - 0.3);
        CHECK(slope <= inst.order + 3);
    }
}

TEST_SUITE_END();
