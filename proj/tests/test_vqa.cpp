#include "doctest.h"

#include <cmath>

#include "oracles.hpp"
#include "qgad/errors.hpp"
#include "qgad/gadgets.hpp"
#include "qgad/vqa.hpp"

using namespace qgad;

namespace {

constexpr double kPi = 3.14159265358979323846;

/// Dense matrix-chain oracle for the layered circuit.
oracle::Matrix rotation_2x2(Axis axis, double theta) {
    const Complex c(std::cos(theta / 2), 0);
    const Complex ms(0, -std::sin(theta / 2));
    return c * oracle::Matrix::Identity(2, 2) + ms * oracle::pauli_2x2(axis);
}

oracle::Matrix one_qubit_gate(const oracle::Matrix& gate, std::uint32_t qubit, int n) {
    oracle::Matrix out = oracle::Matrix::Identity(1, 1);
    for (int q = n - 1; q >= 0; --q)
        out = oracle::kron(out, q == static_cast<int>(qubit) ? gate
                                                             : oracle::Matrix::Identity(2, 2));
    return out;
}

StateVector circuit_oracle(const Ansatz& a, const std::vector<double>& params) {
    const int n = static_cast<int>(a.n_qubits);
    const Eigen::Index dim = Eigen::Index(1) << n;
    oracle::Matrix u = oracle::Matrix::Identity(dim, dim);
    for (std::uint32_t layer = 0; layer < a.layers; ++layer) {
        for (std::uint32_t slot = 0; slot < a.n_qubits; ++slot) {
            const std::size_t idx = layer * a.n_qubits + slot;
            u = one_qubit_gate(rotation_2x2(a.axes[idx], params[idx]), a.qubit_order[slot], n) * u;
        }
        for (std::uint32_t slot = 0; slot + 1 < a.n_qubits; ++slot) {
            oracle::Matrix cz = oracle::Matrix::Identity(dim, dim);
            const std::uint64_t mask =
                (1ULL << a.qubit_order[slot]) | (1ULL << a.qubit_order[slot + 1]);
            for (Eigen::Index b = 0; b < dim; ++b)
                if ((static_cast<std::uint64_t>(b) & mask) == mask) cz(b, b) = -1;
            u = cz * u;
        }
    }
    StateVector zero = StateVector::Zero(dim);
    zero(0) = 1;
    return u * zero;
}

std::vector<double> finite_difference(const Ansatz& a, const std::vector<double>& params,
                                      const PauliSum& h, double step) {
    std::vector<double> grad(params.size());
    std::vector<double> shifted = params;
    for (std::size_t nu = 0; nu < params.size(); ++nu) {
        shifted[nu] = params[nu] + step;
        const double plus = evaluate_cost(a, shifted, h);
        shifted[nu] = params[nu] - step;
        const double minus = evaluate_cost(a, shifted, h);
        shifted[nu] = params[nu];
        grad[nu] = (plus - minus) / (2 * step);
    }
    return grad;
}

}  // namespace

TEST_SUITE_BEGIN("vqa");

TEST_CASE("ansatz structure and determinism") {
    const Ansatz small = build_ansatz(2, 1, 0);
    CHECK(small.parameter_count() == 2);
    const Ansatz again = build_ansatz(2, 1, 0);
    CHECK(small.axes == again.axes);

    const Ansatz other = build_ansatz(2, 1, 12345);
    (void)other;  // different seed may or may not change two axes; determinism is the contract

    const Ansatz big = build_ansatz(13, 10, 42);
    CHECK(big.parameter_count() == 130);

    CHECK_THROWS_AS(build_ansatz(3, 2, 0, {0, 1}), ValidationError);
    CHECK_THROWS_AS(build_ansatz(3, 2, 0, {0, 1, 1}), ValidationError);
}

TEST_CASE("zero parameters leave the all-zeros state invariant") {
    for (std::uint32_t n : {2u, 4u}) {
        const Ansatz a = build_ansatz(n, 3, 7);
        std::vector<double> params(a.parameter_count(), 0.0);
        std::string text = "1.0 [";
        for (std::uint32_t q = 0; q < n; ++q) text += "Z" + std::to_string(q) + " ";
        text.back() = ']';
        CHECK(evaluate_cost(a, params, parse_pauli_sum(text)) == doctest::Approx(1.0));
    }
}

TEST_CASE("identity Hamiltonians cost their coefficient and have zero gradient") {
    const Ansatz a = build_ansatz(3, 2, 9);
    SplitMix64 rng(91);
    std::vector<double> params(a.parameter_count());
    for (auto& p : params) p = rng.uniform(0, 2 * kPi);
    const PauliSum id = parse_pauli_sum("qubits: 3\n-0.75 []");
    CHECK(evaluate_cost(a, params, id) == doctest::Approx(-0.75));
    for (double gcomp : gradient(a, params, id)) CHECK(gcomp == doctest::Approx(0.0));
}

TEST_CASE("random circuits match the dense matrix-chain oracle") {
    SplitMix64 rng(97);
    for (int trial = 0; trial < 5; ++trial) {
        const auto n = static_cast<std::uint32_t>(2 + rng.uniform_index(4));
        const Ansatz a = build_ansatz(n, 2 + static_cast<std::uint32_t>(rng.uniform_index(2)),
                                      rng.next());
        std::vector<double> params(a.parameter_count());
        for (auto& p : params) p = rng.uniform(0, 2 * kPi);
        const StateVector fast = run_circuit(a, params);
        const StateVector slow = circuit_oracle(a, params);
        CHECK((fast - slow).norm() < 1e-12);
        CHECK(fast.norm() == doctest::Approx(1.0).epsilon(1e-12));

        const PauliSum h = oracle::random_sum(rng, static_cast<int>(n), 3, static_cast<int>(n));
        const double direct = evaluate_cost(a, params, h);
        const Complex via_oracle = slow.dot(oracle::sum_matrix(h, static_cast<int>(n)) * slow);
        CHECK(direct == doctest::Approx(via_oracle.real()).epsilon(1e-12));
    }
}

TEST_CASE("parameter-shift equals finite differences") {
    SplitMix64 rng(101);
    for (int trial = 0; trial < 20; ++trial) {
        const auto n = static_cast<std::uint32_t>(2 + rng.uniform_index(3));
        const Ansatz a = build_ansatz(n, 2, rng.next());
        std::vector<double> params(a.parameter_count());
        for (auto& p : params) p = rng.uniform(0, 2 * kPi);
        const PauliSum h = oracle::random_sum(rng, static_cast<int>(n), 3, static_cast<int>(n));
        const auto shift = gradient(a, params, h);
        const auto fd = finite_difference(a, params, h, 1e-5);
        for (std::size_t nu = 0; nu < shift.size(); ++nu)
            CHECK(shift[nu] == doctest::Approx(fd[nu]).epsilon(0).scale(1).epsilon(1e-6));
    }
}

TEST_CASE("single-qubit closed form: cost cos(theta), derivative -sin(theta)") {
    Ansatz a = build_ansatz(1, 1, 0);
    a.axes = {Axis::X};
    const PauliSum z = parse_pauli_sum("1.0 [Z0]");
    std::vector<double> at_zero = {0.0};
    CHECK(gradient(a, at_zero, z)[0] == doctest::Approx(0.0));
    std::vector<double> at_half_pi = {kPi / 2};
    CHECK(evaluate_cost(a, at_half_pi, z) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(gradient(a, at_half_pi, z)[0] == doctest::Approx(-1.0));
}

TEST_CASE("cost is invariant under simultaneous relabeling") {
    SplitMix64 rng(103);
    for (int trial = 0; trial < 5; ++trial) {
        const std::uint32_t n = 4;
        std::vector<std::uint32_t> relabel = {2, 0, 3, 1};  // m: old -> new
        const Ansatz a = build_ansatz(n, 2, rng.next());
        std::vector<double> params(a.parameter_count());
        for (auto& p : params) p = rng.uniform(0, 2 * kPi);

        Ansatz moved = a;
        for (auto& q : moved.qubit_order) q = relabel[q];
        const PauliSum h = oracle::random_sum(rng, 4, 3, 3);
        std::map<std::uint32_t, std::uint32_t> mapping;
        for (std::uint32_t q = 0; q < n; ++q) mapping[q] = relabel[q];
        const PauliSum h_moved = h.embedded(mapping, n);
        CHECK(evaluate_cost(a, params, h) ==
              doctest::Approx(evaluate_cost(moved, params, h_moved)).epsilon(1e-12));
    }
}

TEST_CASE("global costs lose gradient variance much faster than gadget costs") {
    // fixed depth, growing register
    const std::uint32_t layers = 3;
    std::vector<double> ns;
    std::vector<double> log_global;
    double global_first = 0;
    double global_last = 0;
    double gadget_first = 0;
    double gadget_last = 0;
    for (std::uint32_t n = 2; n <= 5; ++n) {
        std::string text = "1.0 [";
        for (std::uint32_t q = 0; q < n; ++q) text += "Z" + std::to_string(q) + " ";
        text.back() = ']';
        const PauliSum target = parse_pauli_sum(text);
        const double global = gradient_variance(target, n, layers, 100, 300 + n, n - 1).variance;
        ns.push_back(n);
        log_global.push_back(std::log(global));
        const GadgetModel g = build_three_local(target);
        const double gadget =
            gradient_variance(g.hamiltonian(g.lambda_max), g.total_qubits, layers, 100, 400 + n,
                              n - 1)
                .variance;
        if (n == 2) {
            global_first = global;
            gadget_first = gadget;
        }
        if (n == 5) {
            global_last = global;
            gadget_last = gadget;
        }
    }
    // exponential decay of the global cost's variance
    double slope = 0;
    {
        const double mean_n = 3.5;
        double sxx = 0;
        double sxy = 0;
        const double mean_y =
            (log_global[0] + log_global[1] + log_global[2] + log_global[3]) / 4;
        for (std::size_t i = 0; i < 4; ++i) {
            sxx += (ns[i] - mean_n) * (ns[i] - mean_n);
            sxy += (ns[i] - mean_n) * (log_global[i] - mean_y);
        }
        slope = sxy / sxx;
    }
    CHECK(slope < -0.3);
    // the gadget cost's variance stays put while the global one keeps falling
    CHECK(global_first / global_last > 3.0);
    CHECK(gadget_first / gadget_last < 2.0);
}

TEST_CASE("variance estimates are reproducible and accept two samples") {
    const PauliSum h = parse_pauli_sum("1.0 [Z0 Z1]");
    const VarianceSummary a = gradient_variance(h, 2, 2, 16, 77, 1);
    const VarianceSummary b = gradient_variance(h, 2, 2, 16, 77, 1);
    CHECK(a.values == b.values);  // bit-for-bit
    CHECK(a.variance > 0);

    const VarianceSummary two = gradient_variance(h, 2, 2, 2, 5, 0);
    CHECK(two.samples == 2);
    CHECK(std::isfinite(two.variance));
    CHECK_THROWS_AS(gradient_variance(h, 2, 2, 1, 5, 0), ValidationError);
}

TEST_CASE("training records a full deterministic trajectory") {
    const GadgetModel g = build_three_local(parse_pauli_sum("1.0 [Z0 Z1]"));
    const Ansatz a = build_ansatz(g.total_qubits, 3, 11);
    TrainConfig config;
    config.learning_rate = 0.1;
    config.iterations = 5;
    config.lambda = 0.2;
    config.seed = 3;
    const Trajectory t1 = train(g, a, config);
    const Trajectory t2 = train(g, a, config);
    REQUIRE(t1.points.size() == 6);
    for (std::size_t i = 0; i < t1.points.size(); ++i) {
        CHECK(t1.points[i].iteration == i);
        CHECK(t1.points[i].theta_hash == t2.points[i].theta_hash);
    }
    // gradient descent moves the cost (no exact plateaus expected here)
    CHECK(t1.points.front().cost_gadget != t1.points.back().cost_gadget);
}

TEST_CASE("zero learning rate keeps the trajectory constant") {
    const GadgetModel g = build_three_local(parse_pauli_sum("1.0 [Z0 Z1]"));
    const Ansatz a = build_ansatz(g.total_qubits, 2, 13);
    TrainConfig config;
    config.learning_rate = 0.0;
    config.iterations = 4;
    config.lambda = 0.5;
    config.seed = 8;
    const Trajectory t = train(g, a, config);
    for (const auto& p : t.points) {
        CHECK(p.cost_gadget == doctest::Approx(t.points[0].cost_gadget));
        CHECK(p.theta_hash == t.points[0].theta_hash);
    }
}

TEST_SUITE_END();
