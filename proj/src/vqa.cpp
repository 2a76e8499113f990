#include "qgad/vqa.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <thread>

#include "qgad/errors.hpp"
#include "qgad/random.hpp"

namespace qgad {

namespace {

constexpr double kPi = 3.14159265358979323846;

void apply_rotation(StateVector& psi, Axis axis, std::uint32_t qubit, double theta) {
    // exp(-i theta/2 A)
    const double c = std::cos(theta / 2);
    const double s = std::sin(theta / 2);
    const std::uint64_t bit = 1ULL << qubit;
    const auto dim = static_cast<std::uint64_t>(psi.size());
    const Complex I(0, 1);
    switch (axis) {
        case Axis::X:
            for (std::uint64_t j = 0; j < dim; ++j) {
                if (j & bit) continue;
                const Complex a = psi(static_cast<Eigen::Index>(j));
                const Complex b = psi(static_cast<Eigen::Index>(j | bit));
                psi(static_cast<Eigen::Index>(j)) = c * a - I * s * b;
                psi(static_cast<Eigen::Index>(j | bit)) = c * b - I * s * a;
            }
            break;
        case Axis::Y:
            for (std::uint64_t j = 0; j < dim; ++j) {
                if (j & bit) continue;
                const Complex a = psi(static_cast<Eigen::Index>(j));
                const Complex b = psi(static_cast<Eigen::Index>(j | bit));
                psi(static_cast<Eigen::Index>(j)) = c * a - s * b;
                psi(static_cast<Eigen::Index>(j | bit)) = c * b + s * a;
            }
            break;
        case Axis::Z: {
            const Complex lo(c, -s);
            const Complex hi(c, s);
            for (std::uint64_t j = 0; j < dim; ++j)
                psi(static_cast<Eigen::Index>(j)) *= (j & bit) ? hi : lo;
            break;
        }
    }
}

void apply_cz(StateVector& psi, std::uint32_t q1, std::uint32_t q2) {
    const std::uint64_t mask = (1ULL << q1) | (1ULL << q2);
    const auto dim = static_cast<std::uint64_t>(psi.size());
    for (std::uint64_t j = 0; j < dim; ++j)
        if ((j & mask) == mask) psi(static_cast<Eigen::Index>(j)) = -psi(static_cast<Eigen::Index>(j));
}

}  // namespace

std::size_t Ansatz::parameter_index(std::uint32_t layer, std::uint32_t qubit) const {
    for (std::uint32_t slot = 0; slot < n_qubits; ++slot)
        if (qubit_order[slot] == qubit) return static_cast<std::size_t>(layer) * n_qubits + slot;
    throw ValidationError("qubit outside the ansatz register");
}

Ansatz build_ansatz(std::uint32_t n, std::uint32_t layers, std::uint64_t seed,
                    std::vector<std::uint32_t> order) {
    if (n < 1 || layers < 1) throw ValidationError("ansatz needs n >= 1 and layers >= 1");
    if (order.empty()) {
        order.resize(n);
        std::iota(order.begin(), order.end(), 0);
    }
    if (order.size() != n) throw ValidationError("qubit order must be a permutation of 0..n-1");
    std::vector<bool> seen(n, false);
    for (std::uint32_t q : order) {
        if (q >= n || seen[q]) throw ValidationError("qubit order must be a permutation of 0..n-1");
        seen[q] = true;
    }
    Ansatz a;
    a.n_qubits = n;
    a.layers = layers;
    a.seed = seed;
    a.qubit_order = std::move(order);
    SplitMix64 rng(mix_seed(seed, 0x6178u));  // axis stream
    a.axes.resize(static_cast<std::size_t>(layers) * n);
    for (auto& ax : a.axes) ax = static_cast<Axis>(rng.uniform_index(3));
    return a;
}

StateVector run_circuit(const Ansatz& ansatz, std::span<const double> params) {
    if (params.size() != ansatz.parameter_count())
        throw ValidationError("parameter count mismatch");
    StateVector psi = StateVector::Zero(Eigen::Index(1) << ansatz.n_qubits);
    psi(0) = 1.0;
    for (std::uint32_t layer = 0; layer < ansatz.layers; ++layer) {
        for (std::uint32_t slot = 0; slot < ansatz.n_qubits; ++slot) {
            const std::size_t idx = static_cast<std::size_t>(layer) * ansatz.n_qubits + slot;
            apply_rotation(psi, ansatz.axes[idx], ansatz.qubit_order[slot], params[idx]);
        }
        for (std::uint32_t slot = 0; slot + 1 < ansatz.n_qubits; ++slot)
            apply_cz(psi, ansatz.qubit_order[slot], ansatz.qubit_order[slot + 1]);
    }
    return psi;
}

double evaluate_cost(const Ansatz& ansatz, std::span<const double> params, const PauliSum& h) {
    if (h.n_qubits() > ansatz.n_qubits)
        throw ValidationError("Hamiltonian wider than the ansatz register");
    return expectation(h, run_circuit(ansatz, params));
}

double gradient_component(const Ansatz& ansatz, std::span<const double> params, const PauliSum& h,
                          std::size_t nu) {
    if (nu >= params.size()) throw ValidationError("gradient component out of range");
    std::vector<double> shifted(params.begin(), params.end());
    shifted[nu] = params[nu] + kPi / 2;
    const double plus = evaluate_cost(ansatz, shifted, h);
    shifted[nu] = params[nu] - kPi / 2;
    const double minus = evaluate_cost(ansatz, shifted, h);
    return 0.5 * (plus - minus);
}

std::vector<double> gradient(const Ansatz& ansatz, std::span<const double> params,
                             const PauliSum& h) {
    std::vector<double> grad(params.size());
    for (std::size_t nu = 0; nu < params.size(); ++nu)
        grad[nu] = gradient_component(ansatz, params, h, nu);
    return grad;
}

VarianceSummary gradient_variance(const PauliSum& h, std::uint32_t n, std::uint32_t layers,
                                  std::size_t samples, std::uint64_t seed, std::size_t selector,
                                  const std::vector<std::uint32_t>& order) {
    if (samples < 2) throw ValidationError("variance needs at least 2 samples");
    VarianceSummary summary;
    summary.samples = samples;
    summary.values.resize(samples);
    // Each draw is keyed by its sample index, so concurrent evaluation keeps
    // the aggregation bit-for-bit reproducible.
    auto evaluate_sample = [&](std::size_t s) {
        // Fresh rotation axes per draw: the variance is over the circuit ensemble.
        const Ansatz ansatz = build_ansatz(n, layers, mix_seed(seed, 2 * s), order);
        SplitMix64 rng(mix_seed(seed, 2 * s + 1));
        std::vector<double> params(ansatz.parameter_count());
        for (auto& p : params) p = rng.uniform(0.0, 2 * kPi);
        summary.values[s] = gradient_component(ansatz, params, h, selector);
    };
    const unsigned workers = std::min<unsigned>(std::thread::hardware_concurrency(),
                                                static_cast<unsigned>(samples));
    if (workers > 1) {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t s = next.fetch_add(1); s < samples; s = next.fetch_add(1))
                    evaluate_sample(s);
            });
        }
        for (auto& t : pool) t.join();
    } else {
        for (std::size_t s = 0; s < samples; ++s) evaluate_sample(s);
    }
    const auto count = static_cast<double>(samples);
    summary.mean = std::accumulate(summary.values.begin(), summary.values.end(), 0.0) / count;
    double ss = 0;
    for (double v : summary.values) ss += (v - summary.mean) * (v - summary.mean);
    summary.variance = ss / (count - 1);
    summary.std_error = std::sqrt(summary.variance / count);
    return summary;
}

Trajectory train(const GadgetModel& g, const Ansatz& ansatz, const TrainConfig& config) {
    if (config.lambda <= 0) throw ValidationError("training needs lambda > 0");
    if (config.iterations < 1) throw ValidationError("training needs at least one iteration");
    if (ansatz.n_qubits != g.total_qubits)
        throw ValidationError("ansatz register must match the gadget register");

    const PauliSum h_gad = g.hamiltonian(config.lambda);
    const PauliSum& h_target = g.target;  // acts on the target qubits of the full register

    SplitMix64 rng(mix_seed(config.seed, 0x7468u));  // parameter stream
    std::vector<double> theta(ansatz.parameter_count());
    for (auto& p : theta) p = rng.uniform(0.0, 2 * kPi);

    Trajectory traj;
    traj.config = config;
    traj.points.reserve(config.iterations + 1);
    for (std::size_t it = 0; it <= config.iterations; ++it) {
        const StateVector psi = run_circuit(ansatz, theta);
        TrajectoryPoint point;
        point.iteration = it;
        point.theta_hash = fnv1a(theta.data(), theta.size() * sizeof(double));
        point.cost_gadget = expectation(h_gad, psi);
        point.cost_target = expectation(h_target, psi);
        const std::vector<double> grad = gradient(ansatz, theta, h_gad);
        double norm2 = 0;
        for (double gval : grad) norm2 += gval * gval;
        point.gradient_norm = std::sqrt(norm2);
        traj.points.push_back(point);
        if (it == config.iterations) break;
        for (std::size_t nu = 0; nu < theta.size(); ++nu)
            theta[nu] -= config.learning_rate * grad[nu];
    }
    traj.final_parameters = std::move(theta);
    return traj;
}

}  // namespace qgad
