#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qgad/gadgets.hpp"
#include "qgad/linalg.hpp"

namespace qgad {

/// Layered hardware-efficient ansatz: per layer, one single-qubit Pauli
/// rotation per qubit (axes drawn once from the seed) followed by a CZ chain
/// over adjacent positions of qubit_order.
struct Ansatz {
    std::uint32_t n_qubits = 0;
    std::uint32_t layers = 0;
    std::uint64_t seed = 0;
    std::vector<std::uint32_t> qubit_order;  ///< order[slot] = physical qubit
    std::vector<Axis> axes;                  ///< size layers * n, index layer * n + slot

    std::size_t parameter_count() const { return axes.size(); }
    /// Flat index of the rotation on `qubit` (a physical index) in `layer`.
    std::size_t parameter_index(std::uint32_t layer, std::uint32_t qubit) const;
};

/// Deterministic in (n, layers, seed, order); empty order means natural.
Ansatz build_ansatz(std::uint32_t n, std::uint32_t layers, std::uint64_t seed,
                    std::vector<std::uint32_t> order = {});

/// U(theta)|0...0>.
StateVector run_circuit(const Ansatz& ansatz, std::span<const double> params);

/// <0|U^dag H U|0>.
double evaluate_cost(const Ansatz& ansatz, std::span<const double> params, const PauliSum& h);

/// Parameter-shift rule: 1/2 [C(theta + pi/2 e_nu) - C(theta - pi/2 e_nu)],
/// exact for Pauli rotations.
std::vector<double> gradient(const Ansatz& ansatz, std::span<const double> params,
                             const PauliSum& h);
double gradient_component(const Ansatz& ansatz, std::span<const double> params, const PauliSum& h,
                          std::size_t nu);

struct VarianceSummary {
    std::size_t samples = 0;
    double mean = 0;
    double variance = 0;   ///< unbiased sample variance
    double std_error = 0;  ///< of the mean
    std::vector<double> values;  ///< per-sample gradient components
};

/// Sample variance of dC/dtheta_selector over `samples` independent draws:
/// parameters uniform in [0, 2pi), rotation axes re-drawn per sample.
/// Bit-for-bit reproducible from the seed.
VarianceSummary gradient_variance(const PauliSum& h, std::uint32_t n, std::uint32_t layers,
                                  std::size_t samples, std::uint64_t seed, std::size_t selector,
                                  const std::vector<std::uint32_t>& order = {});

struct TrainConfig {
    double learning_rate = 0.05;
    std::size_t iterations = 300;
    double lambda = 0;  ///< may exceed lambda_max on purpose
    std::uint64_t seed = 0;
};

struct TrajectoryPoint {
    std::size_t iteration = 0;
    std::uint64_t theta_hash = 0;
    double cost_gadget = 0;
    double cost_target = 0;
    double gradient_norm = 0;
};

struct Trajectory {
    TrainConfig config;
    std::vector<TrajectoryPoint> points;  ///< iterations + 1 records, final state included
    std::vector<double> final_parameters;
};

/// Plain gradient descent on the gadget cost, with the target cost monitored
/// on the full state at every step. Deterministic given the config.
Trajectory train(const GadgetModel& g, const Ansatz& ansatz, const TrainConfig& config);

}  // namespace qgad
