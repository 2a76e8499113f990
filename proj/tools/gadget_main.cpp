// Command-line front end: every subcommand is a thin wrapper over the library
// operations; all randomness flows from explicit --seed flags.
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "qgad/errors.hpp"
#include "qgad/gadgets.hpp"
#include "qgad/json_io.hpp"
#include "qgad/linalg.hpp"
#include "qgad/pauli.hpp"
#include "qgad/perturbation.hpp"
#include "qgad/vqa.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitVerifierFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumeric = 3;

using qgad::Json;

qgad::PauliSum load_hamiltonian(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw qgad::ValidationError("cannot open Hamiltonian file " + path);
    return qgad::parse_pauli_sum(in);
}

qgad::GadgetModel load_gadget(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw qgad::ValidationError("cannot open gadget file " + path);
    Json j;
    in >> j;
    return qgad::gadget_model_from_json(j);
}

Json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw qgad::ValidationError("cannot open " + path);
    Json j;
    in >> j;
    return j;
}

/// Output locations are checked before any computation starts.
void validate_out_path(const std::string& out) {
    if (out.empty()) return;
    const std::filesystem::path dir = std::filesystem::path(out).parent_path();
    if (!dir.empty() && !std::filesystem::is_directory(dir))
        throw qgad::ValidationError("output directory does not exist: " + dir.string());
}

/// start:stop:count expands to geometrically spaced values.
std::vector<double> parse_grid(const std::string& text) {
    const auto c1 = text.find(':');
    const auto c2 = text.find(':', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
        throw qgad::ValidationError("grid must be start:stop:count");
    const double start = std::stod(text.substr(0, c1));
    const double stop = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
    const int count = std::stoi(text.substr(c2 + 1));
    return qgad::geometric_grid(start, stop, count);
}

void write_json(const std::string& path, const Json& j) {
    qgad::write_text_atomic(path, j.dump(2) + "\n");
}

void write_report_outputs(const std::string& out, const qgad::ScalingReport& report) {
    write_json(out, qgad::to_json(report));
    const std::filesystem::path base(out);
    for (const auto& [name, csv] : qgad::scaling_csv(report)) {
        std::filesystem::path p = base;
        p.replace_extension(name + ".csv");
        qgad::write_text_atomic(p, csv);
    }
}

struct ParallelFor {
    int jobs;
    template <class Fn>
    void run(std::size_t count, Fn&& fn) const {
        if (jobs <= 1) {
            for (std::size_t i = 0; i < count; ++i) fn(i);
            return;
        }
        std::vector<std::future<void>> futures;
        std::size_t next = 0;
        while (next < count) {
            while (futures.size() < static_cast<std::size_t>(jobs) && next < count)
                futures.push_back(std::async(std::launch::async, fn, next++));
            for (auto& f : futures) f.get();
            futures.clear();
        }
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Perturbative gadget constructions and spectral verifiers"};
    app.require_subcommand(1);

    // gadgetize
    auto* gadgetize = app.add_subcommand("gadgetize", "Build a gadget Hamiltonian");
    std::string gz_in;
    std::string gz_kind = "three-local";
    std::string gz_recipe;
    std::string gz_out;
    int gz_kprime = 4;
    gadgetize->add_option("--in", gz_in, "Hamiltonian text file")->required();
    gadgetize->add_option("--kind", gz_kind, "three-local | k-local | recipe | measurement");
    gadgetize->add_option("--k-prime", gz_kprime, "target locality for kind k-local");
    gadgetize->add_option("--recipe", gz_recipe, "RecipeSpec JSON for kind recipe");
    gadgetize->add_option("--out", gz_out, "output GadgetModel JSON")->required();

    // spectrum
    auto* spectrum = app.add_subcommand("spectrum", "Lowest eigenpairs of a Hamiltonian");
    std::string sp_in;
    std::string sp_gadget;
    std::string sp_out;
    double sp_lambda = 0;
    int sp_levels = 1;
    auto* sp_in_opt = spectrum->add_option("--in", sp_in, "Hamiltonian text file");
    spectrum->add_option("--gadget", sp_gadget, "GadgetModel JSON")->excludes(sp_in_opt);
    spectrum->add_option("--lambda", sp_lambda, "perturbation strength for --gadget");
    spectrum->add_option("--levels", sp_levels, "number of lowest levels");
    spectrum->add_option("--out", sp_out, "output JSON")->required();

    // effective
    auto* effective = app.add_subcommand("effective", "Effective-Hamiltonian decomposition");
    std::string ef_gadget;
    std::string ef_out;
    double ef_lambda = 0;
    bool ef_absolute = false;
    effective->add_option("--gadget", ef_gadget)->required();
    effective->add_option("--lambda", ef_lambda)->required();
    effective->add_flag("--absolute", ef_absolute, "report absolute (unshifted) energies");
    effective->add_option("--out", ef_out)->required();

    // verify
    auto* verify = app.add_subcommand("verify", "Run a spectral verifier");
    std::string vf_which;
    std::string vf_gadget;
    std::string vf_grid;
    std::string vf_out;
    bool vf_override = false;
    verify->add_option("which", vf_which, "theorem1 | corollary1 | theorem3")->required();
    verify->add_option("--gadget", vf_gadget)->required();
    verify->add_option("--grid", vf_grid, "lambda grid start:stop:count")->required();
    verify->add_flag("--override-lambda-max", vf_override, "allow grids beyond the bound");
    verify->add_option("--out", vf_out)->required();

    // xi
    auto* xi = app.add_subcommand("xi", "Combinatorial constant of the cyclic gadget");
    int xi_k = 3;
    std::string xi_out;
    xi->add_option("--k", xi_k)->required();
    xi->add_option("--out", xi_out);

    // bloch
    auto* bloch = app.add_subcommand("bloch", "Bloch expansion and exact-diagonalization check");
    std::string bl_gadget;
    std::string bl_out;
    double bl_lambda = 0;
    int bl_order = 2;
    bloch->add_option("--gadget", bl_gadget)->required();
    bloch->add_option("--lambda", bl_lambda)->required();
    bloch->add_option("--order", bl_order)->required();
    bloch->add_option("--out", bl_out)->required();

    // groups
    auto* groups = app.add_subcommand("groups", "Qubitwise-commuting measurement groups");
    std::string gr_gadget;
    std::string gr_out;
    groups->add_option("--gadget", gr_gadget)->required();
    groups->add_option("--out", gr_out)->required();

    // variance
    auto* variance = app.add_subcommand("variance", "Gradient-variance sweep");
    std::string va_in;
    std::string va_gadget;
    std::string va_out;
    double va_lambda = 0;
    unsigned va_layers = 1;
    std::size_t va_samples = 100;
    std::uint64_t va_seed = 0;
    int va_selector = -1;
    auto* va_in_opt = variance->add_option("--in", va_in, "Hamiltonian text file");
    variance->add_option("--gadget", va_gadget, "GadgetModel JSON (cost = gadget Hamiltonian)")
        ->excludes(va_in_opt);
    variance->add_option("--lambda", va_lambda, "perturbation strength for --gadget");
    variance->add_option("--layers", va_layers)->required();
    variance->add_option("--samples", va_samples)->required();
    auto* va_seed_opt = variance->add_option("--seed", va_seed, "base seed (required)");
    va_seed_opt->required();
    variance->add_option("--selector", va_selector,
                         "flat parameter index; default: last target qubit, first layer");
    variance->add_option("--out", va_out)->required();

    // train
    auto* train_cmd = app.add_subcommand("train", "Gradient-descent training on the gadget cost");
    std::string tr_gadget;
    std::string tr_out;
    std::string tr_order = "interleave";
    double tr_lambda = 0;
    double tr_rate = 0.05;
    unsigned tr_layers = 10;
    std::size_t tr_iterations = 300;
    std::size_t tr_seeds = 1;
    std::uint64_t tr_seed = 0;
    int tr_jobs = 1;
    train_cmd->add_option("--gadget", tr_gadget)->required();
    train_cmd->add_option("--lambda", tr_lambda)->required();
    train_cmd->add_option("--layers", tr_layers);
    train_cmd->add_option("--learning-rate", tr_rate);
    train_cmd->add_option("--iterations", tr_iterations);
    train_cmd->add_option("--seeds", tr_seeds, "number of runs; run i uses seed base+i");
    train_cmd->add_option("--seed", tr_seed, "base seed (required)")->required();
    train_cmd->add_option("--ordering", tr_order, "interleave | natural");
    train_cmd->add_option("--jobs", tr_jobs, "parallel runs");
    train_cmd->add_option("--out", tr_out, "output prefix")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitPass : kExitUsage;
    }

    try {
        for (const std::string& out : {gz_out, sp_out, ef_out, vf_out, xi_out, bl_out, gr_out, va_out})
            validate_out_path(out);
        if (*train_cmd) validate_out_path(tr_out + "_summary.json");

        if (*gadgetize) {
            const qgad::PauliSum target = load_hamiltonian(gz_in);
            qgad::GadgetModel g;
            const auto kind = qgad::gadget_kind_from_string(gz_kind);
            switch (kind) {
                case qgad::GadgetKind::ThreeLocal: g = qgad::build_three_local(target); break;
                case qgad::GadgetKind::KLocal: g = qgad::build_k_local(target, gz_kprime); break;
                case qgad::GadgetKind::Recipe: {
                    if (gz_recipe.empty())
                        throw qgad::ValidationError("kind recipe needs --recipe spec.json");
                    g = qgad::build_from_recipe(target, qgad::recipe_spec_from_json(load_json(gz_recipe)));
                    break;
                }
                case qgad::GadgetKind::Measurement: g = qgad::build_measurement_gadget(target); break;
            }
            write_json(gz_out, qgad::to_json(g));
        } else if (*spectrum) {
            qgad::PauliSum h;
            if (!sp_in.empty()) {
                h = load_hamiltonian(sp_in);
            } else if (!sp_gadget.empty()) {
                if (sp_lambda <= 0) throw qgad::ValidationError("--gadget needs --lambda > 0");
                h = load_gadget(sp_gadget).hamiltonian(sp_lambda);
            } else {
                throw qgad::ValidationError("spectrum needs --in or --gadget");
            }
            const auto spec = qgad::lowest_eigenpairs(qgad::to_operator(h), sp_levels);
            write_json(sp_out, qgad::to_json(spec));
        } else if (*effective) {
            const auto g = load_gadget(ef_gadget);
            const auto dec = qgad::effective_hamiltonian(g, ef_lambda, true);
            Json j = qgad::to_json(dec);
            j["e0_unperturbed"] = g.ground_energy_unperturbed;
            if (ef_absolute) j["b_fit_absolute"] = dec.b_fit + g.ground_energy_unperturbed;
            write_json(ef_out, j);
        } else if (*verify) {
            const auto g = load_gadget(vf_gadget);
            const auto grid = parse_grid(vf_grid);
            qgad::ScalingReport report;
            if (vf_which == "theorem1")
                report = qgad::verify_theorem1(g, grid, vf_override);
            else if (vf_which == "corollary1")
                report = qgad::verify_corollary1(g, grid, vf_override);
            else if (vf_which == "theorem3")
                report = qgad::verify_theorem3(g, grid, vf_override);
            else
                throw qgad::ValidationError("unknown verifier: " + vf_which);
            write_report_outputs(vf_out, report);
            std::cout << (report.passed ? "PASS " : "FAIL ") << report.diagnosis << "\n";
            return report.passed ? kExitPass : kExitVerifierFail;
        } else if (*xi) {
            const double value = qgad::xi_constant(xi_k);
            std::cout << "xi(" << xi_k << ") = " << value << "\n";
            if (!xi_out.empty()) write_json(xi_out, Json{{"k", xi_k}, {"xi", value}});
        } else if (*bloch) {
            const auto g = load_gadget(bl_gadget);
            const auto h0 = qgad::to_operator(g.h_aux, qgad::Storage::Dense);
            const auto v = qgad::to_operator(g.v, qgad::Storage::Dense);
            const auto result = qgad::bloch_expansion(h0, v, bl_lambda, bl_order);
            Json j;
            j["lambda"] = bl_lambda;
            j["order"] = bl_order;
            j["convergence_warning"] = result.convergence_warning;
            if (result.convergence_warning)
                std::cerr << "warning: ||lambda V|| >= gamma/4; the expansion may diverge\n";
            Json norms = Json::array();
            for (const auto& am : result.per_order) norms.push_back(am.norm());
            j["per_order_frobenius"] = norms;
            j["exact_deviation"] = qgad::bloch_exact_deviation(g, bl_lambda, bl_order);
            write_json(bl_out, j);
        } else if (*groups) {
            const auto g = load_gadget(gr_gadget);
            const auto partition = qgad::measurement_groups(g);
            Json arr = Json::array();
            for (const auto& grp : partition) {
                Json grp_json = Json::array();
                for (const auto& t : grp) {
                    std::ostringstream term;
                    term << t.coefficient << " [" << t.string.to_string() << "]";
                    grp_json.push_back(term.str());
                }
                arr.push_back(grp_json);
            }
            write_json(gr_out, Json{{"groups", arr}});
        } else if (*variance) {
            qgad::PauliSum h;
            std::uint32_t width = 0;
            int default_selector = -1;
            if (!va_in.empty()) {
                h = load_hamiltonian(va_in);
                width = h.n_qubits();
                default_selector = static_cast<int>(width) - 1;
            } else if (!va_gadget.empty()) {
                if (va_lambda <= 0) throw qgad::ValidationError("--gadget needs --lambda > 0");
                const auto g = load_gadget(va_gadget);
                h = g.hamiltonian(va_lambda);
                width = g.total_qubits;
                default_selector = static_cast<int>(g.n_target) - 1;
            } else {
                throw qgad::ValidationError("variance needs --in or --gadget");
            }
            const auto selector =
                static_cast<std::size_t>(va_selector >= 0 ? va_selector : default_selector);
            const auto summary =
                qgad::gradient_variance(h, width, va_layers, va_samples, va_seed, selector);
            Json j = qgad::to_json(summary);
            j["config"] = Json{{"layers", va_layers},
                               {"samples", va_samples},
                               {"seed", va_seed},
                               {"selector", selector},
                               {"qubits", width}};
            write_json(va_out, j);
            std::filesystem::path csv_path(va_out);
            csv_path.replace_extension("csv");
            qgad::write_text_atomic(csv_path, qgad::variance_csv(summary));
        } else if (*train_cmd) {
            const auto g = load_gadget(tr_gadget);
            std::vector<std::uint32_t> order;
            if (tr_order == "interleave" && g.kind == qgad::GadgetKind::ThreeLocal) {
                const auto perm = qgad::interleave_order(g);
                // perm maps old -> new position; the ansatz wants order[slot] = qubit.
                order.resize(perm.size());
                for (std::uint32_t q = 0; q < perm.size(); ++q) order[perm[q]] = q;
            } else if (tr_order != "natural" && tr_order != "interleave") {
                throw qgad::ValidationError("--ordering must be interleave or natural");
            }
            std::vector<double> final_targets(tr_seeds);
            ParallelFor pool{tr_jobs};
            std::vector<std::string> csvs(tr_seeds);
            pool.run(tr_seeds, [&](std::size_t i) {
                qgad::TrainConfig config;
                config.learning_rate = tr_rate;
                config.iterations = tr_iterations;
                config.lambda = tr_lambda;
                config.seed = tr_seed + i;
                const auto ansatz =
                    qgad::build_ansatz(g.total_qubits, tr_layers, config.seed, order);
                const auto traj = qgad::train(g, ansatz, config);
                final_targets[i] = traj.points.back().cost_target;
                csvs[i] = qgad::trajectory_csv(traj);
            });
            for (std::size_t i = 0; i < tr_seeds; ++i) {
                qgad::write_text_atomic(tr_out + "_seed" + std::to_string(tr_seed + i) + ".csv",
                                        csvs[i]);
            }
            Json summary;
            summary["final_cost_target"] = final_targets;
            summary["config"] = Json{{"lambda", tr_lambda},         {"layers", tr_layers},
                                     {"learning_rate", tr_rate},    {"iterations", tr_iterations},
                                     {"seeds", tr_seeds},           {"base_seed", tr_seed},
                                     {"ordering", tr_order}};
            write_json(tr_out + "_summary.json", summary);
        }
    } catch (const qgad::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const qgad::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const qgad::DimensionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const qgad::NumericError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumeric;
    }
    return kExitPass;
}
