#include "qgad/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "qgad/errors.hpp"

namespace qgad {

namespace {

std::string term_text(const PauliTerm& t) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", t.coefficient);
    return std::string(buf) + " [" + t.string.to_string() + "]";
}

Json terms_json(const PauliSum& sum) {
    Json arr = Json::array();
    for (const auto& t : sum.terms()) arr.push_back(term_text(t));
    return arr;
}

PauliSum sum_from_terms_json(const Json& arr, std::uint32_t width) {
    std::string text = "qubits: " + std::to_string(width) + "\n";
    for (const auto& line : arr) text += line.get<std::string>() + "\n";
    return parse_pauli_sum(text);
}

double finite_or(const Json& j, double fallback) {
    return j.is_null() ? fallback : j.get<double>();
}

Json finite_json(double v) {
    if (std::isfinite(v)) return v;
    return nullptr;  // infinity is not representable in JSON
}

std::string format_g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace

Json to_json(const GadgetModel& g) {
    Json j;
    j["kind"] = to_string(g.kind);
    j["n_target"] = g.n_target;
    j["total_qubits"] = g.total_qubits;
    j["aux_registers"] = g.aux_registers;
    j["target"] = terms_json(g.target);
    j["h_aux"] = terms_json(g.h_aux);
    j["v"] = terms_json(g.v);
    j["scalar_shift"] = g.scalar_shift;
    j["k_prime"] = g.k_prime;
    j["order"] = g.order;
    j["lambda_max"] = finite_json(g.lambda_max);
    j["ground_energy_unperturbed"] = g.ground_energy_unperturbed;
    if (g.kind == GadgetKind::Measurement) j["measurement_subsets"] = g.measurement_subsets;
    return j;
}

GadgetModel gadget_model_from_json(const Json& j) {
    GadgetModel g;
    g.kind = gadget_kind_from_string(j.at("kind").get<std::string>());
    g.n_target = j.at("n_target").get<std::uint32_t>();
    g.total_qubits = j.at("total_qubits").get<std::uint32_t>();
    g.aux_registers = j.at("aux_registers").get<std::vector<std::vector<std::uint32_t>>>();
    g.target = sum_from_terms_json(j.at("target"), g.n_target);
    g.h_aux = sum_from_terms_json(j.at("h_aux"), g.total_qubits);
    g.v = sum_from_terms_json(j.at("v"), g.total_qubits);
    g.scalar_shift = j.at("scalar_shift").get<double>();
    g.k_prime = j.at("k_prime").get<int>();
    g.order = j.at("order").get<int>();
    g.lambda_max = finite_or(j.at("lambda_max"), std::numeric_limits<double>::infinity());
    g.ground_energy_unperturbed = j.at("ground_energy_unperturbed").get<double>();
    if (j.contains("measurement_subsets"))
        g.measurement_subsets = j.at("measurement_subsets").get<std::vector<std::vector<int>>>();
    return g;
}

namespace {

Json complex_json(const Complex& c) { return Json::array({c.real(), c.imag()}); }

Json matrix_json(const DenseMatrix& m) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(complex_json(m(i, j)));
        rows.push_back(row);
    }
    return rows;
}

}  // namespace

Json to_json(const Spectrum& s) {
    Json j;
    j["values"] = std::vector<double>(s.values.data(), s.values.data() + s.values.size());
    Json vectors = Json::array();
    for (Eigen::Index col = 0; col < s.vectors.cols(); ++col) {
        Json vec = Json::array();
        for (Eigen::Index row = 0; row < s.vectors.rows(); ++row)
            vec.push_back(complex_json(s.vectors(row, col)));
        vectors.push_back(vec);
    }
    j["vectors"] = vectors;
    if (s.gap_above) j["gap_above"] = *s.gap_above;
    j["boundary_reliable"] = s.boundary_reliable;
    return j;
}

Json to_json(const DensityOperator& rho) {
    Json j;
    j["n_qubits"] = rho.n_qubits();
    j["matrix"] = matrix_json(rho.matrix());
    return j;
}

Json to_json(const EffectiveDecomposition& dec) {
    return Json{{"lambda", dec.lambda},   {"a_fit", dec.a_fit},
                {"b_fit", dec.b_fit},     {"residual", dec.residual},
                {"d", dec.d},             {"shifted", dec.shifted},
                {"overlap", dec.overlap}};
}

Json to_json(const ScalingReport& report) {
    Json j;
    j["lambda_grid"] = report.lambda_grid;
    Json decs = Json::array();
    for (const auto& d : report.decompositions) decs.push_back(to_json(d));
    j["decompositions"] = decs;
    j["distances"] = report.distances;
    j["fitted_exponent"] = report.fitted_exponent;
    j["exponent_stderr"] = report.exponent_stderr;
    j["passed"] = report.passed;
    j["diagnosis"] = report.diagnosis;
    return j;
}

Json to_json(const RecipeReport& report) {
    Json checks = Json::array();
    for (const auto& c : report.checks) {
        Json jc{{"name", c.name}, {"passed", c.passed}};
        if (!c.witness.empty()) jc["witness"] = c.witness;
        if (c.witness_dimension > 0) jc["witness_dimension"] = c.witness_dimension;
        checks.push_back(jc);
    }
    return Json{{"checks", checks}, {"passed", report.passed}};
}

Json to_json(const VarianceSummary& summary) {
    return Json{{"samples", summary.samples},
                {"mean", summary.mean},
                {"variance", summary.variance},
                {"std_error", summary.std_error}};
}

Json to_json(const Trajectory& trajectory) {
    Json j;
    j["config"] = Json{{"learning_rate", trajectory.config.learning_rate},
                       {"iterations", trajectory.config.iterations},
                       {"lambda", trajectory.config.lambda},
                       {"seed", trajectory.config.seed}};
    j["final_cost_gadget"] = trajectory.points.back().cost_gadget;
    j["final_cost_target"] = trajectory.points.back().cost_target;
    j["records"] = trajectory.points.size();
    return j;
}

RecipeSpec recipe_spec_from_json(const Json& j) {
    RecipeSpec spec;
    spec.register_width = j.at("register_width").get<int>();
    spec.penalization = sum_from_terms_json(j.at("penalization"),
                                            static_cast<std::uint32_t>(spec.register_width));
    for (const auto& f : j.at("factors")) {
        const PauliSum parsed = parse_pauli_sum("1.0 [" + f.get<std::string>() + "]");
        if (parsed.size() != 1)
            throw ValidationError("recipe factor must be a single Pauli string");
        spec.factors.push_back(parsed.terms()[0].string);
    }
    if (j.contains("coefficient_rule")) {
        const std::string rule = j.at("coefficient_rule").get<std::string>();
        if (rule == "first-term")
            spec.rule = RecipeSpec::CoefficientRule::FirstTerm;
        else if (rule == "spread")
            spec.rule = RecipeSpec::CoefficientRule::Spread;
        else
            throw ValidationError("unknown coefficient rule: " + rule);
    }
    return spec;
}

std::vector<std::pair<std::string, std::string>> scaling_csv(const ScalingReport& report) {
    std::vector<std::pair<std::string, std::string>> out;
    auto series = [&](const std::string& name, auto getter) {
        std::string csv = "lambda," + name + "\n";
        for (std::size_t i = 0; i < report.lambda_grid.size(); ++i) {
            csv += format_g17(report.lambda_grid[i]) + "," + format_g17(getter(i)) + "\n";
        }
        out.emplace_back(name, csv);
    };
    if (!report.decompositions.empty()) {
        series("residual", [&](std::size_t i) { return report.decompositions[i].residual; });
        series("a_fit", [&](std::size_t i) { return report.decompositions[i].a_fit; });
        series("b_fit", [&](std::size_t i) { return report.decompositions[i].b_fit; });
    }
    if (!report.distances.empty())
        series("distance", [&](std::size_t i) { return report.distances[i]; });
    return out;
}

std::string trajectory_csv(const Trajectory& trajectory) {
    std::string csv = "iteration,cost_gadget,cost_target,gradient_norm,theta_hash\n";
    for (const auto& p : trajectory.points) {
        csv += std::to_string(p.iteration) + "," + format_g17(p.cost_gadget) + "," +
               format_g17(p.cost_target) + "," + format_g17(p.gradient_norm) + "," +
               std::to_string(p.theta_hash) + "\n";
    }
    return csv;
}

std::string variance_csv(const VarianceSummary& summary) {
    std::string csv = "sample,gradient\n";
    for (std::size_t i = 0; i < summary.values.size(); ++i)
        csv += std::to_string(i) + "," + format_g17(summary.values[i]) + "\n";
    return csv;
}

void write_text_atomic(const std::filesystem::path& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path dir = path.parent_path().empty() ? fs::path(".") : path.parent_path();
    const fs::path tmp = dir / (path.filename().string() + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot open " + tmp.string() + " for writing");
        out << content;
        out.flush();
        if (!out) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw Error("write failed for " + tmp.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw Error("atomic rename onto " + path.string() + " failed");
    }
}

}  // namespace qgad
