#pragma once

#include <filesystem>
#include <string>

#include "json.hpp"

#include "qgad/gadgets.hpp"
#include "qgad/linalg.hpp"
#include "qgad/perturbation.hpp"
#include "qgad/vqa.hpp"

namespace qgad {

using Json = nlohmann::json;

/// GadgetModel document: register layout, term lists in the text-format term
/// grammar, kind, lambda_max, scalar shift.
Json to_json(const GadgetModel& g);
GadgetModel gadget_model_from_json(const Json& j);

Json to_json(const Spectrum& s);
Json to_json(const DensityOperator& rho);
Json to_json(const EffectiveDecomposition& dec);
Json to_json(const ScalingReport& report);
Json to_json(const RecipeReport& report);
Json to_json(const VarianceSummary& summary);
Json to_json(const Trajectory& trajectory);

RecipeSpec recipe_spec_from_json(const Json& j);

/// CSV series (lambda, quantity) per monitored quantity of a report.
/// Returns pairs of (quantity name, csv text).
std::vector<std::pair<std::string, std::string>> scaling_csv(const ScalingReport& report);
std::string trajectory_csv(const Trajectory& trajectory);
std::string variance_csv(const VarianceSummary& summary);

/// Writes via a temp file in the same directory plus rename, so an
/// interrupted run never leaves a truncated document behind.
void write_text_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace qgad
