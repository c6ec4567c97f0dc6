#pragma once

#include <string>
#include <utility>

#include <json.hpp>

#include "finsent/eval.hpp"
#include "finsent/pipeline.hpp"

namespace finsent {

using json = nlohmann::json;

inline constexpr int kFormatVersion = 1;

// Every persisted model is wrapped in {"format_version", "kind", "payload"}.
// Matrices are stored as row-major arrays; nlohmann emits shortest-round-trip
// decimals, so doubles survive save/load bit-exactly.

json serialize_vectorizer(const VectorizerModel& model);
VectorizerModel deserialize_vectorizer(const json& container);

json serialize_regressor(const RegressorModel& model, RegressorKind kind);
std::pair<RegressorModel, RegressorKind> deserialize_regressor(const json& container);

// Single-file bundle: pipeline config plus both fitted halves.
json serialize_bundle(const FittedPipeline& pipeline);
FittedPipeline deserialize_bundle(const json& container);

json pipeline_config_to_json(const PipelineConfig& config);
// Strict: unknown keys anywhere in the config are a ParseError.
PipelineConfig pipeline_config_from_json(const json& j);

json eval_report_to_json(const EvalReport& report);

json sweep_grid_to_json(const SweepGrid& grid);
SweepGrid sweep_grid_from_json(const json& j);
json sweep_rows_to_json(const std::vector<SweepRow>& rows);

json load_json_file(const std::string& path);
void save_json_file(const json& j, const std::string& path);

}  // namespace finsent
