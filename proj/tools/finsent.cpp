#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "finsent/errors.hpp"
#include "finsent/eval.hpp"
#include "finsent/serialize.hpp"

namespace {

using finsent::json;

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitUsage = 2;

std::string format_score(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", value);
  return buf;
}

void write_predictions(const finsent::Dataset& inputs, const finsent::DenseVector& scores,
                       const std::string& path) {
  std::ofstream out(path);
  if (!out) throw finsent::ValidationError("cannot write '" + path + "'");
  if (inputs.records.empty()) {
    out << "[]\n";
    return;
  }
  out << "[\n";
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    out << "  {\"id\": " << json(inputs.records[i].id).dump()
        << ", \"sentiment\": " << format_score(scores[static_cast<Eigen::Index>(i)]) << "}"
        << (i + 1 < inputs.size() ? ",\n" : "\n");
  }
  out << "]\n";
}

int cmd_train(const std::string& config_path, const std::string& data_path,
              const std::string& model_path) {
  const finsent::PipelineConfig config =
      finsent::pipeline_config_from_json(finsent::load_json_file(config_path));
  const finsent::Dataset data = finsent::load_headlines_file(data_path);
  const finsent::FittedPipeline pipeline = finsent::fit_pipeline(data, config);
  finsent::save_json_file(finsent::serialize_bundle(pipeline), model_path);
  std::cout << "trained " << data.size() << " records, " << pipeline.feature_dim()
            << " features -> " << model_path << "\n";
  return kExitOk;
}

int cmd_predict(const std::string& model_path, const std::string& data_path,
                const std::string& out_path) {
  const finsent::FittedPipeline pipeline =
      finsent::deserialize_bundle(finsent::load_json_file(model_path));
  const finsent::Dataset data = finsent::load_headlines_file(data_path);
  const finsent::DenseVector scores = finsent::predict_pipeline(pipeline, data);
  write_predictions(data, scores, out_path);
  std::cout << "predicted " << data.size() << " records -> " << out_path << "\n";
  return kExitOk;
}

int cmd_evaluate(const std::string& gold_path, const std::string& pred_path) {
  const finsent::Dataset gold = finsent::load_headlines_file(gold_path);
  for (const auto& r : gold.records)
    if (!r.sentiment)
      throw finsent::ValidationError("gold record '" + r.id + "' has no sentiment");

  const json pred_json = finsent::load_json_file(pred_path);
  if (!pred_json.is_array()) throw finsent::ParseError("predictions must be a JSON array");

  std::map<std::string, double> predicted;
  std::vector<std::string> order;
  for (std::size_t i = 0; i < pred_json.size(); ++i) {
    const json& el = pred_json[i];
    if (!el.is_object() || !el.contains("id") || !el["id"].is_string() ||
        !el.contains("sentiment") || !el["sentiment"].is_number())
      throw finsent::ParseError("prediction element " + std::to_string(i) +
                                " must be {\"id\": string, \"sentiment\": number}");
    const std::string id = el["id"].get<std::string>();
    if (!predicted.emplace(id, el["sentiment"].get<double>()).second)
      throw finsent::ValidationError("duplicate prediction id '" + id + "'");
    order.push_back(id);
  }

  std::map<std::string, double> gold_by_id;
  for (const auto& r : gold.records) gold_by_id[r.id] = *r.sentiment;
  for (const auto& id : order)
    if (!gold_by_id.count(id))
      throw finsent::ValidationError("prediction id '" + id + "' is absent from the gold set");

  // Matched pairs in gold order; unmatched gold ids only lower the weight.
  std::vector<double> g, p;
  for (const auto& r : gold.records) {
    auto it = predicted.find(r.id);
    if (it == predicted.end()) continue;
    g.push_back(*r.sentiment);
    p.push_back(it->second);
  }
  finsent::ScoredPair pair;
  pair.gold = Eigen::Map<const finsent::DenseVector>(g.data(), static_cast<Eigen::Index>(g.size()));
  pair.predicted =
      Eigen::Map<const finsent::DenseVector>(p.data(), static_cast<Eigen::Index>(p.size()));
  pair.num_gold_total = static_cast<int>(gold.size());

  const finsent::EvalReport report = finsent::evaluate_pair(pair);
  std::cout << finsent::eval_report_to_json(report).dump(2) << "\n";
  return kExitOk;
}

int cmd_cv(const std::string& config_path, const std::string& data_path, int folds,
           std::optional<std::uint32_t> seed) {
  const finsent::PipelineConfig config =
      finsent::pipeline_config_from_json(finsent::load_json_file(config_path));
  const finsent::Dataset data = finsent::load_headlines_file(data_path);
  const finsent::CvResult cv =
      finsent::cross_validate(data, config, folds, seed.value_or(config.seed));

  json out;
  out["k"] = folds;
  out["seed"] = seed.value_or(config.seed);
  json fold_reports = json::array();
  for (const auto& r : cv.fold_reports) fold_reports.push_back(finsent::eval_report_to_json(r));
  out["folds"] = std::move(fold_reports);
  out["mean"] = finsent::eval_report_to_json(cv.mean);
  std::cout << out.dump(2) << "\n";
  return kExitOk;
}

int cmd_sweep(const std::string& grid_path, const std::string& data_path,
              const std::string& out_path, std::optional<int> folds,
              std::optional<std::uint32_t> seed) {
  finsent::SweepGrid grid = finsent::sweep_grid_from_json(finsent::load_json_file(grid_path));
  if (folds) grid.folds = *folds;
  if (seed) grid.seed = *seed;
  const finsent::Dataset data = finsent::load_headlines_file(data_path);
  const std::vector<finsent::SweepRow> rows = finsent::grid_sweep(data, grid);

  const json table = json{{"folds", grid.folds},
                          {"seed", grid.seed},
                          {"results", finsent::sweep_rows_to_json(rows)}};
  if (!out_path.empty()) finsent::save_json_file(table, out_path);
  std::cout << finsent::sweep_table_text(rows);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"financial headline sentiment regression pipeline"};
  app.require_subcommand(1);

  std::string config_path, data_path, model_path, out_path, gold_path, pred_path;
  int folds = 5;
  std::optional<std::uint32_t> seed;
  std::optional<int> sweep_folds;

  auto* train = app.add_subcommand("train", "fit a vectorizer + regressor bundle");
  train->add_option("--config", config_path, "pipeline config JSON")->required();
  train->add_option("--data", data_path, "scored headlines JSON")->required();
  train->add_option("--model", model_path, "bundle output path")->required();

  auto* predict = app.add_subcommand("predict", "score headlines with a trained bundle");
  predict->add_option("--model", model_path, "bundle path")->required();
  predict->add_option("--data", data_path, "headlines JSON")->required();
  predict->add_option("--out", out_path, "predictions output path")->required();

  auto* evaluate = app.add_subcommand("evaluate", "score predictions against a gold set");
  evaluate->add_option("--gold", gold_path, "scored headlines JSON")->required();
  evaluate->add_option("--pred", pred_path, "predictions JSON")->required();

  auto* cv = app.add_subcommand("cv", "k-fold cross-validation of one pipeline");
  cv->add_option("--config", config_path, "pipeline config JSON")->required();
  cv->add_option("--data", data_path, "scored headlines JSON")->required();
  cv->add_option("--folds", folds, "number of folds")->capture_default_str();
  cv->add_option("--seed", seed, "fold-split seed (defaults to the config seed)");

  auto* sweep = app.add_subcommand("sweep", "cross-validate a grid of pipelines");
  sweep->add_option("--config", config_path, "sweep grid JSON")->required();
  sweep->add_option("--data", data_path, "scored headlines JSON")->required();
  sweep->add_option("--out", out_path, "ranked results JSON output path");
  sweep->add_option("--folds", sweep_folds, "override the grid's fold count");
  sweep->add_option("--seed", seed, "override the grid's seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints help or the usage error
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (train->parsed()) return cmd_train(config_path, data_path, model_path);
    if (predict->parsed()) return cmd_predict(model_path, data_path, out_path);
    if (evaluate->parsed()) return cmd_evaluate(gold_path, pred_path);
    if (cv->parsed()) return cmd_cv(config_path, data_path, folds, seed);
    if (sweep->parsed()) return cmd_sweep(config_path, data_path, out_path, sweep_folds, seed);
  } catch (const finsent::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitUsage;
}
