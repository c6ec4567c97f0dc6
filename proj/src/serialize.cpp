#include "finsent/serialize.hpp"

#include <fstream>
#include <set>

#include "finsent/errors.hpp"

namespace finsent {

namespace {

void require_keys(const json& obj, const std::set<std::string>& required,
                  const std::set<std::string>& optional, const std::string& context) {
  if (!obj.is_object()) throw ParseError(context + " must be a JSON object");
  for (const auto& key : required)
    if (!obj.contains(key)) throw ParseError(context + " is missing key \"" + key + "\"");
  for (const auto& [key, _] : obj.items())
    if (!required.count(key) && !optional.count(key))
      throw ParseError("unknown key \"" + key + "\" in " + context);
}

json matrix_to_json(const RowMatrix& m) {
  json data = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) data.push_back(m(i, j));
  return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(data)}};
}

RowMatrix matrix_from_json(const json& j, const std::string& context) {
  require_keys(j, {"rows", "cols", "data"}, {}, context);
  const Eigen::Index rows = j["rows"].get<Eigen::Index>();
  const Eigen::Index cols = j["cols"].get<Eigen::Index>();
  const auto& data = j["data"];
  if (!data.is_array() || static_cast<Eigen::Index>(data.size()) != rows * cols)
    throw ParseError(context + ": data length does not match rows*cols");
  RowMatrix m(rows, cols);
  Eigen::Index at = 0;
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j2 = 0; j2 < cols; ++j2) m(i, j2) = data[at++].get<double>();
  return m;
}

json vector_to_json(const DenseVector& v) {
  json data = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) data.push_back(v[i]);
  return data;
}

DenseVector vector_from_json(const json& j, const std::string& context) {
  if (!j.is_array()) throw ParseError(context + " must be an array");
  DenseVector v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  return v;
}

json container(const std::string& kind, json payload) {
  return json{{"format_version", kFormatVersion}, {"kind", kind}, {"payload", std::move(payload)}};
}

std::string open_container(const json& j, json& payload) {
  require_keys(j, {"format_version", "kind", "payload"}, {}, "model container");
  const int version = j["format_version"].get<int>();
  if (version != kFormatVersion)
    throw ParseError("unsupported format_version " + std::to_string(version));
  payload = j["payload"];
  return j["kind"].get<std::string>();
}

json ngram_config_to_json(const NgramConfig& c) {
  json o{{"n_min", c.n_min}, {"n_max", c.n_max}, {"min_df", c.min_df}};
  if (c.max_features) o["max_features"] = *c.max_features;
  return o;
}

NgramConfig ngram_config_from_json(const json& j, const std::string& context) {
  require_keys(j, {}, {"n_min", "n_max", "min_df", "max_features"}, context);
  NgramConfig c;
  if (j.contains("n_min")) c.n_min = j["n_min"].get<int>();
  if (j.contains("n_max")) c.n_max = j["n_max"].get<int>();
  if (j.contains("min_df")) c.min_df = j["min_df"].get<int>();
  if (j.contains("max_features")) c.max_features = j["max_features"].get<int>();
  return c;
}

json pv_config_to_json(const PvConfig& c) {
  return json{{"dim", c.dim},
              {"epochs", c.epochs},
              {"window", c.window},
              {"negative", c.negative},
              {"initial_rate", c.initial_rate},
              {"final_rate", c.final_rate},
              {"seed", c.seed}};
}

PvConfig pv_config_from_json(const json& j, const std::string& context) {
  require_keys(j, {},
               {"dim", "epochs", "window", "negative", "initial_rate", "final_rate", "seed"},
               context);
  PvConfig c;
  if (j.contains("dim")) c.dim = j["dim"].get<int>();
  if (j.contains("epochs")) c.epochs = j["epochs"].get<int>();
  if (j.contains("window")) c.window = j["window"].get<int>();
  if (j.contains("negative")) c.negative = j["negative"].get<int>();
  if (j.contains("initial_rate")) c.initial_rate = j["initial_rate"].get<double>();
  if (j.contains("final_rate")) c.final_rate = j["final_rate"].get<double>();
  if (j.contains("seed")) c.seed = j["seed"].get<std::uint32_t>();
  return c;
}

json vocabulary_payload(const Vocabulary& v) {
  return json{{"config", ngram_config_to_json(v.config)},
              {"terms", v.terms},
              {"doc_freq", v.doc_freq},
              {"num_docs", v.num_docs}};
}

Vocabulary vocabulary_from_payload(const json& j) {
  require_keys(j, {"config", "terms", "doc_freq", "num_docs"}, {}, "ngram payload");
  Vocabulary v;
  v.config = ngram_config_from_json(j["config"], "ngram payload config");
  v.terms = j["terms"].get<std::vector<std::string>>();
  v.doc_freq = j["doc_freq"].get<std::vector<int>>();
  v.num_docs = j["num_docs"].get<int>();
  if (v.terms.size() != v.doc_freq.size())
    throw ParseError("ngram payload: terms and doc_freq lengths differ");
  for (std::size_t i = 0; i < v.terms.size(); ++i) v.index[v.terms[i]] = static_cast<int>(i);
  return v;
}

}  // namespace

json serialize_vectorizer(const VectorizerModel& model) {
  if (const auto* vocab = std::get_if<Vocabulary>(&model))
    return container("ngram", vocabulary_payload(*vocab));
  if (const auto* tfidf = std::get_if<TfidfModel>(&model)) {
    return container("tfidf", json{{"vocabulary", vocabulary_payload(tfidf->vocabulary)},
                                   {"idf", vector_to_json(tfidf->idf)}});
  }
  const auto& pv = std::get<ParagraphVectorModel>(model);
  return container("pv", json{{"config", pv_config_to_json(pv.config)},
                              {"words", pv.vocab.words},
                              {"counts", pv.vocab.counts},
                              {"input_word", matrix_to_json(pv.input_word)},
                              {"output_word", matrix_to_json(pv.output_word)},
                              {"docs", matrix_to_json(pv.docs)},
                              {"epoch_mean_loss", pv.epoch_mean_loss}});
}

VectorizerModel deserialize_vectorizer(const json& j) {
  json payload;
  const std::string kind = open_container(j, payload);
  if (kind == "ngram") return vocabulary_from_payload(payload);
  if (kind == "tfidf") {
    require_keys(payload, {"vocabulary", "idf"}, {}, "tfidf payload");
    TfidfModel model;
    model.vocabulary = vocabulary_from_payload(payload["vocabulary"]);
    model.idf = vector_from_json(payload["idf"], "tfidf idf");
    if (model.idf.size() != model.vocabulary.size())
      throw ParseError("tfidf payload: idf length does not match vocabulary");
    return model;
  }
  if (kind == "pv") {
    require_keys(payload,
                 {"config", "words", "counts", "input_word", "output_word", "docs",
                  "epoch_mean_loss"},
                 {}, "pv payload");
    ParagraphVectorModel model;
    model.config = pv_config_from_json(payload["config"], "pv payload config");
    model.vocab.words = payload["words"].get<std::vector<std::string>>();
    model.vocab.counts = payload["counts"].get<std::vector<std::int64_t>>();
    if (model.vocab.words.size() != model.vocab.counts.size())
      throw ParseError("pv payload: words and counts lengths differ");
    for (std::size_t i = 0; i < model.vocab.words.size(); ++i)
      model.vocab.index[model.vocab.words[i]] = static_cast<int>(i);
    model.input_word = matrix_from_json(payload["input_word"], "pv input_word");
    model.output_word = matrix_from_json(payload["output_word"], "pv output_word");
    model.docs = matrix_from_json(payload["docs"], "pv docs");
    model.epoch_mean_loss = payload["epoch_mean_loss"].get<std::vector<double>>();
    model.sampling_table = build_sampling_table(model.vocab.counts);
    return model;
  }
  throw ParseError("unknown vectorizer kind \"" + kind + "\"");
}

namespace {

json tree_to_json(const RegressionTree& tree) {
  json nodes = json::array();
  for (const auto& n : tree.nodes) {
    nodes.push_back(json{{"feature", n.feature},
                         {"threshold", n.threshold},
                         {"left", n.left},
                         {"right", n.right},
                         {"value", n.value}});
  }
  return nodes;
}

RegressionTree tree_from_json(const json& j) {
  RegressionTree tree;
  for (const auto& nj : j) {
    require_keys(nj, {"feature", "threshold", "left", "right", "value"}, {}, "tree node");
    TreeNode n;
    n.feature = nj["feature"].get<int>();
    n.threshold = nj["threshold"].get<double>();
    n.left = nj["left"].get<int>();
    n.right = nj["right"].get<int>();
    n.value = nj["value"].get<double>();
    tree.nodes.push_back(n);
  }
  if (tree.nodes.empty()) throw ParseError("tree has no nodes");
  return tree;
}

std::string regressor_kind_name(RegressorKind kind) {
  switch (kind) {
    case RegressorKind::ols: return "ols";
    case RegressorKind::svr: return "svr";
    case RegressorKind::gbm: return "gbm";
  }
  throw ParseError("unknown regressor kind");
}

}  // namespace

json serialize_regressor(const RegressorModel& model, RegressorKind kind) {
  if (const auto* linear = std::get_if<LinearModel>(&model)) {
    if (kind == RegressorKind::gbm)
      throw ValidationError("linear model cannot be serialized as gbm");
    return container(regressor_kind_name(kind),
                     json{{"weights", vector_to_json(linear->weights)}, {"bias", linear->bias}});
  }
  const auto& gbm = std::get<GbmModel>(model);
  json trees = json::array();
  for (const auto& t : gbm.trees) trees.push_back(tree_to_json(t));
  return container("gbm", json{{"base_score", gbm.base_score},
                               {"shrinkage", gbm.shrinkage},
                               {"feature_dim", gbm.feature_dim},
                               {"trees", std::move(trees)}});
}

std::pair<RegressorModel, RegressorKind> deserialize_regressor(const json& j) {
  json payload;
  const std::string kind = open_container(j, payload);
  if (kind == "ols" || kind == "svr") {
    require_keys(payload, {"weights", "bias"}, {}, kind + " payload");
    LinearModel model;
    model.weights = vector_from_json(payload["weights"], kind + " weights");
    model.bias = payload["bias"].get<double>();
    return {model, kind == "ols" ? RegressorKind::ols : RegressorKind::svr};
  }
  if (kind == "gbm") {
    require_keys(payload, {"base_score", "shrinkage", "feature_dim", "trees"}, {}, "gbm payload");
    GbmModel model;
    model.base_score = payload["base_score"].get<double>();
    model.shrinkage = payload["shrinkage"].get<double>();
    model.feature_dim = payload["feature_dim"].get<int>();
    for (const auto& tj : payload["trees"]) model.trees.push_back(tree_from_json(tj));
    return {model, RegressorKind::gbm};
  }
  throw ParseError("unknown regressor kind \"" + kind + "\"");
}

json pipeline_config_to_json(const PipelineConfig& config) {
  json vec;
  switch (config.vectorizer_kind) {
    case VectorizerKind::ngram:
      vec = ngram_config_to_json(config.ngram);
      vec["kind"] = "ngram";
      break;
    case VectorizerKind::tfidf:
      vec = ngram_config_to_json(config.ngram);
      vec["kind"] = "tfidf";
      break;
    case VectorizerKind::pv:
      vec = pv_config_to_json(config.pv);
      vec["kind"] = "pv";
      break;
  }
  json reg;
  switch (config.regressor_kind) {
    case RegressorKind::ols:
      reg = json{{"kind", "ols"}, {"ridge", config.ols.ridge}};
      break;
    case RegressorKind::svr:
      reg = json{{"kind", "svr"},     {"c", config.svr.c},       {"epsilon", config.svr.epsilon},
                 {"epochs", config.svr.epochs}, {"rate", config.svr.rate}, {"seed", config.svr.seed}};
      break;
    case RegressorKind::gbm:
      reg = json{{"kind", "gbm"},
                 {"rounds", config.gbm.rounds},
                 {"alpha", config.gbm.alpha},
                 {"lambda", config.gbm.lambda},
                 {"max_depth", config.gbm.max_depth},
                 {"min_samples_leaf", config.gbm.min_samples_leaf}};
      break;
  }
  return json{{"vectorizer", std::move(vec)},
              {"regressor", std::move(reg)},
              {"mask_companies", config.mask_companies},
              {"clip", config.clip},
              {"seed", config.seed}};
}

PipelineConfig pipeline_config_from_json(const json& j) {
  require_keys(j, {"vectorizer", "regressor"}, {"mask_companies", "clip", "seed"},
               "pipeline config");
  PipelineConfig config;

  const json& vec = j["vectorizer"];
  if (!vec.is_object() || !vec.contains("kind") || !vec["kind"].is_string())
    throw ParseError("vectorizer config needs a string \"kind\"");
  const std::string vkind = vec["kind"].get<std::string>();
  json vec_rest = vec;
  vec_rest.erase("kind");
  if (vkind == "ngram") {
    config.vectorizer_kind = VectorizerKind::ngram;
    config.ngram = ngram_config_from_json(vec_rest, "ngram vectorizer config");
  } else if (vkind == "tfidf") {
    config.vectorizer_kind = VectorizerKind::tfidf;
    config.ngram = ngram_config_from_json(vec_rest, "tfidf vectorizer config");
  } else if (vkind == "pv") {
    config.vectorizer_kind = VectorizerKind::pv;
    config.pv = pv_config_from_json(vec_rest, "pv vectorizer config");
  } else {
    throw ParseError("unknown vectorizer kind \"" + vkind + "\"");
  }

  const json& reg = j["regressor"];
  if (!reg.is_object() || !reg.contains("kind") || !reg["kind"].is_string())
    throw ParseError("regressor config needs a string \"kind\"");
  const std::string rkind = reg["kind"].get<std::string>();
  if (rkind == "ols") {
    require_keys(reg, {"kind"}, {"ridge"}, "ols regressor config");
    config.regressor_kind = RegressorKind::ols;
    if (reg.contains("ridge")) config.ols.ridge = reg["ridge"].get<double>();
  } else if (rkind == "svr") {
    require_keys(reg, {"kind"}, {"c", "epsilon", "epochs", "rate", "seed"},
                 "svr regressor config");
    config.regressor_kind = RegressorKind::svr;
    if (reg.contains("c")) config.svr.c = reg["c"].get<double>();
    if (reg.contains("epsilon")) config.svr.epsilon = reg["epsilon"].get<double>();
    if (reg.contains("epochs")) config.svr.epochs = reg["epochs"].get<int>();
    if (reg.contains("rate")) config.svr.rate = reg["rate"].get<double>();
    if (reg.contains("seed")) config.svr.seed = reg["seed"].get<std::uint32_t>();
  } else if (rkind == "gbm") {
    require_keys(reg, {"kind"}, {"rounds", "alpha", "lambda", "max_depth", "min_samples_leaf"},
                 "gbm regressor config");
    config.regressor_kind = RegressorKind::gbm;
    if (reg.contains("rounds")) config.gbm.rounds = reg["rounds"].get<int>();
    if (reg.contains("alpha")) config.gbm.alpha = reg["alpha"].get<double>();
    if (reg.contains("lambda")) config.gbm.lambda = reg["lambda"].get<double>();
    if (reg.contains("max_depth")) config.gbm.max_depth = reg["max_depth"].get<int>();
    if (reg.contains("min_samples_leaf"))
      config.gbm.min_samples_leaf = reg["min_samples_leaf"].get<int>();
  } else {
    throw ParseError("unknown regressor kind \"" + rkind + "\"");
  }

  if (j.contains("mask_companies")) config.mask_companies = j["mask_companies"].get<bool>();
  if (j.contains("clip")) config.clip = j["clip"].get<bool>();
  if (j.contains("seed")) config.seed = j["seed"].get<std::uint32_t>();
  return config;
}

json serialize_bundle(const FittedPipeline& pipeline) {
  return container("bundle",
                   json{{"config", pipeline_config_to_json(pipeline.config)},
                        {"vectorizer", serialize_vectorizer(pipeline.vectorizer)},
                        {"regressor",
                         serialize_regressor(pipeline.regressor, pipeline.config.regressor_kind)}});
}

FittedPipeline deserialize_bundle(const json& j) {
  json payload;
  const std::string kind = open_container(j, payload);
  if (kind != "bundle") throw ParseError("expected a bundle container, got \"" + kind + "\"");
  require_keys(payload, {"config", "vectorizer", "regressor"}, {}, "bundle payload");

  FittedPipeline pipeline;
  pipeline.config = pipeline_config_from_json(payload["config"]);
  pipeline.vectorizer = deserialize_vectorizer(payload["vectorizer"]);
  auto [regressor, rkind] = deserialize_regressor(payload["regressor"]);
  pipeline.regressor = std::move(regressor);
  if (rkind != pipeline.config.regressor_kind)
    throw ParseError("bundle regressor kind does not match its config");

  // The halves must agree on the feature dimension.
  const int vec_dim = pipeline.feature_dim();
  int reg_dim;
  if (const auto* linear = std::get_if<LinearModel>(&pipeline.regressor))
    reg_dim = static_cast<int>(linear->weights.size());
  else
    reg_dim = std::get<GbmModel>(pipeline.regressor).feature_dim;
  if (vec_dim != reg_dim)
    throw ParseError("bundle halves disagree on feature dimension: vectorizer " +
                     std::to_string(vec_dim) + ", regressor " + std::to_string(reg_dim));
  return pipeline;
}

json eval_report_to_json(const EvalReport& report) {
  json o;
  o["r2"] = report.r2 ? json(*report.r2) : json("degenerate");
  o["cosine"] = report.cosine;
  o["cosine_weight"] = report.cosine_weight;
  o["cosine_score"] = report.cosine_score;
  o["n"] = report.n;
  return o;
}

json sweep_grid_to_json(const SweepGrid& grid) {
  json configs = json::array();
  for (const auto& c : grid.configs) configs.push_back(pipeline_config_to_json(c));
  return json{{"folds", grid.folds}, {"seed", grid.seed}, {"grid", std::move(configs)}};
}

SweepGrid sweep_grid_from_json(const json& j) {
  require_keys(j, {"grid"}, {"folds", "seed"}, "sweep grid");
  SweepGrid grid;
  if (!j["grid"].is_array() || j["grid"].empty())
    throw ParseError("sweep grid \"grid\" must be a non-empty array");
  for (const auto& cj : j["grid"]) grid.configs.push_back(pipeline_config_from_json(cj));
  if (j.contains("folds")) grid.folds = j["folds"].get<int>();
  if (j.contains("seed")) grid.seed = j["seed"].get<std::uint32_t>();
  return grid;
}

json sweep_rows_to_json(const std::vector<SweepRow>& rows) {
  json out = json::array();
  for (std::size_t rank = 0; rank < rows.size(); ++rank) {
    const SweepRow& row = rows[rank];
    json o;
    o["rank"] = rank + 1;
    o["vectorizer"] = vectorizer_label(row.config);
    o["learner"] = regressor_label(row.config);
    o["config"] = pipeline_config_to_json(row.config);
    if (row.cv) {
      o["mean"] = eval_report_to_json(row.cv->mean);
      json folds = json::array();
      for (const auto& r : row.cv->fold_reports) folds.push_back(eval_report_to_json(r));
      o["folds"] = std::move(folds);
      o["error"] = nullptr;
    } else {
      o["mean"] = nullptr;
      o["folds"] = json::array();
      o["error"] = row.error;
    }
    out.push_back(std::move(o));
  }
  return out;
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError("'" + path + "': " + e.what());
  }
}

void save_json_file(const json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  out << j.dump(2) << "\n";
}

}  // namespace finsent
