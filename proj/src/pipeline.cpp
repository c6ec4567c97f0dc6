#include "finsent/pipeline.hpp"

#include <sstream>

#include "finsent/errors.hpp"

namespace finsent {

void OlsConfig::validate() const {
  if (ridge < 0.0) throw ValidationError("ols ridge must be >= 0");
}

void PipelineConfig::validate() const {
  switch (vectorizer_kind) {
    case VectorizerKind::ngram:
    case VectorizerKind::tfidf:
      ngram.validate();
      break;
    case VectorizerKind::pv:
      pv.validate();
      break;
  }
  switch (regressor_kind) {
    case RegressorKind::ols: ols.validate(); break;
    case RegressorKind::svr: svr.validate(); break;
    case RegressorKind::gbm: gbm.validate(); break;
  }
}

std::string vectorizer_label(const PipelineConfig& config) {
  std::ostringstream os;
  switch (config.vectorizer_kind) {
    case VectorizerKind::ngram:
      os << "ngram(" << config.ngram.n_min << "," << config.ngram.n_max << ")";
      break;
    case VectorizerKind::tfidf:
      os << "tfidf(" << config.ngram.n_min << "," << config.ngram.n_max << ")";
      break;
    case VectorizerKind::pv:
      os << "pv(dim=" << config.pv.dim << ")";
      break;
  }
  return os.str();
}

std::string regressor_label(const PipelineConfig& config) {
  switch (config.regressor_kind) {
    case RegressorKind::ols: return "ols";
    case RegressorKind::svr: return "svr";
    case RegressorKind::gbm: return "gbm";
  }
  return "?";
}

int FittedPipeline::feature_dim() const {
  if (const auto* vocab = std::get_if<Vocabulary>(&vectorizer)) return vocab->size();
  if (const auto* tfidf = std::get_if<TfidfModel>(&vectorizer)) return tfidf->vocabulary.size();
  return std::get<ParagraphVectorModel>(vectorizer).config.dim;
}

TokenSequence preprocess(const HeadlineRecord& record, bool mask) {
  if (mask && !record.company.empty()) return tokenize(mask_company(record).title);
  return tokenize(record.title);
}

namespace {

std::vector<TokenSequence> preprocess_all(const Dataset& data, bool mask) {
  std::vector<TokenSequence> docs;
  docs.reserve(data.size());
  for (const auto& r : data.records) docs.push_back(preprocess(r, mask));
  return docs;
}

DesignMatrix sparse_design(const std::vector<SparseVector>& rows, int dim) {
  return DesignMatrix::from_sparse(rows, dim);
}

}  // namespace

FittedPipeline fit_pipeline(const Dataset& training, const PipelineConfig& config) {
  config.validate();
  if (training.records.empty()) throw ValidationError("training dataset is empty");

  std::string unscored;
  for (const auto& r : training.records)
    if (!r.sentiment) unscored += unscored.empty() ? r.id : ", " + r.id;
  if (!unscored.empty())
    throw ValidationError("training records without sentiment: " + unscored);

  const auto docs = preprocess_all(training, config.mask_companies);
  DenseVector y(training.size());
  for (std::size_t i = 0; i < training.size(); ++i) y[i] = *training.records[i].sentiment;

  FittedPipeline fitted;
  fitted.config = config;

  DesignMatrix design;
  switch (config.vectorizer_kind) {
    case VectorizerKind::ngram: {
      Vocabulary vocab = fit_ngram(docs, config.ngram);
      std::vector<SparseVector> rows;
      rows.reserve(docs.size());
      for (const auto& doc : docs) rows.push_back(transform_ngram(vocab, doc));
      design = sparse_design(rows, vocab.size());
      fitted.vectorizer = std::move(vocab);
      break;
    }
    case VectorizerKind::tfidf: {
      TfidfModel model = fit_tfidf(docs, config.ngram);
      std::vector<SparseVector> rows;
      rows.reserve(docs.size());
      for (const auto& doc : docs) rows.push_back(transform_tfidf(model, doc));
      design = sparse_design(rows, model.vocabulary.size());
      fitted.vectorizer = std::move(model);
      break;
    }
    case VectorizerKind::pv: {
      ParagraphVectorModel model = fit_pv(docs, config.pv);
      // The regressor trains on the vectors learned jointly with the words.
      design = DesignMatrix::from_dense(model.docs);
      fitted.vectorizer = std::move(model);
      break;
    }
  }
  design.set_targets(std::move(y));

  switch (config.regressor_kind) {
    case RegressorKind::ols:
      fitted.regressor = fit_ols(design, config.ols.ridge);
      break;
    case RegressorKind::svr:
      fitted.regressor = fit_svr(design, config.svr);
      break;
    case RegressorKind::gbm:
      fitted.regressor = fit_gbm(design, config.gbm);
      break;
  }
  return fitted;
}

DesignMatrix build_design(const FittedPipeline& pipeline, const Dataset& inputs) {
  const auto docs = preprocess_all(inputs, pipeline.config.mask_companies);

  if (const auto* vocab = std::get_if<Vocabulary>(&pipeline.vectorizer)) {
    std::vector<SparseVector> rows;
    rows.reserve(docs.size());
    for (const auto& doc : docs) rows.push_back(transform_ngram(*vocab, doc));
    return sparse_design(rows, vocab->size());
  }
  if (const auto* tfidf = std::get_if<TfidfModel>(&pipeline.vectorizer)) {
    std::vector<SparseVector> rows;
    rows.reserve(docs.size());
    for (const auto& doc : docs) rows.push_back(transform_tfidf(*tfidf, doc));
    return sparse_design(rows, tfidf->vocabulary.size());
  }

  const auto& pv = std::get<ParagraphVectorModel>(pipeline.vectorizer);
  RowMatrix rows(docs.size(), pv.config.dim);
  for (std::size_t i = 0; i < docs.size(); ++i) {
    const std::uint32_t seed = pipeline.config.seed + static_cast<std::uint32_t>(i) + 1;
    rows.row(i) = infer_pv(pv, docs[i], pv.config.epochs, seed).vector.transpose();
  }
  return DesignMatrix::from_dense(std::move(rows));
}

DenseVector predict_pipeline(const FittedPipeline& pipeline, const Dataset& inputs) {
  if (inputs.records.empty()) return DenseVector(0);
  const DesignMatrix design = build_design(pipeline, inputs);
  DenseVector scores;
  if (const auto* linear = std::get_if<LinearModel>(&pipeline.regressor))
    scores = predict(*linear, design);
  else
    scores = predict(std::get<GbmModel>(pipeline.regressor), design);
  return pipeline.config.clip ? clip_scores(std::move(scores)) : scores;
}

}  // namespace finsent
