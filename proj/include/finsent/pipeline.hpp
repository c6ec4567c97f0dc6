#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "finsent/corpus.hpp"
#include "finsent/pv.hpp"
#include "finsent/regress.hpp"
#include "finsent/vectorize.hpp"

namespace finsent {

enum class VectorizerKind { ngram, tfidf, pv };
enum class RegressorKind { ols, svr, gbm };

struct OlsConfig {
  double ridge = 1e-8;
  void validate() const;
  bool operator==(const OlsConfig&) const = default;
};

// One vectorizer and one regressor; the kind selects which nested config is
// active, the inactive ones keep their defaults.
struct PipelineConfig {
  VectorizerKind vectorizer_kind = VectorizerKind::ngram;
  NgramConfig ngram;  // active for ngram and tfidf
  PvConfig pv;

  RegressorKind regressor_kind = RegressorKind::ols;
  OlsConfig ols;
  SvrConfig svr;
  GbmConfig gbm;

  bool mask_companies = true;
  bool clip = true;
  std::uint32_t seed = 42;

  void validate() const;
  bool operator==(const PipelineConfig&) const = default;
};

std::string vectorizer_label(const PipelineConfig& config);
std::string regressor_label(const PipelineConfig& config);

using VectorizerModel = std::variant<Vocabulary, TfidfModel, ParagraphVectorModel>;
using RegressorModel = std::variant<LinearModel, GbmModel>;

struct FittedPipeline {
  PipelineConfig config;
  VectorizerModel vectorizer;
  RegressorModel regressor;

  int feature_dim() const;
};

// Masks the company (when enabled) and tokenizes the title.
TokenSequence preprocess(const HeadlineRecord& record, bool mask);

// Fits the vectorizer then the regressor on the whole dataset. Every record
// must carry a sentiment; offenders are listed in the ValidationError.
FittedPipeline fit_pipeline(const Dataset& training, const PipelineConfig& config);

// Transforms the inputs with the fitted vectorizer. Paragraph-vector rows are
// inferred against the frozen word matrices (the trained doc matrix is only
// used for the rows seen at fit time).
DesignMatrix build_design(const FittedPipeline& pipeline, const Dataset& inputs);

// Raw regressor outputs, clamped to [-1, 1] when config.clip is set.
DenseVector predict_pipeline(const FittedPipeline& pipeline, const Dataset& inputs);

}  // namespace finsent
