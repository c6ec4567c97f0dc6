#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "finsent/linalg.hpp"
#include "finsent/pipeline.hpp"

namespace finsent {

// Gold and predicted scores aligned by id. num_gold_total is the size of the
// full gold set; predictions may cover only part of it.
struct ScoredPair {
  DenseVector gold;
  DenseVector predicted;
  int num_gold_total = 0;
};

struct EvalReport {
  std::optional<double> r2;  // nullopt marks a degenerate (constant or <2) gold
  double cosine = 0.0;
  double cosine_weight = 0.0;
  double cosine_score = 0.0;
  int n = 0;
};

// 1 - SSres/SStot. Throws DimensionMismatchError, ValidationError (n < 2) or
// DegenerateGoldError (constant gold).
double r_squared(const DenseVector& gold, const DenseVector& pred);

// Throws ZeroVectorError when either norm vanishes.
double cosine(const DenseVector& gold, const DenseVector& pred);

// cosine_weight = |P| / num_gold_total, cosine_score = cosine_weight * cosine.
// A degenerate gold is reported via r2 = nullopt rather than an error.
EvalReport evaluate_pair(const ScoredPair& pair);

// Seeded shuffle of 0..n-1 cut into k folds whose sizes differ by at most 1.
std::vector<std::vector<int>> k_fold_split(int n, int k, std::uint32_t seed);

struct CvResult {
  std::vector<EvalReport> fold_reports;
  EvalReport mean;  // field-wise; r2 averaged over non-degenerate folds only
  std::vector<std::vector<int>> folds;           // indices into the scored records
  std::vector<FittedPipeline> fold_pipelines;    // one per fold, fit on the complement
};

// Leakage-free k-fold: each fold's pipeline is fit on the other folds only and
// scored on the held-out records with num_gold_total = fold size. Unscored
// records are excluded up front.
CvResult cross_validate(const Dataset& dataset, const PipelineConfig& config, int k,
                        std::uint32_t seed);

struct SweepGrid {
  std::vector<PipelineConfig> configs;
  int folds = 5;
  std::uint32_t seed = 0;
};

struct SweepRow {
  std::size_t config_index = 0;  // position in the grid
  PipelineConfig config;
  std::optional<CvResult> cv;
  std::string error;  // non-empty when this cell failed
};

// Cross-validates every configuration; rows are ranked by mean cosine_score
// descending, ties broken by mean r2 then grid order. Failed cells keep their
// row with an error note instead of aborting the sweep.
std::vector<SweepRow> grid_sweep(const Dataset& dataset, const SweepGrid& grid);

// Fixed-width text table: vectorizer, learner, r2, cosine_score.
std::string sweep_table_text(const std::vector<SweepRow>& rows);

}  // namespace finsent
