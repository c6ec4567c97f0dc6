#include "finsent/eval.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <iomanip>
#include <limits>
#include <random>
#include <sstream>

#include "finsent/errors.hpp"
#include "finsent/rng.hpp"

namespace finsent {

double r_squared(const DenseVector& gold, const DenseVector& pred) {
  if (gold.size() != pred.size())
    throw DimensionMismatchError("r_squared: gold has " + std::to_string(gold.size()) +
                                 " entries, predictions have " + std::to_string(pred.size()));
  if (gold.size() < 2) throw ValidationError("r_squared needs at least 2 samples");
  const double mean = gold.mean();
  const double ss_tot = (gold.array() - mean).matrix().squaredNorm();
  if (ss_tot == 0.0) throw DegenerateGoldError("r_squared is undefined for a constant gold set");
  const double ss_res = (gold - pred).squaredNorm();
  return 1.0 - ss_res / ss_tot;
}

double cosine(const DenseVector& gold, const DenseVector& pred) {
  if (gold.size() != pred.size())
    throw DimensionMismatchError("cosine: gold has " + std::to_string(gold.size()) +
                                 " entries, predictions have " + std::to_string(pred.size()));
  const double gn = gold.norm();
  const double pn = pred.norm();
  if (gn == 0.0 || pn == 0.0)
    throw ZeroVectorError("cosine is undefined for a zero-norm score vector");
  return gold.dot(pred) / (gn * pn);
}

EvalReport evaluate_pair(const ScoredPair& pair) {
  if (pair.gold.size() != pair.predicted.size())
    throw DimensionMismatchError("scored pair: gold and predicted lengths differ");
  if (pair.predicted.size() > pair.num_gold_total)
    throw ValidationError("scored pair: more predictions than gold entries");

  EvalReport report;
  report.n = static_cast<int>(pair.predicted.size());
  try {
    report.r2 = r_squared(pair.gold, pair.predicted);
  } catch (const DegenerateGoldError&) {
    report.r2 = std::nullopt;
  } catch (const ValidationError&) {
    report.r2 = std::nullopt;  // fewer than 2 samples
  }
  report.cosine = cosine(pair.gold, pair.predicted);
  report.cosine_weight = static_cast<double>(report.n) / pair.num_gold_total;
  report.cosine_score = report.cosine_weight * report.cosine;
  return report;
}

std::vector<std::vector<int>> k_fold_split(int n, int k, std::uint32_t seed) {
  if (k < 2) throw ValidationError("k_fold_split needs k >= 2");
  if (k > n)
    throw ValidationError("k_fold_split: k = " + std::to_string(k) + " exceeds n = " +
                          std::to_string(n));
  std::mt19937 rng(seed);
  const std::vector<int> order = shuffled_indices(n, rng);

  // First n % k folds take one extra element.
  std::vector<std::vector<int>> folds(k);
  const int base = n / k;
  const int extra = n % k;
  int at = 0;
  for (int f = 0; f < k; ++f) {
    const int size = base + (f < extra ? 1 : 0);
    folds[f].assign(order.begin() + at, order.begin() + at + size);
    at += size;
  }
  return folds;
}

namespace {

EvalReport mean_report(const std::vector<EvalReport>& folds) {
  EvalReport mean;
  double r2_sum = 0.0;
  int r2_count = 0;
  for (const auto& r : folds) {
    if (r.r2) {
      r2_sum += *r.r2;
      ++r2_count;
    }
    mean.cosine += r.cosine;
    mean.cosine_weight += r.cosine_weight;
    mean.cosine_score += r.cosine_score;
    mean.n += r.n;
  }
  const double k = static_cast<double>(folds.size());
  mean.cosine /= k;
  mean.cosine_weight /= k;
  mean.cosine_score /= k;
  if (r2_count > 0) mean.r2 = r2_sum / r2_count;
  return mean;
}

}  // namespace

CvResult cross_validate(const Dataset& dataset, const PipelineConfig& config, int k,
                        std::uint32_t seed) {
  config.validate();
  std::vector<int> scored;
  for (std::size_t i = 0; i < dataset.size(); ++i)
    if (dataset.records[i].sentiment) scored.push_back(static_cast<int>(i));
  const int n = static_cast<int>(scored.size());
  if (k < 2) throw ValidationError("cross_validate needs k >= 2");
  if (n < k)
    throw ValidationError("cross_validate: only " + std::to_string(n) +
                          " scored records for k = " + std::to_string(k));

  CvResult result;
  result.folds = k_fold_split(n, k, seed);

  for (const auto& fold : result.folds) {
    std::vector<char> held(n, 0);
    for (int i : fold) held[i] = 1;

    Dataset train, test;
    train.provenance = dataset.provenance;
    test.provenance = dataset.provenance;
    for (int i = 0; i < n; ++i)
      (held[i] ? test : train).records.push_back(dataset.records[scored[i]]);

    FittedPipeline pipeline = fit_pipeline(train, config);
    const DenseVector pred = predict_pipeline(pipeline, test);
    DenseVector gold(test.size());
    for (std::size_t i = 0; i < test.size(); ++i) gold[i] = *test.records[i].sentiment;

    result.fold_reports.push_back(
        evaluate_pair({gold, pred, static_cast<int>(fold.size())}));
    result.fold_pipelines.push_back(std::move(pipeline));
  }
  result.mean = mean_report(result.fold_reports);
  return result;
}

std::vector<SweepRow> grid_sweep(const Dataset& dataset, const SweepGrid& grid) {
  if (grid.configs.empty()) throw ValidationError("sweep grid is empty");
  if (grid.folds < 2) throw ValidationError("sweep grid needs folds >= 2");

  std::vector<SweepRow> rows;
  rows.reserve(grid.configs.size());
  for (std::size_t i = 0; i < grid.configs.size(); ++i) {
    SweepRow row;
    row.config_index = i;
    row.config = grid.configs[i];
    try {
      row.cv = cross_validate(dataset, grid.configs[i], grid.folds, grid.seed);
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }

  // Highest mean cosine_score first; r2 breaks ties; failed rows sink to the
  // bottom in grid order.
  std::stable_sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
    const bool a_ok = a.cv.has_value();
    const bool b_ok = b.cv.has_value();
    if (a_ok != b_ok) return a_ok;
    if (!a_ok) return a.config_index < b.config_index;
    if (a.cv->mean.cosine_score != b.cv->mean.cosine_score)
      return a.cv->mean.cosine_score > b.cv->mean.cosine_score;
    const double a_r2 = a.cv->mean.r2.value_or(-std::numeric_limits<double>::infinity());
    const double b_r2 = b.cv->mean.r2.value_or(-std::numeric_limits<double>::infinity());
    if (a_r2 != b_r2) return a_r2 > b_r2;
    return a.config_index < b.config_index;
  });
  return rows;
}

std::string sweep_table_text(const std::vector<SweepRow>& rows) {
  std::vector<std::array<std::string, 4>> cells;
  cells.push_back({"Vectorization Method", "Learning Model", "R2 Score", "Cosine Score"});
  for (const auto& row : rows) {
    std::array<std::string, 4> line;
    line[0] = vectorizer_label(row.config);
    line[1] = regressor_label(row.config);
    if (row.cv) {
      std::ostringstream r2, cs;
      if (row.cv->mean.r2)
        r2 << std::fixed << std::setprecision(4) << *row.cv->mean.r2;
      else
        r2 << "degenerate";
      cs << std::fixed << std::setprecision(4) << row.cv->mean.cosine_score;
      line[2] = r2.str();
      line[3] = cs.str();
    } else {
      line[2] = "error";
      line[3] = row.error;
    }
    cells.push_back(std::move(line));
  }

  std::array<std::size_t, 4> width{};
  for (const auto& line : cells)
    for (int c = 0; c < 4; ++c) width[c] = std::max(width[c], line[c].size());

  std::ostringstream out;
  for (std::size_t r = 0; r < cells.size(); ++r) {
    out << "| ";
    for (int c = 0; c < 4; ++c)
      out << std::left << std::setw(static_cast<int>(width[c])) << cells[r][c]
          << (c == 3 ? " |" : " | ");
    out << "\n";
    if (r == 0) {
      out << "|";
      for (int c = 0; c < 4; ++c) out << std::string(width[c] + 2, '-') << (c == 3 ? "|" : "+");
      out << "\n";
    }
  }
  return out.str();
}

}  // namespace finsent
