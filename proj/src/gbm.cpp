#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "finsent/errors.hpp"
#include "finsent/regress.hpp"

namespace finsent {

namespace {

double leaf_score(double sum, int count, double lambda) {
  return sum * sum / (static_cast<double>(count) + lambda);
}

// A node's samples, kept sorted per feature (ties by sample index). Sorting
// happens once at the root; children inherit order via stable partition.
using SortedColumns = std::vector<std::vector<int>>;

struct SplitChoice {
  bool found = false;
  int feature = -1;
  double threshold = 0.0;
  double gain = 0.0;
  int left_count = 0;
};

// Exact greedy search: every boundary between distinct sorted feature values
// is a candidate; gain is the squared-error reduction with the lambda-shrunk
// leaf values.
SplitChoice best_split(const RowMatrix& x, const DenseVector& residual,
                       const SortedColumns& columns, const GbmConfig& config) {
  SplitChoice best;
  const int n = static_cast<int>(columns[0].size());
  if (n < 2 * config.min_samples_leaf) return best;

  double total = 0.0;
  for (int i : columns[0]) total += residual[i];
  const double parent_score = leaf_score(total, n, config.lambda);

  for (int feature = 0; feature < static_cast<int>(columns.size()); ++feature) {
    const std::vector<int>& order = columns[feature];
    double left_sum = 0.0;
    for (int i = 0; i + 1 < n; ++i) {
      left_sum += residual[order[i]];
      const double lo = x(order[i], feature);
      const double hi = x(order[i + 1], feature);
      if (lo == hi) continue;
      const int left_count = i + 1;
      const int right_count = n - left_count;
      if (left_count < config.min_samples_leaf || right_count < config.min_samples_leaf) continue;
      const double gain = leaf_score(left_sum, left_count, config.lambda) +
                          leaf_score(total - left_sum, right_count, config.lambda) - parent_score;
      if (gain > best.gain) {
        best.found = true;
        best.feature = feature;
        best.threshold = lo + (hi - lo) / 2.0;
        best.gain = gain;
        best.left_count = left_count;
      }
    }
  }
  return best;
}

struct BuildItem {
  int node = 0;
  SortedColumns columns;
  int depth = 0;
};

RegressionTree build_tree(const RowMatrix& x, const DenseVector& residual,
                          const GbmConfig& config, std::vector<int>* leaf_of_sample) {
  const int n = static_cast<int>(x.rows());
  const int d = static_cast<int>(x.cols());

  SortedColumns root(d);
  for (int feature = 0; feature < d; ++feature) {
    auto& order = root[feature];
    order.resize(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      if (x(a, feature) != x(b, feature)) return x(a, feature) < x(b, feature);
      return a < b;
    });
  }

  RegressionTree tree;
  tree.nodes.emplace_back();
  std::vector<BuildItem> stack;
  stack.push_back({0, std::move(root), 0});
  std::vector<char> goes_left(n, 0);

  while (!stack.empty()) {
    BuildItem item = std::move(stack.back());
    stack.pop_back();
    const auto& samples = item.columns[0];

    SplitChoice split;
    if (item.depth < config.max_depth)
      split = best_split(x, residual, item.columns, config);

    if (!split.found) {
      double sum = 0.0;
      for (int i : samples) sum += residual[i];
      TreeNode& leaf = tree.nodes[item.node];
      leaf.feature = -1;
      leaf.value = sum / (static_cast<double>(samples.size()) + config.lambda);
      for (int i : samples) (*leaf_of_sample)[i] = item.node;
      continue;
    }

    for (int i : item.columns[split.feature]) goes_left[i] = 0;
    for (int k = 0; k < split.left_count; ++k) goes_left[item.columns[split.feature][k]] = 1;

    BuildItem left{static_cast<int>(tree.nodes.size()), SortedColumns(item.columns.size()),
                   item.depth + 1};
    BuildItem right{left.node + 1, SortedColumns(item.columns.size()), item.depth + 1};
    for (std::size_t f = 0; f < item.columns.size(); ++f) {
      left.columns[f].reserve(split.left_count);
      right.columns[f].reserve(samples.size() - split.left_count);
      for (int i : item.columns[f]) (goes_left[i] ? left.columns[f] : right.columns[f]).push_back(i);
    }

    tree.nodes.emplace_back();
    tree.nodes.emplace_back();
    TreeNode& node = tree.nodes[item.node];
    node.feature = split.feature;
    node.threshold = split.threshold;
    node.left = left.node;
    node.right = right.node;
    stack.push_back(std::move(left));
    stack.push_back(std::move(right));
  }
  return tree;
}

}  // namespace

GbmModel fit_gbm(const DesignMatrix& X, const GbmConfig& config, GbmDiagnostics* diagnostics) {
  config.validate();
  const int n = X.n_rows();
  if (n < 1) throw ValidationError("fit_gbm needs at least one row");
  const DenseVector& y = X.targets();

  // Exact greedy splits want column access; desk-scale matrices densify fine.
  const RowMatrix x = X.to_dense();

  GbmModel model;
  model.base_score = y.mean();
  model.shrinkage = config.alpha;
  model.feature_dim = X.dim();

  DenseVector pred = DenseVector::Constant(n, model.base_score);
  DenseVector residual(n);
  std::vector<int> leaf_of_sample(n);
  for (int round = 0; round < config.rounds; ++round) {
    residual = y - pred;
    RegressionTree tree = build_tree(x, residual, config, &leaf_of_sample);
    for (int i = 0; i < n; ++i)
      pred[i] += config.alpha * tree.nodes[leaf_of_sample[i]].value;
    model.trees.push_back(std::move(tree));
    if (diagnostics)
      diagnostics->round_rmse.push_back(std::sqrt((y - pred).squaredNorm() / n));
  }
  return model;
}

}  // namespace finsent
