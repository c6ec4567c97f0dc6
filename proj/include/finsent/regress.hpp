#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "finsent/linalg.hpp"
#include "finsent/sparse.hpp"

namespace finsent {

// Feature rows plus optional targets. Rows are either sparse (n-gram counts)
// or dense (embeddings); a matrix holds one kind only.
class DesignMatrix {
 public:
  DesignMatrix() = default;

  static DesignMatrix from_sparse(std::vector<SparseVector> rows, int dim);
  static DesignMatrix from_dense(RowMatrix rows);

  int n_rows() const { return dense_mode_ ? static_cast<int>(dense_.rows())
                                          : static_cast<int>(sparse_.size()); }
  int dim() const { return dim_; }
  bool is_dense() const { return dense_mode_; }

  double row_dot(int i, const DenseVector& w) const;
  void add_row_to(int i, DenseVector& acc, double scale) const;
  DenseVector row_dense(int i) const;
  const SparseVector& sparse_row(int i) const;  // sparse matrices only
  RowMatrix to_dense() const;

  void set_targets(DenseVector y);
  bool has_targets() const { return targets_.has_value(); }
  const DenseVector& targets() const;

  DesignMatrix select_rows(const std::vector<int>& idx) const;

 private:
  std::vector<SparseVector> sparse_;
  RowMatrix dense_;
  bool dense_mode_ = false;
  int dim_ = 0;
  std::optional<DenseVector> targets_;
};

struct LinearModel {
  DenseVector weights;
  double bias = 0.0;

  bool operator==(const LinearModel& other) const {
    return bias == other.bias && exact_equal(weights, other.weights);
  }
};

struct SvrConfig {
  double c = 1.0;        // hinge weight (inverse regularization strength)
  double epsilon = 0.1;  // insensitivity tube half-width
  int epochs = 200;
  double rate = 0.01;
  std::uint32_t seed = 1;

  void validate() const;
  bool operator==(const SvrConfig&) const = default;
};

struct GbmConfig {
  int rounds = 100;
  double alpha = 0.3;   // shrinkage applied to every tree's output
  double lambda = 1.0;  // L2 penalty in the leaf-value denominator
  int max_depth = 3;
  int min_samples_leaf = 1;

  void validate() const;
  bool operator==(const GbmConfig&) const = default;
};

struct TreeNode {
  int feature = -1;        // -1 marks a leaf
  double threshold = 0.0;  // x[feature] < threshold goes left
  int left = -1;
  int right = -1;
  double value = 0.0;  // leaf output

  bool is_leaf() const { return feature < 0; }
  bool operator==(const TreeNode&) const = default;
};

struct RegressionTree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  double eval(const DenseVector& x) const;
  double eval(const DesignMatrix& X, int row) const;
  bool operator==(const RegressionTree&) const = default;
};

struct GbmModel {
  double base_score = 0.0;
  double shrinkage = 0.3;  // prediction = base_score + shrinkage * sum of trees
  int feature_dim = 0;
  std::vector<RegressionTree> trees;

  bool operator==(const GbmModel&) const = default;
};

struct SvrDiagnostics {
  // Objective 0.5*||w||^2 + c * sum(hinge) at each epoch's averaged iterate.
  std::vector<double> epoch_objective;
};

struct GbmDiagnostics {
  std::vector<double> round_rmse;  // training RMSE after each boosting round
};

// Minimizes sum((y - w.x - b)^2) + ridge*||w||^2 via the normal equations on
// the bias-augmented system; the bias is not regularized. ridge == 0 on a
// singular system throws SingularSystemError.
LinearModel fit_ols(const DesignMatrix& X, double ridge = 1e-8);

// Linear epsilon-insensitive SVR in the primal, trained by epoch-wise
// stochastic subgradient descent at rate rate/(1+epoch), rows shuffled per
// epoch with the seeded generator.
LinearModel fit_svr(const DesignMatrix& X, const SvrConfig& config,
                    SvrDiagnostics* diagnostics = nullptr);

// Gradient-boosted regression trees on residuals: exact greedy splits
// maximizing squared-error gain, leaf value = sum(residuals) / (count + lambda).
GbmModel fit_gbm(const DesignMatrix& X, const GbmConfig& config,
                 GbmDiagnostics* diagnostics = nullptr);

DenseVector predict(const LinearModel& model, const DesignMatrix& X);
DenseVector predict(const GbmModel& model, const DesignMatrix& X);
// Uses only the first `rounds` trees.
DenseVector predict(const GbmModel& model, const DesignMatrix& X, int rounds);

DenseVector clip_scores(DenseVector scores);

}  // namespace finsent
