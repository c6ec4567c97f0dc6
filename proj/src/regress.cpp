#include "finsent/regress.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "finsent/errors.hpp"
#include "finsent/rng.hpp"

namespace finsent {

DesignMatrix DesignMatrix::from_sparse(std::vector<SparseVector> rows, int dim) {
  DesignMatrix m;
  for (const auto& r : rows)
    if (r.dim != dim)
      throw DimensionMismatchError("sparse row dimension " + std::to_string(r.dim) +
                                   " != matrix dimension " + std::to_string(dim));
  m.sparse_ = std::move(rows);
  m.dim_ = dim;
  m.dense_mode_ = false;
  return m;
}

DesignMatrix DesignMatrix::from_dense(RowMatrix rows) {
  DesignMatrix m;
  m.dim_ = static_cast<int>(rows.cols());
  m.dense_ = std::move(rows);
  m.dense_mode_ = true;
  return m;
}

double DesignMatrix::row_dot(int i, const DenseVector& w) const {
  return dense_mode_ ? dense_.row(i).dot(w.transpose()) : sparse_[i].dot(w);
}

void DesignMatrix::add_row_to(int i, DenseVector& acc, double scale) const {
  if (dense_mode_)
    acc += scale * dense_.row(i).transpose();
  else
    sparse_[i].add_to(acc, scale);
}

DenseVector DesignMatrix::row_dense(int i) const {
  return dense_mode_ ? DenseVector(dense_.row(i).transpose()) : sparse_[i].to_dense();
}

const SparseVector& DesignMatrix::sparse_row(int i) const {
  if (dense_mode_) throw ValidationError("sparse_row called on a dense design matrix");
  return sparse_[i];
}

RowMatrix DesignMatrix::to_dense() const {
  if (dense_mode_) return dense_;
  RowMatrix out = RowMatrix::Zero(n_rows(), dim_);
  for (int i = 0; i < n_rows(); ++i)
    for (const auto& [j, v] : sparse_[i].entries) out(i, j) = v;
  return out;
}

void DesignMatrix::set_targets(DenseVector y) {
  if (y.size() != n_rows())
    throw DimensionMismatchError("targets length " + std::to_string(y.size()) +
                                 " != row count " + std::to_string(n_rows()));
  targets_ = std::move(y);
}

const DenseVector& DesignMatrix::targets() const {
  if (!targets_) throw ValidationError("design matrix has no targets");
  return *targets_;
}

DesignMatrix DesignMatrix::select_rows(const std::vector<int>& idx) const {
  DesignMatrix out;
  out.dim_ = dim_;
  out.dense_mode_ = dense_mode_;
  if (dense_mode_) {
    out.dense_.resize(static_cast<Eigen::Index>(idx.size()), dim_);
    for (std::size_t i = 0; i < idx.size(); ++i) out.dense_.row(i) = dense_.row(idx[i]);
  } else {
    out.sparse_.reserve(idx.size());
    for (int i : idx) out.sparse_.push_back(sparse_[i]);
  }
  if (targets_) {
    DenseVector y(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) y[i] = (*targets_)[idx[i]];
    out.targets_ = std::move(y);
  }
  return out;
}

void SvrConfig::validate() const {
  if (!(c > 0.0)) throw ValidationError("svr c must be > 0");
  if (epsilon < 0.0) throw ValidationError("svr epsilon must be >= 0");
  if (epochs < 1) throw ValidationError("svr epochs must be >= 1");
  if (!(rate > 0.0)) throw ValidationError("svr rate must be > 0");
}

void GbmConfig::validate() const {
  if (rounds < 1) throw ValidationError("gbm rounds must be >= 1");
  if (!(alpha > 0.0) || alpha > 1.0) throw ValidationError("gbm alpha must be in (0, 1]");
  if (lambda < 0.0) throw ValidationError("gbm lambda must be >= 0");
  if (max_depth < 1) throw ValidationError("gbm max_depth must be >= 1");
  if (min_samples_leaf < 1) throw ValidationError("gbm min_samples_leaf must be >= 1");
}

LinearModel fit_ols(const DesignMatrix& X, double ridge) {
  if (ridge < 0.0) throw ValidationError("ols ridge must be >= 0");
  const int n = X.n_rows();
  if (n < 1) throw ValidationError("fit_ols needs at least one row");
  const DenseVector& y = X.targets();
  const int d = X.dim();

  // Gram matrix of the bias-augmented system [X 1]; the bias stays unpenalized.
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(d + 1, d + 1);
  DenseVector b = DenseVector::Zero(d + 1);
  if (X.is_dense()) {
    const RowMatrix dense = X.to_dense();
    a.topLeftCorner(d, d) = dense.transpose() * dense;
    a.block(0, d, d, 1) = dense.colwise().sum().transpose();
    b.head(d) = dense.transpose() * y;
  } else {
    for (int i = 0; i < n; ++i) {
      const auto& entries = X.sparse_row(i).entries;
      for (const auto& [j1, v1] : entries) {
        b[j1] += v1 * y[i];
        a(j1, d) += v1;
        for (const auto& [j2, v2] : entries) a(j1, j2) += v1 * v2;
      }
    }
  }
  a.block(d, 0, 1, d) = a.block(0, d, d, 1).transpose();
  a(d, d) = static_cast<double>(n);
  b[d] = y.sum();
  for (int j = 0; j < d; ++j) a(j, j) += ridge;

  DenseVector solution;
  if (ridge == 0.0) {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    if (!lu.isInvertible())
      throw SingularSystemError("normal equations are singular; use ridge > 0");
    solution = lu.solve(b);
  } else {
    solution = Eigen::LDLT<Eigen::MatrixXd>(a).solve(b);
  }

  LinearModel model;
  model.weights = solution.head(d);
  model.bias = solution[d];
  return model;
}

namespace {

double svr_objective(const DesignMatrix& X, const SvrConfig& config, const DenseVector& w,
                     double b) {
  const DenseVector& y = X.targets();
  double hinge = 0.0;
  for (int i = 0; i < X.n_rows(); ++i) {
    const double r = std::abs(y[i] - X.row_dot(i, w) - b);
    hinge += std::max(0.0, r - config.epsilon);
  }
  return 0.5 * w.squaredNorm() + config.c * hinge;
}

}  // namespace

LinearModel fit_svr(const DesignMatrix& X, const SvrConfig& config, SvrDiagnostics* diagnostics) {
  config.validate();
  const int n = X.n_rows();
  if (n < 1) throw ValidationError("fit_svr needs at least one row");
  const DenseVector& y = X.targets();
  const int d = X.dim();

  std::mt19937 rng(config.seed);
  DenseVector w = DenseVector::Zero(d);
  double b = 0.0;
  // Per sample, step on the unbiased estimate 0.5*||w||^2 + c*n*hinge_i of the
  // full objective.
  const double hinge_scale = config.c * static_cast<double>(n);

  DenseVector w_avg(d);
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    const double rate = config.rate / (1.0 + epoch);
    const std::vector<int> order = shuffled_indices(n, rng);
    w_avg.setZero();
    double b_avg = 0.0;
    for (int i : order) {
      const double residual = y[i] - X.row_dot(i, w) - b;
      w *= (1.0 - rate);
      if (std::abs(residual) > config.epsilon) {
        const double g = residual > 0.0 ? 1.0 : -1.0;  // descend along -g * x
        X.add_row_to(i, w, rate * hinge_scale * g);
        b += rate * hinge_scale * g;
      }
      w_avg += w;
      b_avg += b;
    }
    if (diagnostics) {
      w_avg /= static_cast<double>(n);
      b_avg /= static_cast<double>(n);
      diagnostics->epoch_objective.push_back(svr_objective(X, config, w_avg, b_avg));
    }
  }

  LinearModel model;
  model.weights = std::move(w);
  model.bias = b;
  return model;
}

double RegressionTree::eval(const DenseVector& x) const {
  int node = 0;
  while (!nodes[node].is_leaf())
    node = x[nodes[node].feature] < nodes[node].threshold ? nodes[node].left : nodes[node].right;
  return nodes[node].value;
}

double RegressionTree::eval(const DesignMatrix& X, int row) const {
  return eval(X.row_dense(row));
}

namespace {

void check_dim(int model_dim, const DesignMatrix& X) {
  if (model_dim != X.dim())
    throw DimensionMismatchError("model expects dimension " + std::to_string(model_dim) +
                                 ", design matrix has " + std::to_string(X.dim()));
}

}  // namespace

DenseVector predict(const LinearModel& model, const DesignMatrix& X) {
  check_dim(static_cast<int>(model.weights.size()), X);
  DenseVector out(X.n_rows());
  for (int i = 0; i < X.n_rows(); ++i) out[i] = X.row_dot(i, model.weights) + model.bias;
  return out;
}

DenseVector predict(const GbmModel& model, const DesignMatrix& X) {
  return predict(model, X, static_cast<int>(model.trees.size()));
}

DenseVector predict(const GbmModel& model, const DesignMatrix& X, int rounds) {
  check_dim(model.feature_dim, X);
  rounds = std::min<int>(rounds, static_cast<int>(model.trees.size()));
  DenseVector out = DenseVector::Constant(X.n_rows(), model.base_score);
  for (int i = 0; i < X.n_rows(); ++i) {
    const DenseVector x = X.row_dense(i);
    for (int t = 0; t < rounds; ++t) out[i] += model.shrinkage * model.trees[t].eval(x);
  }
  return out;
}

DenseVector clip_scores(DenseVector scores) {
  return scores.cwiseMax(-1.0).cwiseMin(1.0);
}

}  // namespace finsent
