#pragma once

#include <Eigen/Dense>

namespace finsent {

using DenseVector = Eigen::VectorXd;

// Row-major so per-document vectors are contiguous rows.
using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

template <class A, class B>
bool exact_equal(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  return (a.derived().array() == b.derived().array()).all();
}

}  // namespace finsent
