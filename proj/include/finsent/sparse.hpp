#pragma once

#include <utility>
#include <vector>

#include "finsent/linalg.hpp"

namespace finsent {

// Sorted (index, value) pairs, strictly increasing indices, no stored zeros.
struct SparseVector {
  std::vector<std::pair<int, double>> entries;
  int dim = 0;

  double dot(const DenseVector& w) const {
    double s = 0.0;
    for (const auto& [i, v] : entries) s += v * w[i];
    return s;
  }

  void add_to(DenseVector& acc, double scale) const {
    for (const auto& [i, v] : entries) acc[i] += scale * v;
  }

  DenseVector to_dense() const {
    DenseVector d = DenseVector::Zero(dim);
    for (const auto& [i, v] : entries) d[i] = v;
    return d;
  }

  double squared_norm() const {
    double s = 0.0;
    for (const auto& [i, v] : entries) s += v * v;
    return s;
  }

  void scale(double s) {
    for (auto& [i, v] : entries) v *= s;
  }

  bool operator==(const SparseVector&) const = default;
};

}  // namespace finsent
