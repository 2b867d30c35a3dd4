#include "embsvm/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "embsvm/error.hpp"

namespace embsvm {

SparseVector SparseVector::from_sorted(std::uint32_t dim, std::vector<std::uint32_t> indices,
                                       std::vector<double> values) {
  if (indices.size() != values.size()) {
    throw ValidationError("sparse vector: index and value counts differ");
  }
  for (std::size_t k = 0; k < indices.size(); ++k) {
    if (indices[k] >= dim) {
      throw ValidationError("sparse vector: index " + std::to_string(indices[k]) +
                            " out of range for dim " + std::to_string(dim));
    }
    if (k > 0 && indices[k] <= indices[k - 1]) {
      throw ValidationError("sparse vector: indices not strictly increasing");
    }
    if (!std::isfinite(values[k]) || values[k] == 0.0) {
      throw ValidationError("sparse vector: stored values must be finite and nonzero");
    }
  }
  SparseVector v(dim);
  v.indices_ = std::move(indices);
  v.values_ = std::move(values);
  return v;
}

SparseVector SparseVector::from_unsorted(std::uint32_t dim,
                                         std::vector<std::pair<std::uint32_t, double>> entries) {
  std::sort(entries.begin(), entries.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  SparseVector v(dim);
  v.indices_.reserve(entries.size());
  v.values_.reserve(entries.size());
  for (std::size_t k = 0; k < entries.size();) {
    const std::uint32_t idx = entries[k].first;
    if (idx >= dim) {
      throw ValidationError("sparse vector: index " + std::to_string(idx) +
                            " out of range for dim " + std::to_string(dim));
    }
    double sum = 0.0;
    for (; k < entries.size() && entries[k].first == idx; ++k) sum += entries[k].second;
    if (!std::isfinite(sum)) throw ValidationError("sparse vector: non-finite value");
    if (sum != 0.0) {
      v.indices_.push_back(idx);
      v.values_.push_back(sum);
    }
  }
  return v;
}

SparseVector SparseVector::from_dense(const DenseVector& dense) {
  SparseVector v(static_cast<std::uint32_t>(dense.dim()));
  for (std::size_t j = 0; j < dense.dim(); ++j) {
    if (!std::isfinite(dense[j])) throw ValidationError("dense vector: non-finite component");
    if (dense[j] != 0.0) {
      v.indices_.push_back(static_cast<std::uint32_t>(j));
      v.values_.push_back(dense[j]);
    }
  }
  return v;
}

double SparseVector::squared_norm() const noexcept {
  double s = 0.0;
  for (double x : values_) s += x * x;
  return s;
}

double SparseVector::norm() const noexcept { return std::sqrt(squared_norm()); }

double SparseVector::sum() const noexcept {
  double s = 0.0;
  for (double x : values_) s += x;
  return s;
}

SparseVector SparseVector::normalized() const {
  const double n = norm();
  if (n == 0.0) return *this;
  return scaled(1.0 / n);
}

SparseVector SparseVector::scaled(double factor) const {
  SparseVector v(dim_);
  v.indices_.reserve(nnz());
  v.values_.reserve(nnz());
  for (std::size_t k = 0; k < nnz(); ++k) {
    const double x = values_[k] * factor;
    if (x != 0.0) {
      v.indices_.push_back(indices_[k]);
      v.values_.push_back(x);
    }
  }
  return v;
}

double SparseVector::dot(std::span<const double> dense) const noexcept {
  double s = 0.0;
  for (std::size_t k = 0; k < indices_.size(); ++k) s += values_[k] * dense[indices_[k]];
  return s;
}

double SparseVector::dot(std::span<const float> dense) const noexcept {
  double s = 0.0;
  for (std::size_t k = 0; k < indices_.size(); ++k) {
    s += values_[k] * static_cast<double>(dense[indices_[k]]);
  }
  return s;
}

double SparseVector::dot(const SparseVector& other) const noexcept {
  double s = 0.0;
  std::size_t a = 0, b = 0;
  while (a < indices_.size() && b < other.indices_.size()) {
    if (indices_[a] < other.indices_[b]) {
      ++a;
    } else if (indices_[a] > other.indices_[b]) {
      ++b;
    } else {
      s += values_[a++] * other.values_[b++];
    }
  }
  return s;
}

void SparseVector::axpy_into(double alpha, std::span<double> dense) const noexcept {
  for (std::size_t k = 0; k < indices_.size(); ++k) dense[indices_[k]] += alpha * values_[k];
}

DenseVector SparseVector::to_dense() const {
  DenseVector d(dim_);
  for (std::size_t k = 0; k < indices_.size(); ++k) d[indices_[k]] = values_[k];
  return d;
}

}  // namespace embsvm
