#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace embsvm {

/// Dense real vector used for composed document representations.
struct DenseVector {
  std::vector<double> components;

  DenseVector() = default;
  explicit DenseVector(std::size_t dim) : components(dim, 0.0) {}
  explicit DenseVector(std::vector<double> values) : components(std::move(values)) {}

  std::size_t dim() const noexcept { return components.size(); }
  double operator[](std::size_t j) const { return components[j]; }
  double& operator[](std::size_t j) { return components[j]; }

  friend bool operator==(const DenseVector&, const DenseVector&) = default;
};

/// Sparse vector of declared dimension.
///
/// Invariants: indices strictly increasing and < dim; every stored value is
/// finite and nonzero.
class SparseVector {
 public:
  SparseVector() = default;
  explicit SparseVector(std::uint32_t dim) : dim_(dim) {}

  /// Takes already sorted entries; throws ValidationError on any violated invariant.
  static SparseVector from_sorted(std::uint32_t dim, std::vector<std::uint32_t> indices,
                                  std::vector<double> values);

  /// Sorts entries, sums duplicate indices and drops zero sums.
  static SparseVector from_unsorted(std::uint32_t dim,
                                    std::vector<std::pair<std::uint32_t, double>> entries);

  static SparseVector from_dense(const DenseVector& dense);

  std::uint32_t dim() const noexcept { return dim_; }
  std::size_t nnz() const noexcept { return indices_.size(); }
  bool empty() const noexcept { return indices_.empty(); }
  std::span<const std::uint32_t> indices() const noexcept { return indices_; }
  std::span<const double> values() const noexcept { return values_; }

  double squared_norm() const noexcept;
  double norm() const noexcept;
  double sum() const noexcept;

  /// Copy scaled to unit L2 norm. The zero vector is returned unchanged.
  SparseVector normalized() const;
  SparseVector scaled(double factor) const;

  double dot(std::span<const double> dense) const noexcept;
  double dot(std::span<const float> dense) const noexcept;
  double dot(const SparseVector& other) const noexcept;
  /// dense += alpha * this
  void axpy_into(double alpha, std::span<double> dense) const noexcept;

  DenseVector to_dense() const;

  friend bool operator==(const SparseVector&, const SparseVector&) = default;

 private:
  std::uint32_t dim_ = 0;
  std::vector<std::uint32_t> indices_;
  std::vector<double> values_;
};

}  // namespace embsvm
