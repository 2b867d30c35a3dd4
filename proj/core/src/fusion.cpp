#include "embsvm/fusion.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "embsvm/error.hpp"

namespace embsvm {

FusedVector fuse(const SparseVector& sparse, const DenseVector& dense, bool scale_blocks) {
  const std::uint64_t total = std::uint64_t{sparse.dim()} + dense.dim();
  if (total > std::numeric_limits<std::uint32_t>::max()) {
    throw ValidationError("fused dimension exceeds 2^32 - 1");
  }
  double sparse_scale = 1.0;
  double dense_scale = 1.0;
  if (scale_blocks) {
    const double sn = sparse.norm();
    if (sn > 0.0) sparse_scale = 1.0 / sn;
    double dsq = 0.0;
    for (double x : dense.components) dsq += x * x;
    if (dsq > 0.0) dense_scale = 1.0 / std::sqrt(dsq);
  }

  std::vector<std::uint32_t> indices;
  std::vector<double> values;
  indices.reserve(sparse.nnz() + dense.dim());
  values.reserve(sparse.nnz() + dense.dim());
  for (std::size_t k = 0; k < sparse.nnz(); ++k) {
    const double x = sparse.values()[k] * sparse_scale;
    if (x == 0.0) continue;
    indices.push_back(sparse.indices()[k]);
    values.push_back(x);
  }
  const std::uint32_t boundary = sparse.dim();
  for (std::size_t j = 0; j < dense.dim(); ++j) {
    const double x = dense[j] * dense_scale;
    if (x == 0.0) continue;
    indices.push_back(boundary + static_cast<std::uint32_t>(j));
    values.push_back(x);
  }
  return FusedVector{
      SparseVector::from_sorted(static_cast<std::uint32_t>(total), std::move(indices),
                                std::move(values)),
      boundary};
}

std::pair<SparseVector, DenseVector> split_fused(const FusedVector& fused) {
  const auto& v = fused.vector;
  if (fused.boundary > v.dim()) throw ValidationError("fusion boundary beyond vector dimension");
  std::vector<std::uint32_t> indices;
  std::vector<double> values;
  DenseVector dense(v.dim() - fused.boundary);
  for (std::size_t k = 0; k < v.nnz(); ++k) {
    const std::uint32_t i = v.indices()[k];
    if (i < fused.boundary) {
      indices.push_back(i);
      values.push_back(v.values()[k]);
    } else {
      dense[i - fused.boundary] = v.values()[k];
    }
  }
  return {SparseVector::from_sorted(fused.boundary, std::move(indices), std::move(values)),
          std::move(dense)};
}

}  // namespace embsvm
