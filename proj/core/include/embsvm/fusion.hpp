#pragma once

#include <cstdint>
#include <utility>

#include "embsvm/sparse.hpp"

namespace embsvm {

/// Sparse block followed by a dense block. Index boundary + j holds dense
/// component j.
struct FusedVector {
  SparseVector vector;
  std::uint32_t boundary = 0;

  friend bool operator==(const FusedVector&, const FusedVector&) = default;
};

/// Concatenates the blocks. With scale_blocks each nonzero block is scaled to
/// unit L2 norm first. Dense zeros are not stored.
FusedVector fuse(const SparseVector& sparse, const DenseVector& dense, bool scale_blocks);

/// Inverse of fuse (up to the scaling applied by fuse).
std::pair<SparseVector, DenseVector> split_fused(const FusedVector& fused);

}  // namespace embsvm
