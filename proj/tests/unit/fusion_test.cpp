#include <gtest/gtest.h>

#include "embsvm/fusion.hpp"
#include "embsvm/rng.hpp"

namespace embsvm {
namespace {

TEST(Fuse, IndexArithmetic) {
  const auto s = SparseVector::from_sorted(4, {1}, {2.0});
  const auto f = fuse(s, DenseVector(std::vector<double>{0.0, 3.0}), false);
  EXPECT_EQ(f.boundary, 4u);
  EXPECT_EQ(f.vector, SparseVector::from_sorted(6, {1, 5}, {2.0, 3.0}));
}

TEST(Fuse, EmptyBlocks) {
  const auto f = fuse(SparseVector(5), DenseVector(3), true);
  EXPECT_TRUE(f.vector.empty());
  EXPECT_EQ(f.vector.dim(), 8u);
}

TEST(Fuse, BlockScaling) {
  const auto s = SparseVector::from_sorted(2, {0, 1}, {3.0, 4.0});
  const auto f = fuse(s, DenseVector(std::vector<double>{1.0}), true);
  EXPECT_EQ(f.vector.indices().size(), 3u);
  EXPECT_DOUBLE_EQ(f.vector.values()[0], 0.6);
  EXPECT_DOUBLE_EQ(f.vector.values()[1], 0.8);
  EXPECT_DOUBLE_EQ(f.vector.values()[2], 1.0);
}

TEST(Fuse, ZeroDenseKeepsSparseEntries) {
  const auto s = SparseVector::from_sorted(9, {2, 7}, {1.5, -2.0});
  const auto f = fuse(s, DenseVector(4), false);
  EXPECT_EQ(std::vector<std::uint32_t>(f.vector.indices().begin(), f.vector.indices().end()),
            (std::vector<std::uint32_t>{2, 7}));
  EXPECT_EQ(std::vector<double>(f.vector.values().begin(), f.vector.values().end()),
            (std::vector<double>{1.5, -2.0}));
}

TEST(Fuse, SplitRecoversInputs) {
  Rng rng(6);
  for (int round = 0; round < 100; ++round) {
    const std::uint32_t ds = static_cast<std::uint32_t>(rng.below(20));
    const std::size_t dd = 1 + rng.below(10);
    std::vector<std::pair<std::uint32_t, double>> entries;
    for (std::uint32_t i = 0; i < ds; ++i) {
      if (rng.uniform() < 0.3) entries.emplace_back(i, rng.normal());
    }
    const auto s = SparseVector::from_unsorted(ds, entries);
    DenseVector d(dd);
    for (std::size_t j = 0; j < dd; ++j) d[j] = rng.uniform() < 0.2 ? 0.0 : rng.normal();
    for (bool scale : {false, true}) {
      const auto f = fuse(s, d, scale);
      EXPECT_EQ(f.vector.dim(), ds + dd);
      const auto [s2, d2] = split_fused(f);
      if (scale) {
        EXPECT_EQ(s2, s.normalized());
        EXPECT_EQ(d2, SparseVector::from_dense(d).normalized().to_dense());
      } else {
        EXPECT_EQ(s2, s);
        EXPECT_EQ(d2, d);
      }
    }
  }
}

}  // namespace
}  // namespace embsvm
