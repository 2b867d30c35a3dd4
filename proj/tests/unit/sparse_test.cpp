#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "embsvm/error.hpp"
#include "embsvm/rng.hpp"
#include "embsvm/sparse.hpp"

namespace embsvm {
namespace {

TEST(SparseVector, FromSortedValidates) {
  EXPECT_NO_THROW(SparseVector::from_sorted(3, {0, 2}, {1.0, -1.0}));
  EXPECT_THROW(SparseVector::from_sorted(3, {2, 0}, {1.0, 1.0}), ValidationError);
  EXPECT_THROW(SparseVector::from_sorted(3, {1, 1}, {1.0, 1.0}), ValidationError);
  EXPECT_THROW(SparseVector::from_sorted(3, {3}, {1.0}), ValidationError);
  EXPECT_THROW(SparseVector::from_sorted(3, {0}, {0.0}), ValidationError);
  EXPECT_THROW(SparseVector::from_sorted(3, {0}, {std::nan("")}), ValidationError);
  EXPECT_THROW(SparseVector::from_sorted(3, {0, 1}, {1.0}), ValidationError);
}

TEST(SparseVector, FromUnsortedSumsAndDropsZeros) {
  const auto v = SparseVector::from_unsorted(5, {{3, 1.0}, {1, 2.0}, {3, -1.0}, {1, 0.5}});
  EXPECT_EQ(v, SparseVector::from_sorted(5, {1}, {2.5}));
  EXPECT_THROW(SparseVector::from_unsorted(2, {{2, 1.0}}), ValidationError);
}

TEST(SparseVector, DenseRoundTrip) {
  const DenseVector d(std::vector<double>{0.0, 1.5, 0.0, -2.0});
  const auto v = SparseVector::from_dense(d);
  EXPECT_EQ(v.nnz(), 2u);
  EXPECT_EQ(v.to_dense(), d);
}

TEST(SparseVector, Products) {
  const auto a = SparseVector::from_sorted(6, {0, 2, 5}, {1.0, 2.0, 3.0});
  const auto b = SparseVector::from_sorted(6, {2, 3, 5}, {4.0, 9.0, -1.0});
  EXPECT_EQ(a.dot(b), 5.0);
  EXPECT_EQ(b.dot(a), 5.0);
  const std::vector<double> w = {1, 1, 1, 1, 1, 2};
  const std::vector<float> wf = {1, 1, 1, 1, 1, 2};
  EXPECT_EQ(a.dot(std::span<const double>(w)), 9.0);
  EXPECT_EQ(a.dot(std::span<const float>(wf)), 9.0);
  std::vector<double> acc(6, 0.0);
  a.axpy_into(2.0, acc);
  EXPECT_EQ(acc, (std::vector<double>{2, 0, 4, 0, 0, 6}));
  EXPECT_EQ(a.squared_norm(), 14.0);
  EXPECT_EQ(a.sum(), 6.0);
}

TEST(SparseVector, NormalizedAndScaled) {
  const auto v = SparseVector::from_sorted(4, {0, 3}, {3.0, 4.0});
  EXPECT_EQ(v.normalized(), SparseVector::from_sorted(4, {0, 3}, {0.6000000000000001, 0.8}));
  EXPECT_EQ(SparseVector(4).normalized(), SparseVector(4));
  EXPECT_EQ(v.scaled(0.0), SparseVector(4));
}

TEST(SparseVector, ZeroDimensionIsAllowed) {
  const SparseVector v(0);
  EXPECT_TRUE(v.empty());
  EXPECT_EQ(v.norm(), 0.0);
}

TEST(Rng, SeededSequencesAndBounds) {
  Rng a(5), b(5);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next(), b.next());
  Rng r(9);
  for (int i = 0; i < 1000; ++i) {
    EXPECT_LT(r.below(7), 7u);
    const double u = r.uniform();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
  // std::mt19937_64 is pinned by the standard: 10000th output for the default seed.
  std::mt19937_64 ref;
  ref.discard(9999);
  EXPECT_EQ(ref(), 9981545732273789042ULL);
}

TEST(Rng, DerivedSeedsDifferByKey) {
  EXPECT_EQ(derive_seed(1, "a"), derive_seed(1, "a"));
  EXPECT_NE(derive_seed(1, "a"), derive_seed(1, "b"));
  EXPECT_NE(derive_seed(1, "a"), derive_seed(2, "a"));
}

}  // namespace
}  // namespace embsvm
