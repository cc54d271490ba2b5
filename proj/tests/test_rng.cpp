#include <gtest/gtest.h>

#include <set>

#include "test_support.hpp"

using namespace rphc;
using rphc::testing::chi_square;
using rphc::testing::kChiSquare15At1Percent;

TEST(RngStream, SamePathSameStream) {
  RngStream a(42, {3, 1});
  RngStream b(42, {3, 1});
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a(), b());
}

TEST(RngStream, DifferentPathsOrSeedsDiffer) {
  std::set<std::uint64_t> firsts;
  for (std::uint64_t r = 0; r < 64; ++r) {
    for (std::uint64_t tag = 1; tag <= 3; ++tag) firsts.insert(RngStream(7, {r, tag})());
  }
  EXPECT_EQ(firsts.size(), 64u * 3u);
  EXPECT_NE(RngStream(1, {0})(), RngStream(2, {0})());
  EXPECT_NE(RngStream(1, {0, 1})(), RngStream(1, {1, 0})());
}

TEST(RngStream, ChildEqualsExtendedPath) {
  const RngStream parent(9, {4});
  RngStream c = parent.child(StreamTag::split);
  RngStream direct(9, {4, static_cast<std::uint64_t>(StreamTag::split)});
  for (int i = 0; i < 100; ++i) ASSERT_EQ(c(), direct());
}

TEST(RngStream, BelowIsInRangeAndUniform) {
  RngStream rng(11, {1});
  std::vector<std::size_t> bins(16, 0);
  for (int i = 0; i < 160000; ++i) {
    const auto v = rng.below(16);
    ASSERT_LT(v, 16u);
    ++bins[v];
  }
  EXPECT_LT(chi_square(bins), kChiSquare15At1Percent);
  EXPECT_EQ(rng.below(1), 0u);
  EXPECT_EQ(rng.below(0), 0u);
}

TEST(RngStream, UniformRangeAndMoments) {
  RngStream rng(5, {2});
  std::vector<std::size_t> bins(16, 0);
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    const double v = rng.uniform_open_zero();
    ASSERT_GT(v, 0.0);
    ASSERT_LE(v, 1.0);
    ++bins[static_cast<std::size_t>(u * 16.0)];
    sum += u;
  }
  EXPECT_LT(chi_square(bins), kChiSquare15At1Percent);
  EXPECT_NEAR(sum / n, 0.5, 0.005);
}

TEST(RngStream, NormalMoments) {
  RngStream rng(6, {3});
  const int n = 200000;
  double s1 = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    s1 += x;
    s2 += x * x;
  }
  EXPECT_NEAR(s1 / n, 0.0, 0.01);
  EXPECT_NEAR(s2 / n, 1.0, 0.02);
}

TEST(RngStream, DeriveSeedIsPure) {
  EXPECT_EQ(derive_seed(3, {1, 2}), derive_seed(3, {1, 2}));
  EXPECT_NE(derive_seed(3, {1, 2}), derive_seed(3, {1, 3}));
}
