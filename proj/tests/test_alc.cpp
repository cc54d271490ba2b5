#include <gtest/gtest.h>

#include <map>
#include <set>

#include "test_support.hpp"

using namespace rphc;
using rphc::testing::relative_close;

namespace {

double naive_alc(const Dataset& ds, const std::vector<PointId>& a, const std::vector<PointId>& b) {
  double sum = 0.0;
  for (PointId p : a) {
    for (PointId q : b) sum += squared_distance(ds.coords(p), ds.coords(q));
  }
  return sum / (static_cast<double>(a.size()) * static_cast<double>(b.size()));
}

void expect_stats_close(const ClusterStats& got, const ClusterStats& want, double tol) {
  ASSERT_EQ(got.size, want.size);
  ASSERT_EQ(got.centroid.size(), want.centroid.size());
  for (std::size_t k = 0; k < got.centroid.size(); ++k) {
    // Centroid coordinates can be near zero; compare on the scale of the
    // spread of the data.
    EXPECT_LE(std::abs(got.centroid[k] - want.centroid[k]), tol * std::max(1.0, std::abs(want.centroid[k])));
  }
  EXPECT_TRUE(relative_close(got.variance, want.variance, tol)) << got.variance << " vs " << want.variance;
}

}  // namespace

TEST(AlcDistance, Singletons) {
  const std::vector<double> a{0.0, 0.0}, b{3.0, 4.0};
  EXPECT_EQ(alc_distance(ClusterStats::singleton(a), ClusterStats::singleton(b)), 25.0);
  EXPECT_EQ(alc_distance(ClusterStats::singleton(b), ClusterStats::singleton(b)), 0.0);
}

TEST(AlcDistance, TwoPairs) {
  const Dataset ds = Dataset::from_rows({{0, 0}, {2, 0}, {10, 0}, {12, 0}});
  const std::vector<PointId> a{0, 1}, b{2, 3};
  EXPECT_DOUBLE_EQ(naive_alc(ds, a, b), 102.0);
  EXPECT_DOUBLE_EQ(alc_distance(ClusterStats::of(ds, a), ClusterStats::of(ds, b)), 102.0);
}

TEST(AlcDistance, DimensionMismatchThrows) {
  const std::vector<double> a{0.0, 0.0}, b{3.0};
  EXPECT_THROW(alc_distance(ClusterStats::singleton(a), ClusterStats::singleton(b)), std::invalid_argument);
  EXPECT_THROW(merge_stats(ClusterStats::singleton(a), ClusterStats::singleton(b)), std::invalid_argument);
}

TEST(AlcDistance, MatchesNaiveDoubleSum) {
  RngStream rng(71, {1});
  for (int t = 0; t < 1000; ++t) {
    const std::size_t d = 1 + rng.below(16);
    const std::size_t na = 1 + rng.below(64);
    const std::size_t nb = 1 + rng.below(64);
    const Dataset ds = rphc::testing::gaussian_cloud(na + nb, d, 1000 + t);
    std::vector<PointId> a(na), b(nb);
    std::iota(a.begin(), a.end(), PointId{0});
    std::iota(b.begin(), b.end(), static_cast<PointId>(na));
    const double formula = alc_distance(ClusterStats::of(ds, a), ClusterStats::of(ds, b));
    ASSERT_TRUE(relative_close(formula, naive_alc(ds, a, b), 1e-9)) << "trial " << t;
  }
}

TEST(MergeStats, SymmetricPair) {
  const std::vector<double> l{-1.0}, r{1.0};
  const auto m = merge_stats(ClusterStats::singleton(l), ClusterStats::singleton(r));
  EXPECT_EQ(m.size, 2u);
  EXPECT_EQ(m.centroid[0], 0.0);
  EXPECT_EQ(m.variance, 1.0);
}

TEST(MergeStats, CoincidentSingletons) {
  const std::vector<double> p{2.5, -1.0};
  const auto m = merge_stats(ClusterStats::singleton(p), ClusterStats::singleton(p));
  EXPECT_EQ(m.variance, 0.0);
  EXPECT_EQ(m.centroid, p);
}

TEST(MergeStats, HalvesOfFiftyPoints) {
  const Dataset ds = rphc::testing::gaussian_cloud(50, 6, 3);
  std::vector<PointId> all(50);
  std::iota(all.begin(), all.end(), PointId{0});
  RngStream rng(3, {3});
  for (int t = 0; t < 20; ++t) {
    std::vector<PointId> left, right;
    for (PointId p : all) (rng.below(2) ? left : right).push_back(p);
    if (left.empty() || right.empty()) continue;
    expect_stats_close(merge_stats(ClusterStats::of(ds, left), ClusterStats::of(ds, right)), ClusterStats::of(ds, all),
                       1e-9);
  }
}

TEST(MergeStats, RandomMergeTreesMatchDirect) {
  RngStream rng(72, {1});
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = 2 + rng.below(127);
    const std::size_t d = 1 + rng.below(8);
    const Dataset ds = rphc::testing::gaussian_cloud(n, d, 5000 + t);
    std::vector<ClusterStats> stats;
    std::vector<std::vector<PointId>> members;
    for (PointId p = 0; p < n; ++p) {
      stats.push_back(ClusterStats::singleton(ds.coords(p)));
      members.push_back({p});
    }
    while (stats.size() > 1) {
      const std::size_t i = rng.below(stats.size());
      std::size_t j = rng.below(stats.size() - 1);
      if (j >= i) ++j;
      stats[i] = merge_stats(stats[i], stats[j]);
      members[i].insert(members[i].end(), members[j].begin(), members[j].end());
      stats.erase(stats.begin() + static_cast<std::ptrdiff_t>(j));
      members.erase(members.begin() + static_cast<std::ptrdiff_t>(j));
    }
    expect_stats_close(stats[0], ClusterStats::of(ds, members[0]), 1e-9);
    if (HasFailure()) FAIL() << "merge tree " << t;
  }
}

TEST(SparseSetState, ReplacementConservesMembership) {
  RngStream rng(73, {1});
  const std::size_t n = 60;
  std::vector<std::vector<PointId>> sets;
  std::vector<std::uint32_t> weights;
  for (int s = 0; s < 80; ++s) {
    std::vector<PointId> set;
    const std::size_t size = 2 + rng.below(8);
    for (std::size_t k = 0; k < size; ++k) set.push_back(static_cast<PointId>(rng.below(n)));
    sets.push_back(set);
    weights.push_back(static_cast<std::uint32_t>(1 + rng.below(3)));
  }
  std::vector<std::set<PointId>> expected;
  for (const auto& s : sets) expected.emplace_back(s.begin(), s.end());
  SparseSetState state(sets, weights, n);

  UnionFind uf(n);
  while (uf.cluster_count() > 1) {
    const PointId a = uf.cluster_id(static_cast<PointId>(rng.below(n)));
    const PointId b = uf.cluster_id(static_cast<PointId>(rng.below(n)));
    if (a == b) continue;
    uf.unite(a, b);
    const PointId into = uf.cluster_id(a);
    state.merge(a, b, into);
    for (auto& e : expected) {
      if (e.erase(a) + e.erase(b) > 0) e.insert(into);
    }
    for (std::size_t s = 0; s < expected.size(); ++s) {
      ASSERT_EQ(std::vector<PointId>(expected[s].begin(), expected[s].end()), state.set(s));
    }
    // Weighted co-occurrence against a direct recount.
    std::map<PointId, std::uint32_t> want;
    for (std::size_t s = 0; s < expected.size(); ++s) {
      if (!expected[s].count(into)) continue;
      for (PointId x : expected[s]) {
        if (x != into) want[x] += weights[s];
      }
    }
    const auto got = state.co_occurrence(into);
    ASSERT_EQ(got.size(), want.size());
    for (const auto& [x, c] : want) ASSERT_EQ(got.at(x), c);
  }
}

TEST(RpAlcParameterFree, TwoPoints) {
  const Dataset ds = Dataset::from_rows({{0.0, 0.0}, {3.0, 4.0}});
  const auto res = rp_alc_parameter_free(ds, parameter_free_config(2, 1));
  ASSERT_TRUE(res.merges.complete());
  EXPECT_EQ(res.merges.events[0].height, 25.0);
}

TEST(RpAlcParameterFree, ThreeBlobsMatchOraclePerStep) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto data = generate_synthetic(3, 40, 8, 1.0, 15.0, seed);
    const auto res = rp_alc_parameter_free(data.data, parameter_free_config(120, seed));
    const auto oracle = brute_alc(data.data);
    ASSERT_TRUE(res.merges.complete());
    for (std::size_t i = 0; i < oracle.events.size(); ++i) {
      ASSERT_TRUE(relative_close(res.merges.events[i].height, oracle.events[i].height, 1e-9)) << "step " << i;
      EXPECT_EQ(res.merges.events[i].cluster_a, oracle.events[i].cluster_a);
      EXPECT_EQ(res.merges.events[i].cluster_b, oracle.events[i].cluster_b);
    }
    EXPECT_EQ(preservation(res.merges, oracle, 120).average, 1.0);
  }
}

TEST(RpAlcParameterFree, RandomInstancesMatchOracle) {
  for (std::uint64_t seed = 0; seed < 15; ++seed) {
    RngStream rng(seed, {2});
    const std::size_t n = 10 + rng.below(140);
    const std::size_t d = 1 + rng.below(10);
    const Dataset ds = rphc::testing::gaussian_cloud(n, d, seed + 100);
    const auto res = rp_alc_parameter_free(ds, parameter_free_config(n, seed));
    const auto oracle = brute_alc(ds);
    ASSERT_TRUE(res.merges.complete());
    EXPECT_LE(res.doublings, static_cast<std::size_t>(std::ceil(std::log2(static_cast<double>(n)))));
    EXPECT_GE(preservation(res.merges, oracle, n).average, 0.999) << "seed " << seed;
  }
}

TEST(HeightOrderKey, RoundingNeighboursTie) {
  EXPECT_EQ(height_order_key(0.04000000000000007), height_order_key(0.040000000000000091));
  EXPECT_EQ(height_order_key(0.0), 0.0);
  EXPECT_LT(height_order_key(1.0), height_order_key(1.0 + 1e-9));
  EXPECT_LT(height_order_key(1e-300), height_order_key(2e-300));
}

TEST(RpAlcParameterFree, LatticeTiesMatchOracle) {
  std::vector<std::vector<double>> rows;
  for (int x = 0; x < 7; ++x) {
    for (int y = 0; y < 7; ++y) rows.push_back({0.1 * x, 0.1 * y});
  }
  const Dataset ds = Dataset::from_rows(rows);
  const auto res = rp_alc_parameter_free(ds, parameter_free_config(ds.size(), 3));
  ASSERT_TRUE(res.merges.complete());
  EXPECT_EQ(preservation(res.merges, brute_alc(ds), ds.size()).average, 1.0);
}
