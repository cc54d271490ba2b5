#include <gtest/gtest.h>

#include "test_support.hpp"

using namespace rphc;

namespace {

std::vector<double> sorted_heights(const MergeSequence& m) {
  auto h = m.heights();
  std::sort(h.begin(), h.end());
  return h;
}

void expect_same_heights(const MergeSequence& got, const MergeSequence& want, double tol) {
  ASSERT_TRUE(got.complete());
  const auto a = sorted_heights(got);
  const auto b = sorted_heights(want);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    ASSERT_TRUE(rphc::testing::relative_close(a[i], b[i], tol)) << "step " << i << ": " << a[i] << " vs " << b[i];
  }
}

// Points spread along the segment from P to T with a little jitter, and one
// far point Q off the segment.
Dataset near_colinear(std::size_t on_segment, std::uint64_t seed) {
  RngStream rng(seed, {0xF16});
  std::vector<std::vector<double>> rows;
  rows.push_back({0.0, 0.0});  // P
  rows.push_back({1.0, 0.0});  // T
  for (std::size_t i = 0; i < on_segment; ++i) rows.push_back({rng.uniform(), 1e-4 * rng.normal()});
  rows.push_back({0.5, 3.0});  // Q
  return Dataset::from_rows(rows);
}

EdgeClassification two_triangle_classification(UnionFind& uf) {
  // Q=0, Q'=1, Q''=2, T=3, T'=4, T''=5.
  const Dataset ds = Dataset::from_rows({{0, 0}, {1, 0}, {0, 1}, {5, 0}, {6, 0}, {5, 1}});
  for (auto [a, b] : {std::pair{0, 1}, {0, 2}, {3, 4}, {3, 5}}) uf.unite(a, b);
  PartitionFamily fam;
  fam.rounds = 3;
  fam.sets = {{0, 1, 3}, {0, 1, 3, 4}, {2, 0}};
  fam.round_of_set = {0, 1, 2};
  fam.flagged = {0, 0, 0};
  WorkCounter work;
  const auto table = build_candidate_table(fam, ds, work);
  return classify_edges(table, uf, 3, kDefaultFrequency);
}

bool has_neighbor(const std::vector<Neighbor>& list, PointId id) {
  return std::any_of(list.begin(), list.end(), [&](const Neighbor& n) { return n.id == id; });
}

}  // namespace

TEST(RpSlc, TwoPoints) {
  const Dataset ds = Dataset::from_rows({{0.0, 0.0}, {3.0, 4.0}});
  const auto res = rp_slc(ds, PartitionConfig::defaults_for(2, 1));
  ASSERT_TRUE(res.merges.complete());
  ASSERT_EQ(res.merges.events.size(), 1u);
  EXPECT_EQ(res.merges.events[0].height, 5.0);
  EXPECT_EQ(res.merges.events[0].new_size, 2u);
}

TEST(RpSlc, FivePointsOnALine) {
  const Dataset ds = rphc::testing::line_points({0, 1, 10, 11, 100});
  PartitionConfig cfg = PartitionConfig::defaults_for(5, 3);
  cfg.min_pts = 5;
  ASSERT_EQ(cfg.rounds, 47u);
  const auto res = rp_slc(ds, cfg);
  ASSERT_TRUE(res.merges.complete());
  EXPECT_EQ(res.merges.heights(), (std::vector<double>{1, 1, 9, 89}));
  EXPECT_EQ(res.merges.heights(), brute_slc(ds).heights());
}

TEST(RpSlc, RequiresUnperturbedPartition) {
  const Dataset ds = rphc::testing::line_points({0, 1});
  PartitionConfig cfg = PartitionConfig::defaults_for(2, 3);
  cfg.l_per = 0.1;
  EXPECT_THROW(rp_slc(ds, cfg), std::invalid_argument);
}

TEST(RpSlc, TooSmallMinPtsIsFlaggedIncomplete) {
  const auto data = generate_synthetic(3, 30, 4, 1.0, 30.0, 5);
  PartitionConfig cfg = PartitionConfig::defaults_for(data.data.size(), 1);
  cfg.min_pts = 2;
  const auto res = rp_slc(data.data, cfg);
  EXPECT_FALSE(res.merges.complete());
  EXPECT_TRUE(res.merges.events.empty());
}

TEST(RpSlc, MonotoneAndWithinWorkBound) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Dataset ds = rphc::testing::gaussian_cloud(300, 6, seed);
    const PartitionConfig cfg = PartitionConfig::defaults_for(ds.size(), seed);
    const auto res = rp_slc(ds, cfg);
    const auto h = res.merges.heights();
    EXPECT_TRUE(std::is_sorted(h.begin(), h.end()));
    EXPECT_LE(res.work.distance_computations, cfg.rounds * ds.size() * cfg.min_pts);
    UnionFind uf(ds.size());
    for (const auto& e : res.merges.events) {
      EXPECT_FALSE(uf.same(e.edge_a, e.edge_b));
      uf.unite(e.edge_a, e.edge_b);
    }
  }
}

TEST(ClassifyEdges, FrequencyIsStrict) {
  const Dataset ds = rphc::testing::line_points({0, 1, 2});
  UnionFind uf(3);
  CandidateEdgeTable table;
  table.rounds = 3;
  table.edges = {{0, 1, 1.0, 2}, {1, 2, 1.0, 3}};
  const auto c = classify_edges(table, uf, 3, 2.0 / 3.0);
  EXPECT_TRUE(c.feasible[0].empty());
  ASSERT_EQ(c.feasible[1].size(), 1u);
  EXPECT_EQ(c.feasible[1][0].id, 2u);
  EXPECT_EQ(c.feasible_edges.size(), 1u);
  EXPECT_THROW(classify_edges(table, uf, 3, 1.0), std::invalid_argument);
}

TEST(ClassifyEdges, TwoTrianglesAfterMerges) {
  UnionFind uf(6);
  const auto c = two_triangle_classification(uf);
  EXPECT_TRUE(has_neighbor(c.taken[0], 1));    // {Q', Q} taken
  EXPECT_TRUE(has_neighbor(c.feasible[0], 3)); // {Q, T} feasible
  EXPECT_TRUE(has_neighbor(c.feasible[1], 3)); // {Q', T} feasible
  EXPECT_FALSE(has_neighbor(c.feasible[0], 4));
  EXPECT_FALSE(has_neighbor(c.taken[0], 2));   // {Q, Q''} occurs once only
  EXPECT_EQ(c.feasible_edges.size(), 2u);
  // Sorted by distance: Q'-T (4) before Q-T (5).
  EXPECT_EQ(c.feasible[3][0].id, 1u);
}

TEST(ClassifyEdges, OneClusterHasNoFeasibleEdges) {
  const Dataset ds = rphc::testing::uniform_cube(20, 2, 1);
  UnionFind uf(20);
  for (PointId p = 1; p < 20; ++p) uf.unite(0, p);
  WorkCounter w;
  const auto table = full_candidate_table(ds, 5, w);
  const auto c = classify_edges(table, uf, 5, 0.5);
  EXPECT_TRUE(c.feasible_edges.empty());
  std::vector<PointId> all(20);
  std::iota(all.begin(), all.end(), PointId{0});
  EXPECT_FALSE(merge_condition_holds(c, all));
}

TEST(Condition62, ClauseEvaluation) {
  EdgeClassification c;
  c.feasible.resize(4);
  c.taken.resize(4);
  const std::vector<PointId> check{0, 1};
  EXPECT_FALSE(merge_condition_holds(c, check));  // no feasible edge at all

  c.feasible_edges = {{0, 1, 3.0, 3}};
  c.feasible[0] = {{1, 3.0}};
  c.feasible[1] = {{0, 3.0}};
  EXPECT_TRUE(merge_condition_holds(c, check));

  c.taken[2] = {{3, 2.0}, {3, 5.0}};
  const std::vector<PointId> with_two{0, 1, 2};
  EXPECT_TRUE(merge_condition_holds(c, with_two));  // max taken 5.0 >= min feasible 3.0
  c.feasible_edges = {{0, 1, 7.0, 3}};
  EXPECT_FALSE(merge_condition_holds(c, with_two));  // 5.0 < 7.0
  const std::vector<PointId> lonely{3};
  EXPECT_FALSE(merge_condition_holds(c, lonely));  // neither feasible nor taken
}

TEST(RpSlcParameterFree, TwoPoints) {
  const Dataset ds = Dataset::from_rows({{1.0}, {4.0}});
  const auto res = rp_slc_parameter_free(ds, parameter_free_config(2, 1));
  ASSERT_TRUE(res.merges.complete());
  EXPECT_EQ(res.merges.events[0].height, 3.0);
  EXPECT_EQ(res.doublings, 0u);
}

TEST(RpSlcParameterFree, SinglePoint) {
  const Dataset ds = Dataset::from_rows({{1.0, 2.0}});
  const auto res = rp_slc_parameter_free(ds, parameter_free_config(1, 1));
  EXPECT_TRUE(res.merges.complete());
  EXPECT_TRUE(res.merges.events.empty());
}

TEST(RpSlcParameterFree, ThreeBlobsMatchOracle) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto data = generate_synthetic(3, 40, 8, 1.0, 15.0, seed);
    const auto res = rp_slc_parameter_free(data.data, parameter_free_config(120, seed));
    expect_same_heights(res.merges, brute_slc(data.data), 0.0);
    EXPECT_LE(res.doublings, static_cast<std::size_t>(std::ceil(std::log2(120.0))));
  }
}

TEST(RpSlcParameterFree, NearColinearArrangement) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const Dataset ds = near_colinear(150, seed);
    const auto res = rp_slc_parameter_free(ds, parameter_free_config(ds.size(), seed));
    const auto oracle = brute_slc(ds);
    expect_same_heights(res.merges, oracle, 0.0);
    EXPECT_EQ(preservation(res.merges, oracle, ds.size()).average, 1.0);
    EXPECT_LE(res.doublings, static_cast<std::size_t>(std::ceil(std::log2(static_cast<double>(ds.size())))));
  }
}

TEST(RpSlcParameterFree, RandomInstancesMatchOracle) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    RngStream rng(seed, {1});
    const std::size_t n = 20 + rng.below(180);
    const std::size_t d = 1 + rng.below(12);
    const Dataset ds = rphc::testing::gaussian_cloud(n, d, seed);
    const auto res = rp_slc_parameter_free(ds, parameter_free_config(n, seed));
    expect_same_heights(res.merges, brute_slc(ds), 0.0);
    const auto h = res.merges.heights();
    EXPECT_TRUE(std::is_sorted(h.begin(), h.end()));
  }
}

TEST(RpSlcParameterFree, RestartsAreLogged) {
  const auto data = generate_synthetic(4, 50, 8, 1.0, 20.0, 3);
  const auto res = rp_slc_parameter_free(data.data, parameter_free_config(200, 3));
  ASSERT_TRUE(res.merges.complete());
  EXPECT_EQ(res.iterations, res.restarts.size() + 1);
  std::size_t failures = 0;
  for (const auto& r : res.restarts) failures += r.reason == RestartReason::condition_failure ? 1 : 0;
  EXPECT_EQ(failures, res.doublings);
}

TEST(RpSlcParameterFree, RejectsBadFrequency) {
  const Dataset ds = rphc::testing::line_points({0, 1});
  EXPECT_THROW(rp_slc_parameter_free(ds, parameter_free_config(2, 1), 1.5), std::invalid_argument);
}
