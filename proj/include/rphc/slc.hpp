#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "rphc/candidates.hpp"
#include "rphc/dendrogram.hpp"
#include "rphc/geometry.hpp"
#include "rphc/partition.hpp"
#include "rphc/rng.hpp"

namespace rphc {

/// Default frequency threshold. Strictly below 2/3 so that an edge seen in
/// two of three rounds counts as frequent under the strict ">" test.
inline constexpr double kDefaultFrequency = 0.66;

enum class RestartReason { condition_failure, perturbation_rescale };

struct RestartRecord {
  std::size_t iteration = 0;
  RestartReason reason = RestartReason::condition_failure;
  std::size_t min_pts = 0;  // value used during the iteration that ended
  double l_per = 0.0;
  std::size_t merges_so_far = 0;
};

/// Output of an RP clustering run with its work and restart statistics.
struct ClusteringResult {
  MergeSequence merges;
  WorkCounter work;
  std::size_t final_min_pts = 0;
  std::size_t doublings = 0;
  std::size_t iterations = 0;
  std::size_t depth_exhausted_rounds = 0;
  std::vector<RestartRecord> restarts;
};

/// Starting configuration of the parameter-free algorithms:
/// min_pts = max(floor, ceil(c0 log2 N)) capped at N, l_per = 0.
inline PartitionConfig parameter_free_config(std::size_t n, std::uint64_t seed,
                                             double rounds_factor = PartitionConfig::kDefaultRoundsFactor,
                                             double c0 = 1.0, std::size_t floor = 4) {
  PartitionConfig cfg = PartitionConfig::defaults_for(n, seed, rounds_factor);
  cfg.min_pts = std::max<std::size_t>(floor, log_scaled(c0, n));
  cfg.min_pts = std::max<std::size_t>(2, std::min(cfg.min_pts, std::max<std::size_t>(n, 2)));
  cfg.l_per = 0.0;
  return cfg;
}

/// Fixed-parameter RP-SLC: Kruskal over the candidate edges of one
/// unperturbed partition family. The result is incomplete when the
/// candidates do not connect all points, which means min_pts was too small.
inline ClusteringResult rp_slc(const Dataset& ds, const PartitionConfig& cfg) {
  cfg.validate();
  if (cfg.l_per != 0.0) throw std::invalid_argument("rp_slc partitions without perturbation (l_per must be 0)");
  ClusteringResult out;
  out.merges.n_points = ds.size();
  out.final_min_pts = cfg.min_pts;
  out.iterations = 1;
  if (ds.size() <= 1) return out;

  const PartitionFamily family = perturb_multi_partition(ds, cfg);
  out.depth_exhausted_rounds = family.depth_exhausted_rounds;
  CandidateEdgeTable table = build_candidate_table(family, ds, out.work);
  sort_by_distance(table.edges);

  UnionFind uf(ds.size());
  for (const auto& e : table.edges) {
    if (uf.cluster_count() == 1) break;
    record_merge(out.merges, uf, e.a, e.b, e.distance);
  }
  return out;
}

inline bool is_frequent(std::uint32_t count, std::size_t rounds, double c_f) noexcept {
  return static_cast<double>(count) / static_cast<double>(rounds) > c_f;
}

struct Neighbor {
  PointId id = 0;
  double distance = 0.0;
};

/// Frequent edges split by the current clustering: feasible (endpoints in
/// different clusters) and taken (same cluster). Lists are sorted by
/// distance to the owning point.
struct EdgeClassification {
  std::vector<std::vector<Neighbor>> feasible;
  std::vector<std::vector<Neighbor>> taken;
  std::vector<CandidateEdge> feasible_edges;  // global set, ascending by (distance, a, b)

  [[nodiscard]] double min_feasible() const noexcept {
    return feasible_edges.empty() ? std::numeric_limits<double>::infinity() : feasible_edges.front().distance;
  }
};

inline EdgeClassification classify_edges(const CandidateEdgeTable& table, UnionFind& clustering,
                                         std::size_t rounds, double c_f) {
  if (!(c_f > 0.0 && c_f < 1.0)) throw std::invalid_argument("c_f must lie in (0, 1)");
  if (rounds == 0) throw std::invalid_argument("rounds must be >= 1");
  EdgeClassification out;
  const std::size_t n = clustering.size();
  out.feasible.resize(n);
  out.taken.resize(n);
  for (const auto& e : table.edges) {
    if (!is_frequent(e.count, rounds, c_f)) continue;
    if (clustering.same(e.a, e.b)) {
      out.taken[e.a].push_back({e.b, e.distance});
      out.taken[e.b].push_back({e.a, e.distance});
    } else {
      out.feasible[e.a].push_back({e.b, e.distance});
      out.feasible[e.b].push_back({e.a, e.distance});
      out.feasible_edges.push_back(e);
    }
  }
  auto by_dist = [](const Neighbor& x, const Neighbor& y) {
    return x.distance < y.distance || (x.distance == y.distance && x.id < y.id);
  };
  for (auto& l : out.feasible) std::sort(l.begin(), l.end(), by_dist);
  for (auto& l : out.taken) std::sort(l.begin(), l.end(), by_dist);
  sort_by_distance(out.feasible_edges);
  return out;
}

/// Condition 6.2: some feasible edge exists and every checked point has a
/// feasible edge or a taken edge at least as long as the globally shortest
/// feasible edge.
inline bool merge_condition_holds(const EdgeClassification& c, std::span<const PointId> check_set) {
  if (c.feasible_edges.empty()) return false;
  const double min_f = c.min_feasible();
  for (PointId p : check_set) {
    if (!c.feasible[p].empty()) continue;
    if (!c.taken[p].empty() && c.taken[p].back().distance >= min_f) continue;
    return false;
  }
  return true;
}

namespace detail {

// Frequent-edge bookkeeping for one repeat iteration of the parameter-free
// algorithm, updated incrementally as clusters merge.
class SlcIterationState {
 public:
  SlcIterationState(std::vector<CandidateEdge> edges, std::size_t rounds, double c_f, UnionFind& uf,
                    std::vector<std::vector<PointId>>& members)
      : edges_(std::move(edges)), uf_(uf), members_(members) {
    sort_by_distance(edges_);
    const std::size_t n = uf.size();
    frequent_.assign(edges_.size(), 0);
    std::vector<std::size_t> degree(n + 1, 0);
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      if (is_frequent(edges_[i].count, rounds, c_f)) {
        frequent_[i] = 1;
        ++degree[edges_[i].a];
        ++degree[edges_[i].b];
      }
    }
    offset_.assign(n + 1, 0);
    for (std::size_t p = 0; p < n; ++p) offset_[p + 1] = offset_[p] + degree[p];
    nbr_.resize(offset_[n]);
    std::vector<std::size_t> fill(offset_.begin(), offset_.end() - 1);
    feasible_count_.assign(n, 0);
    max_frequent_.assign(n, -std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < edges_.size(); ++i) {
      if (!frequent_[i]) continue;
      const auto& e = edges_[i];
      nbr_[fill[e.a]++] = {e.b, e.distance};
      nbr_[fill[e.b]++] = {e.a, e.distance};
      max_frequent_[e.a] = std::max(max_frequent_[e.a], e.distance);
      max_frequent_[e.b] = std::max(max_frequent_[e.b], e.distance);
      if (!uf_.same(e.a, e.b)) {
        ++feasible_count_[e.a];
        ++feasible_count_[e.b];
      }
    }
    advance_min_feasible();
  }

  [[nodiscard]] bool has_feasible() const noexcept { return fptr_ < edges_.size(); }
  [[nodiscard]] double min_feasible() const noexcept {
    return has_feasible() ? edges_[fptr_].distance : std::numeric_limits<double>::infinity();
  }

  bool condition(std::span<const PointId> check) const {
    if (!has_feasible()) return false;
    const double min_f = min_feasible();
    for (PointId p : check) {
      if (feasible_count_[p] > 0) continue;
      if (offset_[p + 1] > offset_[p] && max_frequent_[p] >= min_f) continue;
      return false;
    }
    return true;
  }

  /// Next edge in ascending order, or nullptr when exhausted.
  const CandidateEdge* next_edge() noexcept { return cursor_ < edges_.size() ? &edges_[cursor_++] : nullptr; }

  /// Feasible neighbors of p (before the pending merge).
  void collect_feasible(PointId p, std::vector<PointId>& out) {
    const PointId root = uf_.find(p);
    for (std::size_t k = offset_[p]; k < offset_[p + 1]; ++k) {
      if (uf_.find(nbr_[k].id) != root) out.push_back(nbr_[k].id);
    }
  }

  /// Merges the clusters of a and b, keeping feasible counts exact.
  void merge(MergeSequence& seq, PointId a, PointId b, double height) {
    PointId ra = uf_.find(a);
    PointId rb = uf_.find(b);
    if (members_[ra].size() > members_[rb].size()) std::swap(ra, rb);  // ra is the smaller cluster
    for (PointId x : members_[ra]) {
      for (std::size_t k = offset_[x]; k < offset_[x + 1]; ++k) {
        const PointId y = nbr_[k].id;
        if (uf_.find(y) == rb) {
          --feasible_count_[x];
          --feasible_count_[y];
        }
      }
    }
    record_merge(seq, uf_, a, b, height);
    const PointId root = uf_.find(a);
    const PointId other = root == ra ? rb : ra;
    auto& keep = members_[root];
    auto& gone = members_[other];
    keep.insert(keep.end(), gone.begin(), gone.end());
    gone.clear();
    gone.shrink_to_fit();
    advance_min_feasible();
  }

 private:
  void advance_min_feasible() {
    while (fptr_ < edges_.size() && !(frequent_[fptr_] && !uf_.same(edges_[fptr_].a, edges_[fptr_].b))) ++fptr_;
  }

  std::vector<CandidateEdge> edges_;
  std::vector<char> frequent_;
  std::vector<std::size_t> offset_;
  std::vector<Neighbor> nbr_;
  std::vector<std::int64_t> feasible_count_;
  std::vector<double> max_frequent_;
  std::size_t cursor_ = 0;
  std::size_t fptr_ = 0;
  UnionFind& uf_;
  std::vector<std::vector<PointId>>& members_;
};

}  // namespace detail

/// Parameter-free RP-SLC.
///
/// Each repeat iteration partitions the points with the current
/// (min_pts, l_per), counts edge occurrences afresh, and merges along
/// ascending candidate edges while more than one cluster remains,
/// Condition 6.2 holds on the check set and the shortest feasible edge is at
/// least 8 l_per. If the condition failed, min_pts doubles (capped at N);
/// l_per becomes a sixteenth of the shortest feasible edge. Once
/// min_pts >= N the full pair table is used, every pair is frequent and the
/// remaining merges are exact Kruskal steps, so the result is always
/// complete.
inline ClusteringResult rp_slc_parameter_free(const Dataset& ds, const PartitionConfig& base_cfg,
                                              double c_f = kDefaultFrequency) {
  base_cfg.validate();
  if (!(c_f > 0.0 && c_f < 1.0)) throw std::invalid_argument("c_f must lie in (0, 1)");
  const std::size_t n = ds.size();
  ClusteringResult out;
  out.merges.n_points = n;
  std::size_t min_pts = std::min(base_cfg.min_pts, std::max<std::size_t>(n, 2));
  double l_per = base_cfg.l_per;
  out.final_min_pts = min_pts;
  if (n <= 1) return out;

  UnionFind uf(n);
  std::vector<std::vector<PointId>> members(n);
  for (PointId p = 0; p < n; ++p) members[p] = {p};
  std::vector<PointId> all(n);
  for (PointId p = 0; p < n; ++p) all[p] = p;

  for (std::size_t iter = 0; uf.cluster_count() > 1; ++iter) {
    const bool full = min_pts >= n;
    PartitionConfig cfg = base_cfg;
    cfg.min_pts = std::max<std::size_t>(2, std::min(min_pts, n));
    cfg.l_per = l_per;
    cfg.master_seed = derive_seed(base_cfg.master_seed, {static_cast<std::uint64_t>(StreamTag::iteration), iter});

    ++out.iterations;
    if (full) {
      // Every pair is present and frequent: the remaining merges are exact
      // Kruskal steps and the gate cannot fail.
      CandidateEdgeTable table = full_candidate_table(ds, cfg.rounds, out.work);
      sort_by_distance(table.edges);
      for (const auto& e : table.edges) {
        if (uf.cluster_count() == 1) break;
        record_merge(out.merges, uf, e.a, e.b, e.distance);
      }
      break;
    }
    const PartitionFamily family = perturb_multi_partition(ds, cfg);
    out.depth_exhausted_rounds += family.depth_exhausted_rounds;
    CandidateEdgeTable table = build_candidate_table(family, ds, out.work);
    detail::SlcIterationState state(std::move(table.edges), cfg.rounds, c_f, uf, members);

    bool ok = state.condition(all);
    std::vector<PointId> check;
    while (uf.cluster_count() > 1 && ok && state.min_feasible() / 8.0 >= l_per) {
      const CandidateEdge* e = state.next_edge();
      if (e == nullptr) break;
      if (uf.same(e->a, e->b)) continue;
      check.clear();
      check.push_back(e->a);
      check.push_back(e->b);
      state.collect_feasible(e->a, check);
      state.collect_feasible(e->b, check);
      state.merge(out.merges, e->a, e->b, e->distance);
      ok = state.condition(check);
    }
    if (uf.cluster_count() == 1) break;

    RestartRecord rec{iter, ok ? RestartReason::perturbation_rescale : RestartReason::condition_failure,
                      min_pts, l_per, out.merges.events.size()};
    out.restarts.push_back(rec);
    if (!ok && min_pts < n) {
      min_pts = std::min(2 * min_pts, n);
      ++out.doublings;
    }
    if (state.has_feasible()) l_per = state.min_feasible() / 16.0;
  }
  out.final_min_pts = min_pts;
  return out;
}

}  // namespace rphc
