#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "rphc/candidates.hpp"
#include "rphc/dendrogram.hpp"
#include "rphc/geometry.hpp"
#include "rphc/partition.hpp"
#include "rphc/slc.hpp"

namespace rphc {

/// Size, centroid and variance (mean squared distance of the members to
/// the centroid) of a cluster.
struct ClusterStats {
  std::size_t size = 0;
  std::vector<double> centroid;
  double variance = 0.0;

  static ClusterStats singleton(std::span<const double> p) { return {1, std::vector<double>(p.begin(), p.end()), 0.0}; }

  /// Direct computation from explicit members.
  static ClusterStats of(const Dataset& ds, std::span<const PointId> members) {
    if (members.empty()) throw std::invalid_argument("cluster needs at least one member");
    ClusterStats s{members.size(), std::vector<double>(ds.dim(), 0.0), 0.0};
    for (PointId p : members) {
      const auto c = ds.coords(p);
      for (std::size_t k = 0; k < c.size(); ++k) s.centroid[k] += c[k];
    }
    for (double& v : s.centroid) v /= static_cast<double>(members.size());
    for (PointId p : members) s.variance += squared_distance(ds.coords(p), s.centroid);
    s.variance /= static_cast<double>(members.size());
    return s;
  }
};

namespace detail {
inline void check_same_dim(const ClusterStats& a, const ClusterStats& b) {
  if (a.centroid.size() != b.centroid.size()) {
    throw std::invalid_argument("cluster dimension mismatch: " + std::to_string(a.centroid.size()) + " vs " +
                                std::to_string(b.centroid.size()));
  }
}
}  // namespace detail

/// Average squared distance between the members of two clusters:
/// |mu_a - mu_b|^2 + var_a + var_b.
inline double alc_distance(const ClusterStats& a, const ClusterStats& b) {
  detail::check_same_dim(a, b);
  return squared_distance(a.centroid, b.centroid) + a.variance + b.variance;
}

/// Statistics of the union of two disjoint clusters.
inline ClusterStats merge_stats(const ClusterStats& a, const ClusterStats& b) {
  detail::check_same_dim(a, b);
  const double na = static_cast<double>(a.size);
  const double nb = static_cast<double>(b.size);
  const double n = na + nb;
  ClusterStats m{a.size + b.size, std::vector<double>(a.centroid.size()), 0.0};
  for (std::size_t k = 0; k < m.centroid.size(); ++k) m.centroid[k] = (na * a.centroid[k] + nb * b.centroid[k]) / n;
  const double gap = squared_distance(a.centroid, b.centroid);
  m.variance = (na * a.variance + nb * b.variance + (na * nb / n) * gap) / n;
  return m;
}

/// Partition sets rewritten in terms of live cluster representatives.
/// Merging clusters a and b into `into` replaces both by `into` in every set
/// that holds either of them; sets keep set semantics (sorted, no
/// duplicates). Each set carries a weight: the number of rounds it stands
/// for.
class SparseSetState {
 public:
  SparseSetState(std::vector<std::vector<PointId>> sets, std::vector<std::uint32_t> weights, std::size_t slots)
      : sets_(std::move(sets)), weights_(std::move(weights)), membership_(slots) {
    if (weights_.size() != sets_.size()) throw std::invalid_argument("one weight per set required");
    for (std::size_t s = 0; s < sets_.size(); ++s) {
      auto& set = sets_[s];
      std::sort(set.begin(), set.end());
      set.erase(std::unique(set.begin(), set.end()), set.end());
      for (PointId c : set) membership_.at(c).push_back(static_cast<std::uint32_t>(s));
    }
  }

  void merge(PointId a, PointId b, PointId into) {
    std::vector<std::uint32_t> joined;
    const auto& ma = membership_[a];
    const auto& mb = membership_[b];
    std::set_union(ma.begin(), ma.end(), mb.begin(), mb.end(), std::back_inserter(joined));
    for (std::uint32_t s : joined) {
      auto& set = sets_[s];
      std::erase_if(set, [&](PointId c) { return c == a || c == b; });
      set.insert(std::lower_bound(set.begin(), set.end(), into), into);
    }
    if (a != into) membership_[a].clear();
    if (b != into) membership_[b].clear();
    membership_[into] = std::move(joined);
  }

  /// Sum of weights of the sets holding both c and each other
  /// representative, for all representatives co-occurring with c.
  [[nodiscard]] std::unordered_map<PointId, std::uint32_t> co_occurrence(PointId c) const {
    std::unordered_map<PointId, std::uint32_t> counts;
    for (std::uint32_t s : membership_[c]) {
      for (PointId x : sets_[s]) {
        if (x != c) counts[x] += weights_[s];
      }
    }
    return counts;
  }

  [[nodiscard]] std::size_t size() const noexcept { return sets_.size(); }
  [[nodiscard]] const std::vector<PointId>& set(std::size_t i) const { return sets_[i]; }
  [[nodiscard]] std::uint32_t weight(std::size_t i) const { return weights_[i]; }
  [[nodiscard]] const std::vector<std::uint32_t>& membership(PointId c) const { return membership_[c]; }

 private:
  std::vector<std::vector<PointId>> sets_;
  std::vector<std::uint32_t> weights_;
  std::vector<std::vector<std::uint32_t>> membership_;
};

namespace detail {

// One repeat iteration of the parameter-free RP-ALC over live clusters.
class AlcIterationState {
 public:
  struct Link {
    std::uint32_t count = 0;
    double height = 0.0;       // ALC distance
    double centroid_sq = 0.0;  // squared centroid distance
  };

  AlcIterationState(SparseSetState sets, std::vector<ClusterStats>& stats, std::vector<double>& taken_height,
                    std::span<const PointId> live, std::size_t rounds, double c_f, WorkCounter& work)
      : sets_(std::move(sets)),
        stats_(stats),
        taken_height_(taken_height),
        rounds_(rounds),
        c_f_(c_f),
        work_(work),
        adj_(stats.size()),
        witness_(stats.size(), -std::numeric_limits<double>::infinity()),
        witness_dirty_(stats.size(), 0) {
    for (PointId c : live) connect(c, /*only_larger=*/true);
  }

  [[nodiscard]] bool empty() const noexcept { return edges_.empty(); }

  struct Top {
    PointId a;
    PointId b;
    double height;
  };
  [[nodiscard]] Top top() const {
    const auto& e = *edges_.begin();
    return {e.a, e.b, e.height};
  }

  /// Shortest feasible ALC distance, +inf if there is no feasible edge.
  double min_feasible() {
    for (const auto& e : edges_) {
      if (feasible(e.a, e.b, adj_[e.a].at(e.b))) return e.height;
    }
    return std::numeric_limits<double>::infinity();
  }

  bool has_feasible_edge(PointId c) {
    for (const auto& [x, link] : adj_[c]) {
      if (feasible(c, x, link)) return true;
    }
    return false;
  }

  void collect_feasible(PointId c, std::vector<PointId>& out) {
    for (const auto& [x, link] : adj_[c]) {
      if (feasible(c, x, link)) out.push_back(x);
    }
  }

  bool condition(std::span<const PointId> check) {
    const double min_f = min_feasible();
    if (!std::isfinite(min_f)) return false;
    for (PointId c : check) {
      if (has_feasible_edge(c)) continue;
      if (taken_height_[c] >= min_f) continue;
      return false;
    }
    return true;
  }

  /// Merges live clusters a < b into a.
  void merge(PointId a, PointId b) {
    const Link link = adj_[a].at(b);
    const bool frequent = is_frequent(link.count, rounds_, c_f_);
    disconnect(a);
    disconnect(b);
    stats_[a] = merge_stats(stats_[a], stats_[b]);
    taken_height_[a] = std::max(taken_height_[a], taken_height_[b]);
    if (frequent) taken_height_[a] = std::max(taken_height_[a], link.height);
    taken_height_[b] = -std::numeric_limits<double>::infinity();
    sets_.merge(a, b, a);
    connect(a, /*only_larger=*/false);
  }

  [[nodiscard]] const SparseSetState& sets() const noexcept { return sets_; }

 private:
  struct EdgeKey {
    double key;  // height_order_key(height)
    double height;
    PointId a;
    PointId b;
    friend bool operator<(const EdgeKey& x, const EdgeKey& y) {
      if (x.key != y.key) return x.key < y.key;
      if (x.a != y.a) return x.a < y.a;
      return x.b < y.b;
    }
  };

  bool feasible(PointId x, PointId y, const Link& link) {
    if (!is_frequent(link.count, rounds_, c_f_)) return false;
    return link.height <= std::max(witness(x), witness(y));
  }

  // Largest squared centroid distance over potentially feasible edges of c.
  // Kept as a running maximum; recomputed only after the maximum was removed.
  double witness(PointId c) {
    if (witness_dirty_[c]) {
      double w = -std::numeric_limits<double>::infinity();
      for (const auto& [x, link] : adj_[c]) {
        if (is_frequent(link.count, rounds_, c_f_)) w = std::max(w, link.centroid_sq);
      }
      witness_[c] = w;
      witness_dirty_[c] = 0;
    }
    return witness_[c];
  }

  void witness_add(PointId c, const Link& link) {
    if (!witness_dirty_[c] && is_frequent(link.count, rounds_, c_f_)) {
      witness_[c] = std::max(witness_[c], link.centroid_sq);
    }
  }

  void witness_remove(PointId c, const Link& link) {
    if (!witness_dirty_[c] && is_frequent(link.count, rounds_, c_f_) && link.centroid_sq >= witness_[c]) {
      witness_dirty_[c] = 1;
    }
  }

  void connect(PointId c, bool only_larger) {
    for (const auto& [x, count] : sets_.co_occurrence(c)) {
      if (only_larger && x < c) continue;
      Link link;
      link.count = count;
      link.centroid_sq = squared_distance(stats_[c].centroid, stats_[x].centroid);
      link.height = link.centroid_sq + stats_[c].variance + stats_[x].variance;
      ++work_.distance_computations;
      adj_[c][x] = link;
      adj_[x][c] = link;
      witness_add(c, link);
      witness_add(x, link);
      edges_.insert({height_order_key(link.height), link.height, std::min(c, x), std::max(c, x)});
    }
  }

  void disconnect(PointId c) {
    for (const auto& [x, link] : adj_[c]) {
      edges_.erase({height_order_key(link.height), link.height, std::min(c, x), std::max(c, x)});
      adj_[x].erase(c);
      witness_remove(x, link);
    }
    adj_[c].clear();
    witness_[c] = -std::numeric_limits<double>::infinity();
    witness_dirty_[c] = 0;
  }

  SparseSetState sets_;
  std::vector<ClusterStats>& stats_;
  std::vector<double>& taken_height_;
  std::size_t rounds_;
  double c_f_;
  WorkCounter& work_;
  std::vector<std::unordered_map<PointId, Link>> adj_;
  std::vector<double> witness_;
  std::vector<char> witness_dirty_;
  std::set<EdgeKey> edges_;
};

}  // namespace detail

/// Parameter-free RP-ALC.
///
/// Same repeat skeleton as the parameter-free RP-SLC, on clusters instead of
/// points. Partition sets are mapped to live cluster representatives
/// (smallest member id); every merge replaces the two clusters by the merged
/// one in all sets holding them and recomputes the merged cluster's ALC
/// distance to everything it now co-occurs with. A candidate edge is
/// potentially feasible when frequent, and feasible when some potentially
/// feasible edge at either endpoint has a squared centroid distance at
/// least its ALC distance. A cluster's taken length is the largest height
/// of a frequent merge inside it. Heights are on the squared-distance
/// scale; the perturbation length uses their square root.
inline ClusteringResult rp_alc_parameter_free(const Dataset& ds, const PartitionConfig& base_cfg,
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
  std::vector<ClusterStats> stats;
  stats.reserve(n);
  for (PointId p = 0; p < n; ++p) stats.push_back(ClusterStats::singleton(ds.coords(p)));
  std::vector<double> taken_height(n, -std::numeric_limits<double>::infinity());

  for (std::size_t iter = 0; uf.cluster_count() > 1; ++iter) {
    const bool full = min_pts >= n;
    PartitionConfig cfg = base_cfg;
    cfg.min_pts = std::max<std::size_t>(2, std::min(min_pts, n));
    cfg.l_per = l_per;
    cfg.master_seed = derive_seed(base_cfg.master_seed, {static_cast<std::uint64_t>(StreamTag::iteration), iter});
    ++out.iterations;

    std::vector<PointId> live;
    for (PointId p = 0; p < n; ++p) {
      if (uf.cluster_id(p) == p) live.push_back(p);
    }
    std::vector<std::vector<PointId>> sets;
    std::vector<std::uint32_t> weights;
    if (full) {
      sets.push_back(live);
      weights.push_back(static_cast<std::uint32_t>(cfg.rounds));
    } else {
      const PartitionFamily family = perturb_multi_partition(ds, cfg);
      out.depth_exhausted_rounds += family.depth_exhausted_rounds;
      for (const auto& s : family.sets) {
        std::vector<PointId> reps;
        reps.reserve(s.size());
        for (PointId p : s) reps.push_back(uf.cluster_id(p));
        std::sort(reps.begin(), reps.end());
        reps.erase(std::unique(reps.begin(), reps.end()), reps.end());
        if (reps.size() < 2) continue;
        sets.push_back(std::move(reps));
        weights.push_back(1);
      }
    }
    detail::AlcIterationState state(SparseSetState(std::move(sets), std::move(weights), n), stats, taken_height,
                                    live, cfg.rounds, c_f, out.work);

    // With every live cluster in one set all pairs are known; merging is exact.
    bool ok = full || state.condition(live);
    std::vector<PointId> check;
    while (uf.cluster_count() > 1 && ok && !state.empty()) {
      if (!full && std::sqrt(state.min_feasible()) / 8.0 < l_per) break;
      const auto top = state.top();
      if (!full) {
        check.clear();
        check.push_back(top.a);
        state.collect_feasible(top.a, check);
        state.collect_feasible(top.b, check);
      }
      record_merge(out.merges, uf, top.a, top.b, top.height);
      state.merge(top.a, top.b);
      if (!full) {
        for (PointId& c : check) c = uf.cluster_id(c);
        std::sort(check.begin(), check.end());
        check.erase(std::unique(check.begin(), check.end()), check.end());
        ok = state.condition(check);
      }
    }
    if (uf.cluster_count() == 1) break;
    if (full) throw std::logic_error("rp_alc_parameter_free: full pass ended with several clusters");

    out.restarts.push_back({iter, ok ? RestartReason::perturbation_rescale : RestartReason::condition_failure,
                            min_pts, l_per, out.merges.events.size()});
    if (!ok && min_pts < n) {
      min_pts = std::min(2 * min_pts, n);
      ++out.doublings;
    }
    if (const double mf = state.min_feasible(); std::isfinite(mf)) l_per = std::sqrt(mf) / 16.0;
  }
  out.final_min_pts = min_pts;
  return out;
}

}  // namespace rphc
