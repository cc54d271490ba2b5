#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "rphc/geometry.hpp"

namespace rphc {

/// One agglomeration step. `edge_a`/`edge_b` are the points (SLC) or
/// cluster representatives (ALC) whose edge caused the merge;
/// `cluster_a < cluster_b` are the smallest point ids of the two merging
/// clusters. `height` is the Euclidean edge length for SLC and the
/// average squared distance for ALC.
struct MergeEvent {
  std::size_t step = 0;
  PointId edge_a = 0;
  PointId edge_b = 0;
  PointId cluster_a = 0;
  PointId cluster_b = 0;
  double height = 0.0;
  std::size_t new_size = 0;

  friend bool operator==(const MergeEvent&, const MergeEvent&) = default;
};

/// Ordered merge events over `n_points` points.
struct MergeSequence {
  std::size_t n_points = 0;
  std::vector<MergeEvent> events;

  [[nodiscard]] bool complete() const noexcept { return n_points >= 1 && events.size() + 1 == n_points; }
  [[nodiscard]] std::vector<double> heights() const {
    std::vector<double> h;
    h.reserve(events.size());
    for (const auto& e : events) h.push_back(e.height);
    return h;
  }

  friend bool operator==(const MergeSequence&, const MergeSequence&) = default;
};

/// Disjoint sets over point ids with union by size and path halving.
/// Tracks each cluster's smallest id and its size.
class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n), size_(n, 1), min_id_(n), clusters_(n) {
    std::iota(parent_.begin(), parent_.end(), PointId{0});
    std::iota(min_id_.begin(), min_id_.end(), PointId{0});
  }

  PointId find(PointId x) noexcept {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  bool same(PointId a, PointId b) noexcept { return find(a) == find(b); }

  /// Merges the clusters of a and b; returns the new root, or nothing
  /// happens and the common root is returned if they already coincide.
  PointId unite(PointId a, PointId b) noexcept {
    a = find(a);
    b = find(b);
    if (a == b) return a;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    min_id_[a] = std::min(min_id_[a], min_id_[b]);
    --clusters_;
    return a;
  }

  std::size_t cluster_size(PointId x) noexcept { return size_[find(x)]; }
  /// Cl_ID: the smallest point id in x's cluster.
  PointId cluster_id(PointId x) noexcept { return min_id_[find(x)]; }
  [[nodiscard]] std::size_t cluster_count() const noexcept { return clusters_; }
  [[nodiscard]] std::size_t size() const noexcept { return parent_.size(); }

 private:
  std::vector<PointId> parent_;
  std::vector<std::size_t> size_;
  std::vector<PointId> min_id_;
  std::size_t clusters_;
};

/// `h` rounded to 40 significant bits. ALC merge order compares these keys
/// and then cluster ids, so heights that differ only by rounding tie.
inline double height_order_key(double h) {
  if (h == 0.0 || !std::isfinite(h)) return h;
  int e = 0;
  const double m = std::frexp(h, &e);
  return std::ldexp(std::nearbyint(std::ldexp(m, 40)), e - 40);
}

/// Appends a merge of the clusters containing a and b to `seq`, updating
/// `uf`. Returns false (and records nothing) if they are already joined.
inline bool record_merge(MergeSequence& seq, UnionFind& uf, PointId a, PointId b, double height) {
  PointId ca = uf.cluster_id(a);
  PointId cb = uf.cluster_id(b);
  if (ca == cb) return false;
  if (ca > cb) std::swap(ca, cb);
  uf.unite(a, b);
  seq.events.push_back(MergeEvent{seq.events.size(), a, b, ca, cb, height, uf.cluster_size(a)});
  return true;
}

}  // namespace rphc
