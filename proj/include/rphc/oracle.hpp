#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "rphc/candidates.hpp"
#include "rphc/dendrogram.hpp"
#include "rphc/geometry.hpp"
#include "rphc/parallel.hpp"

namespace rphc {

/// Symmetric N x N matrix of Euclidean or squared Euclidean distances.
class FullDistanceMatrix {
 public:
  enum class Kind { euclidean, squared };

  FullDistanceMatrix(const Dataset& ds, Kind kind, WorkCounter* work = nullptr)
      : n_(ds.size()), values_(n_ * n_, 0.0) {
    parallel_for(n_, [&](std::size_t i) {
      for (std::size_t j = i + 1; j < n_; ++j) {
        const double d2 = squared_distance(ds.coords(i), ds.coords(j));
        values_[i * n_ + j] = kind == Kind::squared ? d2 : std::sqrt(d2);
      }
    });
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = 0; j < i; ++j) values_[i * n_ + j] = values_[j * n_ + i];
    }
    if (work != nullptr) work->distance_computations += n_ * (n_ - 1) / 2;
  }

  [[nodiscard]] double operator()(std::size_t i, std::size_t j) const noexcept { return values_[i * n_ + j]; }
  [[nodiscard]] std::size_t size() const noexcept { return n_; }

 private:
  std::size_t n_;
  std::vector<double> values_;
};

/// Exact single linkage: Kruskal over all N(N-1)/2 edges, ties broken by
/// the lexicographic id pair.
inline MergeSequence brute_slc(const Dataset& ds, WorkCounter* work = nullptr) {
  const std::size_t n = ds.size();
  MergeSequence seq;
  seq.n_points = n;
  if (n <= 1) return seq;
  std::vector<CandidateEdge> edges;
  edges.reserve(n * (n - 1) / 2);
  for (PointId a = 0; a + 1 < n; ++a) {
    for (PointId b = a + 1; b < n; ++b) edges.push_back({a, b, 0.0, 1});
  }
  WorkCounter local;
  detail::fill_distances(ds, edges, work != nullptr ? *work : local);
  sort_by_distance(edges);
  UnionFind uf(n);
  for (const auto& e : edges) {
    if (uf.cluster_count() == 1) break;
    record_merge(seq, uf, e.a, e.b, e.distance);
  }
  return seq;
}

/// Exact average linkage on squared distances. Each merge height is the mean
/// squared distance between the members of the two clusters, summed
/// directly over explicit member lists (no centroid or variance
/// bookkeeping). Clusters are identified by their smallest member id; ties
/// in height_order_key are broken by the lexicographic pair of those ids.
inline MergeSequence brute_alc(const Dataset& ds, WorkCounter* work = nullptr) {
  const std::size_t n = ds.size();
  MergeSequence seq;
  seq.n_points = n;
  if (n <= 1) return seq;

  const FullDistanceMatrix sq(ds, FullDistanceMatrix::Kind::squared, work);
  std::vector<std::vector<PointId>> members(n);
  for (PointId p = 0; p < n; ++p) members[p] = {p};
  std::vector<char> active(n, 1);
  // height[i * n + j] for active cluster slots i != j.
  std::vector<double> height(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) height[i * n + j] = sq(i, j);
  }

  auto before = [&](std::size_t i1, std::size_t j1, std::size_t i2, std::size_t j2) {
    const double h1 = height_order_key(height[i1 * n + j1]);
    const double h2 = height_order_key(height[i2 * n + j2]);
    if (h1 != h2) return h1 < h2;
    const auto a1 = std::min(i1, j1), b1 = std::max(i1, j1);
    const auto a2 = std::min(i2, j2), b2 = std::max(i2, j2);
    return a1 != a2 ? a1 < a2 : b1 < b2;
  };
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> nearest(n, kNone);
  auto refresh = [&](std::size_t i) {
    nearest[i] = kNone;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i || !active[j]) continue;
      if (nearest[i] == kNone || before(i, j, i, nearest[i])) nearest[i] = j;
    }
  };
  for (std::size_t i = 0; i < n; ++i) refresh(i);

  for (std::size_t step = 0; step + 1 < n; ++step) {
    std::size_t bi = kNone;
    for (std::size_t i = 0; i < n; ++i) {
      if (!active[i] || nearest[i] == kNone) continue;
      if (bi == kNone || before(i, nearest[i], bi, nearest[bi])) bi = i;
    }
    const std::size_t keep = std::min(bi, nearest[bi]);
    const std::size_t drop = std::max(bi, nearest[bi]);
    const double h = height[keep * n + drop];
    members[keep].insert(members[keep].end(), members[drop].begin(), members[drop].end());
    members[drop].clear();
    active[drop] = 0;
    seq.events.push_back(MergeEvent{step, static_cast<PointId>(keep), static_cast<PointId>(drop),
                                    static_cast<PointId>(keep), static_cast<PointId>(drop), h,
                                    members[keep].size()});

    // Mean squared distance from the merged cluster to every other cluster,
    // straight from the member lists.
    const auto& mk = members[keep];
    for (std::size_t j = 0; j < n; ++j) {
      if (!active[j] || j == keep) continue;
      double sum = 0.0;
      for (PointId a : mk) {
        for (PointId b : members[j]) sum += sq(a, b);
      }
      const double v = sum / (static_cast<double>(mk.size()) * static_cast<double>(members[j].size()));
      height[keep * n + j] = v;
      height[j * n + keep] = v;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (!active[i]) continue;
      if (i == keep || nearest[i] == keep || nearest[i] == drop) {
        refresh(i);
      } else if (before(i, keep, i, nearest[i])) {
        nearest[i] = keep;
      }
    }
  }
  return seq;
}

}  // namespace rphc
