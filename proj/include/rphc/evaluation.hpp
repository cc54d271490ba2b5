#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "rphc/dendrogram.hpp"
#include "rphc/geometry.hpp"
#include "rphc/rng.hpp"

namespace rphc {

/// Flat clustering with k clusters; labels are 0..k-1 in order of first
/// appearance by point id.
struct CutLabels {
  std::size_t k = 0;
  std::vector<std::uint32_t> labels;
};

/// Labels after applying the first N - k merges of `hc`.
inline CutLabels cut(const MergeSequence& hc, std::size_t k, std::size_t n) {
  if (hc.n_points != n) throw std::invalid_argument("cut: dendrogram has " + std::to_string(hc.n_points) + " points, expected " + std::to_string(n));
  if (!hc.complete()) throw std::invalid_argument("cut: dendrogram is incomplete");
  if (k < 1 || k > n) throw std::invalid_argument("cut: level k=" + std::to_string(k) + " outside [1, " + std::to_string(n) + "]");
  UnionFind uf(n);
  for (std::size_t i = 0; i < n - k; ++i) uf.unite(hc.events[i].cluster_a, hc.events[i].cluster_b);
  CutLabels out{k, std::vector<std::uint32_t>(n)};
  std::unordered_map<PointId, std::uint32_t> label_of_root;
  for (PointId p = 0; p < n; ++p) {
    const auto [it, inserted] = label_of_root.try_emplace(uf.find(p), static_cast<std::uint32_t>(label_of_root.size()));
    out.labels[p] = it->second;
  }
  return out;
}

/// Per-level Fowlkes-Mallows agreement for k = 2..N-1 and its mean.
struct PreservationScore {
  std::vector<double> per_level;  // per_level[i] is level k = i + 2
  double average = 1.0;
};

namespace detail {

// Contingency bookkeeping for one side of the comparison. Each live
// cluster owns a slot; the merged cluster keeps the slot of the larger
// contingency row so rows are only ever merged small-into-large.
struct ContingencySide {
  explicit ContingencySide(std::size_t n) : uf(n), slot(n), size(n, 1), rows(n) {
    for (std::size_t i = 0; i < n; ++i) {
      slot[i] = static_cast<std::uint32_t>(i);
      rows[i][static_cast<std::uint32_t>(i)] = 1;
    }
  }
  UnionFind uf;
  std::vector<std::uint32_t> slot;  // uf root -> row slot
  std::vector<std::uint64_t> size;  // by slot
  std::vector<std::unordered_map<std::uint32_t, std::uint64_t>> rows;  // slot -> (other slot -> count)
  std::uint64_t pairs = 0;          // sum over clusters of C(size, 2)
};

// Applies one merge on `self`; keeps `other`'s rows in sync and returns the
// increase of sum_ij C(n_ij, 2).
inline std::uint64_t apply_merge(ContingencySide& self, ContingencySide& other, PointId x, PointId y) {
  const PointId rx = self.uf.find(x);
  const PointId ry = self.uf.find(y);
  if (rx == ry) throw std::invalid_argument("dendrogram merges two points that are already joined");
  std::uint32_t sx = self.slot[rx];
  std::uint32_t sy = self.slot[ry];
  if (self.rows[sx].size() < self.rows[sy].size()) std::swap(sx, sy);  // sx: larger row, survives
  self.pairs += self.size[sx] * self.size[sy];
  self.size[sx] += self.size[sy];
  std::uint64_t gained = 0;
  for (const auto& [j, c] : self.rows[sy]) {
    auto& big = self.rows[sx][j];
    gained += c * big;
    big += c;
    auto& orow = other.rows[j];
    orow.erase(sy);
    orow[sx] = big;
  }
  self.rows[sy].clear();
  const PointId root = self.uf.unite(rx, ry);
  self.slot[root] = sx;
  return gained;
}

}  // namespace detail

/// Dendrogram similarity: for every cut level k = 2..N-1 the Fowlkes-Mallows
/// index of the two k-clusterings, computed from their confusion matrix;
/// the average over levels. Levels 1 and N agree trivially and are left
/// out; with N <= 2 there are no levels and the average is 1.
inline PreservationScore preservation(const MergeSequence& a, const MergeSequence& b, std::size_t n) {
  if (a.n_points != n || b.n_points != n) throw std::invalid_argument("preservation: dendrograms differ in size");
  if (!a.complete() || !b.complete()) throw std::invalid_argument("preservation: both dendrograms must be complete");
  PreservationScore out;
  if (n <= 2) return out;
  detail::ContingencySide sa(n);
  detail::ContingencySide sb(n);
  std::uint64_t tp = 0;
  out.per_level.assign(n - 2, 0.0);
  for (std::size_t t = 0; t + 2 < n; ++t) {
    tp += detail::apply_merge(sa, sb, a.events[t].cluster_a, a.events[t].cluster_b);
    tp += detail::apply_merge(sb, sa, b.events[t].cluster_a, b.events[t].cluster_b);
    const std::size_t k = n - t - 1;
    out.per_level[k - 2] = static_cast<double>(tp) / std::sqrt(static_cast<double>(sa.pairs) * static_cast<double>(sb.pairs));
  }
  double sum = 0.0;
  for (double v : out.per_level) sum += v;
  out.average = sum / static_cast<double>(out.per_level.size());
  return out;
}

/// Adjusted Rand index of two labelings.
inline double adjusted_rand_index(std::span<const std::uint32_t> x, std::span<const std::uint32_t> y) {
  if (x.size() != y.size()) throw std::invalid_argument("adjusted_rand_index: labelings differ in length");
  const double n = static_cast<double>(x.size());
  auto c2 = [](double v) { return v * (v - 1.0) / 2.0; };
  std::unordered_map<std::uint64_t, double> joint;
  std::unordered_map<std::uint32_t, double> rx;
  std::unordered_map<std::uint32_t, double> ry;
  for (std::size_t i = 0; i < x.size(); ++i) {
    joint[(static_cast<std::uint64_t>(x[i]) << 32) | y[i]] += 1.0;
    rx[x[i]] += 1.0;
    ry[y[i]] += 1.0;
  }
  double index = 0.0, sx = 0.0, sy = 0.0;
  for (const auto& [k, v] : joint) index += c2(v);
  for (const auto& [k, v] : rx) sx += c2(v);
  for (const auto& [k, v] : ry) sy += c2(v);
  const double expected = sx * sy / c2(n);
  const double max_index = 0.5 * (sx + sy);
  if (max_index == expected) return 1.0;
  return (index - expected) / (max_index - expected);
}

/// |B(P, c)| for every point and the largest of them.
struct NeighborhoodSizes {
  std::vector<std::size_t> per_point;
  std::size_t max = 0;
  PointId argmax = 0;
};

/// For each P: the number of points (P included) within c times the
/// longest dendrogram edge adjacent to P. Edge lengths are Euclidean
/// distances between the edge endpoints.
inline NeighborhoodSizes compute_B(const Dataset& ds, const MergeSequence& hc, double c) {
  if (!hc.complete()) throw std::invalid_argument("compute_B: dendrogram is incomplete");
  if (!(c > 0.0)) throw std::invalid_argument("compute_B: c must be positive");
  const std::size_t n = ds.size();
  std::vector<double> longest(n, 0.0);
  for (const auto& e : hc.events) {
    const double len = distance(ds.coords(e.edge_a), ds.coords(e.edge_b));
    longest[e.edge_a] = std::max(longest[e.edge_a], len);
    longest[e.edge_b] = std::max(longest[e.edge_b], len);
  }
  NeighborhoodSizes out;
  out.per_point.assign(n, 0);
  for (std::size_t p = 0; p < n; ++p) {
    const double radius = c * longest[p];
    std::size_t count = 0;
    for (std::size_t q = 0; q < n; ++q) count += distance(ds.coords(p), ds.coords(q)) <= radius ? 1 : 0;
    out.per_point[p] = count;
    if (count > out.max) {
      out.max = count;
      out.argmax = static_cast<PointId>(p);
    }
  }
  return out;
}

struct ProjectionEstimate {
  std::size_t trials = 0;
  std::size_t hits = 0;
  double frequency = 0.0;
  double bound = 0.0;  // D(P,T) / (pi D(P,R))
};

/// True iff D(P,T) <= 2 sin(1) min(D(P,R), D(T,R)).
inline bool projection_hypothesis_holds(std::span<const double> p, std::span<const double> r,
                                        std::span<const double> t) {
  return distance(p, t) <= 2.0 * std::sin(1.0) * std::min(distance(p, r), distance(t, r));
}

/// Monte-Carlo frequency of the event that R projects between P and T
/// (closed interval, either orientation) on a uniformly random line.
inline ProjectionEstimate projection_bound_mc(std::span<const double> p, std::span<const double> r,
                                              std::span<const double> t, std::size_t trials, RngStream& rng) {
  if (p.size() != r.size() || p.size() != t.size()) throw std::invalid_argument("projection_bound_mc: dimension mismatch");
  if (!projection_hypothesis_holds(p, r, t)) {
    throw std::invalid_argument("projection_bound_mc: precondition D(P,T) <= 2 sin(1) min(D(P,R), D(T,R)) violated");
  }
  ProjectionEstimate out;
  out.trials = trials;
  const double dpr = distance(p, r);
  out.bound = dpr > 0.0 ? distance(p, t) / (std::numbers::pi * dpr) : 0.0;
  for (std::size_t i = 0; i < trials; ++i) {
    const RandomLine line = sample_unit_vector(p.size(), rng);
    const double a = dot(p, line.direction);
    const double m = dot(r, line.direction);
    const double b = dot(t, line.direction);
    if ((a <= m && m <= b) || (a >= m && m >= b)) ++out.hits;
  }
  out.frequency = trials == 0 ? 0.0 : static_cast<double>(out.hits) / static_cast<double>(trials);
  return out;
}

}  // namespace rphc
