#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "rphc/geometry.hpp"
#include "rphc/parallel.hpp"
#include "rphc/partition.hpp"

namespace rphc {

/// Counts distance evaluations (Euclidean or ALC) performed by an algorithm.
struct WorkCounter {
  std::uint64_t distance_computations = 0;
};

/// A point pair that shared at least one set: exact distance on the
/// original coordinates and the number of sets containing both.
struct CandidateEdge {
  PointId a = 0;  // a < b
  PointId b = 0;
  double distance = 0.0;
  std::uint32_t count = 0;
};

/// Deduplicated candidate edges, sorted by (a, b).
struct CandidateEdgeTable {
  std::vector<CandidateEdge> edges;
  std::size_t rounds = 0;  // denominator of the frequency test
};

namespace detail {

inline void fill_distances(const Dataset& ds, std::vector<CandidateEdge>& edges, WorkCounter& work) {
  constexpr std::size_t kChunk = 4096;
  const std::size_t chunks = (edges.size() + kChunk - 1) / kChunk;
  parallel_for(chunks, [&](std::size_t c) {
    const std::size_t end = std::min(edges.size(), (c + 1) * kChunk);
    for (std::size_t i = c * kChunk; i < end; ++i) {
      edges[i].distance = distance(ds.coords(edges[i].a), ds.coords(edges[i].b));
    }
  });
  work.distance_computations += edges.size();
}

// Upper bound on dense triangular counters (entries), ~256 MiB of uint32.
inline constexpr std::uint64_t kDenseLimit = std::uint64_t{1} << 26;

}  // namespace detail

/// Builds the table of pairs co-occurring in any set of `family`. Each
/// distinct pair's distance is computed once.
inline CandidateEdgeTable build_candidate_table(const PartitionFamily& family, const Dataset& ds,
                                                WorkCounter& work) {
  const std::size_t n = ds.size();
  std::uint64_t volume = 0;
  for (const auto& s : family.sets) {
    for (PointId id : s) {
      if (id >= n) throw std::invalid_argument("partition set refers to point id " + std::to_string(id) +
                                               " outside dataset of size " + std::to_string(n));
    }
    volume += static_cast<std::uint64_t>(s.size()) * (s.size() - 1) / 2;
  }
  const std::uint64_t all_pairs = static_cast<std::uint64_t>(n) * (n - 1) / 2;

  CandidateEdgeTable table;
  table.rounds = family.rounds;
  if (2 * volume >= all_pairs && all_pairs <= detail::kDenseLimit) {
    // Dense triangular counters.
    std::vector<std::uint32_t> counts(all_pairs, 0);
    auto index = [n](std::uint64_t a, std::uint64_t b) { return a * n - a * (a + 1) / 2 + (b - a - 1); };
    for (const auto& s : family.sets) {
      for (std::size_t i = 0; i < s.size(); ++i) {
        for (std::size_t j = i + 1; j < s.size(); ++j) {
          const PointId a = std::min(s[i], s[j]);
          const PointId b = std::max(s[i], s[j]);
          if (a != b) ++counts[index(a, b)];
        }
      }
    }
    for (std::uint64_t a = 0; a + 1 < n; ++a) {
      for (std::uint64_t b = a + 1; b < n; ++b) {
        if (const auto c = counts[index(a, b)]; c != 0) {
          table.edges.push_back({static_cast<PointId>(a), static_cast<PointId>(b), 0.0, c});
        }
      }
    }
  } else {
    std::vector<std::uint64_t> keys;
    keys.reserve(volume);
    for (const auto& s : family.sets) {
      for (std::size_t i = 0; i < s.size(); ++i) {
        for (std::size_t j = i + 1; j < s.size(); ++j) {
          if (s[i] != s[j]) keys.push_back(pair_key(s[i], s[j]));
        }
      }
    }
    std::sort(keys.begin(), keys.end());
    for (std::size_t i = 0; i < keys.size();) {
      std::size_t j = i;
      while (j < keys.size() && keys[j] == keys[i]) ++j;
      table.edges.push_back({pair_first(keys[i]), pair_second(keys[i]), 0.0, static_cast<std::uint32_t>(j - i)});
      i = j;
    }
  }
  detail::fill_distances(ds, table.edges, work);
  return table;
}

/// Every pair of the dataset, each with count `rounds` (every pair is
/// considered present in every round).
inline CandidateEdgeTable full_candidate_table(const Dataset& ds, std::size_t rounds, WorkCounter& work) {
  const std::size_t n = ds.size();
  CandidateEdgeTable table;
  table.rounds = rounds;
  table.edges.reserve(n * (n - 1) / 2);
  for (PointId a = 0; a + 1 < n; ++a) {
    for (PointId b = a + 1; b < n; ++b) table.edges.push_back({a, b, 0.0, static_cast<std::uint32_t>(rounds)});
  }
  detail::fill_distances(ds, table.edges, work);
  return table;
}

/// Orders edges by (distance, a, b): ascending length, exact ties broken by
/// the lexicographic id pair.
inline bool edge_less(const CandidateEdge& x, const CandidateEdge& y) noexcept {
  if (x.distance != y.distance) return x.distance < y.distance;
  if (x.a != y.a) return x.a < y.a;
  return x.b < y.b;
}

inline void sort_by_distance(std::vector<CandidateEdge>& edges) { std::sort(edges.begin(), edges.end(), edge_less); }

}  // namespace rphc
