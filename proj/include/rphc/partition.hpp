#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "rphc/geometry.hpp"
#include "rphc/parallel.hpp"
#include "rphc/rng.hpp"

namespace rphc {

/// ceil(factor * log2(n)), at least 1.
inline std::size_t log_scaled(double factor, std::size_t n) {
  if (n <= 1) return 1;
  const double v = std::ceil(factor * std::log2(static_cast<double>(n)) - 1e-9);
  return std::max<std::size_t>(1, static_cast<std::size_t>(v));
}

struct PartitionConfig {
  std::size_t min_pts = 14;
  std::size_t rounds = 1;
  std::size_t lines_per_round = 1;
  double l_per = 0.0;
  std::uint64_t master_seed = 0;

  static constexpr double kDefaultRoundsFactor = 20.0;
  static constexpr double kDefaultLinesFactor = 8.0;
  static constexpr std::size_t kDefaultMinPts = 14;

  /// Experimental defaults: min_pts 14, ceil(20 log2 N) rounds,
  /// ceil(8 log2 N) lines per round.
  static PartitionConfig defaults_for(std::size_t n, std::uint64_t seed = 0,
                                      double rounds_factor = kDefaultRoundsFactor) {
    PartitionConfig cfg;
    cfg.min_pts = kDefaultMinPts;
    cfg.rounds = log_scaled(rounds_factor, n);
    cfg.lines_per_round = log_scaled(kDefaultLinesFactor, n);
    cfg.master_seed = seed;
    return cfg;
  }

  void validate() const {
    if (min_pts < 2) throw std::invalid_argument("min_pts must be >= 2");
    if (rounds < 1) throw std::invalid_argument("rounds must be >= 1");
    if (lines_per_round < 1) throw std::invalid_argument("lines_per_round must be >= 1");
    if (!(l_per >= 0.0) || !std::isfinite(l_per)) throw std::invalid_argument("l_per must be finite and >= 0");
  }
};

/// Leaf sets of one recursive split of a point subset.
struct PartitionResult {
  std::vector<std::vector<PointId>> sets;
  std::vector<char> flagged;  // 1 = oversized leftover, line sequence ran out
  std::size_t splits = 0;     // number of (set, line) projections performed
  std::size_t max_depth = 0;  // deepest line index used + 1
  bool depth_exhausted = false;
};

namespace detail {

// Splits `set` with `line`; returns the size of the lower part after
// reordering `set` so that the lower part comes first (stable).
inline std::size_t split_on_line(const Dataset& points, std::vector<PointId>& set, const RandomLine& line,
                                 RngStream& rng) {
  const std::size_t n = set.size();
  std::vector<double> proj(n);
  for (std::size_t k = 0; k < n; ++k) proj[k] = dot(points.coords(set[k]), line.direction);

  auto lower_or_equal = [&](std::size_t k, std::size_t pivot) {
    return proj[k] < proj[pivot] || (proj[k] == proj[pivot] && set[k] <= set[pivot]);
  };

  constexpr int kDraws = 4;  // first draw plus three re-draws
  for (int attempt = 0; attempt < kDraws; ++attempt) {
    const auto pivot = static_cast<std::size_t>(rng.below(n));
    std::vector<PointId> lo;
    std::vector<PointId> hi;
    for (std::size_t k = 0; k < n; ++k) (lower_or_equal(k, pivot) ? lo : hi).push_back(set[k]);
    if (!hi.empty()) {
      std::copy(hi.begin(), hi.end(), std::copy(lo.begin(), lo.end(), set.begin()));
      return lo.size();
    }
  }
  // Median split in (projection, id) order.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return proj[a] < proj[b] || (proj[a] == proj[b] && set[a] < set[b]);
  });
  std::vector<char> in_lo(n, 0);
  for (std::size_t r = 0; r < n / 2; ++r) in_lo[order[r]] = 1;
  std::vector<PointId> lo;
  std::vector<PointId> hi;
  for (std::size_t k = 0; k < n; ++k) (in_lo[k] ? lo : hi).push_back(set[k]);
  std::copy(hi.begin(), hi.end(), std::copy(lo.begin(), lo.end(), set.begin()));
  return lo.size();
}

}  // namespace detail

/// Recursive random-projection split of the points `ids` (coordinates taken
/// from `points`). A set with at least `min_pts` members at depth j is
/// projected on lines[j], a splitting point is drawn uniformly from the set,
/// and members with (projection, id) <= the splitter's go to the lower part.
/// Lower parts are processed before upper parts. Sets still too large when
/// the lines run out are emitted and flagged.
inline PartitionResult partition_once(const Dataset& points, std::span<const PointId> ids, std::size_t min_pts,
                                      std::span<const RandomLine> lines, RngStream& rng) {
  if (min_pts < 2) throw std::invalid_argument("min_pts must be >= 2");
  if (lines.empty()) throw std::invalid_argument("partition needs a non-empty line sequence");

  PartitionResult out;
  struct Frame {
    std::vector<PointId> set;
    std::size_t depth;
  };
  std::vector<Frame> stack;
  stack.push_back({std::vector<PointId>(ids.begin(), ids.end()), 0});
  while (!stack.empty()) {
    Frame f = std::move(stack.back());
    stack.pop_back();
    if (f.set.size() < min_pts) {
      out.max_depth = std::max(out.max_depth, f.depth);
      out.sets.push_back(std::move(f.set));
      out.flagged.push_back(0);
      continue;
    }
    if (f.depth >= lines.size()) {
      out.max_depth = std::max(out.max_depth, f.depth);
      out.depth_exhausted = true;
      out.sets.push_back(std::move(f.set));
      out.flagged.push_back(1);
      continue;
    }
    const std::size_t n_lo = detail::split_on_line(points, f.set, lines[f.depth], rng);
    ++out.splits;
    Frame hi{std::vector<PointId>(f.set.begin() + static_cast<std::ptrdiff_t>(n_lo), f.set.end()), f.depth + 1};
    f.set.resize(n_lo);
    f.depth += 1;
    stack.push_back(std::move(hi));
    stack.push_back(std::move(f));
  }
  return out;
}

/// Union over rounds of leaf sets; ids refer to the unperturbed points.
struct PartitionFamily {
  std::vector<std::vector<PointId>> sets;
  std::vector<std::uint32_t> round_of_set;
  std::vector<char> flagged;
  std::size_t rounds = 0;
  std::size_t depth_exhausted_rounds = 0;
  std::size_t max_depth = 0;
  std::size_t splits = 0;
};

/// Random lines of one round, drawn from the round's `lines` substream.
inline std::vector<RandomLine> draw_lines(std::size_t d, std::size_t count, RngStream& rng) {
  std::vector<RandomLine> lines;
  lines.reserve(count);
  for (std::size_t j = 0; j < count; ++j) lines.push_back(sample_unit_vector(d, rng));
  return lines;
}

/// One partition per round on freshly perturbed points. Round r uses the
/// substreams (seed, {r, lines|perturb|split}), so rounds may run on any
/// thread and the family is a pure function of (ds, cfg).
inline PartitionFamily perturb_multi_partition(const Dataset& ds, const PartitionConfig& cfg) {
  cfg.validate();
  const std::size_t n = ds.size();
  std::vector<PointId> all(n);
  std::iota(all.begin(), all.end(), PointId{0});

  std::vector<PartitionResult> per_round(cfg.rounds);
  parallel_for(cfg.rounds, [&](std::size_t r) {
    const RngStream round(cfg.master_seed, {static_cast<std::uint64_t>(r)});
    RngStream line_rng = round.child(StreamTag::lines);
    RngStream split_rng = round.child(StreamTag::split);
    const auto lines = draw_lines(ds.dim(), cfg.lines_per_round, line_rng);
    if (cfg.l_per > 0.0) {
      RngStream perturb_rng = round.child(StreamTag::perturb);
      const Dataset moved = perturb(ds, cfg.l_per, perturb_rng);
      per_round[r] = partition_once(moved, all, cfg.min_pts, lines, split_rng);
    } else {
      per_round[r] = partition_once(ds, all, cfg.min_pts, lines, split_rng);
    }
  });

  PartitionFamily fam;
  fam.rounds = cfg.rounds;
  for (std::size_t r = 0; r < cfg.rounds; ++r) {
    auto& pr = per_round[r];
    fam.depth_exhausted_rounds += pr.depth_exhausted ? 1 : 0;
    fam.max_depth = std::max(fam.max_depth, pr.max_depth);
    fam.splits += pr.splits;
    for (std::size_t s = 0; s < pr.sets.size(); ++s) {
      fam.sets.push_back(std::move(pr.sets[s]));
      fam.round_of_set.push_back(static_cast<std::uint32_t>(r));
      fam.flagged.push_back(pr.flagged[s]);
    }
  }
  return fam;
}

}  // namespace rphc
