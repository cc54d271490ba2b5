#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "rphc/dendrogram.hpp"
#include "rphc/geometry.hpp"
#include "rphc/rng.hpp"

namespace rphc {

/// Malformed input file; row and column are 1-based (0 when not applicable).
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t row, std::size_t column)
      : std::runtime_error(format(what, row, column)), row_(row), column_(column) {}
  [[nodiscard]] std::size_t row() const noexcept { return row_; }
  [[nodiscard]] std::size_t column() const noexcept { return column_; }

 private:
  static std::string format(const std::string& what, std::size_t row, std::size_t column) {
    std::string s = what;
    if (row != 0) s += " (row " + std::to_string(row);
    if (row != 0 && column != 0) s += ", column " + std::to_string(column);
    if (row != 0) s += ")";
    return s;
  }
  std::size_t row_;
  std::size_t column_;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r' || s.front() == '\xEF' ||
                        s.front() == '\xBB' || s.front() == '\xBF')) {
    s.remove_prefix(1);
  }
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> cells;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = line.find(',', start);
    cells.push_back(trim(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return cells;
}

inline bool parse_double(std::string_view s, double& out) {
  if (s.empty()) return false;
  if (s.front() == '+') s.remove_prefix(1);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

template <class Int>
bool parse_int(std::string_view s, Int& out) {
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return !s.empty() && ec == std::errc() && ptr == s.data() + s.size();
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace detail

/// Comma-separated numeric rows; the first row is treated as a header when
/// any of its cells is non-numeric. Blank lines are ignored.
inline Dataset parse_csv(std::string_view text) {
  std::vector<double> coords;
  std::size_t dim = 0;
  std::size_t row = 0;
  bool first_content = true;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = detail::trim(text.substr(start, end - start));
    ++row;
    start = end + 1;
    if (line.empty()) {
      if (end == text.size()) break;
      continue;
    }
    const auto cells = detail::split_commas(line);
    std::vector<double> values(cells.size());
    std::size_t bad_column = 0;
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (!detail::parse_double(cells[c], values[c])) {
        bad_column = c + 1;
        break;
      }
    }
    if (first_content) {
      first_content = false;
      if (bad_column != 0) continue;  // header
    }
    if (bad_column != 0) {
      throw ParseError("non-numeric cell '" + std::string(cells[bad_column - 1]) + "'", row, bad_column);
    }
    if (dim == 0) {
      dim = values.size();
    } else if (values.size() != dim) {
      throw ParseError("ragged row: expected " + std::to_string(dim) + " columns, found " + std::to_string(values.size()),
                       row, std::min(values.size(), dim) + 1);
    }
    coords.insert(coords.end(), values.begin(), values.end());
    if (end == text.size()) break;
  }
  if (coords.empty()) throw ParseError("no data rows", 0, 0);
  return Dataset(dim, std::move(coords));
}

inline Dataset ingest_csv(const std::string& path) { return parse_csv(detail::read_file(path)); }

inline void write_csv(std::ostream& out, const Dataset& ds) {
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const auto c = ds.coords(i);
    for (std::size_t k = 0; k < c.size(); ++k) out << (k ? "," : "") << detail::format_double(c[k]);
    out << '\n';
  }
}

/// One line per merge: step,id_a,id_b,distance,new_cluster_size where the
/// ids are the smallest point ids of the two merging clusters.
inline void write_merges(std::ostream& out, const MergeSequence& seq) {
  for (const auto& e : seq.events) {
    out << e.step << ',' << e.cluster_a << ',' << e.cluster_b << ',' << detail::format_double(e.height) << ','
        << e.new_size << '\n';
  }
}

inline std::string merges_to_string(const MergeSequence& seq) {
  std::ostringstream ss;
  write_merges(ss, seq);
  return ss.str();
}

/// Reads a merges file written by write_merges. The edge endpoints of the
/// returned events are the cluster ids.
inline MergeSequence parse_merges(std::string_view text, std::size_t n_points) {
  MergeSequence seq;
  seq.n_points = n_points;
  std::size_t row = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = detail::trim(text.substr(start, end - start));
    start = end + 1;
    ++row;
    if (line.empty()) continue;
    const auto cells = detail::split_commas(line);
    if (cells.size() != 5) throw ParseError("merge line needs 5 fields", row, 0);
    MergeEvent e;
    if (!detail::parse_int(cells[0], e.step)) throw ParseError("bad step", row, 1);
    if (!detail::parse_int(cells[1], e.cluster_a)) throw ParseError("bad id_a", row, 2);
    if (!detail::parse_int(cells[2], e.cluster_b)) throw ParseError("bad id_b", row, 3);
    if (!detail::parse_double(cells[3], e.height)) throw ParseError("bad distance", row, 4);
    if (!detail::parse_int(cells[4], e.new_size)) throw ParseError("bad cluster size", row, 5);
    if (e.cluster_a >= n_points || e.cluster_b >= n_points) throw ParseError("point id out of range", row, 2);
    e.edge_a = e.cluster_a;
    e.edge_b = e.cluster_b;
    seq.events.push_back(e);
  }
  return seq;
}

inline void write_labels(std::ostream& out, const std::vector<std::uint32_t>& labels) {
  for (std::size_t i = 0; i < labels.size(); ++i) out << i << ',' << labels[i] << '\n';
}

/// Newick string of a complete dendrogram; leaves are point ids and branch
/// lengths are height differences.
inline std::string to_newick(const MergeSequence& seq) {
  if (!seq.complete()) throw std::invalid_argument("to_newick: dendrogram is incomplete");
  const std::size_t n = seq.n_points;
  std::vector<std::string> text(n);
  std::vector<double> height(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) text[i] = std::to_string(i);
  UnionFind uf(n);
  std::vector<std::size_t> node_of_root(n);
  for (std::size_t i = 0; i < n; ++i) node_of_root[i] = i;
  for (const auto& e : seq.events) {
    const PointId ra = uf.find(e.cluster_a);
    const PointId rb = uf.find(e.cluster_b);
    const std::size_t na = node_of_root[ra];
    const std::size_t nb = node_of_root[rb];
    auto branch = [&](std::size_t node) { return detail::format_double(std::max(0.0, e.height - height[node])); };
    std::string merged = "(" + text[na] + ":" + branch(na) + "," + text[nb] + ":" + branch(nb) + ")";
    text[nb].clear();
    text[na] = std::move(merged);
    height[na] = e.height;
    const PointId root = uf.unite(ra, rb);
    node_of_root[root] = na;
  }
  return text[node_of_root[uf.find(0)]] + ";";
}

/// Gaussian blobs with their generating labels.
struct SyntheticData {
  Dataset data;
  std::vector<std::uint32_t> labels;
  std::vector<std::vector<double>> centers;
};

/// `n_clusters` isotropic Gaussian blobs (standard deviation `spread`) of
/// `points_per_cluster` points each, around centers drawn uniformly in a
/// cube and kept only if at least `separation` apart from earlier centers.
/// Points are stored blob by blob. The cube side defaults to
/// 2 * separation * (ceil(n_clusters^(1/d)) + 1); `box_side` overrides it.
inline SyntheticData generate_synthetic(std::size_t n_clusters, std::size_t points_per_cluster, std::size_t d,
                                        double spread, double separation, std::uint64_t seed,
                                        double box_side = 0.0) {
  if (n_clusters == 0 || points_per_cluster == 0 || d == 0) {
    throw std::invalid_argument("generate_synthetic: cluster count, cluster size and dimension must be positive");
  }
  if (!(spread >= 0.0) || !(separation > 0.0)) {
    throw std::invalid_argument("generate_synthetic: spread must be >= 0 and separation > 0");
  }
  RngStream center_rng(seed, {static_cast<std::uint64_t>(StreamTag::synthetic), 0});
  RngStream point_rng(seed, {static_cast<std::uint64_t>(StreamTag::synthetic), 1});
  const double per_axis = std::ceil(std::pow(static_cast<double>(n_clusters), 1.0 / static_cast<double>(d)));
  const double side = box_side > 0.0 ? box_side : 2.0 * separation * (per_axis + 1.0);
  constexpr int kMaxAttempts = 1000;
  SyntheticData out;
  for (std::size_t c = 0; c < n_clusters; ++c) {
    bool placed = false;
    for (int attempt = 0; attempt < kMaxAttempts && !placed; ++attempt) {
      std::vector<double> center(d);
      for (double& x : center) x = side * center_rng.uniform();
      placed = std::all_of(out.centers.begin(), out.centers.end(),
                           [&](const auto& other) { return distance(center, other) >= separation; });
      if (placed) out.centers.push_back(std::move(center));
    }
    if (!placed) {
      throw std::runtime_error("generate_synthetic: could not place " + std::to_string(n_clusters) +
                               " centers at separation " + detail::format_double(separation));
    }
  }
  std::vector<double> coords;
  coords.reserve(n_clusters * points_per_cluster * d);
  for (std::size_t c = 0; c < n_clusters; ++c) {
    for (std::size_t i = 0; i < points_per_cluster; ++i) {
      for (std::size_t k = 0; k < d; ++k) coords.push_back(out.centers[c][k] + spread * point_rng.normal());
      out.labels.push_back(static_cast<std::uint32_t>(c));
    }
  }
  out.data = Dataset(d, std::move(coords));
  return out;
}

}  // namespace rphc
