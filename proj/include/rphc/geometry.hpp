#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rphc/rng.hpp"

namespace rphc {

using PointId = std::uint32_t;

/// Read-only view of one point: its id and coordinates.
struct PointView {
  PointId id;
  std::span<const double> coords;
};

/// Immutable set of N points in R^d, ids 0..N-1 in row order. Coordinates
/// are stored row-major in one buffer.
class Dataset {
 public:
  Dataset() = default;

  Dataset(std::size_t dim, std::vector<double> coords) : dim_(dim), coords_(std::move(coords)) {
    if (dim_ == 0) throw std::invalid_argument("dataset dimension must be >= 1");
    if (coords_.empty() || coords_.size() % dim_ != 0) {
      throw std::invalid_argument("dataset needs a non-empty coordinate buffer whose size is a multiple of d");
    }
    for (double c : coords_) {
      if (!std::isfinite(c)) throw std::invalid_argument("dataset coordinates must be finite");
    }
  }

  static Dataset from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) throw std::invalid_argument("dataset needs at least one point");
    const std::size_t d = rows.front().size();
    std::vector<double> flat;
    flat.reserve(rows.size() * d);
    for (const auto& r : rows) {
      if (r.size() != d) throw std::invalid_argument("all points must have the same dimension");
      flat.insert(flat.end(), r.begin(), r.end());
    }
    return Dataset(d, std::move(flat));
  }

  [[nodiscard]] std::size_t size() const noexcept { return dim_ == 0 ? 0 : coords_.size() / dim_; }
  [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
  [[nodiscard]] std::span<const double> coords(std::size_t i) const noexcept {
    return {coords_.data() + i * dim_, dim_};
  }
  [[nodiscard]] PointView point(std::size_t i) const noexcept { return {static_cast<PointId>(i), coords(i)}; }
  [[nodiscard]] const std::vector<double>& raw() const noexcept { return coords_; }

 private:
  std::size_t dim_ = 0;
  std::vector<double> coords_;
};

/// Unit direction vector of a random line through the origin.
struct RandomLine {
  std::vector<double> direction;
};

// Four interleaved partial sums, combined as (s0 + s1) + (s2 + s3).
inline double dot(std::span<const double> a, std::span<const double> b) noexcept {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  const std::size_t n = a.size(), n4 = n - n % 4;
  for (std::size_t i = 0; i < n4; i += 4) {
    s0 += a[i] * b[i];
    s1 += a[i + 1] * b[i + 1];
    s2 += a[i + 2] * b[i + 2];
    s3 += a[i + 3] * b[i + 3];
  }
  for (std::size_t i = n4; i < n; ++i) s0 += a[i] * b[i];
  return (s0 + s1) + (s2 + s3);
}

inline double squared_distance(std::span<const double> a, std::span<const double> b) noexcept {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  const std::size_t n = a.size(), n4 = n - n % 4;
  for (std::size_t i = 0; i < n4; i += 4) {
    const double t0 = a[i] - b[i], t1 = a[i + 1] - b[i + 1];
    const double t2 = a[i + 2] - b[i + 2], t3 = a[i + 3] - b[i + 3];
    s0 += t0 * t0;
    s1 += t1 * t1;
    s2 += t2 * t2;
    s3 += t3 * t3;
  }
  for (std::size_t i = n4; i < n; ++i) {
    const double t = a[i] - b[i];
    s0 += t * t;
  }
  return (s0 + s1) + (s2 + s3);
}

inline double distance(std::span<const double> a, std::span<const double> b) noexcept {
  return std::sqrt(squared_distance(a, b));
}

/// Uniform direction on the unit sphere: i.i.d. standard normal coordinates,
/// normalized.
inline RandomLine sample_unit_vector(std::size_t d, RngStream& rng) {
  if (d == 0) throw std::invalid_argument("invalid dimension: d must be >= 1");
  RandomLine line{std::vector<double>(d)};
  double norm2 = 0.0;
  do {
    norm2 = 0.0;
    for (double& c : line.direction) {
      c = rng.normal();
      norm2 += c * c;
    }
  } while (norm2 == 0.0);
  const double norm = std::sqrt(norm2);
  for (double& c : line.direction) c /= norm;
  return line;
}

inline double project(std::span<const double> p, const RandomLine& line) {
  if (p.size() != line.direction.size()) {
    throw std::invalid_argument("projection dimension mismatch: point has d=" + std::to_string(p.size()) +
                                ", line has d=" + std::to_string(line.direction.size()));
  }
  return dot(p, line.direction);
}

inline double project(const PointView& p, const RandomLine& line) { return project(p.coords, line); }

/// Moves every point by an independent, uniformly directed vector of length
/// `l_per`. Ids are preserved (row i stays row i). With l_per = 0 the input
/// coordinates are copied unchanged. In d = 1 the direction is a fair
/// choice of +1 / -1.
inline Dataset perturb(const Dataset& ds, double l_per, RngStream& rng) {
  if (!(l_per >= 0.0) || !std::isfinite(l_per)) {
    throw std::invalid_argument("perturbation length must be a finite non-negative number");
  }
  if (l_per == 0.0) return ds;
  const std::size_t d = ds.dim();
  std::vector<double> out = ds.raw();
  std::vector<double> dir(d);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    double* row = out.data() + i * d;
    if (d == 1) {
      row[0] += (rng() >> 63) ? l_per : -l_per;
      continue;
    }
    double norm2 = 0.0;
    do {
      norm2 = 0.0;
      for (double& c : dir) {
        c = rng.normal();
        norm2 += c * c;
      }
    } while (norm2 == 0.0);
    const double scale = l_per / std::sqrt(norm2);
    for (std::size_t k = 0; k < d; ++k) row[k] += dir[k] * scale;
  }
  return Dataset(d, std::move(out));
}

/// Pair key for an unordered id pair, smaller id in the high word.
constexpr std::uint64_t pair_key(PointId a, PointId b) noexcept {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | b;
}
constexpr PointId pair_first(std::uint64_t key) noexcept { return static_cast<PointId>(key >> 32); }
constexpr PointId pair_second(std::uint64_t key) noexcept { return static_cast<PointId>(key & 0xFFFFFFFFULL); }

}  // namespace rphc
