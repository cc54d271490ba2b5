#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "rphc/rphc.hpp"

namespace rphc::testing {

// Upper 1% point of the chi-square distribution with 15 degrees of freedom
// (16 bins).
inline constexpr double kChiSquare15At1Percent = 30.578;

inline double chi_square(const std::vector<std::size_t>& observed) {
  std::size_t total = 0;
  for (auto o : observed) total += o;
  const double expected = static_cast<double>(total) / static_cast<double>(observed.size());
  double stat = 0.0;
  for (auto o : observed) stat += (static_cast<double>(o) - expected) * (static_cast<double>(o) - expected) / expected;
  return stat;
}

inline Dataset uniform_cube(std::size_t n, std::size_t d, std::uint64_t seed) {
  RngStream rng(seed, {0xC0BE});
  std::vector<double> c(n * d);
  for (double& x : c) x = rng.uniform();
  return Dataset(d, std::move(c));
}

inline Dataset gaussian_cloud(std::size_t n, std::size_t d, std::uint64_t seed) {
  RngStream rng(seed, {0x6A55});
  std::vector<double> c(n * d);
  for (double& x : c) x = rng.normal();
  return Dataset(d, std::move(c));
}

inline Dataset line_points(const std::vector<double>& xs) {
  std::vector<std::vector<double>> rows;
  for (double x : xs) rows.push_back({x});
  return Dataset::from_rows(rows);
}

// Prim's algorithm on the dense graph; returns the MST weight.
inline double prim_mst_weight(const Dataset& ds) {
  const std::size_t n = ds.size();
  std::vector<double> best(n, INFINITY);
  std::vector<char> in(n, 0);
  best[0] = 0.0;
  double total = 0.0;
  for (std::size_t it = 0; it < n; ++it) {
    std::size_t u = n;
    for (std::size_t v = 0; v < n; ++v) {
      if (!in[v] && (u == n || best[v] < best[u])) u = v;
    }
    in[u] = 1;
    total += best[u];
    for (std::size_t v = 0; v < n; ++v) {
      if (!in[v]) best[v] = std::min(best[v], distance(ds.coords(u), ds.coords(v)));
    }
  }
  return total;
}

inline bool relative_close(double a, double b, double tol) {
  return a == b || std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

}  // namespace rphc::testing
