#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

namespace rphc {

// Purpose tags used as the last element of a stream path.
enum class StreamTag : std::uint64_t {
  lines = 1,
  split = 2,
  perturb = 3,
  iteration = 4,
  monte_carlo = 5,
  synthetic = 6,
  bench = 7,
};

// SplitMix64 finalizer (Stafford variant 13), the mixing step of
// Steele, Lea & Flood's splittable generator.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

/// Folds a stream path into a 64-bit key. Distinct paths give unrelated keys;
/// the path length is mixed in so {a} and {a, 0} differ.
constexpr std::uint64_t derive_key(std::uint64_t master_seed,
                                   std::span<const std::uint64_t> path) noexcept {
  std::uint64_t key = mix64(master_seed + kGolden);
  for (std::uint64_t p : path) {
    key = mix64(key ^ mix64(p + kGolden));
  }
  return mix64(key + path.size() * kGolden);
}

/// Counter-based random stream keyed by (master_seed, stream_path).
///
/// Output i is mix64(key + (i + 1) * golden), i.e. SplitMix64 started at the
/// derived key. The stream is a pure function of its key and position, so two
/// streams built from the same (seed, path) produce the same sequence
/// regardless of which thread owns them.
///
/// Satisfies UniformRandomBitGenerator. The distribution helpers below are
/// written out by hand so results do not depend on the standard library's
/// implementation-defined distributions.
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t master_seed, std::initializer_list<std::uint64_t> path)
      : master_seed_(master_seed), path_(path), key_(derive_key(master_seed, path_)) {}

  RngStream(std::uint64_t master_seed, std::vector<std::uint64_t> path)
      : master_seed_(master_seed), path_(std::move(path)), key_(derive_key(master_seed, path_)) {}

  explicit RngStream(std::uint64_t master_seed) : RngStream(master_seed, std::vector<std::uint64_t>{}) {}

  /// Substream whose path extends this one by `component`.
  [[nodiscard]] RngStream child(std::uint64_t component) const {
    std::vector<std::uint64_t> p = path_;
    p.push_back(component);
    return RngStream(master_seed_, std::move(p));
  }
  [[nodiscard]] RngStream child(StreamTag tag) const { return child(static_cast<std::uint64_t>(tag)); }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    ++counter_;
    return mix64(key_ + counter_ * kGolden);
  }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Uniform in (0, 1].
  double uniform_open_zero() noexcept { return (static_cast<double>((*this)() >> 11) + 1.0) * 0x1.0p-53; }

  /// Unbiased integer in [0, n), Lemire's multiply-and-reject method.
  std::uint64_t below(std::uint64_t n) noexcept {
    if (n <= 1) return 0;
    __extension__ using u128 = unsigned __int128;
    u128 m = static_cast<u128>((*this)()) * n;
    auto low = static_cast<std::uint64_t>(m);
    if (low < n) {
      const std::uint64_t threshold = (0 - n) % n;
      while (low < threshold) {
        m = static_cast<u128>((*this)()) * n;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  /// Standard normal via Box-Muller; the second variate is cached.
  double normal() noexcept {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform_open_zero()));
    const double theta = 2.0 * std::numbers::pi * uniform();
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

  [[nodiscard]] std::uint64_t master_seed() const noexcept { return master_seed_; }
  [[nodiscard]] const std::vector<std::uint64_t>& path() const noexcept { return path_; }
  [[nodiscard]] std::uint64_t key() const noexcept { return key_; }

 private:
  std::uint64_t master_seed_;
  std::vector<std::uint64_t> path_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// A fresh 64-bit seed derived from (master_seed, path); used to hand a
/// nested algorithm its own master seed.
inline std::uint64_t derive_seed(std::uint64_t master_seed, std::initializer_list<std::uint64_t> path) {
  RngStream s(master_seed, path);
  return s();
}

}  // namespace rphc
