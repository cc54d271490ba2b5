#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "rphc/alc.hpp"
#include "rphc/evaluation.hpp"
#include "rphc/io.hpp"
#include "rphc/oracle.hpp"
#include "rphc/slc.hpp"

namespace rphc {

enum class Linkage { slc, alc };
enum class Mode { fixed, parameter_free, oracle };

inline std::string to_string(Linkage l) { return l == Linkage::slc ? "slc" : "alc"; }
inline std::string to_string(Mode m) {
  switch (m) {
    case Mode::fixed: return "fixed";
    case Mode::parameter_free: return "parameter-free";
    case Mode::oracle: return "oracle";
  }
  return "?";
}

/// Algorithm settings shared by the CLI and the bench harness.
struct AlgorithmConfig {
  Linkage linkage = Linkage::slc;
  Mode mode = Mode::parameter_free;
  std::optional<std::size_t> min_pts;  // required in fixed mode
  double rounds_factor = PartitionConfig::kDefaultRoundsFactor;
  double c_f = kDefaultFrequency;
  std::uint64_t seed = 0;

  void validate() const {
    if (mode == Mode::fixed && !min_pts) throw std::invalid_argument("fixed mode requires --min-pts");
    if (mode == Mode::fixed && linkage == Linkage::alc) {
      throw std::invalid_argument("fixed mode is only available for single linkage; use parameter-free for alc");
    }
    if (min_pts && *min_pts < 2) throw std::invalid_argument("min_pts must be at least 2");
    if (!(rounds_factor > 0.0)) throw std::invalid_argument("rounds factor must be positive");
    if (!(c_f > 0.0 && c_f < 1.0)) throw std::invalid_argument("c_f must lie in (0, 1)");
  }
};

/// One clustering run with its wall time (computation only).
struct RunOutcome {
  ClusteringResult result;
  double wall_seconds = 0.0;
  [[nodiscard]] bool complete() const { return result.merges.complete(); }
};

inline RunOutcome run_algorithm(const Dataset& ds, const AlgorithmConfig& cfg) {
  cfg.validate();
  RunOutcome out;
  const auto start = std::chrono::steady_clock::now();
  switch (cfg.mode) {
    case Mode::oracle: {
      out.result.merges = cfg.linkage == Linkage::slc ? brute_slc(ds, &out.result.work) : brute_alc(ds, &out.result.work);
      out.result.final_min_pts = ds.size();
      break;
    }
    case Mode::fixed: {
      PartitionConfig pc = PartitionConfig::defaults_for(ds.size(), cfg.seed, cfg.rounds_factor);
      pc.min_pts = *cfg.min_pts;
      out.result = rp_slc(ds, pc);
      break;
    }
    case Mode::parameter_free: {
      PartitionConfig pc = parameter_free_config(ds.size(), cfg.seed, cfg.rounds_factor);
      if (cfg.min_pts) pc.min_pts = std::min(*cfg.min_pts, std::max<std::size_t>(ds.size(), 2));
      out.result = cfg.linkage == Linkage::slc ? rp_slc_parameter_free(ds, pc, cfg.c_f)
                                               : rp_alc_parameter_free(ds, pc, cfg.c_f);
      break;
    }
  }
  out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

/// Line-oriented key=value description of a run.
inline void write_summary(std::ostream& out, const Dataset& ds, const AlgorithmConfig& cfg, const RunOutcome& run,
                          const std::optional<double>& oracle_preservation) {
  out << "n=" << ds.size() << '\n'
      << "d=" << ds.dim() << '\n'
      << "linkage=" << to_string(cfg.linkage) << '\n'
      << "mode=" << to_string(cfg.mode) << '\n'
      << "seed=" << cfg.seed << '\n'
      << "complete=" << (run.complete() ? "true" : "false") << '\n'
      << "merges=" << run.result.merges.events.size() << '\n'
      << "distance_computations=" << run.result.work.distance_computations << '\n'
      << "wall_seconds=" << detail::format_double(run.wall_seconds) << '\n';
  if (cfg.mode != Mode::oracle) out << "min_pts=" << run.result.final_min_pts << '\n';
  if (cfg.mode == Mode::parameter_free) {
    out << "doublings=" << run.result.doublings << '\n' << "iterations=" << run.result.iterations << '\n';
  }
  if (oracle_preservation) out << "preservation=" << detail::format_double(*oracle_preservation) << '\n';
}

// ---------------------------------------------------------------------------
// Bench suites

/// Value of a suite key: scalars or single-line arrays of scalars.
using TomlScalar = std::variant<std::int64_t, double, bool, std::string>;
using TomlValue = std::variant<TomlScalar, std::vector<TomlScalar>>;

namespace detail {

inline TomlScalar parse_toml_scalar(std::string_view s, std::size_t row) {
  s = trim(s);
  if (s.empty()) throw ParseError("missing value", row, 0);
  if (s.front() == '"') {
    if (s.size() < 2 || s.back() != '"') throw ParseError("unterminated string", row, 0);
    return std::string(s.substr(1, s.size() - 2));
  }
  if (s == "true") return true;
  if (s == "false") return false;
  std::string digits;
  for (char ch : s) {
    if (ch != '_') digits += ch;
  }
  std::int64_t i = 0;
  if (parse_int(std::string_view(digits), i)) return i;
  double v = 0.0;
  if (parse_double(digits, v)) return v;
  throw ParseError("unrecognised value '" + std::string(s) + "'", row, 0);
}

inline std::string_view strip_comment(std::string_view line) {
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') in_string = !in_string;
    if (line[i] == '#' && !in_string) return line.substr(0, i);
  }
  return line;
}

}  // namespace detail

/// Flat `key = value` documents: integers, floats, booleans, basic strings
/// and one-line arrays of those; `#` comments. Tables are not supported.
inline std::map<std::string, TomlValue> parse_toml(std::string_view text) {
  std::map<std::string, TomlValue> out;
  std::size_t row = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = detail::trim(detail::strip_comment(text.substr(start, end - start)));
    start = end + 1;
    ++row;
    if (line.empty()) continue;
    if (line.front() == '[') throw ParseError("tables are not supported in suite files", row, 1);
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) throw ParseError("expected key = value", row, 0);
    const std::string key(detail::trim(line.substr(0, eq)));
    const std::string_view value = detail::trim(line.substr(eq + 1));
    if (key.empty()) throw ParseError("empty key", row, 1);
    if (!value.empty() && value.front() == '[') {
      if (value.back() != ']') throw ParseError("arrays must fit on one line", row, 0);
      std::vector<TomlScalar> items;
      const std::string_view inner = detail::trim(value.substr(1, value.size() - 2));
      if (!inner.empty()) {
        for (const auto cell : detail::split_commas(inner)) {
          if (!cell.empty()) items.push_back(detail::parse_toml_scalar(cell, row));
        }
      }
      out[key] = std::move(items);
    } else {
      out[key] = detail::parse_toml_scalar(value, row);
    }
  }
  return out;
}

/// Grid of synthetic inputs and algorithms to benchmark.
struct BenchSuite {
  std::vector<std::size_t> n;             // total points per input
  std::vector<std::size_t> d{8};
  std::size_t clusters = 4;
  double spread = 1.0;
  double separation = 20.0;
  std::vector<Linkage> linkages{Linkage::slc, Linkage::alc};
  Mode mode = Mode::parameter_free;
  std::optional<std::size_t> min_pts;
  double rounds_factor = PartitionConfig::kDefaultRoundsFactor;
  double c_f = kDefaultFrequency;
  std::vector<std::uint64_t> seeds{1};
  bool oracle = true;                     // oracle rows for N <= kOracleLimit
  static constexpr std::size_t kOracleLimit = 5000;
};

namespace detail {

inline double toml_number(const TomlScalar& s, const std::string& key) {
  if (const auto* i = std::get_if<std::int64_t>(&s)) return static_cast<double>(*i);
  if (const auto* f = std::get_if<double>(&s)) return *f;
  throw std::invalid_argument("suite key '" + key + "' must be numeric");
}

inline std::size_t toml_count(const TomlScalar& s, const std::string& key) {
  const auto* i = std::get_if<std::int64_t>(&s);
  if (i == nullptr || *i < 0) throw std::invalid_argument("suite key '" + key + "' must be a non-negative integer");
  return static_cast<std::size_t>(*i);
}

inline std::vector<TomlScalar> toml_list(const TomlValue& v) {
  if (const auto* list = std::get_if<std::vector<TomlScalar>>(&v)) return *list;
  return {std::get<TomlScalar>(v)};
}

inline const TomlScalar& toml_single(const TomlValue& v, const std::string& key) {
  if (const auto* s = std::get_if<TomlScalar>(&v)) return *s;
  throw std::invalid_argument("suite key '" + key + "' must be a single value");
}

inline std::string toml_string(const TomlScalar& s, const std::string& key) {
  if (const auto* str = std::get_if<std::string>(&s)) return *str;
  throw std::invalid_argument("suite key '" + key + "' must be a string");
}

}  // namespace detail

inline BenchSuite parse_suite(std::string_view text) {
  BenchSuite suite;
  for (const auto& [key, value] : parse_toml(text)) {
    if (key == "n") {
      suite.n.clear();
      for (const auto& s : detail::toml_list(value)) suite.n.push_back(detail::toml_count(s, key));
    } else if (key == "d") {
      suite.d.clear();
      for (const auto& s : detail::toml_list(value)) suite.d.push_back(detail::toml_count(s, key));
    } else if (key == "seeds") {
      suite.seeds.clear();
      for (const auto& s : detail::toml_list(value)) suite.seeds.push_back(detail::toml_count(s, key));
    } else if (key == "linkages") {
      suite.linkages.clear();
      for (const auto& s : detail::toml_list(value)) {
        const std::string name = detail::toml_string(s, key);
        if (name == "slc") suite.linkages.push_back(Linkage::slc);
        else if (name == "alc") suite.linkages.push_back(Linkage::alc);
        else throw std::invalid_argument("unknown linkage '" + name + "'");
      }
    } else if (key == "mode") {
      const std::string name = detail::toml_string(detail::toml_single(value, key), key);
      if (name == "parameter-free") suite.mode = Mode::parameter_free;
      else if (name == "fixed") suite.mode = Mode::fixed;
      else throw std::invalid_argument("suite mode must be 'parameter-free' or 'fixed'");
    } else if (key == "clusters") {
      suite.clusters = detail::toml_count(detail::toml_single(value, key), key);
    } else if (key == "spread") {
      suite.spread = detail::toml_number(detail::toml_single(value, key), key);
    } else if (key == "separation") {
      suite.separation = detail::toml_number(detail::toml_single(value, key), key);
    } else if (key == "min_pts") {
      suite.min_pts = detail::toml_count(detail::toml_single(value, key), key);
    } else if (key == "rounds_factor") {
      suite.rounds_factor = detail::toml_number(detail::toml_single(value, key), key);
    } else if (key == "cf") {
      suite.c_f = detail::toml_number(detail::toml_single(value, key), key);
    } else if (key == "oracle") {
      const auto* b = std::get_if<bool>(&detail::toml_single(value, key));
      if (b == nullptr) throw std::invalid_argument("suite key 'oracle' must be a boolean");
      suite.oracle = *b;
    } else {
      throw std::invalid_argument("unknown suite key '" + key + "'");
    }
  }
  if (suite.clusters == 0) throw std::invalid_argument("suite needs at least one cluster");
  return suite;
}

struct BenchRow {
  std::size_t n = 0;
  std::size_t d = 0;
  std::uint64_t seed = 0;
  std::string algorithm;  // e.g. rp-slc, oracle-alc
  double wall_seconds = 0.0;
  std::uint64_t distance_computations = 0;
  bool complete = false;
  std::optional<double> preservation;
  std::optional<std::size_t> final_min_pts;
  std::optional<std::size_t> doublings;
};

struct BenchReport {
  std::vector<BenchRow> rows;
};

/// Runs every (n, d, seed, linkage) cell on a Gaussian-blob input. Cells run
/// one after another; each algorithm parallelises internally, so the report
/// depends only on the suite.
inline BenchReport bench(const BenchSuite& suite) {
  BenchReport report;
  for (const std::size_t n : suite.n) {
    for (const std::size_t d : suite.d) {
      for (const std::uint64_t seed : suite.seeds) {
        const std::size_t per_cluster = std::max<std::size_t>(1, (n + suite.clusters - 1) / suite.clusters);
        const SyntheticData data = generate_synthetic(
            suite.clusters, per_cluster, d, suite.spread, suite.separation,
            derive_seed(seed, {static_cast<std::uint64_t>(StreamTag::bench), n, d}));
        const Dataset ds = Dataset(d, std::vector<double>(data.data.raw().begin(),
                                                          data.data.raw().begin() + static_cast<std::ptrdiff_t>(n * d)));
        for (const Linkage linkage : suite.linkages) {
          AlgorithmConfig cfg;
          cfg.linkage = linkage;
          cfg.mode = suite.mode;
          cfg.min_pts = suite.min_pts;
          cfg.rounds_factor = suite.rounds_factor;
          cfg.c_f = suite.c_f;
          cfg.seed = seed;
          const RunOutcome rp = run_algorithm(ds, cfg);
          BenchRow row{n, d, seed, "rp-" + to_string(linkage), rp.wall_seconds,
                       rp.result.work.distance_computations, rp.complete(), std::nullopt, rp.result.final_min_pts,
                       std::nullopt};
          if (suite.mode == Mode::parameter_free) row.doublings = rp.result.doublings;
          if (suite.oracle && n <= BenchSuite::kOracleLimit) {
            AlgorithmConfig ocfg = cfg;
            ocfg.mode = Mode::oracle;
            ocfg.min_pts.reset();
            const RunOutcome oracle = run_algorithm(ds, ocfg);
            if (rp.complete()) row.preservation = preservation(rp.result.merges, oracle.result.merges, n).average;
            report.rows.push_back(row);
            report.rows.push_back(BenchRow{n, d, seed, "oracle-" + to_string(linkage), oracle.wall_seconds,
                                           oracle.result.work.distance_computations, oracle.complete(), std::nullopt,
                                           std::nullopt, std::nullopt});
          } else {
            report.rows.push_back(row);
          }
        }
      }
    }
  }
  return report;
}

inline void write_bench_csv(std::ostream& out, const BenchReport& report) {
  out << "n,d,seed,algorithm,wall_seconds,distance_computations,complete,preservation,final_min_pts,doublings\n";
  for (const auto& r : report.rows) {
    out << r.n << ',' << r.d << ',' << r.seed << ',' << r.algorithm << ',' << detail::format_double(r.wall_seconds)
        << ',' << r.distance_computations << ',' << (r.complete ? "true" : "false") << ',';
    if (r.preservation) out << detail::format_double(*r.preservation);
    out << ',';
    if (r.final_min_pts) out << *r.final_min_pts;
    out << ',';
    if (r.doublings) out << *r.doublings;
    out << '\n';
  }
}

/// Short human-readable digest: per algorithm, the number of rows, the
/// lowest preservation and the total distance computations.
inline void write_bench_summary(std::ostream& out, const BenchReport& report) {
  struct Agg {
    std::size_t rows = 0;
    std::uint64_t distances = 0;
    std::optional<double> worst;
  };
  std::map<std::string, Agg> by_algorithm;
  for (const auto& r : report.rows) {
    auto& a = by_algorithm[r.algorithm];
    ++a.rows;
    a.distances += r.distance_computations;
    if (r.preservation) a.worst = a.worst ? std::min(*a.worst, *r.preservation) : *r.preservation;
  }
  out << "# " << report.rows.size() << " rows\n";
  for (const auto& [name, a] : by_algorithm) {
    out << "# " << name << ": rows=" << a.rows << " distance_computations=" << a.distances;
    if (a.worst) out << " min_preservation=" << detail::format_double(*a.worst);
    out << '\n';
  }
}

}  // namespace rphc
