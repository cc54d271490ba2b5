// Command-line driver: cluster a CSV (or generated blobs), export merges,
// labels or a summary, and run benchmark suites.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "rphc/rphc.hpp"

namespace {

struct Output {
  std::ofstream file;
  std::ostream* stream = &std::cout;

  explicit Output(const std::string& path) {
    if (path.empty() || path == "-") return;
    file.open(path, std::ios::binary);
    if (!file) throw std::runtime_error("cannot write '" + path + "'");
    stream = &file;
  }
};

int run_bench(const std::string& suite_path, const std::string& output_path) {
  const rphc::BenchSuite suite = rphc::parse_suite(rphc::detail::read_file(suite_path));
  const rphc::BenchReport report = rphc::bench(suite);
  Output out(output_path);
  rphc::write_bench_csv(*out.stream, report);
  rphc::write_bench_summary(std::cerr, report);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random-projection hierarchical clustering"};

  std::string input;
  std::string linkage = "slc";
  std::string mode = "parameter-free";
  std::optional<std::size_t> min_pts;
  double rounds_factor = rphc::PartitionConfig::kDefaultRoundsFactor;
  double c_f = rphc::kDefaultFrequency;
  std::uint64_t seed = 0;
  std::string output = "-";
  std::string format = "merges";
  bool compare_oracle = false;
  std::string bench_suite;
  std::string newick_path;
  unsigned threads = 0;

  std::size_t gen_clusters = 0;
  std::size_t gen_points = 100;
  std::size_t gen_dim = 8;
  double gen_spread = 1.0;
  double gen_separation = 20.0;
  std::string write_data;
  std::string write_truth;

  app.add_option("--input", input, "CSV file, one point per row (optional header)");
  app.add_option("--linkage", linkage, "slc or alc")->check(CLI::IsMember({"slc", "alc"}));
  app.add_option("--mode", mode, "fixed, parameter-free or oracle")
      ->check(CLI::IsMember({"fixed", "parameter-free", "oracle"}));
  app.add_option("--min-pts", min_pts, "leaf size bound (required in fixed mode)");
  app.add_option("--rounds-factor", rounds_factor, "partition rounds = ceil(factor * log2 N)");
  app.add_option("--cf", c_f, "frequency threshold for frequent edges");
  app.add_option("--seed", seed, "master seed");
  app.add_option("--output", output, "output path, - for stdout");
  app.add_option("--format", format, "merges, labels:K or summary");
  app.add_flag("--compare-oracle", compare_oracle, "also run the exact algorithm and report preservation");
  app.add_option("--bench", bench_suite, "run a benchmark suite (TOML) and write a CSV report");
  app.add_option("--newick", newick_path, "also write the dendrogram as Newick");
  app.add_option("--threads", threads, "worker threads (default: RPHC_THREADS or hardware)");
  app.add_option("--generate-clusters", gen_clusters, "cluster Gaussian blobs instead of reading --input");
  app.add_option("--generate-points", gen_points, "points per generated blob");
  app.add_option("--generate-dim", gen_dim, "dimension of generated blobs");
  app.add_option("--generate-spread", gen_spread, "standard deviation of generated blobs");
  app.add_option("--generate-separation", gen_separation, "minimum distance between blob centers");
  app.add_option("--write-data", write_data, "write the generated points as CSV");
  app.add_option("--write-truth", write_truth, "write the generated ground-truth labels");

  CLI11_PARSE(app, argc, argv);

  try {
    if (threads != 0) rphc::set_worker_count(threads);
    if (!bench_suite.empty()) return run_bench(bench_suite, output);

    rphc::Dataset ds;
    if (gen_clusters != 0) {
      const rphc::SyntheticData gen =
          rphc::generate_synthetic(gen_clusters, gen_points, gen_dim, gen_spread, gen_separation, seed);
      ds = gen.data;
      if (!write_data.empty()) {
        Output out(write_data);
        rphc::write_csv(*out.stream, ds);
      }
      if (!write_truth.empty()) {
        Output out(write_truth);
        rphc::write_labels(*out.stream, gen.labels);
      }
    } else if (!input.empty()) {
      ds = rphc::ingest_csv(input);
    } else {
      std::cerr << "error: --input, --generate-clusters or --bench is required\n";
      return 2;
    }

    rphc::AlgorithmConfig cfg;
    cfg.linkage = linkage == "slc" ? rphc::Linkage::slc : rphc::Linkage::alc;
    cfg.mode = mode == "fixed" ? rphc::Mode::fixed
               : mode == "oracle" ? rphc::Mode::oracle
                                  : rphc::Mode::parameter_free;
    cfg.min_pts = min_pts;
    cfg.rounds_factor = rounds_factor;
    cfg.c_f = c_f;
    cfg.seed = seed;

    std::optional<std::size_t> cut_k;
    if (format.rfind("labels:", 0) == 0) {
      cut_k = std::stoul(format.substr(7));
    } else if (format != "merges" && format != "summary") {
      std::cerr << "error: --format must be merges, labels:K or summary\n";
      return 2;
    }

    const rphc::RunOutcome run = rphc::run_algorithm(ds, cfg);
    const bool complete = run.complete();

    std::optional<double> oracle_score;
    if (compare_oracle && complete) {
      rphc::AlgorithmConfig ocfg = cfg;
      ocfg.mode = rphc::Mode::oracle;
      ocfg.min_pts.reset();
      const rphc::RunOutcome oracle = rphc::run_algorithm(ds, ocfg);
      oracle_score = rphc::preservation(run.result.merges, oracle.result.merges, ds.size()).average;
    }

    Output out(output);
    if (format == "merges") {
      rphc::write_merges(*out.stream, run.result.merges);
    } else if (format == "summary") {
      rphc::write_summary(*out.stream, ds, cfg, run, oracle_score);
    } else if (complete) {
      rphc::write_labels(*out.stream, rphc::cut(run.result.merges, *cut_k, ds.size()).labels);
    }
    if (oracle_score && format != "summary") std::cerr << "preservation=" << *oracle_score << '\n';
    if (complete && !newick_path.empty()) {
      Output tree(newick_path);
      *tree.stream << rphc::to_newick(run.result.merges) << '\n';
    }

    if (!complete) {
      const std::size_t missing = ds.size() - 1 - run.result.merges.events.size();
      std::cerr << "error: incomplete dendrogram (" << missing << " merges missing): min_pts=" << *cfg.min_pts
                << " is too small for this input; raise --min-pts or use --mode parameter-free\n";
      return 1;
    }
    return 0;
  } catch (const rphc::ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
