// Copyright 2026 The spa2nn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "spa2nn/cli.hpp"
#include "spa2nn/errors.hpp"

namespace {

using namespace spa2nn;

// Registers a flag that also reads SPA2NN_<ENV>. A flag given on the command
// line wins over the environment.
template <typename T>
CLI::Option* flag(CLI::App& app, const std::string& name, T& value, const std::string& help, const std::string& env) {
  return app.add_option(name, value, help)->envname("SPA2NN_" + env)->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Secret-shared approximate nearest neighbor experiments"};
  app.require_subcommand(1);

  cli::ExperimentConfig cfg;
  std::string scheme = "real", metric = "squared-euclidean", selection = "closest-first", format = "csv";
  std::string out_dir = "out";
  auto* run = app.add_subcommand("run", "Build an index over a dataset, answer queries, write a report");
  flag(*run, "--scheme", scheme, "basic | mirror | real | plaintext-hnsw | plaintext-bitgraph | brute", "SCHEME");
  flag(*run, "--n", cfg.n, "number of parties", "N");
  flag(*run, "--t", cfg.t, "reconstruction threshold", "T");
  flag(*run, "--rho", cfg.rho, "decimal digits kept by the fixed-point encoding", "RHO");
  flag(*run, "--p", cfg.p, "field prime", "P");
  flag(*run, "--metric", metric, "squared-euclidean | inner-product | cosine", "METRIC");
  flag(*run, "--selection", selection, "closest-first | heuristic", "SELECTION");
  flag(*run, "--M", cfg.M, "links per inserted vertex and layer", "M");
  flag(*run, "--mL", cfg.mL, "level multiplier (negative: 1/ln M)", "ML");
  flag(*run, "--ef", cfg.ef_construction, "candidate list size while building", "EF");
  flag(*run, "--ef-search", cfg.ef_search, "candidate list size while searching", "EF_SEARCH");
  flag(*run, "--theta", cfg.theta, "neighbors returned per query", "THETA");
  flag(*run, "--dataset", cfg.dataset, "input file (empty: synthetic uniform data)", "DATASET");
  flag(*run, "--format", format, "csv | flat-binary-f32", "FORMAT");
  flag(*run, "--dim", cfg.dim, "dimension (synthetic data, or flat binary input)", "DIM");
  flag(*run, "--count", cfg.count, "synthetic dataset size", "COUNT");
  flag(*run, "--queries", cfg.queries, "number of synthetic queries", "QUERIES");
  flag(*run, "--seed", cfg.seed, "master seed", "SEED");
  flag(*run, "--leakage-samples", cfg.leakage_samples, "elements sampled for the leakage report", "LEAKAGE_SAMPLES");
  flag(*run, "--out", out_dir, "output directory", "OUT");
  run->add_flag("--log", cfg.log_messages, "write the full message log")->envname("SPA2NN_LOG");

  std::string golden;
  auto* demo = app.add_subcommand("demo-fig3", "Print the seven-vertex worked example and check it");
  demo->add_option("--golden", golden, "file holding the expected branch tables");

  std::vector<std::size_t> sizes{100, 200, 500, 1000, 2000};
  std::size_t sweep_M = 8, sweep_dim = 16;
  int sweep_n = 3;
  std::uint64_t sweep_seed = 1;
  std::string sweep_out;
  auto* sw = app.add_subcommand("sweep", "Compare naive and bitgraph index sharing costs across sizes");
  sw->add_option("--sizes", sizes, "vertex counts")->delimiter(',');
  flag(*sw, "--M", sweep_M, "links per inserted vertex", "M");
  flag(*sw, "--dim", sweep_dim, "dimension", "DIM");
  flag(*sw, "--n", sweep_n, "number of parties", "N");
  flag(*sw, "--seed", sweep_seed, "master seed", "SEED");
  sw->add_option("--out", sweep_out, "CSV file (default: stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      cfg.scheme = cli::parse_scheme(scheme);
      cfg.metric = hnsw::parse_metric(metric);
      cfg.selection = cli::parse_selection(selection);
      cfg.format = cli::parse_format(format);
      const auto result = cli::run(cfg);
      cli::write_outputs(result, out_dir);
      const auto& m = result.report.metrics;
      std::cout << result.report.scheme << ": recall@" << m.theta << " " << m.recall << ", exact match "
                << m.exact_match_rate << ", oracle " << (m.oracle_checks_passed ? "ok" : "MISMATCH") << ", "
                << result.wall_seconds << " s\n";
      return m.oracle_checks_passed ? 0 : 3;
    }
    if (*demo) {
      std::string text;
      if (!golden.empty()) {
        std::ifstream in(golden);
        if (!in) throw FormatError("cannot open " + golden);
        std::stringstream ss;
        ss << in.rdbuf();
        text = ss.str();
      }
      return cli::demo_fig3(std::cout, text) ? 0 : 3;
    }
    if (*sw) {
      const auto rows = cli::sweep(sizes, sweep_M, sweep_dim, sweep_n, sweep_seed);
      if (sweep_out.empty()) {
        cli::write_sweep_csv(std::cout, rows);
      } else {
        std::ofstream out(sweep_out);
        cli::write_sweep_csv(out, rows);
      }
      std::vector<double> degree, ratio;
      bool counters = true;
      for (const auto& r : rows) {
        degree.push_back(r.average_degree);
        ratio.push_back(r.ratio);
        counters = counters && r.counters_match;
      }
      if (rows.size() >= 2) std::cerr << "spearman(average degree, ratio) = " << cli::spearman(degree, ratio) << '\n';
      return counters ? 0 : 3;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
