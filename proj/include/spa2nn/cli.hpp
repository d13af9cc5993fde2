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

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "spa2nn/cost_ledger.hpp"
#include "spa2nn/field.hpp"
#include "spa2nn/hnsw.hpp"
#include "spa2nn/leakage.hpp"
#include "spa2nn/random.hpp"

namespace spa2nn::cli {

enum class DataFormat { kCsv, kFlatF32 };
DataFormat parse_format(std::string_view name);
std::string_view format_name(DataFormat f);

/// Reads a dataset. CSV: one vector per line, comma separated, blank lines
/// and `#` comments skipped. Flat binary: little-endian float32, row-major,
/// `dim` values per vector (required for this format). Throws FormatError
/// naming the line or byte offset of the first problem.
hnsw::VectorSet ingest(const std::filesystem::path& path, DataFormat format, std::size_t dim = 0);
void write_dataset(const std::filesystem::path& path, const hnsw::VectorSet& data, DataFormat format);

/// Uniform points in [-1, 1]^dim rounded to `rho` decimals.
hnsw::VectorSet synthetic_uniform(std::size_t count, std::size_t dim, int rho, std::uint64_t seed,
                                  std::uint64_t stream = domain::kData);

enum class SchemeKind { kBasic, kMirror, kReal, kPlainHnsw, kPlainBitgraph, kBrute };
SchemeKind parse_scheme(std::string_view name);
std::string_view scheme_name(SchemeKind s);
bool uses_parties(SchemeKind s);

hnsw::NeighborSelection parse_selection(std::string_view name);
std::string_view selection_name(hnsw::NeighborSelection s);

struct ExperimentConfig {
  SchemeKind scheme = SchemeKind::kReal;
  int n = 3;
  int t = 2;
  int rho = 3;
  std::uint64_t p = ss::kMersenne61;
  int k = 40;
  hnsw::Metric metric = hnsw::Metric::kSquaredEuclidean;
  hnsw::NeighborSelection selection = hnsw::NeighborSelection::kClosestFirst;
  std::size_t M = 8;
  double mL = -1;  // negative: 1 / ln(M)
  std::size_t ef_construction = 40;
  std::size_t ef_search = 40;
  std::size_t theta = 10;
  std::string dataset;  // empty: synthetic data
  DataFormat format = DataFormat::kCsv;
  std::size_t dim = 16;
  std::size_t count = 1000;
  std::size_t queries = 100;
  std::uint64_t seed = 1;
  std::size_t leakage_samples = 10;
  bool log_messages = false;

  double effective_mL() const;
  /// Throws ParameterError.
  void validate() const;
};

struct ReportMetrics {
  std::uint64_t queries = 0;
  std::uint64_t theta = 0;
  double recall = 0;            // mean recall@theta against brute force
  double exact_match_rate = 0;  // share of queries whose ids equal the plaintext twin's
  std::optional<double> walk_coverage;
  std::optional<std::uint64_t> walk_deviation;  // summed over queries
  bool oracle_checks_passed = false;
};

struct ReportIndex {
  std::uint64_t vertices = 0;
  std::uint64_t edges = 0;
  std::uint64_t entries = 0;
  std::uint64_t layers = 0;
  std::uint64_t messages = 0;
  std::string transcript_digest;
};

/// Versioned run report. Wall-clock time is written to a separate file so
/// that reports of identical runs are byte-identical.
struct Report {
  static constexpr int kVersion = 1;
  int version = kVersion;
  std::string scheme;
  ExperimentConfig config;
  ReportMetrics metrics;
  leakage::SchemeCounters counters;
  ReportIndex index;
  std::optional<leakage::LeakageReport> leakage;
};

/// Every config field, mL resolved as given. The reader is as strict as the
/// report reader.
std::string config_to_json(const ExperimentConfig& c);
ExperimentConfig config_from_json(const std::string& text);

std::string report_to_json(const Report& r);
/// Throws FormatError on unknown fields, missing fields or a version mismatch.
Report report_from_json(const std::string& text);

struct QueryRow {
  std::uint64_t query = 0;
  double recall = 0;
  bool exact_match = false;
};

struct RunResult {
  Report report;
  std::vector<QueryRow> rows;
  std::string message_log;  // filled when config.log_messages
  double wall_seconds = 0;
};

RunResult run(const ExperimentConfig& config);
/// Writes report.json, queries.csv, timing.json and (when present)
/// messages.log into `out`.
void write_outputs(const RunResult& result, const std::filesystem::path& out);

/// Builds the seven-vertex worked example, prints its branch tables and
/// compares them with the bitgraph text `golden` (the built-in tables when
/// empty). Throws FormatError when `golden` does not parse. Returns
/// true on a match with 8 reconstructed edges and 16 sharable units.
bool demo_fig3(std::ostream& out, const std::string& golden = {});
std::string worked_example_tables();

struct SweepRow {
  std::uint64_t vertices = 0;
  std::uint64_t edges = 0;
  double average_degree = 0;
  std::uint64_t naive_units = 0;     // 2|E|
  std::uint64_t bitgraph_units = 0;  // |V| + dup
  std::uint64_t naive_share_ops = 0;
  std::uint64_t bitgraph_share_ops = 0;
  double ratio = 0;
  bool counters_match = false;  // both closed forms hold exactly
};

/// Builds a plaintext HNSW layer-0 graph per size, shares it naively and as
/// a bitgraph, and records both counters.
std::vector<SweepRow> sweep(std::span<const std::size_t> sizes, std::size_t M, std::size_t dim, int n,
                            std::uint64_t seed);
void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows);
/// Spearman rank correlation with average ranks for ties.
double spearman(std::span<const double> x, std::span<const double> y);

}  // namespace spa2nn::cli
