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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "spa2nn/cli.hpp"
#include "spa2nn/errors.hpp"
#include "test_support.hpp"

namespace spa2nn::cli {
namespace {

namespace fs = std::filesystem;

class TempDir {
 public:
  TempDir() : path_(fs::temp_directory_path() / ("spa2nn_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
                                                   ::testing::UnitTest::GetInstance()->current_test_info()->name())) {
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

ExperimentConfig small(SchemeKind scheme) {
  ExperimentConfig c;
  c.scheme = scheme;
  c.count = 120;
  c.dim = 6;
  c.queries = 12;
  c.M = 4;
  return c;
}

TEST(Ingest, CsvSkipsCommentsAndBlankLines) {
  TempDir dir;
  write(dir.path() / "d.csv", "# header\n1,2,3\n\n4, 5 ,6\r\n-7,8e-1,9\n");
  const auto data = ingest(dir.path() / "d.csv", DataFormat::kCsv);
  ASSERT_EQ(data.size(), 3u);
  EXPECT_EQ(data.dim(), 3u);
  EXPECT_DOUBLE_EQ(data[2][1], 0.8);
  EXPECT_DOUBLE_EQ(data[1][1], 5.0);
}

TEST(Ingest, RaggedCsvNamesTheLine) {
  TempDir dir;
  write(dir.path() / "d.csv", "1,2,3\n4,5\n");
  try {
    ingest(dir.path() / "d.csv", DataFormat::kCsv);
    FAIL() << "ragged input accepted";
  } catch (const FormatError& e) {
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos) << e.what();
  }
  write(dir.path() / "bad.csv", "1,x,3\n");
  EXPECT_THROW(ingest(dir.path() / "bad.csv", DataFormat::kCsv), FormatError);
  write(dir.path() / "empty.csv", "# nothing\n");
  EXPECT_THROW(ingest(dir.path() / "empty.csv", DataFormat::kCsv), FormatError);
}

TEST(Ingest, FlatBinaryRoundTrip) {
  TempDir dir;
  const auto data = synthetic_uniform(10, 4, 3, 7);
  write_dataset(dir.path() / "d.f32", data, DataFormat::kFlatF32);
  EXPECT_EQ(fs::file_size(dir.path() / "d.f32"), 10u * 4u * 4u);
  const auto back = ingest(dir.path() / "d.f32", DataFormat::kFlatF32, 4);
  ASSERT_EQ(back.size(), 10u);
  for (VertexId i = 0; i < 10; ++i) {
    for (std::size_t j = 0; j < 4; ++j) EXPECT_FLOAT_EQ(static_cast<float>(back[i][j]), static_cast<float>(data[i][j]));
  }
  EXPECT_THROW(ingest(dir.path() / "d.f32", DataFormat::kFlatF32, 0), ParameterError);
  EXPECT_THROW(ingest(dir.path() / "d.f32", DataFormat::kFlatF32, 3), FormatError);
}

TEST(Ingest, CsvRoundTripIsExact) {
  TempDir dir;
  const auto data = synthetic_uniform(20, 5, 3, 2);
  write_dataset(dir.path() / "d.csv", data, DataFormat::kCsv);
  EXPECT_EQ(ingest(dir.path() / "d.csv", DataFormat::kCsv), data);
}

TEST(Synthetic, ValuesAreQuantized) {
  const auto data = synthetic_uniform(50, 3, 2, 9);
  for (double x : data.flat()) {
    EXPECT_LE(std::abs(x), 1.0);
    EXPECT_DOUBLE_EQ(x, std::nearbyint(x * 100) / 100);
  }
  EXPECT_EQ(data, synthetic_uniform(50, 3, 2, 9));
  EXPECT_NE(data, synthetic_uniform(50, 3, 2, 10));
}

TEST(Names, RoundTrip) {
  for (auto s : {SchemeKind::kBasic, SchemeKind::kMirror, SchemeKind::kReal, SchemeKind::kPlainHnsw,
                 SchemeKind::kPlainBitgraph, SchemeKind::kBrute}) {
    EXPECT_EQ(parse_scheme(scheme_name(s)), s);
  }
  EXPECT_THROW(parse_scheme("fast"), ParameterError);
  EXPECT_THROW(parse_format("parquet"), ParameterError);
  EXPECT_THROW(parse_selection("random"), ParameterError);
}

TEST(Config, RejectsBadParameters) {
  auto c = small(SchemeKind::kReal);
  c.t = 5;
  EXPECT_THROW(c.validate(), ParameterError);
  c = small(SchemeKind::kReal);
  c.theta = 0;
  EXPECT_THROW(c.validate(), ParameterError);
  c = small(SchemeKind::kPlainHnsw);
  c.M = 0;
  EXPECT_THROW(c.validate(), ParameterError);
}

TEST(Run, BruteForceHasFullRecall) {
  const auto r = run(small(SchemeKind::kBrute));
  EXPECT_DOUBLE_EQ(r.report.metrics.recall, 1.0);
  EXPECT_TRUE(r.report.metrics.oracle_checks_passed);
  EXPECT_EQ(r.rows.size(), 12u);
}

TEST(Run, SharedSchemesMatchTheirTwins) {
  for (auto s : {SchemeKind::kBasic, SchemeKind::kMirror, SchemeKind::kReal}) {
    const auto r = run(small(s));
    EXPECT_DOUBLE_EQ(r.report.metrics.exact_match_rate, 1.0) << scheme_name(s);
    EXPECT_TRUE(r.report.metrics.oracle_checks_passed) << scheme_name(s);
    EXPECT_GT(r.report.index.messages, 0u);
    EXPECT_EQ(r.report.index.transcript_digest.size(), 16u);
  }
}

TEST(Run, PlaintextBitgraphReportsWalkCoverageAndLeakage) {
  const auto r = run(small(SchemeKind::kPlainBitgraph));
  ASSERT_TRUE(r.report.metrics.walk_coverage.has_value());
  EXPECT_GE(*r.report.metrics.walk_coverage, 0.9);
  ASSERT_TRUE(r.report.leakage.has_value());
  EXPECT_EQ(r.report.leakage->samples.size(), 10u);
  EXPECT_EQ(r.report.leakage->denominator, 120u);
}

TEST(Run, IdenticalRunsWriteIdenticalReports) {
  TempDir dir;
  auto c = small(SchemeKind::kReal);
  c.log_messages = true;
  write_outputs(run(c), dir.path() / "a");
  write_outputs(run(c), dir.path() / "b");
  for (const char* f : {"report.json", "queries.csv", "messages.log"}) {
    EXPECT_EQ(testing::read_file((dir.path() / "a" / f).string()), testing::read_file((dir.path() / "b" / f).string()))
        << f;
  }
  EXPECT_TRUE(fs::exists(dir.path() / "a" / "timing.json"));
  EXPECT_FALSE(testing::read_file((dir.path() / "a" / "messages.log").string()).empty());
}

TEST(Run, CsvDatasetIsUsed) {
  TempDir dir;
  write_dataset(dir.path() / "d.csv", synthetic_uniform(40, 3, 3, 5), DataFormat::kCsv);
  auto c = small(SchemeKind::kBasic);
  c.dataset = (dir.path() / "d.csv").string();
  const auto r = run(c);
  EXPECT_EQ(r.report.index.vertices, 40u);
  EXPECT_EQ(r.report.counters.d, 3u);
  EXPECT_TRUE(r.report.metrics.oracle_checks_passed);
}

TEST(Report, JsonRoundTrip) {
  const auto r = run(small(SchemeKind::kReal));
  const std::string text = report_to_json(r.report);
  const Report back = report_from_json(text);
  EXPECT_EQ(report_to_json(back), text);
}

TEST(Report, StrictReader) {
  const std::string text = report_to_json(run(small(SchemeKind::kBrute)).report);
  std::string extra = text;
  extra.insert(extra.find("\"scheme\""), "\"surprise\": 1,\n  ");
  EXPECT_THROW(report_from_json(extra), FormatError);
  std::string nested = text;
  nested.insert(nested.find("\"recall\""), "\"precision\": 0.5,\n    ");
  EXPECT_THROW(report_from_json(nested), FormatError);
  std::string version = text;
  version.replace(version.find("\"version\": 1"), 12, "\"version\": 2");
  EXPECT_THROW(report_from_json(version), FormatError);
  EXPECT_THROW(report_from_json("{"), FormatError);
}

TEST(Demo, WorkedExampleMatchesGolden) {
  std::ostringstream out;
  EXPECT_TRUE(demo_fig3(out));
  EXPECT_NE(out.str().find("(a,0,1,{H2})"), std::string::npos);
  EXPECT_NE(out.str().find("(b,1,2,{})"), std::string::npos);
  EXPECT_EQ(worked_example_tables(), testing::read_golden("worked_example.bitgraph"));
  std::ostringstream quiet;
  EXPECT_FALSE(demo_fig3(quiet, "# bitgraph v1\n0 0 0 0 -\n"));
  EXPECT_TRUE(demo_fig3(quiet, testing::read_file(std::string(SPA2NN_TEST_DATA) + "/worked_example.bitgraph")));
  EXPECT_THROW(demo_fig3(quiet, "not a bitgraph"), FormatError);
}

TEST(Sweep, CountersFollowClosedForms) {
  const std::vector<std::size_t> sizes{50, 120};
  const auto rows = sweep(sizes, 4, 4, 3, 1);
  ASSERT_EQ(rows.size(), 2u);
  for (const auto& r : rows) {
    EXPECT_TRUE(r.counters_match);
    EXPECT_EQ(r.naive_units, 2 * r.edges);
    EXPECT_EQ(r.naive_share_ops, 4u * 3u * r.naive_units);
    EXPECT_GT(r.ratio, 1.0);
  }
  std::ostringstream csv;
  write_sweep_csv(csv, rows);
  const std::string text = csv.str();
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 3);
}

TEST(Spearman, KnownValues) {
  const std::vector<double> x{1, 2, 3, 4, 5};
  EXPECT_DOUBLE_EQ(spearman(x, std::vector<double>{2, 4, 6, 8, 10}), 1.0);
  EXPECT_DOUBLE_EQ(spearman(x, std::vector<double>{5, 4, 3, 2, 1}), -1.0);
  // Ranks of y with a tie: 1, 2.5, 2.5, 4, 5.
  EXPECT_NEAR(spearman(x, std::vector<double>{1, 3, 3, 7, 9}), 0.9746794344808963, 1e-12);
  EXPECT_THROW(spearman(x, std::vector<double>{1, 2}), ParameterError);
}

}  // namespace
}  // namespace spa2nn::cli
