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

#include <set>

#include "spa2nn/errors.hpp"
#include "spa2nn/leakage.hpp"
#include "test_support.hpp"

namespace spa2nn::leakage {
namespace {

using bitgraph::Bitgraph;
using bitgraph::partition_gamma;
using namespace spa2nn::testing;

std::vector<Bitgraph> example_index() { return {partition_gamma(worked_example_graph())}; }

// A path 0-1-...-(n-1) lives in one branch; its tail has post_d 0 and no par_b.
OrderedGraph path(std::size_t n) {
  OrderedGraph g(n);
  for (VertexId v = 1; v < n; ++v) g.add_edge(v - 1, v);
  return g;
}

TEST(Mss, TwoEdgeStar) {
  OrderedGraph g(3);
  g.add_edge(0, 1);
  g.add_edge(0, 2);
  EXPECT_EQ(mss_size(g), 4u);
  const std::vector<std::pair<VertexId, VertexId>> want{{0, 1}, {0, 2}, {1, 0}, {2, 0}};
  EXPECT_EQ(mss_set(g), want);
}

TEST(Mss, EdgelessGraph) { EXPECT_EQ(mss_size(OrderedGraph(5)), 0u); }

TEST(Mss, RandomGraphsCountDirectedPairs) {
  Prg rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    OrderedGraph g(30);
    while (g.edge_count() < 50) {
      const auto u = static_cast<VertexId>(rng.uniform_below(30));
      const auto v = static_cast<VertexId>(rng.uniform_below(30));
      if (u != v) g.add_edge(u, v);
    }
    std::set<std::pair<VertexId, VertexId>> directed;
    for (VertexId u = 0; u < 30; ++u) {
      for (VertexId v : g.neighbors(u)) directed.insert({u, v});
    }
    EXPECT_EQ(mss_size(g), 100u);
    EXPECT_EQ(mss_size(g), directed.size());
  }
}

TEST(LeakageI, IsolatedTail) {
  const std::vector<Bitgraph> idx{partition_gamma(path(8))};
  EXPECT_EQ(leakage_I(idx, 7), (Ratio{1, 8}));
  EXPECT_EQ(leakage_I(idx, 7).str(), "1/8");
}

TEST(LeakageI, TwoLayersWithPostDegreeTwo) {
  OrderedGraph g = path(8);
  g.add_edge(0, 2);  // 0 now spans 1 and 2 in one branch
  std::vector<Bitgraph> idx{partition_gamma(g), partition_gamma(path(2))};
  ASSERT_EQ(idx[0].entry(idx[0].locations(0).front()).post_d, 2u);
  ASSERT_EQ(idx[0].locations(0).size(), 1u);
  const Ratio r = leakage_I(idx, 0);
  EXPECT_EQ(r.num, 6u);
  EXPECT_EQ(r.den, 8u);
}

TEST(LeakageI, WorkedExampleElements) {
  const auto idx = example_index();
  EXPECT_EQ(leakage_I(idx, B).str(), "3/7");
  // a sits in both branches: (1 + 1 + 1) + (1 + 1 + 0).
  EXPECT_EQ(leakage_I(idx, A).str(), "5/7");
  EXPECT_EQ(leakage_I(idx, G).str(), "2/7");
}

TEST(LeakageII, WorkedExampleClosureOfA) {
  const auto idx = example_index();
  EXPECT_EQ(inferred_set(idx, A), (std::vector<VertexId>{B, C, D, E, F, G}));
  // Hand sum over the golden tables: b 3, c 2, d 2, e 2, f 2, g 1 + 1.
  EXPECT_EQ(leakage_II(idx, A).str(), "13/7");
}

TEST(LeakageII, HopLimit) {
  const auto idx = example_index();
  EXPECT_EQ(inferred_set(idx, A, 1), (std::vector<VertexId>{B, D}));
  EXPECT_EQ(leakage_II(idx, A, 1).str(), "5/7");
}

TEST(LeakageII, SingletonHasEmptyClosure) {
  std::vector<Bitgraph> idx(1);
  idx[0].insert(0, {}, 0);
  EXPECT_TRUE(inferred_set(idx, 0).empty());
  EXPECT_EQ(leakage_II(idx, 0).num, 0u);
}

TEST(LeakageIII, CountModeAddsOwnTerm) {
  const auto idx = example_index();
  for (VertexId e = 0; e < 7; ++e) {
    const Ratio one = leakage_I(idx, e), two = leakage_II(idx, e), three = leakage_III(idx, e, ThetaMode::kCount);
    EXPECT_EQ(three.num, one.num + two.num);
    EXPECT_LE(one.num, three.num);
    EXPECT_GE(three.num, two.num);
  }
  EXPECT_EQ(leakage_III(idx, A, ThetaMode::kCount).str(), "18/7");
}

TEST(LeakageIII, DistanceModeFiltersByTheta) {
  const auto idx = example_index();
  // Distance |u - v| on the vertex ids: within 1 of c are b and d.
  const auto pairwise = [](VertexId u, VertexId v) { return u > v ? double(u - v) : double(v - u); };
  EXPECT_EQ(leakage_III(idx, C, ThetaMode::kDistance, 1.0, pairwise).str(), "7/7");  // c 2, b 3, d 2
  EXPECT_EQ(leakage_III(idx, C, ThetaMode::kDistance, 0.0, pairwise), leakage_I(idx, C));
  EXPECT_EQ(leakage_III(idx, C, ThetaMode::kDistance, 100.0, pairwise), leakage_III(idx, C, ThetaMode::kCount));
  EXPECT_THROW(leakage_III(idx, C, ThetaMode::kDistance, 1.0), ParameterError);
}

TEST(Leakage, UnknownElementRejected) {
  const auto idx = example_index();
  EXPECT_THROW(leakage_I(idx, 9), UnknownElement);
  EXPECT_THROW(leakage_II(idx, 9), UnknownElement);
  EXPECT_THROW(leakage_III(idx, 9, ThetaMode::kCount), UnknownElement);
  EXPECT_THROW(leakage_I(std::vector<Bitgraph>{}, 0), UnknownElement);
}

TEST(Leakage, ReportAveragesThirdInterface) {
  const auto idx = example_index();
  const std::vector<VertexId> sample{A, B};
  const auto report = leakage_report(idx, sample, ThetaMode::kCount);
  EXPECT_EQ(report.layers, 1u);
  EXPECT_EQ(report.denominator, 7u);
  ASSERT_EQ(report.samples.size(), 2u);
  const double want = (leakage_III(idx, A, ThetaMode::kCount).value() + leakage_III(idx, B, ThetaMode::kCount).value()) / 2;
  EXPECT_DOUBLE_EQ(report.epsilon, want);
}

}  // namespace
}  // namespace spa2nn::leakage
