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

// Acceptance suite: one PASS/FAIL line per criterion. Exits 0 when the set
// of failing criteria equals the set named with --expect-fail (empty by
// default), so a known failure stays visible without hiding new ones.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "spa2nn/bitgraph.hpp"
#include "spa2nn/cli.hpp"
#include "spa2nn/field.hpp"
#include "spa2nn/layered_bitgraph.hpp"
#include "spa2nn/leakage.hpp"
#include "spa2nn/shamir.hpp"
#include "test_support.hpp"

namespace {

using namespace spa2nn;
using Clock = std::chrono::steady_clock;
using testing::A;
using testing::B;

double seconds_since(Clock::time_point start) { return std::chrono::duration<double>(Clock::now() - start).count(); }

struct Verdict {
  bool pass = false;
  std::string detail;
};

// Newton divided differences evaluated at zero. Shares the field type with
// the library but none of its interpolation code.
ss::FieldElement newton_at_zero(std::span<const ss::Share> shares, std::uint64_t p) {
  const ss::Field f(p);
  std::vector<ss::FieldElement> x, c;
  for (const auto& s : shares) {
    x.push_back(static_cast<ss::FieldElement>(s.point));
    c.push_back(s.value);
  }
  const std::size_t m = c.size();
  for (std::size_t j = 1; j < m; ++j) {
    for (std::size_t i = m - 1; i >= j; --i) {
      c[i] = f.mul(f.sub(c[i], c[i - 1]), f.inv(f.sub(x[i], x[i - j])));
    }
  }
  ss::FieldElement acc = c[m - 1];
  for (std::size_t i = m - 1; i-- > 0;) acc = f.add(c[i], f.mul(acc, f.sub(0, x[i])));
  return acc;
}

double chi_square_critical(double dof, double z) {
  const double h = 2.0 / (9.0 * dof);
  return dof * std::pow(1.0 - h + z * std::sqrt(h), 3.0);
}

Verdict shamir() {
  const auto start = Clock::now();
  std::uint64_t checks = 0;
  Prg rng(101);
  for (int n = 1; n <= 6; ++n) {
    for (int t = 1; t <= n; ++t) {
      ss::FieldParams params;
      params.n = n;
      params.t = t;
      for (int i = 0; i < 1000; ++i) {
        const ss::FieldElement secret = rng.uniform_below(params.p);
        const auto shares = ss::ss_share(secret, params, rng);
        for (unsigned mask = 1; mask < (1u << n); ++mask) {
          if (std::popcount(mask) < t) continue;
          std::vector<ss::Share> sub;
          for (int u = 0; u < n; ++u) {
            if (mask & (1u << u)) sub.push_back(shares[static_cast<std::size_t>(u)]);
          }
          if (ss::ss_recon(sub, params) != secret) return {false, "reconstruction mismatch"};
          if (i < 25 && newton_at_zero(sub, params.p) != secret) return {false, "oracle mismatch"};
          ++checks;
        }
      }
    }
  }
  const double recon_seconds = seconds_since(start);

  ss::FieldParams small;
  small.p = 97;
  small.k = 6;
  small.rho = 1;
  small.n = 3;
  small.t = 2;
  const double critical = chi_square_critical(96, 2.326348);
  double worst = 0;
  for (int party = 0; party < small.n; ++party) {
    std::vector<double> h0(97), h1(97);
    for (int i = 0; i < 10000; ++i) {
      h0[ss::ss_share(5, small, rng)[static_cast<std::size_t>(party)].value] += 1;
      h1[ss::ss_share(71, small, rng)[static_cast<std::size_t>(party)].value] += 1;
    }
    double stat = 0;
    for (std::size_t b = 0; b < 97; ++b) {
      const double e = (h0[b] + h1[b]) / 2;
      if (e > 0) stat += ((h0[b] - e) * (h0[b] - e) + (h1[b] - e) * (h1[b] - e)) / e;
    }
    worst = std::max(worst, stat);
  }
  std::ostringstream d;
  d << checks << " subset reconstructions in " << recon_seconds << " s; worst chi-square " << worst
    << " vs critical " << critical << " (df 96, alpha 0.01)";
  return {recon_seconds < 5.0 && worst < critical, d.str()};
}

Verdict worked_example_golden() {
  const auto start = Clock::now();
  const auto h = bitgraph::partition_gamma(testing::worked_example_graph());
  const auto& a0 = h.branch(0).entries.at(0);
  const auto& b1 = h.branch(0).entries.at(1);
  const bool printed = a0.vertex == A && a0.seq == 0 && a0.post_d == 1 && a0.par_b == std::vector<bitgraph::BranchId>{1} &&
                       b1.vertex == B && b1.seq == 1 && b1.post_d == 2 && b1.par_b.empty();
  const bool tables = bitgraph::to_text(h) == testing::read_golden("worked_example.bitgraph");
  const auto back = bitgraph::reconstruct_graph(h);
  auto want = testing::worked_example_graph().edges();
  auto got = back.edges();
  std::sort(want.begin(), want.end());
  std::sort(got.begin(), got.end());
  const double secs = seconds_since(start);
  std::ostringstream d;
  d << "printed entries " << (printed ? "match" : "differ") << ", tables " << (tables ? "match" : "differ") << ", "
    << got.size() << " edges, " << secs << " s";
  return {printed && tables && got == want && got.size() == 8 && secs < 1.0, d.str()};
}

std::vector<std::pair<VertexId, VertexId>> sorted_edges(const OrderedGraph& g) {
  std::set<std::pair<VertexId, VertexId>> s;
  for (VertexId u = 0; u < g.vertex_count(); ++u) {
    for (VertexId v : g.neighbors(u)) s.insert({std::min(u, v), std::max(u, v)});
  }
  return {s.begin(), s.end()};
}

Verdict reconstruction() {
  const auto start = Clock::now();
  Prg rng(303);
  std::size_t exact = 0, largest = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng.uniform_below(199);
    largest = std::max(largest, n);
    const OrderedGraph g = testing::random_insertion_graph(n, 1 + rng.uniform_below(10), rng);
    exact += sorted_edges(bitgraph::reconstruct_graph(bitgraph::partition_gamma(g))) == sorted_edges(g) ? 1 : 0;
  }
  const double secs = seconds_since(start);
  std::ostringstream d;
  d << exact << "/100 exact, largest graph " << largest << " vertices, " << secs << " s";
  return {exact == 100 && secs < 10.0, d.str()};
}

Verdict mss_law() {
  Prg rng(404);
  std::size_t exact = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng.uniform_below(60);
    OrderedGraph g(n);
    const std::size_t m = rng.uniform_below(n * (n - 1) / 2 + 1);
    while (g.edge_count() < m) {
      const auto u = static_cast<VertexId>(rng.uniform_below(n));
      const auto v = static_cast<VertexId>(rng.uniform_below(n));
      if (u != v) g.add_edge(u, v);
    }
    std::set<std::pair<VertexId, VertexId>> directed;
    for (VertexId u = 0; u < n; ++u) {
      for (VertexId v : g.neighbors(u)) directed.insert({u, v});
    }
    exact += leakage::mss_size(g) == 2 * g.edge_count() && leakage::mss_size(g) == directed.size() &&
                     leakage::mss_set(g).size() == directed.size()
                 ? 1
                 : 0;
  }
  return {exact == 100, std::to_string(exact) + "/100 graphs with mss = 2|E| = distinct directed connections"};
}

Verdict counters_trend() {
  const auto start = Clock::now();
  const std::vector<std::size_t> sizes{100, 200, 300, 500, 750, 1000, 1500, 2000};
  const auto rows = cli::sweep(sizes, 8, 16, 3, 1);
  bool equalities = true;
  std::vector<double> degree, ratio;
  std::ostringstream d;
  d << std::setprecision(4);
  for (const auto& r : rows) {
    equalities = equalities && r.counters_match;
    degree.push_back(r.average_degree);
    ratio.push_back(r.ratio);
    d << "|V|=" << r.vertices << " deg " << r.average_degree << " ratio " << r.ratio << "; ";
  }
  const double rho = cli::spearman(degree, ratio);
  const double secs = seconds_since(start);
  d << "counter equalities " << (equalities ? "exact" : "BROKEN") << ", spearman(degree, ratio) " << rho
    << " (need > 0.9), " << secs << " s";

  // Supplementary: the same ratio when M varies at a fixed size.
  d << "; at |V|=1000 varying M:";
  for (std::size_t M : {2, 4, 8, 16, 32}) {
    const std::vector<std::size_t> one{1000};
    const auto r = cli::sweep(one, M, 16, 3, 1).front();
    d << " M=" << M << " deg " << r.average_degree << " ratio " << r.ratio;
  }
  return {equalities && rho > 0.9 && secs < 120.0, d.str()};
}

cli::ExperimentConfig config(cli::SchemeKind scheme, std::size_t count, std::size_t queries, int n, int t) {
  cli::ExperimentConfig c;
  c.scheme = scheme;
  c.count = count;
  c.dim = 16;
  c.queries = queries;
  c.n = n;
  c.t = t;
  c.theta = 10;
  return c;
}

Verdict oracle_equivalence() {
  const auto start = Clock::now();
  std::ostringstream d;
  bool ok = true;
  for (auto s : {cli::SchemeKind::kBasic, cli::SchemeKind::kMirror, cli::SchemeKind::kReal}) {
    const auto r = cli::run(config(s, 500, 100, 4, 3));
    const bool exact = r.report.metrics.exact_match_rate == 1.0 && r.report.metrics.oracle_checks_passed;
    ok = ok && exact;
    d << cli::scheme_name(s) << " " << r.report.metrics.exact_match_rate * 100 << "% exact; ";
  }
  const double secs = seconds_since(start);
  d << secs << " s";
  return {ok && secs < 180.0, d.str()};
}

struct Coverage {
  std::size_t holds = 0;
  std::uint64_t detours = 0, deviation = 0;
};

Coverage coverage_at(std::size_t dim, std::uint64_t seed) {
  const auto data = cli::synthetic_uniform(1000, dim, 3, seed);
  const auto queries = cli::synthetic_uniform(100, dim, 3, seed, domain::kQuery);
  hnsw::HnswParams hp;
  hp.seed = seed;
  hnsw::HnswIndex ref(dim, hp);
  for (VertexId i = 0; i < data.size(); ++i) ref.insert(data[i]);
  auto converted = hnsw::LayeredBitgraphIndex::from_hnsw(ref);
  Coverage out;
  for (VertexId i = 0; i < queries.size(); ++i) {
    const auto r = ref.search(queries[i], 10);
    auto b = converted.search(queries[i], 10);
    std::vector<bitgraph::Candidate> cands;
    for (const auto& n : b.nearest) cands.push_back({n.distance, n.id, {}});
    std::vector<VertexId> ids;
    for (const auto& n : r.nearest) ids.push_back(n.id);
    out.holds += bitgraph::compare_walks(r.walk, ids, b.trace, cands) ? 1 : 0;
    out.detours += b.trace.detours;
    out.deviation += b.trace.deviation;
  }
  return out;
}

// Judged on the 16-D data used by the other end-to-end criteria; the 8-D
// figure is printed for comparison only.
Verdict walk_coverage() {
  const Coverage c = coverage_at(16, 7);
  const Coverage low = coverage_at(8, 7);
  std::ostringstream d;
  d << c.holds << "/100 queries covered or equal (16-D); detours a=" << c.detours
    << ", uncovered walk vertices o=" << c.deviation << "; at 8-D " << low.holds << "/100";
  return {c.holds >= 95, d.str()};
}

Verdict recall() {
  const auto start = Clock::now();
  const auto real = cli::run(config(cli::SchemeKind::kReal, 1000, 100, 3, 2)).report.metrics;
  const auto plain = cli::run(config(cli::SchemeKind::kPlainHnsw, 1000, 100, 3, 2)).report.metrics;
  const double secs = seconds_since(start);
  std::ostringstream d;
  d << "shared bitgraph recall@10 " << real.recall << ", plaintext HNSW " << plain.recall << ", gap "
    << std::abs(real.recall - plain.recall) << ", " << secs << " s";
  return {real.recall >= 0.7 && std::abs(real.recall - plain.recall) <= 0.1 && secs < 300.0, d.str()};
}

Verdict leakage_values() {
  const std::vector<bitgraph::Bitgraph> idx{bitgraph::partition_gamma(testing::worked_example_graph())};
  // Element terms read off the golden tables by hand: a 3 + 2, b 3, g 1 + 1,
  // every other vertex 2. The graph is connected, so the closure of x is
  // everything else and L_II(x) = (18 - term(x)) / 7.
  const std::uint64_t term[7] = {5, 3, 2, 2, 2, 2, 2};
  std::size_t matched = 0;
  for (VertexId e = 0; e < 7; ++e) {
    matched += leakage::leakage_I(idx, e) == leakage::Ratio{term[e], 7} ? 1 : 0;
    matched += leakage::leakage_II(idx, e) == leakage::Ratio{18 - term[e], 7} ? 1 : 0;
    matched += leakage::leakage_III(idx, e, leakage::ThetaMode::kCount) == leakage::Ratio{18, 7} ? 1 : 0;
  }
  const bool named = leakage::leakage_I(idx, B).str() == "3/7" && leakage::leakage_II(idx, A).str() == "13/7";
  std::ostringstream d;
  d << matched << "/21 exact ratios; L_I(b) = " << leakage::leakage_I(idx, B).str()
    << ", L_II(a) = " << leakage::leakage_II(idx, A).str();
  return {matched == 21 && named, d.str()};
}

Verdict replay() {
  auto c = config(cli::SchemeKind::kReal, 200, 20, 3, 2);
  c.dim = 8;
  c.log_messages = true;
  const auto first = cli::run(c);
  const auto second = cli::run(c);
  const bool logs = first.message_log == second.message_log && !first.message_log.empty();
  const bool reports = cli::report_to_json(first.report) == cli::report_to_json(second.report);
  std::ostringstream d;
  d << "message logs " << (logs ? "identical" : "differ") << " (" << first.message_log.size() << " bytes), reports "
    << (reports ? "identical" : "differ");
  return {logs && reports, d.str()};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::vector<int> expect_fail;
  std::vector<int> only;
  app.add_option("--expect-fail", expect_fail, "criteria known to fail");
  app.add_option("--only", only, "run just these criteria");
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria{
      {"shamir correctness and hiding", shamir},
      {"worked example golden tables", worked_example_golden},
      {"reconstruction property", reconstruction},
      {"minimum sharable set law", mss_law},
      {"linear-vs-quadratic counters", counters_trend},
      {"oracle equivalence of shared schemes", oracle_equivalence},
      {"walk coverage", walk_coverage},
      {"end-to-end recall", recall},
      {"leakage formulas", leakage_values},
      {"replay determinism", replay},
  };
  std::set<int> failed;
  std::size_t ran = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i + 1);
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    ++ran;
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("threw: ") + e.what()};
    }
    if (!v.pass) failed.insert(id);
    std::cout << (v.pass ? "PASS" : "FAIL") << " " << id << " " << criteria[i].first << ": " << v.detail << std::endl;
  }
  std::set<int> expected;
  for (int id : expect_fail) {
    if (only.empty() || std::find(only.begin(), only.end(), id) != only.end()) expected.insert(id);
  }
  std::cout << (ran - failed.size()) << " passed, " << failed.size() << " failed";
  if (!expected.empty()) std::cout << " (expected failures:" << [&] {
    std::string s;
    for (int id : expected) s += " " + std::to_string(id);
    return s;
  }() << ")";
  std::cout << std::endl;
  return failed == expected ? 0 : 1;
}
