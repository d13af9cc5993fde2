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

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "spa2nn/graph.hpp"
#include "spa2nn/random.hpp"

namespace spa2nn::testing {

// Vertex ids of the seven-vertex worked example.
enum ExampleVertex : VertexId { A = 0, B, C, D, E, F, G };

inline OrderedGraph worked_example_graph() {
  OrderedGraph g(7);
  for (auto [u, v] : std::vector<std::pair<VertexId, VertexId>>{
           {A, B}, {B, C}, {B, E}, {C, E}, {A, D}, {D, F}, {E, G}, {F, G}}) {
    g.add_edge(u, v);
  }
  return g;
}

// Every vertex after the first links to between 1 and `max_back` distinct
// earlier vertices chosen uniformly, the way an incremental index grows.
inline OrderedGraph random_insertion_graph(std::size_t vertices, std::size_t max_back, Prg& rng) {
  OrderedGraph g(vertices);
  for (VertexId v = 1; v < vertices; ++v) {
    const std::size_t want = 1 + rng.uniform_below(std::min<std::size_t>(max_back, v));
    while (g.neighbors(v).size() < want) g.add_edge(v, static_cast<VertexId>(rng.uniform_below(v)));
  }
  return g;
}

// Uniform points in [-1, 1]^dim rounded to `rho` decimals, so that the
// fixed-point encoding is exact.
inline std::vector<std::vector<double>> quantized_cube(std::size_t count, std::size_t dim, std::uint64_t seed,
                                                       int rho = 3) {
  Prg rng(seed, domain::kData);
  const double scale = std::pow(10.0, rho);
  std::vector<std::vector<double>> out(count, std::vector<double>(dim));
  for (auto& v : out) {
    for (double& x : v) x = std::nearbyint(rng.uniform_real(-1, 1) * scale) / scale;
  }
  return out;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// A golden bitgraph file without its comment lines, as to_text writes it.
inline std::string read_golden(const std::string& name) {
  std::istringstream in(read_file(std::string(SPA2NN_TEST_DATA) + "/" + name));
  std::string line, out;
  bool header = true;
  while (std::getline(in, line)) {
    if (!header && !line.empty() && line[0] == '#') continue;
    header = false;
    out += line + "\n";
  }
  return out;
}

}  // namespace spa2nn::testing
