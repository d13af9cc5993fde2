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

#include "spa2nn/leakage.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>

#include "spa2nn/errors.hpp"

namespace spa2nn::leakage {

namespace {

const bitgraph::Bitgraph& base_layer(Layers layers) {
  if (layers.empty() || layers.front().empty()) throw UnknownElement("index has no stored elements");
  return layers.front();
}

void require_element(Layers layers, VertexId e) {
  if (!base_layer(layers).contains(e)) throw UnknownElement("element " + std::to_string(e) + " is not stored");
}

std::uint64_t scale(Layers layers) { return layers.size(); }

}  // namespace

std::vector<std::pair<VertexId, VertexId>> mss_set(const OrderedGraph& g) {
  std::vector<std::pair<VertexId, VertexId>> out;
  for (auto [u, v] : g.edges()) {
    out.emplace_back(u, v);
    out.emplace_back(v, u);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::uint64_t mss_size(const OrderedGraph& g) { return 2 * static_cast<std::uint64_t>(g.edge_count()); }

std::uint64_t element_term(Layers layers, VertexId e) {
  require_element(layers, e);
  const auto& h = layers.front();
  std::uint64_t sum = 0;
  for (const auto& loc : h.locations(e)) {
    const auto& entry = h.entry(loc);
    sum += 1 + entry.post_d + entry.par_b.size();
  }
  return sum;
}

std::vector<VertexId> inferred_set(Layers layers, VertexId e, std::size_t max_hops) {
  require_element(layers, e);
  const auto& h = layers.front();
  std::unordered_map<VertexId, std::size_t> hops{{e, 0}};
  std::deque<VertexId> frontier{e};
  while (!frontier.empty()) {
    const VertexId v = frontier.front();
    frontier.pop_front();
    const std::size_t depth = hops[v];
    if (max_hops != 0 && depth == max_hops) continue;
    for (const auto& loc : h.locations(v)) {
      for (const auto& nb : bitgraph::honeycomb_neighbors(h, loc)) {
        const VertexId u = h.entry(nb).vertex;
        if (hops.emplace(u, depth + 1).second) frontier.push_back(u);
      }
    }
  }
  std::vector<VertexId> out;
  for (const auto& [v, d] : hops) {
    if (v != e) out.push_back(v);
  }
  std::sort(out.begin(), out.end());
  return out;
}

Ratio leakage_I(Layers layers, VertexId e) {
  return {scale(layers) * element_term(layers, e), base_layer(layers).vertex_count()};
}

Ratio leakage_II(Layers layers, VertexId e, std::size_t max_hops) {
  std::uint64_t sum = 0;
  for (VertexId u : inferred_set(layers, e, max_hops)) sum += element_term(layers, u);
  return {scale(layers) * sum, base_layer(layers).vertex_count()};
}

Ratio leakage_III(Layers layers, VertexId e, ThetaMode mode, double theta,
                  const std::function<double(VertexId, VertexId)>& pairwise, std::size_t max_hops) {
  if (mode == ThetaMode::kCount) {
    const Ratio two = leakage_II(layers, e, max_hops);
    return {two.num + scale(layers) * element_term(layers, e), two.den};
  }
  if (!pairwise) throw ParameterError("distance mode needs a pairwise distance");
  std::uint64_t sum = element_term(layers, e);
  for (VertexId u : inferred_set(layers, e, max_hops)) {
    if (pairwise(e, u) <= theta) sum += element_term(layers, u);
  }
  return {scale(layers) * sum, base_layer(layers).vertex_count()};
}

LeakageReport leakage_report(Layers layers, std::span<const VertexId> elements, ThetaMode mode, double theta,
                             const std::function<double(VertexId, VertexId)>& pairwise, std::size_t max_hops) {
  LeakageReport report;
  report.layers = scale(layers);
  report.denominator = base_layer(layers).vertex_count();
  double total = 0;
  for (VertexId e : elements) {
    LeakageSample s{e, leakage_I(layers, e), leakage_II(layers, e, max_hops),
                    leakage_III(layers, e, mode, theta, pairwise, max_hops)};
    total += s.l3.value();
    report.samples.push_back(s);
  }
  if (!elements.empty()) report.epsilon = total / static_cast<double>(elements.size());
  return report;
}

}  // namespace spa2nn::leakage
