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
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "spa2nn/bitgraph.hpp"
#include "spa2nn/graph.hpp"

namespace spa2nn::leakage {

/// Exact non-negative ratio. The numerator and denominator are kept as
/// computed (6/8 stays 6/8); equality compares values.
struct Ratio {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  std::string str() const { return std::to_string(num) + "/" + std::to_string(den); }
  bool operator==(const Ratio& o) const {
    return static_cast<unsigned __int128>(num) * o.den == static_cast<unsigned __int128>(o.num) * den;
  }
};

/// Every directed connection u->v of `g`, sorted.
std::vector<std::pair<VertexId, VertexId>> mss_set(const OrderedGraph& g);
/// Size of the minimum sharable set: 2|E|.
std::uint64_t mss_size(const OrderedGraph& g);

/// A layered index as seen by the leakage metrics: layer 0 holds every
/// stored element, L = layers.size() - 1.
using Layers = std::span<const bitgraph::Bitgraph>;

/// Sum of (1 + post_d + |par_b|) over every layer-0 location of `e`.
/// Throws UnknownElement.
std::uint64_t element_term(Layers layers, VertexId e);

/// Elements inferable from `e` by following honeycomb connectivity in
/// layer 0, excluding `e`, ascending. `max_hops` = 0 means the full
/// transitive closure.
std::vector<VertexId> inferred_set(Layers layers, VertexId e, std::size_t max_hops = 0);

/// (L+1) * element_term(e) over |C-ED|.
Ratio leakage_I(Layers layers, VertexId e);
/// (L+1) * sum of element_term over the inferred set, over |C-ED|.
Ratio leakage_II(Layers layers, VertexId e, std::size_t max_hops = 0);

enum class ThetaMode {
  kCount,     // every element of the inferred set plus e
  kDistance,  // only those within distance theta of e
};

/// Leakage of the index-to-data interface. In count mode this is
/// leakage_II plus e's own term. In distance mode the sum runs over e and
/// the inferred elements u with pairwise(e, u) <= theta.
Ratio leakage_III(Layers layers, VertexId e, ThetaMode mode, double theta = 0,
                  const std::function<double(VertexId, VertexId)>& pairwise = {}, std::size_t max_hops = 0);

struct LeakageSample {
  VertexId element = 0;
  Ratio l1, l2, l3;
};

struct LeakageReport {
  std::uint64_t layers = 0;        // L + 1
  std::uint64_t denominator = 0;   // |C-ED|
  std::vector<LeakageSample> samples;
  double epsilon = 0;              // mean L_III over the samples, reported only
};

LeakageReport leakage_report(Layers layers, std::span<const VertexId> elements, ThetaMode mode, double theta = 0,
                             const std::function<double(VertexId, VertexId)>& pairwise = {},
                             std::size_t max_hops = 0);

}  // namespace spa2nn::leakage
