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

#include "spa2nn/layered_bitgraph.hpp"

#include <algorithm>

#include "spa2nn/errors.hpp"

namespace spa2nn::hnsw {

using bitgraph::Bitgraph;
using bitgraph::Location;

LayeredBitgraphIndex::LayeredBitgraphIndex(std::size_t dim, HnswParams params)
    : params_(params), vectors_(dim) {
  params_.validate();
}

LayeredBitgraphIndex LayeredBitgraphIndex::from_hnsw(const HnswIndex& ref) {
  LayeredBitgraphIndex out(ref.vectors().dim(), ref.params());
  out.vectors_ = ref.vectors();
  for (VertexId v = 0; v < ref.size(); ++v) out.levels_.push_back(ref.level(v));
  for (int l = 0; l <= ref.top_level(); ++l) {
    const auto members = ref.layer_members(l);
    out.layers_.push_back(bitgraph::partition_gamma(ref.layer_graph(l), members));
  }
  out.enter_ = ref.enter();
  return out;
}

VertexId LayeredBitgraphIndex::insert(std::span<const double> v) {
  return insert_with_level(v, level_for_insert(params_.seed, vectors_.size(), params_.mL));
}

VertexId LayeredBitgraphIndex::insert_with_level(std::span<const double> v, int level) {
  if (level < 0) throw ParameterError("level must be non-negative");
  const VertexId q = vectors_.add(v);
  levels_.push_back(level);
  const auto qv = vectors_[q];
  const auto dist = [&](VertexId u) { return dist_to(qv, u); };
  const auto pairwise = [this](VertexId a, VertexId b) { return distance(params_.metric, vectors_[a], vectors_[b]); };

  const int top = top_level();
  if (top >= 0) {
    VertexId ep = enter_;
    for (int l = top; l > level; --l) {
      Bitgraph& h = layer(l);
      ep = bitgraph::bitgraph_search(h, h.entry_location(ep), 1, dist).nearest.front().vertex;
    }
    for (int l = std::min(top, level); l >= 0; --l) {
      Bitgraph& h = layer(l);
      const auto found = bitgraph::bitgraph_search(h, h.entry_location(ep), params_.ef_construction, dist).nearest;
      std::vector<Neighbor> ranked;
      ranked.reserve(found.size());
      for (const auto& c : found) ranked.push_back({c.distance, c.vertex});
      std::vector<Location> locs;
      for (std::size_t i : select_neighbors(ranked, params_.M, params_.selection, pairwise)) {
        locs.push_back(h.attach_location(found[i].vertex, found[i].loc));
      }
      h.insert_at(q, locs);
      ep = found.front().vertex;
    }
  }
  for (int l = top + 1; l <= level; ++l) {
    layers_.emplace_back();
    layers_.back().insert_at(q, {});
  }
  if (level > top) enter_ = q;
  return q;
}

LayeredSearchResult LayeredBitgraphIndex::search(std::span<const double> q, std::size_t theta) {
  if (empty()) throw EmptyIndex("search on an empty index");
  if (theta == 0) throw ParameterError("theta must be at least 1");
  if (q.size() != vectors_.dim()) throw ParameterError("query dimension mismatch");
  const auto dist = [&](VertexId u) { return dist_to(q, u); };
  LayeredSearchResult out;
  const auto absorb = [&](bitgraph::SearchResult&& r) {
    out.trace.evaluated.insert(out.trace.evaluated.end(), r.trace.evaluated.begin(), r.trace.evaluated.end());
    out.trace.detours += r.trace.detours;
    return std::move(r.nearest);
  };
  VertexId ep = enter_;
  for (int l = top_level(); l > 0; --l) {
    Bitgraph& h = layer(l);
    ep = absorb(bitgraph::bitgraph_search(h, h.entry_location(ep), 1, dist)).front().vertex;
  }
  Bitgraph& base = layer(0);
  const auto found =
      absorb(bitgraph::bitgraph_search(base, base.entry_location(ep), std::max(theta, params_.ef_search), dist));
  for (std::size_t i = 0; i < std::min(theta, found.size()); ++i) out.nearest.push_back({found[i].distance, found[i].vertex});
  return out;
}

}  // namespace spa2nn::hnsw
