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

#include <cstddef>
#include <span>
#include <vector>

#include "spa2nn/bitgraph.hpp"
#include "spa2nn/hnsw.hpp"

namespace spa2nn::hnsw {

struct LayeredSearchResult {
  std::vector<Neighbor> nearest;
  /// Evaluations and detours over every layer of the descent.
  bitgraph::WalkTrace trace;
};

/// Plaintext layered index whose layers are bitgraphs. It makes the same
/// decisions as the shared index, so it serves as that index's exact twin
/// when both run on the same fixed-point integers.
class LayeredBitgraphIndex {
 public:
  LayeredBitgraphIndex(std::size_t dim, HnswParams params);

  /// Converts every layer of a reference index with the partition rule.
  static LayeredBitgraphIndex from_hnsw(const HnswIndex& ref);

  VertexId insert(std::span<const double> v);
  VertexId insert_with_level(std::span<const double> v, int level);

  /// Same descent as HnswIndex::search, over bitgraph layers. Throws EmptyIndex.
  LayeredSearchResult search(std::span<const double> q, std::size_t theta);

  bool empty() const { return vectors_.empty(); }
  std::size_t size() const { return vectors_.size(); }
  int top_level() const { return static_cast<int>(layers_.size()) - 1; }
  VertexId enter() const { return enter_; }
  int level(VertexId v) const { return levels_.at(v); }
  const HnswParams& params() const { return params_; }
  const VectorSet& vectors() const { return vectors_; }
  const std::vector<bitgraph::Bitgraph>& layers() const { return layers_; }
  bitgraph::Bitgraph& layer(int l) { return layers_.at(static_cast<std::size_t>(l)); }

 private:
  double dist_to(std::span<const double> q, VertexId v) const { return distance(params_.metric, q, vectors_[v]); }

  HnswParams params_;
  VectorSet vectors_;
  std::vector<int> levels_;
  std::vector<bitgraph::Bitgraph> layers_;
  VertexId enter_ = 0;
};

}  // namespace spa2nn::hnsw
