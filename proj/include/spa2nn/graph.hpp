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
#include <cstdint>
#include <utility>
#include <vector>

namespace spa2nn {

using VertexId = std::uint32_t;

/// Undirected simple graph whose vertex ids double as the insertion order.
class OrderedGraph {
 public:
  explicit OrderedGraph(std::size_t vertices = 0) : adj_(vertices) {}

  VertexId add_vertex();
  /// Adds {u, v}. Self-loops and unknown endpoints throw ParameterError;
  /// a repeated edge is ignored.
  void add_edge(VertexId u, VertexId v);
  bool has_edge(VertexId u, VertexId v) const;

  std::size_t vertex_count() const { return adj_.size(); }
  std::size_t edge_count() const { return edges_; }
  /// Neighbors in ascending id order.
  const std::vector<VertexId>& neighbors(VertexId v) const { return adj_.at(v); }
  /// Every edge as (smaller, larger), sorted.
  std::vector<std::pair<VertexId, VertexId>> edges() const;

 private:
  std::vector<std::vector<VertexId>> adj_;
  std::size_t edges_ = 0;
};

}  // namespace spa2nn
