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

#include "spa2nn/graph.hpp"

#include <algorithm>

#include "spa2nn/errors.hpp"

namespace spa2nn {

VertexId OrderedGraph::add_vertex() {
  adj_.emplace_back();
  return static_cast<VertexId>(adj_.size() - 1);
}

void OrderedGraph::add_edge(VertexId u, VertexId v) {
  if (u >= adj_.size() || v >= adj_.size()) throw ParameterError("edge endpoint is not a vertex");
  if (u == v) throw ParameterError("self-loops are not allowed");
  auto& nu = adj_[u];
  const auto it = std::lower_bound(nu.begin(), nu.end(), v);
  if (it != nu.end() && *it == v) return;
  nu.insert(it, v);
  auto& nv = adj_[v];
  nv.insert(std::lower_bound(nv.begin(), nv.end(), u), u);
  ++edges_;
}

bool OrderedGraph::has_edge(VertexId u, VertexId v) const {
  if (u >= adj_.size() || v >= adj_.size()) return false;
  return std::binary_search(adj_[u].begin(), adj_[u].end(), v);
}

std::vector<std::pair<VertexId, VertexId>> OrderedGraph::edges() const {
  std::vector<std::pair<VertexId, VertexId>> out;
  out.reserve(edges_);
  for (VertexId u = 0; u < adj_.size(); ++u) {
    for (VertexId v : adj_[u]) {
      if (u < v) out.emplace_back(u, v);
    }
  }
  return out;
}

}  // namespace spa2nn
