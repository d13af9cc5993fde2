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
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string_view>
#include <vector>

#include "spa2nn/graph.hpp"
#include "spa2nn/random.hpp"

namespace spa2nn::hnsw {

enum class Metric { kSquaredEuclidean, kInnerProduct, kCosine };

Metric parse_metric(std::string_view name);
std::string_view metric_name(Metric m);

/// Dense row-major collection of equal-length vectors.
class VectorSet {
 public:
  explicit VectorSet(std::size_t dim = 0) : dim_(dim) {}

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return dim_ == 0 ? 0 : data_.size() / dim_; }
  bool empty() const { return data_.empty(); }

  /// Appends a vector and returns its id. Throws ParameterError on a
  /// dimension mismatch.
  VertexId add(std::span<const double> v);
  std::span<const double> operator[](VertexId i) const { return {data_.data() + i * dim_, dim_}; }
  std::span<const double> flat() const { return data_; }

  bool operator==(const VectorSet&) const = default;

 private:
  std::size_t dim_;
  std::vector<double> data_;
};

/// Smaller is nearer for every metric: inner product and cosine are negated.
double distance(Metric m, std::span<const double> a, std::span<const double> b);

/// Scales `v` to unit length (zero stays zero).
std::vector<double> normalized(std::span<const double> v);

struct Neighbor {
  double distance = 0;
  VertexId id = 0;

  auto operator<=>(const Neighbor&) const = default;
};

/// Exact top-theta by (distance, id). Throws EmptyDataset.
std::vector<Neighbor> brute_force_ann(std::span<const double> q, const VectorSet& data, std::size_t theta,
                                      Metric metric);

/// floor(-ln(u) * mL) for u in (0, 1].
int level_from_uniform(double u, double mL);
/// One draw of the level distribution.
int sample_level(Prg& rng, double mL);
/// The level of the vertex inserted when the state counter is `sigma`.
/// Every index flavour uses this so that they agree on the hierarchy.
int level_for_insert(std::uint64_t seed, std::uint64_t sigma, double mL);

enum class NeighborSelection { kClosestFirst, kHeuristic };

/// Picks at most `m` of `candidates` (sorted nearest first, distances to
/// the new vertex). Closest-first keeps the first m. The heuristic keeps a
/// candidate only when no already kept one is nearer to it than the new
/// vertex is; `pairwise` gives the distance between two stored vertices.
std::vector<std::size_t> select_neighbors(std::span<const Neighbor> candidates, std::size_t m,
                                          NeighborSelection selection,
                                          const std::function<double(VertexId, VertexId)>& pairwise);

struct HnswParams {
  std::size_t M = 8;
  double mL = 1.0 / std::log(8.0);
  std::size_t ef_construction = 40;
  std::size_t ef_search = 40;
  NeighborSelection selection = NeighborSelection::kClosestFirst;
  Metric metric = Metric::kSquaredEuclidean;
  std::uint64_t seed = 1;

  /// Throws ParameterError on M = 0, mL < 0 or zero ef values.
  void validate() const;
};

struct HnswSearchResult {
  std::vector<Neighbor> nearest;
  /// Every vertex evaluated during the search, over all layers, in order.
  std::vector<VertexId> walk;
};

/// Layered proximity graph over undirected adjacency lists. Neighbor lists
/// are never pruned, so every layer is exactly the union of the insert-time
/// connections.
class HnswIndex {
 public:
  HnswIndex(std::size_t dim, HnswParams params);

  /// Inserts with the level drawn by level_for_insert(seed, id, mL).
  VertexId insert(std::span<const double> v);
  VertexId insert_with_level(std::span<const double> v, int level);

  /// Descends with one nearest per upper layer, then searches layer 0 with
  /// max(theta, ef_search) and returns the top theta. Throws EmptyIndex.
  HnswSearchResult search(std::span<const double> q, std::size_t theta) const;

  bool empty() const { return vectors_.empty(); }
  std::size_t size() const { return vectors_.size(); }
  int top_level() const { return top_; }
  VertexId enter() const { return enter_; }
  int level(VertexId v) const { return levels_.at(v); }
  const HnswParams& params() const { return params_; }
  const VectorSet& vectors() const { return vectors_; }

  /// Adjacency of `v` in layer `l`, in connection order.
  const std::vector<VertexId>& neighbors(int l, VertexId v) const { return adj_.at(static_cast<std::size_t>(l)).at(v); }
  /// Layer `l` as a graph over all ids; non-members are isolated.
  OrderedGraph layer_graph(int l) const;
  /// Members of layer `l`, ascending.
  std::vector<VertexId> layer_members(int l) const;

  /// Throws ParameterError when some layer holds a vertex missing below it
  /// or an edge touches a non-member.
  void check_hierarchy() const;

 private:
  std::vector<Neighbor> search_layer(std::span<const double> q, VertexId enter, std::size_t ef, int l,
                                     std::vector<VertexId>* walk) const;

  HnswParams params_;
  VectorSet vectors_;
  std::vector<int> levels_;
  std::vector<std::vector<std::vector<VertexId>>> adj_;  // [layer][vertex]
  VertexId enter_ = 0;
  int top_ = -1;
};

}  // namespace spa2nn::hnsw
