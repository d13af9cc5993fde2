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

#include "spa2nn/hnsw.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "spa2nn/errors.hpp"

namespace spa2nn::hnsw {

Metric parse_metric(std::string_view name) {
  if (name == "l2" || name == "euclidean" || name == "squared-euclidean") return Metric::kSquaredEuclidean;
  if (name == "ip" || name == "inner-product") return Metric::kInnerProduct;
  if (name == "cosine") return Metric::kCosine;
  throw ParameterError("unknown metric '" + std::string(name) + "'");
}

std::string_view metric_name(Metric m) {
  switch (m) {
    case Metric::kSquaredEuclidean: return "squared-euclidean";
    case Metric::kInnerProduct: return "inner-product";
    case Metric::kCosine: return "cosine";
  }
  return "unknown";
}

VertexId VectorSet::add(std::span<const double> v) {
  if (dim_ == 0) dim_ = v.size();
  if (v.size() != dim_ || dim_ == 0) {
    throw ParameterError("vector of dimension " + std::to_string(v.size()) + " in a set of dimension " +
                         std::to_string(dim_));
  }
  data_.insert(data_.end(), v.begin(), v.end());
  return static_cast<VertexId>(size() - 1);
}

double distance(Metric m, std::span<const double> a, std::span<const double> b) {
  double acc = 0;
  switch (m) {
    case Metric::kSquaredEuclidean:
      for (std::size_t j = 0; j < a.size(); ++j) acc += (a[j] - b[j]) * (a[j] - b[j]);
      return acc;
    case Metric::kInnerProduct:
      for (std::size_t j = 0; j < a.size(); ++j) acc += a[j] * b[j];
      return -acc;
    case Metric::kCosine: {
      double na = 0, nb = 0;
      for (std::size_t j = 0; j < a.size(); ++j) {
        acc += a[j] * b[j];
        na += a[j] * a[j];
        nb += b[j] * b[j];
      }
      if (na == 0 || nb == 0) return 0;
      return -acc / std::sqrt(na * nb);
    }
  }
  return acc;
}

std::vector<double> normalized(std::span<const double> v) {
  double norm = 0;
  for (double x : v) norm += x * x;
  std::vector<double> out(v.begin(), v.end());
  if (norm > 0) {
    norm = std::sqrt(norm);
    for (double& x : out) x /= norm;
  }
  return out;
}

std::vector<Neighbor> brute_force_ann(std::span<const double> q, const VectorSet& data, std::size_t theta,
                                      Metric metric) {
  if (data.empty()) throw EmptyDataset("brute-force search over an empty dataset");
  if (theta == 0) throw ParameterError("theta must be at least 1");
  std::vector<Neighbor> all;
  all.reserve(data.size());
  for (VertexId i = 0; i < data.size(); ++i) all.push_back({distance(metric, q, data[i]), i});
  const std::size_t keep = std::min(theta, all.size());
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(keep), all.end());
  all.resize(keep);
  return all;
}

int level_from_uniform(double u, double mL) {
  if (!(u > 0.0 && u <= 1.0)) throw ParameterError("level draw must lie in (0, 1]");
  return static_cast<int>(std::floor(-std::log(u) * mL));
}

int sample_level(Prg& rng, double mL) { return level_from_uniform(rng.uniform_open_zero(), mL); }

int level_for_insert(std::uint64_t seed, std::uint64_t sigma, double mL) {
  Prg rng(seed, domain::kLevel, sigma);
  return sample_level(rng, mL);
}

std::vector<std::size_t> select_neighbors(std::span<const Neighbor> candidates, std::size_t m,
                                          NeighborSelection selection,
                                          const std::function<double(VertexId, VertexId)>& pairwise) {
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < candidates.size() && kept.size() < m; ++i) {
    if (selection == NeighborSelection::kHeuristic) {
      const bool shadowed = std::any_of(kept.begin(), kept.end(), [&](std::size_t r) {
        return pairwise(candidates[i].id, candidates[r].id) < candidates[i].distance;
      });
      if (shadowed) continue;
    }
    kept.push_back(i);
  }
  return kept;
}

void HnswParams::validate() const {
  if (M == 0) throw ParameterError("M must be at least 1");
  if (!(mL >= 0.0) || !std::isfinite(mL)) throw ParameterError("mL must be a finite non-negative number");
  if (ef_construction == 0 || ef_search == 0) throw ParameterError("ef values must be at least 1");
}

HnswIndex::HnswIndex(std::size_t dim, HnswParams params) : params_(params), vectors_(dim) { params_.validate(); }

VertexId HnswIndex::insert(std::span<const double> v) {
  return insert_with_level(v, level_for_insert(params_.seed, vectors_.size(), params_.mL));
}

VertexId HnswIndex::insert_with_level(std::span<const double> v, int level) {
  if (level < 0) throw ParameterError("level must be non-negative");
  const VertexId q = vectors_.add(v);
  levels_.push_back(level);
  while (adj_.size() <= static_cast<std::size_t>(level)) adj_.emplace_back();
  for (auto& layer : adj_) layer.resize(vectors_.size());

  if (top_ < 0) {
    enter_ = q;
    top_ = level;
    return q;
  }
  const auto qv = vectors_[q];
  VertexId ep = enter_;
  for (int l = top_; l > level; --l) ep = search_layer(qv, ep, 1, l, nullptr).front().id;
  const auto pairwise = [this](VertexId a, VertexId b) { return distance(params_.metric, vectors_[a], vectors_[b]); };
  for (int l = std::min(top_, level); l >= 0; --l) {
    const auto found = search_layer(qv, ep, params_.ef_construction, l, nullptr);
    auto& layer = adj_[static_cast<std::size_t>(l)];
    for (std::size_t i : select_neighbors(found, params_.M, params_.selection, pairwise)) {
      layer[q].push_back(found[i].id);
      layer[found[i].id].push_back(q);
    }
    ep = found.front().id;
  }
  if (level > top_) {
    top_ = level;
    enter_ = q;
  }
  return q;
}

std::vector<Neighbor> HnswIndex::search_layer(std::span<const double> q, VertexId enter, std::size_t ef, int l,
                                              std::vector<VertexId>* walk) const {
  const auto& layer = adj_[static_cast<std::size_t>(l)];
  std::vector<bool> visited(vectors_.size(), false);
  std::set<Neighbor> candidates, found;
  const Neighbor first{distance(params_.metric, q, vectors_[enter]), enter};
  visited[enter] = true;
  if (walk) walk->push_back(enter);
  candidates.insert(first);
  found.insert(first);
  while (!candidates.empty()) {
    const Neighbor c = *candidates.begin();
    candidates.erase(candidates.begin());
    if (c.distance > found.rbegin()->distance) break;
    for (VertexId e : layer[c.id]) {
      if (visited[e]) continue;
      visited[e] = true;
      if (walk) walk->push_back(e);
      const Neighbor cand{distance(params_.metric, q, vectors_[e]), e};
      if (found.size() >= ef && !(cand.distance < found.rbegin()->distance)) continue;
      candidates.insert(cand);
      found.insert(cand);
      if (found.size() > ef) found.erase(std::prev(found.end()));
    }
  }
  return {found.begin(), found.end()};
}

HnswSearchResult HnswIndex::search(std::span<const double> q, std::size_t theta) const {
  if (empty()) throw EmptyIndex("search on an empty index");
  if (theta == 0) throw ParameterError("theta must be at least 1");
  if (q.size() != vectors_.dim()) throw ParameterError("query dimension mismatch");
  HnswSearchResult out;
  VertexId ep = enter_;
  for (int l = top_; l > 0; --l) ep = search_layer(q, ep, 1, l, &out.walk).front().id;
  out.nearest = search_layer(q, ep, std::max(theta, params_.ef_search), 0, &out.walk);
  if (out.nearest.size() > theta) out.nearest.resize(theta);
  return out;
}

OrderedGraph HnswIndex::layer_graph(int l) const {
  OrderedGraph g(vectors_.size());
  const auto& layer = adj_.at(static_cast<std::size_t>(l));
  for (VertexId u = 0; u < layer.size(); ++u) {
    for (VertexId v : layer[u]) g.add_edge(u, v);
  }
  return g;
}

std::vector<VertexId> HnswIndex::layer_members(int l) const {
  std::vector<VertexId> out;
  for (VertexId v = 0; v < levels_.size(); ++v) {
    if (levels_[v] >= l) out.push_back(v);
  }
  return out;
}

void HnswIndex::check_hierarchy() const {
  for (std::size_t l = 0; l < adj_.size(); ++l) {
    for (VertexId v = 0; v < adj_[l].size(); ++v) {
      const bool member = levels_[v] >= static_cast<int>(l);
      if (!member && !adj_[l][v].empty()) {
        throw ParameterError("vertex " + std::to_string(v) + " has edges in layer " + std::to_string(l) +
                             " above its level");
      }
      for (VertexId u : adj_[l][v]) {
        if (levels_[u] < static_cast<int>(l)) {
          throw ParameterError("edge to non-member " + std::to_string(u) + " in layer " + std::to_string(l));
        }
      }
    }
  }
}

}  // namespace spa2nn::hnsw
