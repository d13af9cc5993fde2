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

#include "spa2nn/protocol.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>
#include <unordered_set>

#include <nlohmann/json.hpp>
#include "spa2nn/errors.hpp"

namespace spa2nn::sst {

using bitgraph::Bitgraph;
using bitgraph::Location;
using leakage::Scheme;
using leakage::SchemeCounters;
using ss::FieldElement;
using ss::ShareVector;
using ss::SharedScalar;

namespace {

constexpr int kSnapshotVersion = 1;

/// Inserts `item` into the sorted range `list` with a binary search driven
/// by `before`, which may be an interactive comparison.
template <typename T, typename Before>
void sorted_insert(std::vector<T>& list, T item, Before&& before) {
  std::size_t lo = 0, hi = list.size();
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (before(list[mid], item)) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  list.insert(list.begin() + static_cast<std::ptrdiff_t>(lo), std::move(item));
}

void stamp_shape(SchemeCounters& c, const ss::FieldParams& f, std::size_t dim) {
  c.d = dim;
  c.n = static_cast<std::uint64_t>(f.n);
  c.t = static_cast<std::uint64_t>(f.t);
}

std::vector<double> open_and_decode(Session& s, const ShareVector& v, PartyId querier, SchemeCounters& c) {
  const auto opened = s.open_to(v, querier, c);
  return ss::decode_vector(opened, s.field());
}

void check_party(const ss::FieldParams& f, PartyId u, const char* role) {
  if (u < 0 || u >= f.n) throw ParameterError(std::string(role) + " " + std::to_string(u) + " is not a party");
}

}  // namespace

// ---------------------------------------------------------------------------
// Parameters and key material

std::uint64_t ProtocolParams::effective_coord_bound() const {
  return coord_bound != 0 ? coord_bound : field.scale();
}

void ProtocolParams::validate(std::size_t dim) const {
  field.validate();
  index.validate();
  if (dim == 0) throw ParameterError("dimension must be at least 1");
  const unsigned __int128 bound = effective_coord_bound();
  const unsigned __int128 term = index.metric == hnsw::Metric::kSquaredEuclidean ? 2 * bound : bound;
  if (static_cast<unsigned __int128>(dim) * term * term >= field.p / 2) {
    throw ParameterError("distances over " + std::to_string(dim) +
                         " coordinates may exceed the signed field range; use a larger p or a smaller rho");
  }
}

ProtocolState ProtocolState::setup(std::uint64_t lambda_seed, const ss::FieldParams& params) {
  params.validate();
  ProtocolState st;
  st.params_ = params;
  for (int u = 0; u < params.n; ++u) {
    st.keys_.push_back(Prg(lambda_seed, domain::kPartySeed, static_cast<std::uint64_t>(u)).next());
  }
  return st;
}

Prg ProtocolState::insert_stream(PartyId owner) const { return Prg(party_key(owner), domain::kInsertKey, sigma_); }

Prg ProtocolState::search_stream(PartyId querier, std::uint64_t counter) const {
  return Prg(party_key(querier), domain::kSearchKey, counter);
}

Prg ProtocolState::reshare_stream(PartyId owner, std::uint64_t counter) const {
  return Prg(party_key(owner), domain::kReshare, counter);
}

std::vector<double> twin_coordinates(std::span<const double> v, const ProtocolParams& params) {
  if (params.index.metric == hnsw::Metric::kCosine) {
    const auto unit = hnsw::normalized(v);
    return ss::quantize_to_integers(unit, params.field.rho);
  }
  return ss::quantize_to_integers(v, params.field.rho);
}

hnsw::Metric twin_metric(hnsw::Metric m) {
  return m == hnsw::Metric::kCosine ? hnsw::Metric::kInnerProduct : m;
}

// ---------------------------------------------------------------------------
// Session

Session::Session(ProtocolParams params, std::size_t dim, std::uint64_t seed)
    : params_(params),
      dim_(dim),
      seed_(seed),
      state_((params.validate(dim), ProtocolState::setup(seed, params.field))),
      network_(params.field.n, params.retain_log),
      dealer_(params.field, seed) {
  for (Scheme s : {Scheme::kBasic, Scheme::kMirror, Scheme::kReal}) stamp_shape(ledger_.scheme(s), params_.field, dim_);
}

std::vector<FieldElement> Session::encode(std::span<const double> plain) const {
  if (plain.size() != dim_) {
    throw ParameterError("vector of dimension " + std::to_string(plain.size()) + ", expected " + std::to_string(dim_));
  }
  std::vector<FieldElement> out;
  if (params_.index.metric == hnsw::Metric::kCosine) {
    out = ss::encode_vector(hnsw::normalized(plain), params_.field);
  } else {
    out = ss::encode_vector(plain, params_.field);
  }
  const ss::Field field(params_.field.p);
  const auto bound = static_cast<std::int64_t>(params_.effective_coord_bound());
  for (std::size_t j = 0; j < out.size(); ++j) {
    const std::int64_t x = field.to_signed(out[j]);
    if (x > bound || x < -bound) {
      throw OverflowError("coordinate " + std::to_string(j) + " exceeds the public coordinate bound " +
                          std::to_string(bound));
    }
  }
  return out;
}

ShareVector Session::share_stored(PartyId owner, std::span<const FieldElement> encoded, Prg& rng,
                                  SchemeCounters& counters) {
  check_party(params_.field, owner, "owner");
  ShareVector shared = ShareVector::share(encoded, params_.field, rng);
  network_.next_round();
  for (int u = 0; u < params_.field.n; ++u) {
    if (u != owner) network_.send(owner, {u}, shared.party(u));
  }
  counters.share_ops += encoded.size() * static_cast<std::uint64_t>(params_.field.n);
  return shared;
}

ShareVector Session::reshare(PartyId owner, std::span<const FieldElement> encoded, SchemeCounters& counters) {
  Prg rng = state_.reshare_stream(owner, reshare_counter_++);
  return share_stored(owner, encoded, rng, counters);
}

ShareVector Session::share_transient(PartyId from, std::span<const FieldElement> encoded, Prg& rng,
                                     SchemeCounters& counters) {
  check_party(params_.field, from, "party");
  ShareVector shared = ShareVector::share(encoded, params_.field, rng);
  network_.next_round();
  for (int u = 0; u < params_.field.n; ++u) {
    if (u != from) network_.send(from, {u}, shared.party(u));
  }
  counters.query_share_ops += encoded.size() * static_cast<std::uint64_t>(params_.field.n);
  return shared;
}

ShareVector Session::share_query(PartyId querier, std::span<const double> q, SchemeCounters& counters) {
  check_party(params_.field, querier, "querier");
  const auto encoded = encode(q);
  Prg rng = state_.search_stream(querier, query_counter_++);
  return share_transient(querier, encoded, rng, counters);
}

SharedScalar Session::distance(const ShareVector& a, const ShareVector& b, SchemeCounters& counters) {
  if (params_.index.metric == hnsw::Metric::kSquaredEuclidean) {
    return ss::ac_distance(a, b, ss::SharedMetric::kSquaredEuclidean, dealer_, network_,
                           params_.effective_coord_bound(), &counters);
  }
  // Larger inner products are nearer, so the shared distance is the negated dot product.
  return ss::share_neg(ss::ac_distance(a, b, ss::SharedMetric::kInnerProduct, dealer_, network_,
                                       params_.effective_coord_bound(), &counters));
}

int Session::compare(const SharedScalar& a, const SharedScalar& b, PartyId coordinator, SchemeCounters& counters) {
  return ss::ac_sign(a, b, coordinator, network_, {}, &counters);
}

std::vector<FieldElement> Session::open_to(const ShareVector& v, PartyId receiver, SchemeCounters& counters) {
  check_party(params_.field, receiver, "receiver");
  network_.next_round();
  for (int u = 0; u < params_.field.n; ++u) {
    if (u != receiver) network_.send(u, {receiver}, v.party(u));
  }
  counters.recon_ops += v.dim();
  return v.reconstruct();
}

void Session::announce(PartyId from, std::span<const std::uint64_t> words) {
  network_.next_round();
  network_.broadcast(from, words);
}

// ---------------------------------------------------------------------------
// Basic scheme

VertexId BasicDatabase::insert(PartyId owner, std::span<const double> plain) {
  auto& counters = s_.ledger().scheme(Scheme::kBasic);
  auto encoded = s_.encode(plain);
  Prg rng = s_.state().insert_stream(owner);
  stored_.push_back(s_.share_stored(owner, encoded, rng, counters));
  owners_.push_back({owner, std::move(encoded)});
  s_.state().advance();
  counters.vertices = stored_.size();
  return static_cast<VertexId>(stored_.size() - 1);
}

SearchOutput BasicDatabase::search(PartyId querier, std::span<const double> q, std::size_t theta) {
  if (stored_.empty()) throw EmptyDataset("search over an empty shared dataset");
  if (theta == 0) throw ParameterError("theta must be at least 1");
  auto& counters = s_.ledger().scheme(Scheme::kBasic);
  const ShareVector qs = s_.share_query(querier, q, counters);

  struct Scored {
    SharedScalar dist;
    VertexId id;
  };
  const auto before = [&](const Scored& a, const Scored& b) {
    const int sign = s_.compare(a.dist, b.dist, querier, counters);
    return sign != 0 ? sign < 0 : a.id < b.id;
  };
  std::vector<Scored> top;
  for (VertexId v = 0; v < stored_.size(); ++v) {
    Scored cand{s_.distance(qs, stored_[v], counters), v};
    if (top.size() == theta && !before(cand, top.back())) continue;
    sorted_insert(top, std::move(cand), before);
    if (top.size() > theta) top.pop_back();
  }
  SearchOutput out;
  for (const Scored& r : top) {
    out.ids.push_back(r.id);
    out.vectors.push_back(open_and_decode(s_, stored_[r.id], querier, counters));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Mirror scheme

bool MirrorDatabase::nearer(const Found& a, const Found& b, PartyId coordinator) {
  const int sign = s_.compare(a.dist, b.dist, coordinator, s_.ledger().scheme(Scheme::kMirror));
  return sign != 0 ? sign < 0 : a.vertex < b.vertex;
}

std::vector<MirrorDatabase::Found> MirrorDatabase::search_layer(const ShareVector& q, VertexId enter, std::size_t ef,
                                                                int l, PartyId coordinator) {
  auto& counters = s_.ledger().scheme(Scheme::kMirror);
  const auto& layer = adj_[static_cast<std::size_t>(l)];
  const auto before = [&](const Found& a, const Found& b) { return nearer(a, b, coordinator); };
  std::vector<bool> visited(own_.size(), false);
  std::vector<Found> candidates, found;
  Found first{s_.distance(q, own_[enter], counters), enter};
  visited[enter] = true;
  candidates.push_back(first);
  found.push_back(std::move(first));
  while (!candidates.empty()) {
    const Found c = candidates.front();
    candidates.erase(candidates.begin());
    if (s_.compare(c.dist, found.back().dist, coordinator, counters) > 0) break;
    for (const Link& link : layer[c.vertex]) {
      if (visited[link.to]) continue;
      visited[link.to] = true;
      Found cand{s_.distance(q, link.copy, counters), link.to};
      if (found.size() >= ef && s_.compare(cand.dist, found.back().dist, coordinator, counters) >= 0) continue;
      sorted_insert(candidates, cand, before);
      sorted_insert(found, std::move(cand), before);
      if (found.size() > ef) found.pop_back();
    }
  }
  return found;
}

VertexId MirrorDatabase::insert(PartyId owner, std::span<const double> plain) {
  auto& counters = s_.ledger().scheme(Scheme::kMirror);
  const auto& ip = s_.params().index;
  auto encoded = s_.encode(plain);
  const int level = hnsw::level_for_insert(ip.seed, own_.size(), ip.mL);
  Prg rng = s_.state().insert_stream(owner);
  own_.push_back(s_.share_stored(owner, encoded, rng, counters));
  owners_.push_back({owner, std::move(encoded)});
  levels_.push_back(level);
  const auto q = static_cast<VertexId>(own_.size() - 1);
  while (adj_.size() <= static_cast<std::size_t>(level)) adj_.emplace_back();
  for (auto& layer : adj_) layer.resize(own_.size());

  if (top_ < 0) {
    enter_ = q;
    top_ = level;
  } else {
    VertexId ep = enter_;
    for (int l = top_; l > level; --l) ep = search_layer(own_[q], ep, 1, l, owner).front().vertex;
    for (int l = std::min(top_, level); l >= 0; --l) {
      const auto found = search_layer(own_[q], ep, ip.ef_construction, l, owner);
      std::vector<std::size_t> kept;
      for (std::size_t i = 0; i < found.size() && kept.size() < ip.M; ++i) {
        if (ip.selection == hnsw::NeighborSelection::kHeuristic) {
          bool shadowed = false;
          for (std::size_t r : kept) {
            const auto pair = s_.distance(own_[found[i].vertex], own_[found[r].vertex], counters);
            if (s_.compare(pair, found[i].dist, owner, counters) < 0) {
              shadowed = true;
              break;
            }
          }
          if (shadowed) continue;
        }
        kept.push_back(i);
      }
      auto& layer = adj_[static_cast<std::size_t>(l)];
      for (std::size_t i : kept) {
        const VertexId e = found[i].vertex;
        const OwnerRecord& eo = owners_[e];
        layer[q].push_back({e, s_.reshare(eo.owner, eo.encoded, counters)});
        layer[e].push_back({q, s_.reshare(owner, owners_[q].encoded, counters)});
        const std::uint64_t words[] = {static_cast<std::uint64_t>(l), q, e};
        s_.announce(owner, words);
      }
      counters.edges += kept.size();
      ep = found.front().vertex;
    }
    if (level > top_) {
      top_ = level;
      enter_ = q;
    }
  }
  s_.state().advance();
  counters.vertices = own_.size();
  return q;
}

SearchOutput MirrorDatabase::search(PartyId querier, std::span<const double> q, std::size_t theta) {
  if (own_.empty()) throw EmptyIndex("search on an empty shared index");
  if (theta == 0) throw ParameterError("theta must be at least 1");
  auto& counters = s_.ledger().scheme(Scheme::kMirror);
  const ShareVector qs = s_.share_query(querier, q, counters);
  VertexId ep = enter_;
  for (int l = top_; l > 0; --l) ep = search_layer(qs, ep, 1, l, querier).front().vertex;
  auto found = search_layer(qs, ep, std::max(theta, s_.params().index.ef_search), 0, querier);
  if (found.size() > theta) found.resize(theta);
  SearchOutput out;
  for (const Found& f : found) {
    out.ids.push_back(f.vertex);
    out.vectors.push_back(open_and_decode(s_, own_[f.vertex], querier, counters));
  }
  return out;
}

OrderedGraph MirrorDatabase::layer_graph(int l) const {
  OrderedGraph g(own_.size());
  const auto& layer = adj_.at(static_cast<std::size_t>(l));
  for (VertexId u = 0; u < layer.size(); ++u) {
    for (const Link& link : layer[u]) g.add_edge(u, link.to);
  }
  return g;
}

std::size_t MirrorDatabase::directed_records() const {
  std::size_t total = 0;
  for (const auto& layer : adj_) {
    for (const auto& links : layer) total += links.size();
  }
  return total;
}

// ---------------------------------------------------------------------------
// Real scheme

const ShareVector& CollabEDB::payload(int l, Location loc) const {
  return payload_.at(static_cast<std::size_t>(l)).at(loc.branch).at(loc.seq);
}

std::size_t CollabEDB::total_entries() const {
  std::size_t total = 0;
  for (const Bitgraph& h : layers_) total += h.entry_count();
  return total;
}

bool CollabEDB::nearer(const SharedCandidate& a, const SharedCandidate& b, PartyId coordinator) {
  const int sign = s_.compare(a.dist, b.dist, coordinator, s_.ledger().scheme(Scheme::kReal));
  if (sign != 0) return sign < 0;
  if (a.vertex != b.vertex) return a.vertex < b.vertex;
  return a.loc < b.loc;
}

std::vector<SharedCandidate> CollabEDB::search_layer(const ShareVector& q, std::size_t theta, int l, Location enter,
                                                     PartyId coordinator, std::vector<Location>* walk,
                                                     std::uint64_t* detours) {
  if (l < 0 || l > top_level() || layers_[static_cast<std::size_t>(l)].empty()) {
    throw EmptyLayer("search on empty layer " + std::to_string(l));
  }
  if (theta == 0) throw ParameterError("theta must be at least 1");
  auto& counters = s_.ledger().scheme(Scheme::kReal);
  Bitgraph& h = layers_[static_cast<std::size_t>(l)];
  const auto before = [&](const SharedCandidate& a, const SharedCandidate& b) { return nearer(a, b, coordinator); };

  bitgraph::VisitGuard visits(h);
  std::vector<SharedCandidate> candidates, found;
  std::unordered_set<VertexId> found_vertices;
  std::vector<Location> neighbors;
  std::vector<std::uint64_t> marks;

  SharedCandidate first{s_.distance(q, payload(l, enter), counters), h.entry(enter).vertex, enter};
  visits.mark(enter);
  if (walk) walk->push_back(enter);
  candidates.push_back(first);
  found_vertices.insert(first.vertex);
  found.push_back(std::move(first));

  const auto pop_nearest = [&] {
    SharedCandidate c = std::move(candidates.front());
    candidates.erase(candidates.begin());
    return c;
  };

  while (!candidates.empty()) {
    SharedCandidate c = pop_nearest();
    if (s_.compare(c.dist, found.back().dist, coordinator, counters) > 0) break;
    // post_d and vertex locations are public metadata, so the detour test
    // is a local check.
    while (!h.reaches_forward(c.vertex) && !candidates.empty()) {
      c = pop_nearest();
      if (detours) ++*detours;
    }
    neighbors.clear();
    marks.clear();
    for (const Location& loc : h.locations(c.vertex)) {
      if (visits.mark(loc)) marks.insert(marks.end(), {loc.branch, loc.seq});
      const auto hc = bitgraph::honeycomb_neighbors(h, loc);
      neighbors.insert(neighbors.end(), hc.begin(), hc.end());
    }
    for (const Location& nb : neighbors) {
      if (!visits.mark(nb)) continue;
      marks.insert(marks.end(), {nb.branch, nb.seq});
      if (walk) walk->push_back(nb);
      SharedCandidate cand{s_.distance(q, payload(l, nb), counters), h.entry(nb).vertex, nb};
      if (found.size() >= theta && s_.compare(cand.dist, found.back().dist, coordinator, counters) >= 0) continue;
      sorted_insert(candidates, cand, before);
      if (!found_vertices.insert(cand.vertex).second) continue;
      sorted_insert(found, std::move(cand), before);
      if (found.size() > theta) {
        found_vertices.erase(found.back().vertex);
        found.pop_back();
      }
    }
    // The coordinator tells every party which visit bits this expansion set.
    if (!marks.empty()) s_.announce(coordinator, marks);
  }
  return found;
}

void CollabEDB::attach_payloads(int l, const bitgraph::InsertDelta& delta) {
  auto& counters = s_.ledger().scheme(Scheme::kReal);
  auto& table = payload_[static_cast<std::size_t>(l)];
  const Bitgraph& h = layers_[static_cast<std::size_t>(l)];
  for (const Location& loc : delta.created) {
    if (table.size() <= loc.branch) table.resize(loc.branch + 1);
    auto& branch = table[loc.branch];
    if (branch.size() <= loc.seq) branch.resize(loc.seq + 1);
    const OwnerRecord& rec = owners_.at(h.entry(loc).vertex);
    branch[loc.seq] = s_.reshare(rec.owner, rec.encoded, counters);
  }
}

std::vector<bitgraph::InsertDelta> CollabEDB::insert_layer(VertexId q, int l, std::span<const Location> neighbors,
                                                           PartyId coordinator) {
  if (q >= owners_.size()) throw UnknownElement("vertex " + std::to_string(q) + " was not placed by an owner");
  if (l < 0) throw ParameterError("layer must be non-negative");
  while (layers_.size() <= static_cast<std::size_t>(l)) {
    layers_.emplace_back();
    payload_.emplace_back();
  }
  Bitgraph& h = layers_[static_cast<std::size_t>(l)];
  auto deltas = h.insert_at(q, neighbors);
  std::vector<std::uint64_t> words{static_cast<std::uint64_t>(l), q};
  for (const auto& delta : deltas) {
    attach_payloads(l, delta);
    for (const Location& loc : delta.created) words.insert(words.end(), {loc.branch, loc.seq});
    for (const Location& loc : delta.extended) words.insert(words.end(), {loc.branch, loc.seq});
  }
  s_.announce(coordinator, words);
  auto& counters = s_.ledger().scheme(Scheme::kReal);
  std::unordered_set<VertexId> distinct;
  for (const Location& loc : neighbors) distinct.insert(h.entry(loc).vertex);
  counters.edges += distinct.size();
  return deltas;
}

VertexId CollabEDB::place(PartyId owner, std::span<const double> plain, int level) {
  if (!extendable_) throw ParameterError("a database restored from a snapshot has no owner plaintext to extend it");
  check_party(s_.field(), owner, "owner");
  if (level < 0) throw ParameterError("level must be non-negative");
  owners_.push_back({owner, s_.encode(plain)});
  levels_.push_back(level);
  return static_cast<VertexId>(owners_.size() - 1);
}

VertexId CollabEDB::insert(PartyId owner, std::span<const double> plain) {
  auto& counters = s_.ledger().scheme(Scheme::kReal);
  const auto& ip = s_.params().index;
  const int level = hnsw::level_for_insert(ip.seed, owners_.size(), ip.mL);
  const VertexId q = place(owner, plain, level);
  // The owner's sharing of q drives the placement searches. Stored entries
  // get their own fresh sharings, one per entry.
  Prg rng = s_.state().insert_stream(owner);
  const ShareVector qs = s_.share_transient(owner, owners_[q].encoded, rng, counters);

  const int top = top_level();
  if (top >= 0) {
    VertexId ep = enter_;
    for (int l = top; l > level; --l) {
      const Location at = layers_[static_cast<std::size_t>(l)].entry_location(ep);
      ep = search_layer(qs, 1, l, at, owner).front().vertex;
    }
    for (int l = std::min(top, level); l >= 0; --l) {
      const Bitgraph& h = layers_[static_cast<std::size_t>(l)];
      const auto found = search_layer(qs, ip.ef_construction, l, h.entry_location(ep), owner);
      std::vector<std::size_t> kept;
      for (std::size_t i = 0; i < found.size() && kept.size() < ip.M; ++i) {
        if (ip.selection == hnsw::NeighborSelection::kHeuristic) {
          bool shadowed = false;
          for (std::size_t r : kept) {
            const auto pair = s_.distance(payload(l, found[i].loc), payload(l, found[r].loc), counters);
            if (s_.compare(pair, found[i].dist, owner, counters) < 0) {
              shadowed = true;
              break;
            }
          }
          if (shadowed) continue;
        }
        kept.push_back(i);
      }
      std::vector<Location> locs;
      for (std::size_t i : kept) locs.push_back(h.attach_location(found[i].vertex, found[i].loc));
      insert_layer(q, l, locs, owner);
      ep = found.front().vertex;
    }
  }
  for (int l = top + 1; l <= level; ++l) insert_layer(q, l, {}, owner);
  if (level > top) enter_ = q;
  s_.state().advance();

  counters.vertices = owners_.size();
  counters.branches = 0;
  counters.duplicates = 0;
  for (const Bitgraph& h : layers_) {
    counters.branches += h.branches().size();
    counters.duplicates += h.duplicates();
  }
  return q;
}

SearchOutput CollabEDB::search(PartyId querier, std::span<const double> q, std::size_t theta) {
  if (empty()) throw EmptyIndex("search on an empty shared index");
  if (theta == 0) throw ParameterError("theta must be at least 1");
  auto& counters = s_.ledger().scheme(Scheme::kReal);
  const ShareVector qs = s_.share_query(querier, q, counters);
  SearchOutput out;
  VertexId ep = enter_;
  for (int l = top_level(); l > 0; --l) {
    const Location at = layers_[static_cast<std::size_t>(l)].entry_location(ep);
    ep = search_layer(qs, 1, l, at, querier, &out.walk, &out.detours).front().vertex;
  }
  const Location at = layers_[0].entry_location(ep);
  auto found = search_layer(qs, std::max(theta, s_.params().index.ef_search), 0, at, querier, &out.walk,
                            &out.detours);
  if (found.size() > theta) found.resize(theta);
  for (const SharedCandidate& c : found) {
    out.ids.push_back(c.vertex);
    out.vectors.push_back(open_and_decode(s_, payload(0, c.loc), querier, counters));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Snapshots

void CollabEDB::save(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  const auto& f = s_.field();
  nlohmann::json meta;
  meta["format"] = "spa2nn-cedb";
  meta["version"] = kSnapshotVersion;
  meta["field"] = {{"p", f.p}, {"k", f.k}, {"rho", f.rho}, {"n", f.n}, {"t", f.t}};
  meta["dim"] = s_.dim();
  meta["enter"] = enter_;
  meta["levels"] = levels_;
  std::vector<PartyId> owners;
  for (const OwnerRecord& r : owners_) owners.push_back(r.owner);
  meta["owners"] = owners;
  std::vector<std::string> layers;
  for (const Bitgraph& h : layers_) layers.push_back(bitgraph::to_text(h));
  meta["layers"] = layers;
  std::ofstream(dir / "meta.json") << meta.dump(2) << '\n';

  for (int u = 0; u < f.n; ++u) {
    std::ofstream out(dir / ("party_" + std::to_string(u) + ".shares"));
    out << "# spa2nn shares v" << kSnapshotVersion << " party " << u << '\n';
    for (std::size_t l = 0; l < layers_.size(); ++l) {
      for (const auto& b : layers_[l].branches()) {
        for (const auto& e : b.entries) {
          out << l << ' ' << b.id << ' ' << e.seq;
          for (FieldElement x : payload(static_cast<int>(l), {b.id, e.seq}).party(u)) out << ' ' << x;
          out << '\n';
        }
      }
    }
  }
}

CollabEDB CollabEDB::load(Session& session, const std::filesystem::path& dir) {
  std::ifstream meta_in(dir / "meta.json");
  if (!meta_in) throw FormatError("cannot open " + (dir / "meta.json").string());
  nlohmann::json meta;
  try {
    meta = nlohmann::json::parse(meta_in);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("meta.json: ") + e.what());
  }
  try {
    if (meta.at("format") != "spa2nn-cedb" || meta.at("version") != kSnapshotVersion) {
      throw FormatError("meta.json: unsupported snapshot format or version");
    }
    const auto& mf = meta.at("field");
    const auto& f = session.field();
    if (mf.at("p") != f.p || mf.at("rho") != f.rho || mf.at("n") != f.n || mf.at("t") != f.t ||
        meta.at("dim") != session.dim()) {
      throw ParameterError("snapshot parameters differ from the session parameters");
    }
    CollabEDB db(session);
    db.extendable_ = false;
    db.enter_ = meta.at("enter").get<VertexId>();
    db.levels_ = meta.at("levels").get<std::vector<int>>();
    for (PartyId o : meta.at("owners").get<std::vector<PartyId>>()) db.owners_.push_back({o, {}});
    for (const auto& text : meta.at("layers")) db.layers_.push_back(bitgraph::from_text(text.get<std::string>()));
    db.payload_.resize(db.layers_.size());
    for (std::size_t l = 0; l < db.layers_.size(); ++l) {
      for (const auto& b : db.layers_[l].branches()) {
        db.payload_[l].emplace_back(b.entries.size(), ShareVector(f, session.dim()));
      }
    }
    for (int u = 0; u < f.n; ++u) {
      const auto path = dir / ("party_" + std::to_string(u) + ".shares");
      std::ifstream in(path);
      if (!in) throw FormatError("cannot open " + path.string());
      std::string line;
      std::size_t lineno = 0, rows = 0;
      while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::size_t l = 0;
        std::uint32_t branch = 0, seq = 0;
        if (!(ls >> l >> branch >> seq) || l >= db.payload_.size() || branch >= db.payload_[l].size() ||
            seq >= db.payload_[l][branch].size()) {
          throw FormatError(path.filename().string() + " line " + std::to_string(lineno) + ": bad location");
        }
        auto shares = db.payload_[l][branch][seq].party(u);
        for (auto& x : shares) {
          if (!(ls >> x) || x >= f.p) {
            throw FormatError(path.filename().string() + " line " + std::to_string(lineno) + ": bad share value");
          }
        }
        ++rows;
      }
      if (rows != db.total_entries()) {
        throw FormatError(path.filename().string() + ": expected " + std::to_string(db.total_entries()) + " rows");
      }
    }
    return db;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("meta.json: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Index sharing cost models

std::size_t share_naive_index(Session& s, const OrderedGraph& g, std::span<const std::vector<FieldElement>> data,
                              SchemeCounters& counters) {
  std::size_t records = 0;
  for (VertexId u = 0; u < g.vertex_count(); ++u) {
    for (VertexId v : g.neighbors(u)) {
      s.reshare(static_cast<PartyId>(v % static_cast<VertexId>(s.field().n)), data[v], counters);
      ++records;
    }
  }
  counters.vertices = g.vertex_count();
  counters.edges = g.edge_count();
  return records;
}

std::size_t share_bitgraph_index(Session& s, const Bitgraph& h, std::span<const std::vector<FieldElement>> data,
                                 SchemeCounters& counters) {
  std::size_t records = 0;
  for (const auto& b : h.branches()) {
    for (const auto& e : b.entries) {
      s.reshare(static_cast<PartyId>(e.vertex % static_cast<VertexId>(s.field().n)), data[e.vertex], counters);
      ++records;
    }
  }
  counters.vertices = h.vertex_count();
  counters.branches = h.branches().size();
  counters.duplicates = h.duplicates();
  return records;
}

}  // namespace spa2nn::sst
