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
#include <filesystem>
#include <span>
#include <vector>

#include "spa2nn/bitgraph.hpp"
#include "spa2nn/circuit.hpp"
#include "spa2nn/cost_ledger.hpp"
#include "spa2nn/graph.hpp"
#include "spa2nn/hnsw.hpp"
#include "spa2nn/network.hpp"
#include "spa2nn/shamir.hpp"

namespace spa2nn::sst {

using ss::PartyId;

struct ProtocolParams {
  ss::FieldParams field;
  hnsw::HnswParams index;
  /// Public bound on |encoded coordinate|. Zero means 10^rho, which covers
  /// data in [-1, 1]^d.
  std::uint64_t coord_bound = 0;
  /// Keep every message record, not only the transcript digest.
  bool retain_log = false;

  std::uint64_t effective_coord_bound() const;
  /// Validates the field and index parameters and that a distance over
  /// `dim` coordinates stays inside the signed field range.
  void validate(std::size_t dim) const;
};

/// Key material and the state counter agreed by all parties after setup.
class ProtocolState {
 public:
  /// Derives one key per party from `lambda_seed`. Throws ParameterError on
  /// invalid field parameters (including t > n).
  static ProtocolState setup(std::uint64_t lambda_seed, const ss::FieldParams& params);

  const ss::FieldParams& params() const { return params_; }
  std::uint64_t sigma() const { return sigma_; }
  /// Marks one completed insert.
  void advance() { ++sigma_; }
  std::uint64_t party_key(PartyId u) const { return keys_.at(static_cast<std::size_t>(u)); }

  /// Randomness for the owner's sharing of the vector inserted at `sigma`.
  Prg insert_stream(PartyId owner) const;
  /// Randomness for a querier's sharing of its `counter`-th query.
  Prg search_stream(PartyId querier, std::uint64_t counter) const;
  /// Randomness for an owner's `counter`-th re-sharing of a stored vector.
  Prg reshare_stream(PartyId owner, std::uint64_t counter) const;

  bool operator==(const ProtocolState&) const = default;

 private:
  ss::FieldParams params_;
  std::vector<std::uint64_t> keys_;
  std::uint64_t sigma_ = 0;
};

/// Plaintext coordinates every scheme and its plaintext twin agree on:
/// normalized first for cosine, then rounded to the fixed-point grid and
/// returned as exact integers.
std::vector<double> twin_coordinates(std::span<const double> v, const ProtocolParams& params);
/// The metric the twins use on twin_coordinates (cosine becomes inner product).
hnsw::Metric twin_metric(hnsw::Metric m);

/// Shared runtime for the three schemes: parameters, keys, network,
/// dealer and cost counters.
class Session {
 public:
  Session(ProtocolParams params, std::size_t dim, std::uint64_t seed);

  const ProtocolParams& params() const { return params_; }
  const ss::FieldParams& field() const { return params_.field; }
  std::size_t dim() const { return dim_; }
  std::uint64_t seed() const { return seed_; }
  ProtocolState& state() { return state_; }
  const ProtocolState& state() const { return state_; }
  net::PartyNetwork& network() { return network_; }
  const net::PartyNetwork& network() const { return network_; }
  leakage::CostLedger& ledger() { return ledger_; }
  const leakage::CostLedger& ledger() const { return ledger_; }

  /// Owner-side encoding. Throws OverflowError outside the coordinate bound.
  std::vector<ss::FieldElement> encode(std::span<const double> plain) const;

  /// A fresh sharing of an owner's encoded vector, distributed by the owner.
  ss::ShareVector share_stored(PartyId owner, std::span<const ss::FieldElement> encoded, Prg& rng,
                               leakage::SchemeCounters& counters);
  /// Re-shares a stored vector by its owner with the next re-share stream.
  ss::ShareVector reshare(PartyId owner, std::span<const ss::FieldElement> encoded,
                          leakage::SchemeCounters& counters);
  /// A sharing used only while one operation runs (a query, or a vector
  /// being placed). Counted in `query_share_ops`.
  ss::ShareVector share_transient(PartyId from, std::span<const ss::FieldElement> encoded, Prg& rng,
                                  leakage::SchemeCounters& counters);
  /// The querier's sharing of a query.
  ss::ShareVector share_query(PartyId querier, std::span<const double> q, leakage::SchemeCounters& counters);

  /// Shared distance (smaller is nearer for every metric).
  ss::SharedScalar distance(const ss::ShareVector& a, const ss::ShareVector& b, leakage::SchemeCounters& counters);
  /// Sign of a - b, revealed to the coordinator only.
  int compare(const ss::SharedScalar& a, const ss::SharedScalar& b, PartyId coordinator,
              leakage::SchemeCounters& counters);
  /// Every party sends its shares to `receiver`, who reconstructs from t.
  std::vector<ss::FieldElement> open_to(const ss::ShareVector& v, PartyId receiver, leakage::SchemeCounters& counters);
  /// Broadcast of public structural metadata by `from`.
  void announce(PartyId from, std::span<const std::uint64_t> words);

 private:
  ProtocolParams params_;
  std::size_t dim_;
  std::uint64_t seed_;
  ProtocolState state_;
  net::PartyNetwork network_;
  ss::TripleDealer dealer_;
  leakage::CostLedger ledger_;
  std::uint64_t reshare_counter_ = 0;
  std::uint64_t query_counter_ = 0;
};

/// Output of a search at the querier.
struct SearchOutput {
  std::vector<VertexId> ids;                       // nearest first
  std::vector<std::vector<double>> vectors;        // reconstructed, decoded
  std::vector<bitgraph::Location> walk;            // Real scheme: evaluated locations
  std::uint64_t detours = 0;
};

/// Owner-held plaintext, never sent to other parties.
struct OwnerRecord {
  PartyId owner = 0;
  std::vector<ss::FieldElement> encoded;
};

/// Basic scheme: shared vectors in a flat list, searched by shared brute force.
class BasicDatabase {
 public:
  explicit BasicDatabase(Session& session) : s_(session) {}

  VertexId insert(PartyId owner, std::span<const double> plain);
  /// Exact top-theta. Throws EmptyDataset.
  SearchOutput search(PartyId querier, std::span<const double> q, std::size_t theta);
  std::size_t size() const { return stored_.size(); }
  const ss::ShareVector& stored(VertexId v) const { return stored_.at(v); }

 private:
  Session& s_;
  std::vector<OwnerRecord> owners_;
  std::vector<ss::ShareVector> stored_;
};

/// Mirror scheme: plaintext HNSW adjacency whose connection records each
/// carry a shared copy of the neighbor vector.
class MirrorDatabase {
 public:
  explicit MirrorDatabase(Session& session) : s_(session) {}

  VertexId insert(PartyId owner, std::span<const double> plain);
  /// Throws EmptyIndex.
  SearchOutput search(PartyId querier, std::span<const double> q, std::size_t theta);

  std::size_t size() const { return own_.size(); }
  int top_level() const { return top_; }
  /// Public topology of layer `l`, for comparison with the reference index.
  OrderedGraph layer_graph(int l) const;
  std::size_t directed_records() const;

 private:
  struct Link {
    VertexId to;
    ss::ShareVector copy;
  };
  struct Found {
    ss::SharedScalar dist;
    VertexId vertex;
  };
  std::vector<Found> search_layer(const ss::ShareVector& q, VertexId enter, std::size_t ef, int l, PartyId coordinator);
  bool nearer(const Found& a, const Found& b, PartyId coordinator);

  Session& s_;
  std::vector<OwnerRecord> owners_;
  std::vector<ss::ShareVector> own_;
  std::vector<int> levels_;
  std::vector<std::vector<std::vector<Link>>> adj_;  // [layer][vertex]
  VertexId enter_ = 0;
  int top_ = -1;
};

/// One element of a shared search queue: a location, its vertex and the
/// shared distance to the query.
struct SharedCandidate {
  ss::SharedScalar dist;
  VertexId vertex = 0;
  bitgraph::Location loc;
};

/// Real scheme: layered bitgraphs with public structure and shared payloads
/// attached to every entry. Layer 0 is the data repository.
class CollabEDB {
 public:
  explicit CollabEDB(Session& session) : s_(session) {}

  /// Shares, places and connects one vector on behalf of `owner`.
  VertexId insert(PartyId owner, std::span<const double> plain);
  /// Top-down search; the querier reconstructs the result vectors.
  /// Throws EmptyIndex.
  SearchOutput search(PartyId querier, std::span<const double> q, std::size_t theta);

  /// Shared best-first search over one layer with the at-hand-detour rule.
  /// Every ordering decision is a coordinator-side comparison. Throws EmptyLayer.
  std::vector<SharedCandidate> search_layer(const ss::ShareVector& q, std::size_t theta, int l,
                                            bitgraph::Location enter, PartyId coordinator,
                                            std::vector<bitgraph::Location>* walk = nullptr,
                                            std::uint64_t* detours = nullptr);
  /// Registers an owner's vector without connecting it anywhere and
  /// returns its id. insert() calls this before placing the vector.
  VertexId place(PartyId owner, std::span<const double> plain, int level = 0);
  /// Connects `q` (already placed by its owner) at layer `l` to the given
  /// neighbor locations and attaches fresh owner sharings to every new entry.
  std::vector<bitgraph::InsertDelta> insert_layer(VertexId q, int l, std::span<const bitgraph::Location> neighbors,
                                                  PartyId coordinator);

  bool empty() const { return owners_.empty(); }
  std::size_t size() const { return owners_.size(); }
  int top_level() const { return static_cast<int>(layers_.size()) - 1; }
  VertexId enter() const { return enter_; }
  int level(VertexId v) const { return levels_.at(v); }
  PartyId owner(VertexId v) const { return owners_.at(v).owner; }
  const std::vector<bitgraph::Bitgraph>& layers() const { return layers_; }
  const ss::ShareVector& payload(int l, bitgraph::Location loc) const;
  std::size_t total_entries() const;

  /// Writes meta.json plus one share file per party into `dir`.
  void save(const std::filesystem::path& dir) const;
  /// Restores structure and shares saved by save(). The session must use
  /// the same parameters. Owner plaintext is not part of a snapshot, so a
  /// loaded database can be searched but not extended.
  static CollabEDB load(Session& session, const std::filesystem::path& dir);

 private:
  bool nearer(const SharedCandidate& a, const SharedCandidate& b, PartyId coordinator);
  void attach_payloads(int l, const bitgraph::InsertDelta& delta);

  Session& s_;
  std::vector<OwnerRecord> owners_;
  std::vector<int> levels_;
  std::vector<bitgraph::Bitgraph> layers_;
  std::vector<std::vector<std::vector<ss::ShareVector>>> payload_;  // [layer][branch][seq]
  VertexId enter_ = 0;
  bool extendable_ = true;
};

/// Shares one vector per directed connection of `g` (the naive index).
/// Adds d * 2|E| * n to `counters.share_ops` and returns the number of
/// shared records.
std::size_t share_naive_index(Session& s, const OrderedGraph& g, std::span<const std::vector<ss::FieldElement>> data,
                              leakage::SchemeCounters& counters);
/// Shares one vector per bitgraph entry. Adds d * (|V| + dup) * n.
std::size_t share_bitgraph_index(Session& s, const bitgraph::Bitgraph& h,
                                 std::span<const std::vector<ss::FieldElement>> data,
                                 leakage::SchemeCounters& counters);

}  // namespace spa2nn::sst
