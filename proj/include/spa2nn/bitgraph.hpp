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

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "spa2nn/graph.hpp"

namespace spa2nn::bitgraph {

using BranchId = std::uint32_t;

/// Position of one entry: branch id and index within that branch.
struct Location {
  BranchId branch = 0;
  std::uint32_t seq = 0;

  auto operator<=>(const Location&) const = default;
};

/// One stored entry. Edges are implicit: the entry at `seq` is adjacent to
/// the next `post_d` entries of its branch and to seq 1 of every branch
/// listed in `par_b`.
struct Entry {
  VertexId vertex = 0;
  std::uint32_t seq = 0;
  std::uint32_t post_d = 0;
  std::vector<BranchId> par_b;
  bool visited = false;

  bool operator==(const Entry& o) const {
    return vertex == o.vertex && seq == o.seq && post_d == o.post_d && par_b == o.par_b;
  }
};

struct Branch {
  BranchId id = 0;
  std::vector<Entry> entries;

  bool operator==(const Branch&) const = default;
};

/// Structural change produced by one insert into one branch. `created`
/// lists every entry that did not exist before, in creation order; the
/// shared index attaches a payload to each of them.
struct InsertDelta {
  std::vector<Location> created;
  std::vector<Location> extended;  // entries whose post_d grew
  std::vector<BranchId> new_branches;
};

class Bitgraph {
 public:
  bool empty() const { return branches_.empty(); }
  const std::vector<Branch>& branches() const { return branches_; }
  const Branch& branch(BranchId id) const;

  const Entry& entry(Location loc) const;
  Entry& entry(Location loc);
  bool is_tail(Location loc) const;

  bool contains(VertexId v) const { return index_.count(v) != 0; }
  /// Every location of `v`, ascending. Throws UnknownElement if absent.
  const std::vector<Location>& locations(VertexId v) const;
  /// True when some location of `v` has an entry ahead of it (post_d > 0).
  /// A split vertex always does: its new branch starts with it at post_d 1.
  bool reaches_forward(VertexId v) const;

  std::size_t vertex_count() const { return index_.size(); }
  std::size_t entry_count() const { return entries_; }
  /// Entries beyond the first appearance of each vertex.
  std::size_t duplicates() const { return entries_ - index_.size(); }

  /// Connects a new vertex `q` to the neighbors `w`, all located in branch
  /// `loc`. Neighbors may be given in any order; they are processed in
  /// branch-sequence order. The trailing run of `w` whose spans all reach
  /// the branch tail is extended to `q`; every other neighbor becomes a
  /// split vertex heading a new two-entry branch. On an empty bitgraph `w`
  /// must be empty and branch 0 is created holding `q` alone.
  ///
  /// Throws UnknownNeighbor when some neighbor is not in `loc`, and
  /// ParameterError when `q` already appears in `loc` or `w` is empty on a
  /// non-empty bitgraph.
  InsertDelta insert(VertexId q, std::span<const VertexId> w, BranchId loc);

  /// Connects `q` to neighbors at the given locations: groups them by
  /// branch (ascending) and runs insert() once per group.
  std::vector<InsertDelta> insert_at(VertexId q, std::span<const Location> neighbors);

  /// The location used when `v` is a neighbor of a new vertex: a location
  /// where `v` is the branch tail if one exists, else `found` when given,
  /// else the first location.
  Location attach_location(VertexId v, std::optional<Location> found = std::nullopt) const;

  /// The location a search enters through when arriving at `v` from an
  /// upper layer: the first location with post_d > 0, else the first.
  Location entry_location(VertexId v) const;

  /// Clears every visit bit.
  void reset_visit_bits();
  bool any_visited() const;

  /// Checks seq numbering, post_d bounds, par_b targets and the vertex
  /// index. Throws MalformedBranch on the first violation.
  void validate() const;

  bool operator==(const Bitgraph& o) const { return branches_ == o.branches_; }

  /// Builds a bitgraph from branch tables (as read from the text format).
  static Bitgraph from_branches(std::vector<Branch> branches);

 private:
  void register_entry(Location loc, VertexId v);
  BranchId new_branch();

  std::vector<Branch> branches_;
  std::unordered_map<VertexId, std::vector<Location>> index_;
  std::size_t entries_ = 0;
};

/// Neighbors of the entry at `c` per the honeycomb rule: the predecessor in
/// its branch, the next post_d successors, and seq 1 of every branch in
/// its par_b list.
std::vector<Location> honeycomb_neighbors(const Bitgraph& h, Location c);

/// Replays the vertices of `g` in order, inserting each one with its
/// earlier neighbors. Throws DisconnectedVertex when a vertex other than 0
/// has no earlier neighbor.
Bitgraph partition_gamma(const OrderedGraph& g);
/// Same, replaying only `members` (ascending ids); every edge of `g` that
/// touches a member must stay inside the member set.
Bitgraph partition_gamma(const OrderedGraph& g, std::span<const VertexId> members);

/// The undirected graph encoded by `h`, on vertex ids 0..max id.
/// Throws MalformedBranch when some post_d runs past its branch.
OrderedGraph reconstruct_graph(const Bitgraph& h);

struct Candidate {
  double distance = 0;
  VertexId vertex = 0;
  Location loc;

  /// Nearest first; ties by vertex id, then branch.
  bool operator<(const Candidate& o) const {
    if (distance != o.distance) return distance < o.distance;
    if (vertex != o.vertex) return vertex < o.vertex;
    return loc < o.loc;
  }
};

struct WalkTrace {
  std::vector<Candidate> evaluated;  // every evaluated location, in order
  std::uint64_t detours = 0;         // candidates popped by the detour rule
  std::uint64_t deviation = 0;       // set by compare_walks
};

struct SearchResult {
  std::vector<Candidate> nearest;  // nearest first, one per vertex
  WalkTrace trace;
};

using DistanceFn = std::function<double(VertexId)>;

/// Sets visit bits for the duration of one search and clears exactly the
/// bits it set when destroyed.
class VisitGuard {
 public:
  explicit VisitGuard(Bitgraph& h) : h_(h) {}
  VisitGuard(const VisitGuard&) = delete;
  VisitGuard& operator=(const VisitGuard&) = delete;
  ~VisitGuard();

  /// Marks `l`; returns false when it was already marked.
  bool mark(Location l);
  const std::vector<Location>& touched() const { return touched_; }

 private:
  Bitgraph& h_;
  std::vector<Location> touched_;
};

/// Greedy best-first search from `enter` with the at-hand-detour rule.
/// Expanding a candidate visits the honeycomb neighbors of every location
/// of its vertex. Keeps at most `theta` results. Visit bits are set during the search and
/// cleared before it returns. Throws EmptyBitgraph.
SearchResult bitgraph_search(Bitgraph& h, Location enter, std::size_t theta, const DistanceFn& dist);

/// Records in `trace.deviation` how many vertices of a reference walk the
/// bitgraph walk never evaluated, and reports whether the property
/// "reference walk covered, or results equal" holds.
bool compare_walks(std::span<const VertexId> reference_walk, std::span<const VertexId> reference_result,
                   WalkTrace& trace, std::span<const Candidate> result);

/// Text form: a `# bitgraph v1` header, then one line per entry
/// `<branch> <seq> <vertex> <post_d> <par_b>`, with par_b as `-` or a
/// comma-separated list.
void write_text(std::ostream& out, const Bitgraph& h);
std::string to_text(const Bitgraph& h);
/// Throws FormatError on syntax errors and MalformedBranch on inconsistent
/// tables.
Bitgraph read_text(std::istream& in);
Bitgraph from_text(const std::string& text);

}  // namespace spa2nn::bitgraph
