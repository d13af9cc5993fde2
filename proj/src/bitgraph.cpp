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

#include "spa2nn/bitgraph.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_set>

#include "spa2nn/errors.hpp"

namespace spa2nn::bitgraph {

namespace {

std::string where(Location loc) {
  return "branch " + std::to_string(loc.branch) + " seq " + std::to_string(loc.seq);
}

}  // namespace

const Branch& Bitgraph::branch(BranchId id) const {
  if (id >= branches_.size()) throw MalformedBranch("no branch " + std::to_string(id));
  return branches_[id];
}

const Entry& Bitgraph::entry(Location loc) const {
  const Branch& b = branch(loc.branch);
  if (loc.seq >= b.entries.size()) throw MalformedBranch("no entry at " + where(loc));
  return b.entries[loc.seq];
}

Entry& Bitgraph::entry(Location loc) { return const_cast<Entry&>(std::as_const(*this).entry(loc)); }

bool Bitgraph::is_tail(Location loc) const { return loc.seq + 1 == branch(loc.branch).entries.size(); }

const std::vector<Location>& Bitgraph::locations(VertexId v) const {
  const auto it = index_.find(v);
  if (it == index_.end()) throw UnknownElement("vertex " + std::to_string(v) + " is not in the bitgraph");
  return it->second;
}

bool Bitgraph::reaches_forward(VertexId v) const {
  const auto& locs = locations(v);
  return std::any_of(locs.begin(), locs.end(), [&](const Location& l) { return entry(l).post_d > 0; });
}

void Bitgraph::register_entry(Location loc, VertexId v) {
  auto& locs = index_[v];
  locs.insert(std::upper_bound(locs.begin(), locs.end(), loc), loc);
  ++entries_;
}

BranchId Bitgraph::new_branch() {
  const auto id = static_cast<BranchId>(branches_.size());
  branches_.push_back(Branch{id, {}});
  return id;
}

InsertDelta Bitgraph::insert(VertexId q, std::span<const VertexId> w, BranchId loc) {
  InsertDelta delta;
  if (empty()) {
    if (!w.empty()) throw UnknownNeighbor("neighbors given for an empty bitgraph");
    const BranchId id = new_branch();
    branches_[id].entries.push_back(Entry{q, 0, 0, {}});
    register_entry({id, 0}, q);
    delta.created.push_back({id, 0});
    delta.new_branches.push_back(id);
    return delta;
  }
  if (w.empty()) throw ParameterError("a new vertex needs at least one neighbor");
  if (loc >= branches_.size()) throw UnknownNeighbor("no branch " + std::to_string(loc));

  const auto in_branch = [&](VertexId v) -> std::optional<std::uint32_t> {
    const auto it = index_.find(v);
    if (it == index_.end()) return std::nullopt;
    for (const Location& l : it->second) {
      if (l.branch == loc) return l.seq;
    }
    return std::nullopt;
  };
  if (in_branch(q)) throw ParameterError("vertex " + std::to_string(q) + " already in branch " + std::to_string(loc));

  std::vector<std::uint32_t> seqs;
  seqs.reserve(w.size());
  for (VertexId v : w) {
    const auto s = in_branch(v);
    if (!s) {
      throw UnknownNeighbor("vertex " + std::to_string(v) + " is not in branch " + std::to_string(loc));
    }
    seqs.push_back(*s);
  }
  std::sort(seqs.begin(), seqs.end());
  seqs.erase(std::unique(seqs.begin(), seqs.end()), seqs.end());

  // Trailing run of neighbors, contiguous back from the tail, whose forward
  // spans all end at the tail: exactly those can reach q by post_d + 1.
  const auto tail = static_cast<std::uint32_t>(branches_[loc].entries.size() - 1);
  std::size_t run = seqs.size();
  std::uint32_t expect = tail;
  while (run > 0) {
    const std::uint32_t s = seqs[run - 1];
    const Entry& e = branches_[loc].entries[s];
    if (s != expect || s + e.post_d != tail) break;
    --run;
    if (expect == 0) break;
    --expect;
  }

  std::vector<std::uint32_t> splits(seqs.begin(), seqs.begin() + static_cast<std::ptrdiff_t>(run));
  if (run < seqs.size()) {
    for (std::size_t i = run; i < seqs.size(); ++i) {
      ++branches_[loc].entries[seqs[i]].post_d;
      delta.extended.push_back({loc, seqs[i]});
    }
    const Location appended{loc, tail + 1};
    branches_[loc].entries.push_back(Entry{q, appended.seq, 0, {}});
    register_entry(appended, q);
    delta.created.push_back(appended);
  }

  for (std::uint32_t s : splits) {
    const BranchId id = new_branch();
    Entry& split = branches_[loc].entries[s];
    split.par_b.push_back(id);
    const VertexId v = split.vertex;
    branches_[id].entries.push_back(Entry{v, 0, 1, {}});
    branches_[id].entries.push_back(Entry{q, 1, 0, {}});
    register_entry({id, 0}, v);
    register_entry({id, 1}, q);
    delta.created.push_back({id, 0});
    delta.created.push_back({id, 1});
    delta.new_branches.push_back(id);
  }
  return delta;
}

std::vector<InsertDelta> Bitgraph::insert_at(VertexId q, std::span<const Location> neighbors) {
  std::vector<InsertDelta> out;
  if (neighbors.empty()) {
    out.push_back(insert(q, {}, 0));
    return out;
  }
  std::map<BranchId, std::vector<VertexId>> groups;
  std::unordered_set<VertexId> seen;
  for (const Location& l : neighbors) {
    if (l.branch >= branches_.size() || l.seq >= branches_[l.branch].entries.size()) {
      throw UnknownNeighbor("no neighbor entry at " + where(l));
    }
    const VertexId v = entry(l).vertex;
    if (seen.insert(v).second) groups[l.branch].push_back(v);
  }
  for (const auto& [branch_id, verts] : groups) out.push_back(insert(q, verts, branch_id));
  return out;
}

Location Bitgraph::attach_location(VertexId v, std::optional<Location> found) const {
  const auto& locs = locations(v);
  for (const Location& l : locs) {
    if (is_tail(l)) return l;
  }
  if (found && std::find(locs.begin(), locs.end(), *found) != locs.end()) return *found;
  return locs.front();
}

Location Bitgraph::entry_location(VertexId v) const {
  const auto& locs = locations(v);
  for (const Location& l : locs) {
    if (entry(l).post_d > 0) return l;
  }
  return locs.front();
}

void Bitgraph::reset_visit_bits() {
  for (Branch& b : branches_) {
    for (Entry& e : b.entries) e.visited = false;
  }
}

bool Bitgraph::any_visited() const {
  return std::any_of(branches_.begin(), branches_.end(), [](const Branch& b) {
    return std::any_of(b.entries.begin(), b.entries.end(), [](const Entry& e) { return e.visited; });
  });
}

void Bitgraph::validate() const {
  std::size_t count = 0;
  for (std::size_t i = 0; i < branches_.size(); ++i) {
    const Branch& b = branches_[i];
    if (b.id != i) throw MalformedBranch("branch at position " + std::to_string(i) + " has id " + std::to_string(b.id));
    if (b.entries.empty()) throw MalformedBranch("branch " + std::to_string(i) + " is empty");
    for (std::size_t s = 0; s < b.entries.size(); ++s) {
      const Entry& e = b.entries[s];
      const Location here{b.id, static_cast<std::uint32_t>(s)};
      if (e.seq != s) throw MalformedBranch("seq mismatch at " + where(here));
      if (s + e.post_d >= b.entries.size()) throw MalformedBranch("post_d runs past the end at " + where(here));
      for (BranchId p : e.par_b) {
        if (p >= branches_.size() || branches_[p].entries.size() < 2 || branches_[p].entries[0].vertex != e.vertex) {
          throw MalformedBranch("bad parallel branch " + std::to_string(p) + " at " + where(here));
        }
      }
      const auto it = index_.find(e.vertex);
      if (it == index_.end() || !std::binary_search(it->second.begin(), it->second.end(), here)) {
        throw MalformedBranch("vertex index misses " + where(here));
      }
      ++count;
    }
  }
  if (count != entries_) throw MalformedBranch("vertex index out of sync with branches");
}

Bitgraph Bitgraph::from_branches(std::vector<Branch> branches) {
  Bitgraph h;
  h.branches_ = std::move(branches);
  for (const Branch& b : h.branches_) {
    for (std::size_t s = 0; s < b.entries.size(); ++s) {
      h.register_entry({b.id, static_cast<std::uint32_t>(s)}, b.entries[s].vertex);
    }
  }
  h.validate();
  return h;
}

std::vector<Location> honeycomb_neighbors(const Bitgraph& h, Location c) {
  const Entry& e = h.entry(c);
  const Branch& b = h.branch(c.branch);
  if (c.seq + e.post_d >= b.entries.size()) throw MalformedBranch("post_d runs past the end at " + where(c));
  std::vector<Location> out;
  out.reserve(1 + e.post_d + e.par_b.size());
  if (c.seq > 0) out.push_back({c.branch, c.seq - 1});
  for (std::uint32_t k = 1; k <= e.post_d; ++k) out.push_back({c.branch, c.seq + k});
  for (BranchId p : e.par_b) {
    if (h.branch(p).entries.size() < 2) throw MalformedBranch("parallel branch " + std::to_string(p) + " too short");
    out.push_back({p, 1});
  }
  return out;
}

Bitgraph partition_gamma(const OrderedGraph& g, std::span<const VertexId> members) {
  Bitgraph h;
  std::vector<Location> locs;
  for (std::size_t i = 0; i < members.size(); ++i) {
    const VertexId v = members[i];
    if (i > 0 && v <= members[i - 1]) throw ParameterError("members must be strictly ascending");
    locs.clear();
    for (VertexId u : g.neighbors(v)) {
      if (u >= v) break;
      locs.push_back(h.attach_location(u));
    }
    if (i > 0 && locs.empty()) {
      throw DisconnectedVertex("vertex " + std::to_string(v) + " has no earlier neighbor");
    }
    h.insert_at(v, locs);
  }
  return h;
}

Bitgraph partition_gamma(const OrderedGraph& g) {
  std::vector<VertexId> all(g.vertex_count());
  std::iota(all.begin(), all.end(), VertexId{0});
  return partition_gamma(g, all);
}

OrderedGraph reconstruct_graph(const Bitgraph& h) {
  VertexId max_id = 0;
  bool any = false;
  for (const Branch& b : h.branches()) {
    for (const Entry& e : b.entries) {
      max_id = std::max(max_id, e.vertex);
      any = true;
    }
  }
  OrderedGraph g(any ? max_id + 1 : 0);
  for (const Branch& b : h.branches()) {
    for (std::size_t s = 0; s < b.entries.size(); ++s) {
      const Entry& e = b.entries[s];
      if (s + e.post_d >= b.entries.size()) {
        throw MalformedBranch("post_d runs past the end at " + where({b.id, static_cast<std::uint32_t>(s)}));
      }
      for (std::uint32_t k = 1; k <= e.post_d; ++k) {
        const VertexId u = b.entries[s + k].vertex;
        if (u == e.vertex) throw MalformedBranch("vertex repeats inside branch " + std::to_string(b.id));
        g.add_edge(e.vertex, u);
      }
    }
  }
  return g;
}

VisitGuard::~VisitGuard() {
  for (Location l : touched_) h_.entry(l).visited = false;
}

bool VisitGuard::mark(Location l) {
  Entry& e = h_.entry(l);
  if (e.visited) return false;
  e.visited = true;
  touched_.push_back(l);
  return true;
}

SearchResult bitgraph_search(Bitgraph& h, Location enter, std::size_t theta, const DistanceFn& dist) {
  if (h.empty()) throw EmptyBitgraph("search on an empty bitgraph");
  if (theta == 0) throw ParameterError("theta must be at least 1");

  SearchResult result;
  VisitGuard visits(h);
  std::set<Candidate> candidates;
  std::set<Candidate> found;
  std::unordered_set<VertexId> found_vertices;
  std::vector<Location> neighbors;

  const Candidate first{dist(h.entry(enter).vertex), h.entry(enter).vertex, enter};
  visits.mark(enter);
  result.trace.evaluated.push_back(first);
  candidates.insert(first);
  found.insert(first);
  found_vertices.insert(first.vertex);

  const auto pop_nearest = [&] {
    const Candidate c = *candidates.begin();
    candidates.erase(candidates.begin());
    return c;
  };

  while (!candidates.empty()) {
    Candidate c = pop_nearest();
    if (c.distance > found.rbegin()->distance) break;
    // At-hand detour: a vertex that is a tail in every branch it occupies
    // has nothing ahead of it, so fall back to the next-nearest candidate.
    // When none is left it is expanded anyway, which still reaches its
    // predecessors.
    while (!h.reaches_forward(c.vertex) && !candidates.empty()) {
      c = pop_nearest();
      ++result.trace.detours;
    }
    // Expanding a vertex expands each of its locations: the edges of one
    // vertex are spread over the branches it appears in.
    neighbors.clear();
    for (const Location& l : h.locations(c.vertex)) {
      visits.mark(l);
      const auto hc = honeycomb_neighbors(h, l);
      neighbors.insert(neighbors.end(), hc.begin(), hc.end());
    }
    for (const Location& nb : neighbors) {
      if (!visits.mark(nb)) continue;
      const VertexId v = h.entry(nb).vertex;
      const Candidate cand{dist(v), v, nb};
      result.trace.evaluated.push_back(cand);
      if (found.size() >= theta && !(cand.distance < found.rbegin()->distance)) continue;
      candidates.insert(cand);
      if (!found_vertices.insert(v).second) continue;
      found.insert(cand);
      if (found.size() > theta) {
        found_vertices.erase(found.rbegin()->vertex);
        found.erase(std::prev(found.end()));
      }
    }
  }
  result.nearest.assign(found.begin(), found.end());
  return result;
}

bool compare_walks(std::span<const VertexId> reference_walk, std::span<const VertexId> reference_result,
                   WalkTrace& trace, std::span<const Candidate> result) {
  std::unordered_set<VertexId> walked;
  for (const Candidate& c : trace.evaluated) walked.insert(c.vertex);
  const std::set<VertexId> ref_walk(reference_walk.begin(), reference_walk.end());
  trace.deviation = 0;
  for (VertexId v : ref_walk) {
    if (!walked.count(v)) ++trace.deviation;
  }
  std::set<VertexId> got;
  for (const Candidate& c : result) got.insert(c.vertex);
  const std::set<VertexId> want(reference_result.begin(), reference_result.end());
  return trace.deviation == 0 || got == want;
}

void write_text(std::ostream& out, const Bitgraph& h) {
  out << "# bitgraph v1\n";
  for (const Branch& b : h.branches()) {
    for (const Entry& e : b.entries) {
      out << b.id << ' ' << e.seq << ' ' << e.vertex << ' ' << e.post_d << ' ';
      if (e.par_b.empty()) {
        out << '-';
      } else {
        for (std::size_t i = 0; i < e.par_b.size(); ++i) out << (i ? "," : "") << e.par_b[i];
      }
      out << '\n';
    }
  }
}

std::string to_text(const Bitgraph& h) {
  std::ostringstream out;
  write_text(out, h);
  return out.str();
}

namespace {

std::uint32_t parse_u32(const std::string& token, std::size_t line) {
  std::size_t used = 0;
  unsigned long value = 0;
  try {
    value = std::stoul(token, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != token.size() || token.empty() || token[0] == '-' || value > 0xffffffffUL) {
    throw FormatError("line " + std::to_string(line) + ": expected an unsigned integer, got '" + token + "'");
  }
  return static_cast<std::uint32_t>(value);
}

}  // namespace

Bitgraph read_text(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  bool header = false;
  std::vector<Branch> branches;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    if (!header) {
      if (line != "# bitgraph v1") throw FormatError("line " + std::to_string(lineno) + ": missing bitgraph header");
      header = true;
      continue;
    }
    if (line[0] == '#') continue;
    std::istringstream fields(line);
    std::string tok[5], extra;
    for (auto& t : tok) {
      if (!(fields >> t)) throw FormatError("line " + std::to_string(lineno) + ": expected 5 fields");
    }
    if (fields >> extra) throw FormatError("line " + std::to_string(lineno) + ": trailing field '" + extra + "'");

    const BranchId id = parse_u32(tok[0], lineno);
    Entry e;
    e.seq = parse_u32(tok[1], lineno);
    e.vertex = parse_u32(tok[2], lineno);
    e.post_d = parse_u32(tok[3], lineno);
    if (tok[4] != "-") {
      std::istringstream list(tok[4]);
      std::string item;
      while (std::getline(list, item, ',')) e.par_b.push_back(parse_u32(item, lineno));
    }
    if (id == branches.size()) {
      branches.push_back(Branch{id, {}});
    } else if (id + 1 != branches.size()) {
      throw FormatError("line " + std::to_string(lineno) + ": branch " + std::to_string(id) + " out of order");
    }
    branches.back().entries.push_back(std::move(e));
  }
  if (!header) throw FormatError("missing bitgraph header");
  return Bitgraph::from_branches(std::move(branches));
}

Bitgraph from_text(const std::string& text) {
  std::istringstream in(text);
  return read_text(in);
}

}  // namespace spa2nn::bitgraph
