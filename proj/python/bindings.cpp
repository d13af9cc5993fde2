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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <variant>

#include "spa2nn/bitgraph.hpp"
#include "spa2nn/cli.hpp"
#include "spa2nn/errors.hpp"
#include "spa2nn/hnsw.hpp"
#include "spa2nn/leakage.hpp"
#include "spa2nn/protocol.hpp"
#include "spa2nn/shamir.hpp"

namespace py = pybind11;
using namespace spa2nn;

namespace {

using EdgeList = std::vector<std::pair<VertexId, VertexId>>;

ss::FieldParams field_params(int n, int t, std::uint64_t p) {
  ss::FieldParams f;
  f.n = n;
  f.t = t;
  f.p = p;
  if (p < (std::uint64_t{1} << 40)) {
    // Small fields are for experiments: drop the security floor to fit.
    f.k = 1;
    while ((std::uint64_t{1} << (f.k + 1)) <= p) ++f.k;
    f.rho = 0;
  }
  f.validate();
  return f;
}

OrderedGraph graph_of(std::size_t vertices, const EdgeList& edges) {
  OrderedGraph g(vertices);
  for (auto [u, v] : edges) {
    if (u >= vertices || v >= vertices) throw ParameterError("edge endpoint out of range");
    g.add_edge(u, v);
  }
  return g;
}

EdgeList sorted_edges(const OrderedGraph& g) {
  auto e = g.edges();
  for (auto& [u, v] : e) {
    if (u > v) std::swap(u, v);
  }
  std::sort(e.begin(), e.end());
  return e;
}

py::dict ratio_dict(const leakage::Ratio& r) {
  py::dict d;
  d["num"] = r.num;
  d["den"] = r.den;
  d["text"] = r.str();
  return d;
}

// A shared index together with the session it runs in.
class SharedIndex {
 public:
  SharedIndex(const std::string& scheme, std::size_t dim, int n, int t, std::uint64_t seed, std::size_t M,
              std::size_t ef_construction, std::size_t ef_search, const std::string& metric)
      : kind_(cli::parse_scheme(scheme)) {
    if (!cli::uses_parties(kind_)) throw ParameterError("shared schemes are basic, mirror and real");
    sst::ProtocolParams pp;
    pp.field.n = n;
    pp.field.t = t;
    pp.index.M = M;
    pp.index.mL = M > 1 ? 1.0 / std::log(static_cast<double>(M)) : 0.0;
    pp.index.ef_construction = ef_construction;
    pp.index.ef_search = ef_search;
    pp.index.metric = hnsw::parse_metric(metric);
    pp.index.seed = seed;
    session_ = std::make_unique<sst::Session>(pp, dim, seed);
    switch (kind_) {
      case cli::SchemeKind::kBasic: db_.emplace<sst::BasicDatabase>(*session_); break;
      case cli::SchemeKind::kMirror: db_.emplace<sst::MirrorDatabase>(*session_); break;
      default: db_.emplace<sst::CollabEDB>(*session_); break;
    }
  }

  VertexId insert(int owner, const std::vector<double>& v) {
    return std::visit(
        [&](auto& db) -> VertexId {
          if constexpr (std::is_same_v<std::decay_t<decltype(db)>, std::monostate>) {
            throw EmptyIndex("no database");
          } else {
            return db.insert(owner, v);
          }
        },
        db_);
  }

  std::vector<VertexId> search(int querier, const std::vector<double>& q, std::size_t theta) {
    return std::visit(
        [&](auto& db) -> std::vector<VertexId> {
          if constexpr (std::is_same_v<std::decay_t<decltype(db)>, std::monostate>) {
            throw EmptyIndex("no database");
          } else {
            return db.search(querier, q, theta).ids;
          }
        },
        db_);
  }

  std::uint64_t messages() const { return session_->network().message_count(); }
  std::uint64_t digest() const { return session_->network().transcript_digest(); }

  py::dict counters() const {
    const auto scheme = kind_ == cli::SchemeKind::kBasic    ? leakage::Scheme::kBasic
                        : kind_ == cli::SchemeKind::kMirror ? leakage::Scheme::kMirror
                                                            : leakage::Scheme::kReal;
    const auto& c = session_->ledger().scheme(scheme);
    py::dict d;
    d["share_ops"] = c.share_ops;
    d["query_share_ops"] = c.query_share_ops;
    d["ac_mul_ops"] = c.ac_mul_ops;
    d["ac_distance_ops"] = c.ac_distance_ops;
    d["ac_compare_ops"] = c.ac_compare_ops;
    d["recon_ops"] = c.recon_ops;
    d["vertices"] = c.vertices;
    d["edges"] = c.edges;
    d["duplicates"] = c.duplicates;
    return d;
  }

 private:
  cli::SchemeKind kind_;
  std::unique_ptr<sst::Session> session_;
  std::variant<std::monostate, sst::BasicDatabase, sst::MirrorDatabase, sst::CollabEDB> db_;
};

}  // namespace

PYBIND11_MODULE(_spa2nn, m) {
  m.doc() = "Threshold secret-shared approximate nearest neighbor search";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ParameterError>(m, "ParameterError", base.ptr());
  py::register_exception<OverflowError>(m, "OverflowError", base.ptr());
  py::register_exception<InsufficientShares>(m, "InsufficientShares", base.ptr());
  py::register_exception<TripleReuse>(m, "TripleReuse", base.ptr());
  py::register_exception<DisconnectedVertex>(m, "DisconnectedVertex", base.ptr());
  py::register_exception<MalformedBranch>(m, "MalformedBranch", base.ptr());
  py::register_exception<UnknownNeighbor>(m, "UnknownNeighbor", base.ptr());
  py::register_exception<EmptyBitgraph>(m, "EmptyBitgraph", base.ptr());
  py::register_exception<EmptyDataset>(m, "EmptyDataset", base.ptr());
  py::register_exception<EmptyIndex>(m, "EmptyIndex", base.ptr());
  py::register_exception<EmptyLayer>(m, "EmptyLayer", base.ptr());
  py::register_exception<UnknownElement>(m, "UnknownElement", base.ptr());
  py::register_exception<FormatError>(m, "FormatError", base.ptr());

  m.attr("MERSENNE61") = ss::kMersenne61;

  m.def(
      "share",
      [](std::uint64_t secret, int n, int t, std::uint64_t p, std::uint64_t seed) {
        const auto f = field_params(n, t, p);
        if (secret >= p) throw ParameterError("secret must be below p");
        Prg rng(seed);
        std::vector<std::pair<int, std::uint64_t>> out;
        for (const auto& s : ss::ss_share(secret, f, rng)) out.emplace_back(s.point, s.value);
        return out;
      },
      py::arg("secret"), py::arg("n"), py::arg("t"), py::arg("p") = ss::kMersenne61, py::arg("seed") = 0,
      "Split a field element into n labeled shares, any t of which reconstruct it.");
  m.def(
      "reconstruct",
      [](const std::vector<std::pair<int, std::uint64_t>>& shares, int n, int t, std::uint64_t p) {
        std::vector<ss::Share> s;
        for (auto [point, value] : shares) s.push_back({point, value});
        return ss::ss_recon(s, field_params(n, t, p));
      },
      py::arg("shares"), py::arg("n"), py::arg("t"), py::arg("p") = ss::kMersenne61);

  py::class_<bitgraph::Bitgraph>(m, "Bitgraph")
      .def_static(
          "from_edges",
          [](std::size_t vertices, const EdgeList& edges) { return bitgraph::partition_gamma(graph_of(vertices, edges)); },
          py::arg("vertices"), py::arg("edges"), "Partition an ordered undirected graph into branches.")
      .def_static("from_text", &bitgraph::from_text)
      .def("to_text", [](const bitgraph::Bitgraph& h) { return bitgraph::to_text(h); })
      .def("edges", [](const bitgraph::Bitgraph& h) { return sorted_edges(bitgraph::reconstruct_graph(h)); },
           "The undirected edge set the branches encode, as sorted (u, v) pairs with u < v.")
      .def("branches",
           [](const bitgraph::Bitgraph& h) {
             py::list out;
             for (const auto& b : h.branches()) {
               py::list entries;
               for (const auto& e : b.entries) entries.append(py::make_tuple(e.vertex, e.seq, e.post_d, e.par_b));
               out.append(entries);
             }
             return out;
           })
      .def_property_readonly("vertex_count", &bitgraph::Bitgraph::vertex_count)
      .def_property_readonly("entry_count", &bitgraph::Bitgraph::entry_count)
      .def_property_readonly("duplicates", &bitgraph::Bitgraph::duplicates)
      .def("__eq__", [](const bitgraph::Bitgraph& a, const bitgraph::Bitgraph& b) { return a == b; });

  m.def(
      "mss_size", [](std::size_t vertices, const EdgeList& edges) { return leakage::mss_size(graph_of(vertices, edges)); },
      py::arg("vertices"), py::arg("edges"));
  m.def(
      "leakage",
      [](const std::vector<bitgraph::Bitgraph>& layers, VertexId element, std::size_t max_hops) {
        py::dict d;
        d["l1"] = ratio_dict(leakage::leakage_I(layers, element));
        d["l2"] = ratio_dict(leakage::leakage_II(layers, element, max_hops));
        d["l3"] = ratio_dict(leakage::leakage_III(layers, element, leakage::ThetaMode::kCount, 0, {}, max_hops));
        return d;
      },
      py::arg("layers"), py::arg("element"), py::arg("max_hops") = 0,
      "Leakage triplet of one element; layers[0] holds every stored element.");

  py::class_<hnsw::HnswIndex>(m, "HnswIndex")
      .def(py::init([](std::size_t dim, std::size_t M, std::size_t ef_construction, std::size_t ef_search,
                       const std::string& metric, std::uint64_t seed) {
             hnsw::HnswParams p;
             p.M = M;
             p.mL = M > 1 ? 1.0 / std::log(static_cast<double>(M)) : 0.0;
             p.ef_construction = ef_construction;
             p.ef_search = ef_search;
             p.metric = hnsw::parse_metric(metric);
             p.seed = seed;
             return hnsw::HnswIndex(dim, p);
           }),
           py::arg("dim"), py::arg("M") = 8, py::arg("ef_construction") = 40, py::arg("ef_search") = 40,
           py::arg("metric") = "squared-euclidean", py::arg("seed") = 1)
      .def("insert", [](hnsw::HnswIndex& idx, const std::vector<double>& v) { return idx.insert(v); })
      .def(
          "search",
          [](const hnsw::HnswIndex& idx, const std::vector<double>& q, std::size_t theta) {
            std::vector<std::pair<double, VertexId>> out;
            for (const auto& n : idx.search(q, theta).nearest) out.emplace_back(n.distance, n.id);
            return out;
          },
          py::arg("q"), py::arg("theta"))
      .def("__len__", &hnsw::HnswIndex::size)
      .def_property_readonly("top_level", &hnsw::HnswIndex::top_level);

  py::class_<SharedIndex>(m, "SharedIndex")
      .def(py::init<const std::string&, std::size_t, int, int, std::uint64_t, std::size_t, std::size_t, std::size_t,
                    const std::string&>(),
           py::arg("scheme"), py::arg("dim"), py::arg("n") = 3, py::arg("t") = 2, py::arg("seed") = 1, py::arg("M") = 8,
           py::arg("ef_construction") = 40, py::arg("ef_search") = 40, py::arg("metric") = "squared-euclidean")
      .def("insert", &SharedIndex::insert, py::arg("owner"), py::arg("vector"))
      .def("search", &SharedIndex::search, py::arg("querier"), py::arg("q"), py::arg("theta"))
      .def_property_readonly("messages", &SharedIndex::messages)
      .def_property_readonly("transcript_digest", &SharedIndex::digest)
      .def("counters", &SharedIndex::counters);

  m.def(
      "run_json",
      [](const std::string& config_json) {
        const cli::ExperimentConfig cfg = cli::config_from_json(config_json);
        py::gil_scoped_release release;
        return cli::report_to_json(cli::run(cfg).report);
      },
      py::arg("config_json"), "Run one experiment; takes and returns JSON text.");
  m.def("default_config_json", [] { return cli::config_to_json(cli::ExperimentConfig{}); });
  m.def("demo_fig3", [] {
    std::ostringstream out;
    const bool ok = cli::demo_fig3(out);
    return py::make_tuple(ok, out.str());
  });
  m.def(
      "sweep",
      [](const std::vector<std::size_t>& sizes, std::size_t M, std::size_t dim, int n, std::uint64_t seed) {
        py::list out;
        for (const auto& r : cli::sweep(sizes, M, dim, n, seed)) {
          py::dict d;
          d["vertices"] = r.vertices;
          d["edges"] = r.edges;
          d["average_degree"] = r.average_degree;
          d["naive_share_ops"] = r.naive_share_ops;
          d["bitgraph_share_ops"] = r.bitgraph_share_ops;
          d["ratio"] = r.ratio;
          d["counters_match"] = r.counters_match;
          out.append(d);
        }
        return out;
      },
      py::arg("sizes"), py::arg("M") = 8, py::arg("dim") = 16, py::arg("n") = 3, py::arg("seed") = 1);
}
