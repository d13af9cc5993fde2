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

#include "spa2nn/cli.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>
#include "spa2nn/bitgraph.hpp"
#include "spa2nn/errors.hpp"
#include "spa2nn/layered_bitgraph.hpp"
#include "spa2nn/protocol.hpp"

namespace spa2nn::cli {

using nlohmann::ordered_json;

// ---------------------------------------------------------------------------
// Datasets

DataFormat parse_format(std::string_view name) {
  if (name == "csv") return DataFormat::kCsv;
  if (name == "flat-binary-f32" || name == "f32") return DataFormat::kFlatF32;
  throw ParameterError("unknown dataset format '" + std::string(name) + "'");
}

std::string_view format_name(DataFormat f) { return f == DataFormat::kCsv ? "csv" : "flat-binary-f32"; }

namespace {

hnsw::VectorSet read_csv(const std::filesystem::path& path, std::size_t dim) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path.string());
  hnsw::VectorSet out(dim);
  std::string line;
  std::size_t lineno = 0;
  std::vector<double> row;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos || line[line.find_first_not_of(" \t")] == '#') continue;
    row.clear();
    std::size_t pos = 0;
    while (true) {
      const std::size_t comma = line.find(',', pos);
      const std::string cell = line.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
      char* end = nullptr;
      const double x = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str() || cell.find_first_not_of(" \t", static_cast<std::size_t>(end - cell.c_str())) !=
                                     std::string::npos ||
          !std::isfinite(x)) {
        throw FormatError(path.filename().string() + " line " + std::to_string(lineno) + ": bad number '" + cell + "'");
      }
      row.push_back(x);
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    if (out.dim() != 0 && row.size() != out.dim()) {
      throw FormatError(path.filename().string() + " line " + std::to_string(lineno) + ": expected " +
                        std::to_string(out.dim()) + " values, found " + std::to_string(row.size()));
    }
    out.add(row);
  }
  if (out.empty()) throw FormatError(path.filename().string() + ": no vectors");
  return out;
}

hnsw::VectorSet read_f32(const std::filesystem::path& path, std::size_t dim) {
  if (dim == 0) throw ParameterError("flat-binary-f32 input needs the dimension");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  std::vector<char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  const std::size_t row_bytes = dim * sizeof(float);
  if (bytes.empty() || bytes.size() % row_bytes != 0) {
    throw FormatError(path.filename().string() + " offset " + std::to_string(bytes.size() - bytes.size() % row_bytes) +
                      ": file size is not a multiple of " + std::to_string(row_bytes) + " bytes");
  }
  hnsw::VectorSet out(dim);
  std::vector<double> row(dim);
  for (std::size_t off = 0; off < bytes.size(); off += row_bytes) {
    for (std::size_t j = 0; j < dim; ++j) {
      std::uint32_t raw = 0;
      std::memcpy(&raw, bytes.data() + off + j * sizeof(float), sizeof raw);
      if constexpr (std::endian::native == std::endian::big) raw = __builtin_bswap32(raw);
      const float x = std::bit_cast<float>(raw);
      if (!std::isfinite(x)) {
        throw FormatError(path.filename().string() + " offset " + std::to_string(off + j * sizeof(float)) +
                          ": non-finite value");
      }
      row[j] = x;
    }
    out.add(row);
  }
  return out;
}

}  // namespace

hnsw::VectorSet ingest(const std::filesystem::path& path, DataFormat format, std::size_t dim) {
  return format == DataFormat::kCsv ? read_csv(path, dim) : read_f32(path, dim);
}

void write_dataset(const std::filesystem::path& path, const hnsw::VectorSet& data, DataFormat format) {
  if (format == DataFormat::kCsv) {
    std::ofstream out(path);
    out << std::setprecision(17);
    for (VertexId i = 0; i < data.size(); ++i) {
      const auto v = data[i];
      for (std::size_t j = 0; j < v.size(); ++j) out << (j ? "," : "") << v[j];
      out << '\n';
    }
    return;
  }
  std::ofstream out(path, std::ios::binary);
  for (double x : data.flat()) {
    auto raw = std::bit_cast<std::uint32_t>(static_cast<float>(x));
    if constexpr (std::endian::native == std::endian::big) raw = __builtin_bswap32(raw);
    out.write(reinterpret_cast<const char*>(&raw), sizeof raw);
  }
}

hnsw::VectorSet synthetic_uniform(std::size_t count, std::size_t dim, int rho, std::uint64_t seed,
                                  std::uint64_t stream) {
  Prg rng(seed, stream);
  const double scale = std::pow(10.0, rho);
  hnsw::VectorSet out(dim);
  std::vector<double> v(dim);
  for (std::size_t i = 0; i < count; ++i) {
    for (double& x : v) x = std::nearbyint(rng.uniform_real(-1, 1) * scale) / scale;
    out.add(v);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Configuration

namespace {

constexpr std::pair<SchemeKind, std::string_view> kSchemes[] = {
    {SchemeKind::kBasic, "basic"},
    {SchemeKind::kMirror, "mirror"},
    {SchemeKind::kReal, "real"},
    {SchemeKind::kPlainHnsw, "plaintext-hnsw"},
    {SchemeKind::kPlainBitgraph, "plaintext-bitgraph"},
    {SchemeKind::kBrute, "brute"},
};

}  // namespace

SchemeKind parse_scheme(std::string_view name) {
  for (auto [kind, text] : kSchemes) {
    if (text == name) return kind;
  }
  throw ParameterError("unknown scheme '" + std::string(name) + "'");
}

std::string_view scheme_name(SchemeKind s) {
  for (auto [kind, text] : kSchemes) {
    if (kind == s) return text;
  }
  return "unknown";
}

std::string_view selection_name(hnsw::NeighborSelection s) {
  return s == hnsw::NeighborSelection::kHeuristic ? "heuristic" : "closest-first";
}

hnsw::NeighborSelection parse_selection(std::string_view name) {
  if (name == "heuristic") return hnsw::NeighborSelection::kHeuristic;
  if (name == "closest-first") return hnsw::NeighborSelection::kClosestFirst;
  throw ParameterError("unknown neighbor selection '" + std::string(name) + "'");
}

bool uses_parties(SchemeKind s) {
  return s == SchemeKind::kBasic || s == SchemeKind::kMirror || s == SchemeKind::kReal;
}

double ExperimentConfig::effective_mL() const {
  if (mL >= 0) return mL;
  return M > 1 ? 1.0 / std::log(static_cast<double>(M)) : 0.0;
}

namespace {

sst::ProtocolParams protocol_params(const ExperimentConfig& c) {
  sst::ProtocolParams pp;
  pp.field.p = c.p;
  pp.field.k = c.k;
  pp.field.rho = c.rho;
  pp.field.n = c.n;
  pp.field.t = c.t;
  pp.index.M = c.M;
  pp.index.mL = c.effective_mL();
  pp.index.ef_construction = c.ef_construction;
  pp.index.ef_search = c.ef_search;
  pp.index.selection = c.selection;
  pp.index.metric = c.metric;
  pp.index.seed = c.seed;
  pp.retain_log = c.log_messages;
  return pp;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (uses_parties(scheme) && !(n >= t && t >= 1)) throw ParameterError("parties must satisfy n >= t >= 1");
  if (theta == 0) throw ParameterError("theta must be at least 1");
  if (dataset.empty() && (count == 0 || dim == 0)) throw ParameterError("synthetic data needs count and dim");
  protocol_params(*this).index.validate();
  if (uses_parties(scheme)) protocol_params(*this).validate(dim == 0 ? 1 : dim);
}

// ---------------------------------------------------------------------------
// Reports

namespace {

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

ordered_json config_json(const ExperimentConfig& c) {
  return ordered_json{{"scheme", scheme_name(c.scheme)},
                      {"n", c.n},
                      {"t", c.t},
                      {"rho", c.rho},
                      {"p", c.p},
                      {"k", c.k},
                      {"metric", hnsw::metric_name(c.metric)},
                      {"selection", selection_name(c.selection)},
                      {"M", c.M},
                      {"mL", c.effective_mL()},
                      {"ef_construction", c.ef_construction},
                      {"ef_search", c.ef_search},
                      {"theta", c.theta},
                      {"dataset", c.dataset},
                      {"format", format_name(c.format)},
                      {"dim", c.dim},
                      {"count", c.count},
                      {"queries", c.queries},
                      {"seed", c.seed},
                      {"leakage_samples", c.leakage_samples},
                      {"log_messages", c.log_messages}};
}

ordered_json counters_json(const leakage::SchemeCounters& c) {
  return ordered_json{{"share_ops", c.share_ops},   {"query_share_ops", c.query_share_ops},
                      {"ac_mul_ops", c.ac_mul_ops}, {"ac_distance_ops", c.ac_distance_ops},
                      {"ac_compare_ops", c.ac_compare_ops}, {"recon_ops", c.recon_ops},
                      {"d", c.d},                   {"n", c.n},
                      {"t", c.t},                   {"vertices", c.vertices},
                      {"edges", c.edges},           {"branches", c.branches},
                      {"duplicates", c.duplicates}};
}

template <typename T>
ordered_json optional_json(const std::optional<T>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

// Checks that `j` is an object holding exactly `keys`.
void exact_keys(const nlohmann::json& j, std::initializer_list<std::string_view> keys, const std::string& where) {
  if (!j.is_object()) throw FormatError(where + " must be an object");
  for (const auto& item : j.items()) {
    if (std::find(keys.begin(), keys.end(), item.key()) == keys.end()) {
      throw FormatError("unknown field '" + item.key() + "' in " + where);
    }
  }
  for (std::string_view k : keys) {
    if (!j.contains(std::string(k))) throw FormatError("missing field '" + std::string(k) + "' in " + where);
  }
}

leakage::Ratio parse_ratio(const std::string& s) {
  leakage::Ratio r;
  unsigned long long num = 0, den = 0;
  char tail = 0;
  if (std::sscanf(s.c_str(), "%llu/%llu%c", &num, &den, &tail) != 2 || den == 0) {
    throw FormatError("bad ratio '" + s + "'");
  }
  r.num = num;
  r.den = den;
  return r;
}

ExperimentConfig config_from(const nlohmann::json& c) {
  exact_keys(c, {"scheme", "n", "t", "rho", "p", "k", "metric", "selection", "M", "mL", "ef_construction",
                 "ef_search", "theta", "dataset", "format", "dim", "count", "queries", "seed", "leakage_samples",
                 "log_messages"},
             "config");
  ExperimentConfig cfg;
  cfg.scheme = parse_scheme(c.at("scheme").get<std::string>());
  cfg.n = c.at("n");
  cfg.t = c.at("t");
  cfg.rho = c.at("rho");
  cfg.p = c.at("p");
  cfg.k = c.at("k");
  cfg.metric = hnsw::parse_metric(c.at("metric").get<std::string>());
  cfg.selection = parse_selection(c.at("selection").get<std::string>());
  cfg.M = c.at("M");
  cfg.mL = c.at("mL");
  cfg.ef_construction = c.at("ef_construction");
  cfg.ef_search = c.at("ef_search");
  cfg.theta = c.at("theta");
  cfg.dataset = c.at("dataset").get<std::string>();
  cfg.format = parse_format(c.at("format").get<std::string>());
  cfg.dim = c.at("dim");
  cfg.count = c.at("count");
  cfg.queries = c.at("queries");
  cfg.seed = c.at("seed");
  cfg.leakage_samples = c.at("leakage_samples");
  cfg.log_messages = c.at("log_messages");
  return cfg;
}

}  // namespace

std::string report_to_json(const Report& r) {
  ordered_json j;
  j["version"] = r.version;
  j["scheme"] = r.scheme;
  j["config"] = config_json(r.config);
  j["metrics"] = ordered_json{{"queries", r.metrics.queries},
                              {"theta", r.metrics.theta},
                              {"recall", r.metrics.recall},
                              {"exact_match_rate", r.metrics.exact_match_rate},
                              {"walk_coverage", optional_json(r.metrics.walk_coverage)},
                              {"walk_deviation", optional_json(r.metrics.walk_deviation)},
                              {"oracle_checks_passed", r.metrics.oracle_checks_passed}};
  j["counters"] = counters_json(r.counters);
  j["index"] = ordered_json{{"vertices", r.index.vertices}, {"edges", r.index.edges},
                            {"entries", r.index.entries},   {"layers", r.index.layers},
                            {"messages", r.index.messages}, {"transcript_digest", r.index.transcript_digest}};
  if (r.leakage) {
    ordered_json samples = ordered_json::array();
    for (const auto& s : r.leakage->samples) {
      samples.push_back({{"element", s.element}, {"l1", s.l1.str()}, {"l2", s.l2.str()}, {"l3", s.l3.str()}});
    }
    j["leakage"] = ordered_json{{"layers", r.leakage->layers},
                                {"denominator", r.leakage->denominator},
                                {"epsilon", r.leakage->epsilon},
                                {"samples", samples}};
  } else {
    j["leakage"] = nullptr;
  }
  return j.dump(2) + "\n";
}

std::string config_to_json(const ExperimentConfig& c) { return config_json(c).dump(2) + "\n"; }

ExperimentConfig config_from_json(const std::string& text) {
  try {
    return config_from(nlohmann::json::parse(text));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("config: ") + e.what());
  } catch (const ParameterError& e) {
    throw FormatError(std::string("config: ") + e.what());
  }
}

Report report_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("report: ") + e.what());
  }
  try {
    exact_keys(j, {"version", "scheme", "config", "metrics", "counters", "index", "leakage"}, "report");
    Report r;
    r.version = j.at("version").get<int>();
    if (r.version != Report::kVersion) throw FormatError("unsupported report version " + std::to_string(r.version));
    r.scheme = j.at("scheme").get<std::string>();

    r.config = config_from(j.at("config"));

    const auto& m = j.at("metrics");
    exact_keys(m, {"queries", "theta", "recall", "exact_match_rate", "walk_coverage", "walk_deviation",
                   "oracle_checks_passed"},
               "metrics");
    r.metrics.queries = m.at("queries");
    r.metrics.theta = m.at("theta");
    r.metrics.recall = m.at("recall");
    r.metrics.exact_match_rate = m.at("exact_match_rate");
    if (!m.at("walk_coverage").is_null()) r.metrics.walk_coverage = m.at("walk_coverage").get<double>();
    if (!m.at("walk_deviation").is_null()) r.metrics.walk_deviation = m.at("walk_deviation").get<std::uint64_t>();
    r.metrics.oracle_checks_passed = m.at("oracle_checks_passed");

    const auto& k = j.at("counters");
    exact_keys(k, {"share_ops", "query_share_ops", "ac_mul_ops", "ac_distance_ops", "ac_compare_ops", "recon_ops",
                   "d", "n", "t", "vertices", "edges", "branches", "duplicates"},
               "counters");
    auto& ct = r.counters;
    ct.share_ops = k.at("share_ops");
    ct.query_share_ops = k.at("query_share_ops");
    ct.ac_mul_ops = k.at("ac_mul_ops");
    ct.ac_distance_ops = k.at("ac_distance_ops");
    ct.ac_compare_ops = k.at("ac_compare_ops");
    ct.recon_ops = k.at("recon_ops");
    ct.d = k.at("d");
    ct.n = k.at("n");
    ct.t = k.at("t");
    ct.vertices = k.at("vertices");
    ct.edges = k.at("edges");
    ct.branches = k.at("branches");
    ct.duplicates = k.at("duplicates");

    const auto& ix = j.at("index");
    exact_keys(ix, {"vertices", "edges", "entries", "layers", "messages", "transcript_digest"}, "index");
    r.index.vertices = ix.at("vertices");
    r.index.edges = ix.at("edges");
    r.index.entries = ix.at("entries");
    r.index.layers = ix.at("layers");
    r.index.messages = ix.at("messages");
    r.index.transcript_digest = ix.at("transcript_digest").get<std::string>();

    const auto& lk = j.at("leakage");
    if (!lk.is_null()) {
      exact_keys(lk, {"layers", "denominator", "epsilon", "samples"}, "leakage");
      leakage::LeakageReport lr;
      lr.layers = lk.at("layers");
      lr.denominator = lk.at("denominator");
      lr.epsilon = lk.at("epsilon");
      for (const auto& s : lk.at("samples")) {
        exact_keys(s, {"element", "l1", "l2", "l3"}, "leakage sample");
        lr.samples.push_back({s.at("element").get<VertexId>(), parse_ratio(s.at("l1")), parse_ratio(s.at("l2")),
                              parse_ratio(s.at("l3"))});
      }
      r.leakage = lr;
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("report: ") + e.what());
  } catch (const ParameterError& e) {
    throw FormatError(std::string("report: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Runs

namespace {

using Ids = std::vector<VertexId>;

Ids ids_of(const std::vector<hnsw::Neighbor>& ns) {
  Ids out;
  for (const auto& n : ns) out.push_back(n.id);
  return out;
}

double recall_of(const Ids& got, const Ids& truth) {
  const std::set<VertexId> want(truth.begin(), truth.end());
  std::size_t hit = 0;
  for (VertexId v : got) hit += want.count(v);
  return truth.empty() ? 1.0 : static_cast<double>(hit) / static_cast<double>(truth.size());
}

void stamp_layers(leakage::SchemeCounters& c, std::span<const bitgraph::Bitgraph> layers) {
  c.branches = 0;
  c.duplicates = 0;
  for (const auto& h : layers) {
    c.branches += h.branches().size();
    c.duplicates += h.duplicates();
  }
}

std::uint64_t entries_of(std::span<const bitgraph::Bitgraph> layers) {
  std::uint64_t total = 0;
  for (const auto& h : layers) total += h.entry_count();
  return total;
}

std::uint64_t edges_of(std::span<const bitgraph::Bitgraph> layers) {
  std::uint64_t total = 0;
  for (const auto& h : layers) total += bitgraph::reconstruct_graph(h).edge_count();
  return total;
}

std::uint64_t edges_of(const hnsw::HnswIndex& idx) {
  std::uint64_t total = 0;
  for (int l = 0; l <= idx.top_level(); ++l) total += idx.layer_graph(l).edge_count();
  return total;
}

leakage::LeakageReport leakage_for(std::span<const bitgraph::Bitgraph> layers, std::size_t samples) {
  const std::size_t total = layers.front().vertex_count();
  const std::size_t k = std::min(samples, total);
  std::vector<VertexId> elements;
  for (std::size_t i = 0; i < k; ++i) elements.push_back(static_cast<VertexId>(i * total / k));
  return leakage::leakage_report(layers, elements, leakage::ThetaMode::kCount);
}

}  // namespace

RunResult run(const ExperimentConfig& config) {
  const auto started = std::chrono::steady_clock::now();
  config.validate();
  const hnsw::VectorSet data = config.dataset.empty()
                                   ? synthetic_uniform(config.count, config.dim, config.rho, config.seed)
                                   : ingest(config.dataset, config.format,
                                            config.format == DataFormat::kFlatF32 ? config.dim : 0);
  if (data.empty()) throw EmptyDataset("dataset is empty");
  const std::size_t dim = data.dim();
  const hnsw::VectorSet queries = synthetic_uniform(config.queries, dim, config.rho, config.seed, domain::kQuery);

  const sst::ProtocolParams pp = protocol_params(config);
  hnsw::HnswParams twin_hp = pp.index;
  twin_hp.metric = sst::twin_metric(pp.index.metric);
  hnsw::VectorSet twin(dim);
  for (VertexId i = 0; i < data.size(); ++i) twin.add(sst::twin_coordinates(data[i], pp));
  std::vector<std::vector<double>> twin_queries;
  for (VertexId i = 0; i < queries.size(); ++i) twin_queries.push_back(sst::twin_coordinates(queries[i], pp));

  RunResult result;
  Report& rep = result.report;
  rep.scheme = std::string(scheme_name(config.scheme));
  rep.config = config;
  rep.config.mL = config.effective_mL();
  rep.metrics.queries = queries.size();
  rep.metrics.theta = config.theta;
  rep.counters.d = dim;
  rep.index.vertices = data.size();

  std::vector<Ids> truth, got, expected;
  for (const auto& q : twin_queries) truth.push_back(ids_of(hnsw::brute_force_ann(q, twin, config.theta, twin_hp.metric)));

  const auto party = [&](std::size_t i) { return static_cast<sst::PartyId>(i % static_cast<std::size_t>(config.n)); };

  switch (config.scheme) {
    case SchemeKind::kBrute: {
      got = truth;
      expected = truth;
      rep.index.layers = 1;
      break;
    }
    case SchemeKind::kPlainHnsw: {
      hnsw::HnswIndex idx(dim, twin_hp);
      for (VertexId i = 0; i < twin.size(); ++i) idx.insert(twin[i]);
      for (const auto& q : twin_queries) got.push_back(ids_of(idx.search(q, config.theta).nearest));
      expected = got;
      rep.index.edges = edges_of(idx);
      rep.index.layers = static_cast<std::uint64_t>(idx.top_level() + 1);
      break;
    }
    case SchemeKind::kPlainBitgraph: {
      hnsw::LayeredBitgraphIndex idx(dim, twin_hp);
      hnsw::HnswIndex ref(dim, twin_hp);
      for (VertexId i = 0; i < twin.size(); ++i) {
        idx.insert(twin[i]);
        ref.insert(twin[i]);
      }
      auto converted = hnsw::LayeredBitgraphIndex::from_hnsw(ref);
      std::size_t covered = 0;
      std::uint64_t deviation = 0;
      for (const auto& q : twin_queries) {
        got.push_back(ids_of(idx.search(q, config.theta).nearest));
        const auto r = ref.search(q, config.theta);
        auto b = converted.search(q, config.theta);
        std::vector<bitgraph::Candidate> cands;
        for (const auto& n : b.nearest) cands.push_back({n.distance, n.id, {}});
        covered += bitgraph::compare_walks(r.walk, ids_of(r.nearest), b.trace, cands) ? 1 : 0;
        deviation += b.trace.deviation;
      }
      expected = got;
      rep.metrics.walk_coverage = queries.empty() ? 1.0 : static_cast<double>(covered) / static_cast<double>(queries.size());
      rep.metrics.walk_deviation = deviation;
      stamp_layers(rep.counters, idx.layers());
      rep.index.entries = entries_of(idx.layers());
      rep.index.edges = edges_of(idx.layers());
      rep.index.layers = idx.layers().size();
      rep.leakage = leakage_for(idx.layers(), config.leakage_samples);
      break;
    }
    case SchemeKind::kBasic:
    case SchemeKind::kMirror:
    case SchemeKind::kReal: {
      sst::Session session(pp, dim, config.seed);
      leakage::SchemeCounters* counters = nullptr;
      if (config.scheme == SchemeKind::kBasic) {
        sst::BasicDatabase db(session);
        for (VertexId i = 0; i < data.size(); ++i) db.insert(party(i), data[i]);
        for (VertexId i = 0; i < queries.size(); ++i) got.push_back(db.search(party(i), queries[i], config.theta).ids);
        expected = truth;
        counters = &session.ledger().scheme(leakage::Scheme::kBasic);
        rep.index.layers = 1;
      } else if (config.scheme == SchemeKind::kMirror) {
        sst::MirrorDatabase db(session);
        hnsw::HnswIndex oracle(dim, twin_hp);
        for (VertexId i = 0; i < data.size(); ++i) {
          db.insert(party(i), data[i]);
          oracle.insert(twin[i]);
        }
        for (VertexId i = 0; i < queries.size(); ++i) {
          got.push_back(db.search(party(i), queries[i], config.theta).ids);
          expected.push_back(ids_of(oracle.search(twin_queries[i], config.theta).nearest));
        }
        counters = &session.ledger().scheme(leakage::Scheme::kMirror);
        rep.index.edges = edges_of(oracle);
        rep.index.entries = db.directed_records();
        rep.index.layers = static_cast<std::uint64_t>(db.top_level() + 1);
      } else {
        sst::CollabEDB db(session);
        hnsw::LayeredBitgraphIndex oracle(dim, twin_hp);
        for (VertexId i = 0; i < data.size(); ++i) {
          db.insert(party(i), data[i]);
          oracle.insert(twin[i]);
        }
        for (VertexId i = 0; i < queries.size(); ++i) {
          got.push_back(db.search(party(i), queries[i], config.theta).ids);
          expected.push_back(ids_of(oracle.search(twin_queries[i], config.theta).nearest));
        }
        counters = &session.ledger().scheme(leakage::Scheme::kReal);
        rep.index.entries = db.total_entries();
        rep.index.edges = edges_of(db.layers());
        rep.index.layers = db.layers().size();
        rep.leakage = leakage_for(db.layers(), config.leakage_samples);
        if (!(db.layers() == oracle.layers())) expected.clear();  // structure diverged from the twin
      }
      rep.counters = *counters;
      rep.index.messages = session.network().message_count();
      rep.index.transcript_digest = hex64(session.network().transcript_digest());
      if (config.log_messages) result.message_log = session.network().export_log();
      break;
    }
  }

  double recall = 0;
  std::size_t matches = 0;
  for (std::size_t i = 0; i < got.size(); ++i) {
    QueryRow row{i, recall_of(got[i], truth[i]), i < expected.size() && got[i] == expected[i]};
    recall += row.recall;
    matches += row.exact_match ? 1 : 0;
    result.rows.push_back(row);
  }
  const double nq = static_cast<double>(std::max<std::size_t>(got.size(), 1));
  rep.metrics.recall = got.empty() ? 1.0 : recall / nq;
  rep.metrics.exact_match_rate = got.empty() ? 1.0 : static_cast<double>(matches) / nq;
  rep.metrics.oracle_checks_passed = matches == got.size() && (config.scheme != SchemeKind::kBrute || recall == nq);
  result.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

void write_outputs(const RunResult& result, const std::filesystem::path& out) {
  std::filesystem::create_directories(out);
  std::ofstream(out / "report.json") << report_to_json(result.report);
  {
    std::ofstream csv(out / "queries.csv");
    csv << "query,recall,exact_match\n";
    for (const auto& r : result.rows) csv << r.query << ',' << r.recall << ',' << (r.exact_match ? 1 : 0) << '\n';
  }
  std::ofstream(out / "timing.json") << ordered_json{{"wall_seconds", result.wall_seconds}}.dump(2) << '\n';
  if (!result.message_log.empty()) std::ofstream(out / "messages.log") << result.message_log;
}

// ---------------------------------------------------------------------------
// Worked example and sweep

std::string worked_example_tables() {
  return "# bitgraph v1\n"
         "0 0 0 1 1\n"
         "0 1 1 2 -\n"
         "0 2 2 1 -\n"
         "0 3 4 1 -\n"
         "0 4 6 0 -\n"
         "1 0 0 1 -\n"
         "1 1 3 1 -\n"
         "1 2 5 1 -\n"
         "1 3 6 0 -\n";
}

bool demo_fig3(std::ostream& out, const std::string& golden) {
  OrderedGraph g(7);
  for (auto [u, v] : std::vector<std::pair<VertexId, VertexId>>{
           {0, 1}, {1, 2}, {1, 4}, {2, 4}, {0, 3}, {3, 5}, {4, 6}, {5, 6}}) {
    g.add_edge(u, v);
  }
  const bitgraph::Bitgraph h = bitgraph::partition_gamma(g);
  static constexpr char kNames[] = "abcdefg";
  for (const auto& b : h.branches()) {
    out << "branch H" << b.id + 1 << ":";
    for (const auto& e : b.entries) {
      out << " (" << kNames[e.vertex] << "," << e.seq << "," << e.post_d << ",{";
      for (std::size_t i = 0; i < e.par_b.size(); ++i) out << (i ? "," : "") << "H" << e.par_b[i] + 1;
      out << "})";
    }
    out << '\n';
  }
  const bool tables = bitgraph::from_text(golden.empty() ? worked_example_tables() : golden) == h;
  const auto edges = bitgraph::reconstruct_graph(h).edge_count();
  const auto units = leakage::mss_size(g);
  out << "golden tables: " << (tables ? "match" : "DIFFER") << '\n';
  out << "reconstructed edges: " << edges << '\n';
  out << "sharable units (2|E|): " << units << ", bitgraph entries: " << h.entry_count() << '\n';
  return tables && edges == 8 && units == 16;
}

std::vector<SweepRow> sweep(std::span<const std::size_t> sizes, std::size_t M, std::size_t dim, int n,
                            std::uint64_t seed) {
  std::vector<SweepRow> rows;
  sst::ProtocolParams pp;
  pp.field.n = n;
  pp.field.t = std::min(2, n);
  pp.index.M = M;
  pp.index.mL = M > 1 ? 1.0 / std::log(static_cast<double>(M)) : 0.0;
  pp.index.seed = seed;
  for (std::size_t size : sizes) {
    const hnsw::VectorSet data = synthetic_uniform(size, dim, pp.field.rho, seed);
    hnsw::HnswIndex idx(dim, pp.index);
    for (VertexId i = 0; i < data.size(); ++i) idx.insert(data[i]);
    const OrderedGraph g = idx.layer_graph(0);
    const bitgraph::Bitgraph h = bitgraph::partition_gamma(g);

    sst::Session session(pp, dim, seed);
    std::vector<std::vector<ss::FieldElement>> encoded;
    for (VertexId i = 0; i < data.size(); ++i) encoded.push_back(session.encode(data[i]));
    leakage::SchemeCounters naive, bitg;
    sst::share_naive_index(session, g, encoded, naive);
    sst::share_bitgraph_index(session, h, encoded, bitg);

    SweepRow row;
    row.vertices = size;
    row.edges = g.edge_count();
    row.average_degree = 2.0 * static_cast<double>(row.edges) / static_cast<double>(size);
    row.naive_units = leakage::mss_size(g);
    row.bitgraph_units = h.vertex_count() + h.duplicates();
    row.naive_share_ops = naive.share_ops;
    row.bitgraph_share_ops = bitg.share_ops;
    row.ratio = static_cast<double>(naive.share_ops) / static_cast<double>(bitg.share_ops);
    const std::uint64_t dn = dim * static_cast<std::uint64_t>(n);
    row.counters_match = naive.share_ops == dn * row.naive_units && bitg.share_ops == dn * row.bitgraph_units;
    rows.push_back(row);
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows) {
  out << "vertices,edges,average_degree,naive_units,bitgraph_units,naive_share_ops,bitgraph_share_ops,ratio,"
         "counters_match\n";
  for (const auto& r : rows) {
    out << r.vertices << ',' << r.edges << ',' << r.average_degree << ',' << r.naive_units << ','
        << r.bitgraph_units << ',' << r.naive_share_ops << ',' << r.bitgraph_share_ops << ',' << r.ratio << ','
        << (r.counters_match ? 1 : 0) << '\n';
  }
}

double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw ParameterError("spearman needs two equal-length samples");
  const auto ranks = [](std::span<const double> v) {
    std::vector<std::size_t> order(v.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < order.size();) {
      std::size_t j = i;
      while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
      const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
      for (std::size_t k = i; k <= j; ++k) r[order[k]] = avg;
      i = j + 1;
    }
    return r;
  };
  const auto rx = ranks(x), ry = ranks(y);
  const double n = static_cast<double>(x.size());
  const double mean = (n + 1) / 2;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mean) * (ry[i] - mean);
    sxx += (rx[i] - mean) * (rx[i] - mean);
    syy += (ry[i] - mean) * (ry[i] - mean);
  }
  return sxx == 0 || syy == 0 ? 0.0 : sxy / std::sqrt(sxx * syy);
}

}  // namespace spa2nn::cli
