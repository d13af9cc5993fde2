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

#include "spa2nn/circuit.hpp"

#include <map>
#include <numeric>
#include <string>

#include "spa2nn/errors.hpp"

namespace spa2nn::ss {

namespace {

void require_compatible(const ShareVector& x, const ShareVector& y) {
  if (!(x.params() == y.params())) throw ParameterError("share vectors use different parameters");
  if (x.dim() != y.dim()) throw ParameterError("share vectors differ in dimension");
}

std::vector<int> first_points(int t) {
  std::vector<int> pts(static_cast<std::size_t>(t));
  std::iota(pts.begin(), pts.end(), 1);
  return pts;
}

// Comparisons reconstruct from the same few responder sets over and over.
const LagrangeAtZero& cached_basis(const std::vector<int>& points, const Field& field) {
  thread_local std::map<std::pair<std::uint64_t, std::vector<int>>, LagrangeAtZero> cache;
  const auto key = std::make_pair(field.modulus(), points);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, LagrangeAtZero(points, field)).first;
  return it->second;
}

}  // namespace

TripleDealer::TripleDealer(FieldParams params, std::uint64_t seed)
    : params_(params), rng_(seed, domain::kDealer) {
  params_.validate();
}

BeaverTriple TripleDealer::deal(std::size_t dim, net::PartyNetwork* network) {
  const Field field(params_.p);
  std::vector<FieldElement> a(dim), b(dim), c(dim);
  for (std::size_t j = 0; j < dim; ++j) {
    a[j] = rng_.uniform_below(params_.p);
    b[j] = rng_.uniform_below(params_.p);
    c[j] = field.mul(a[j], b[j]);
  }
  BeaverTriple triple{ShareVector::share(a, params_, rng_), ShareVector::share(b, params_, rng_),
                      ShareVector::share(c, params_, rng_), false};
  ++dealt_;
  if (network != nullptr) {
    std::vector<std::uint64_t> payload;
    payload.reserve(3 * dim);
    for (int u = 0; u < params_.n; ++u) {
      payload.clear();
      for (const ShareVector* sv : {&triple.a, &triple.b, &triple.c}) {
        payload.insert(payload.end(), sv->party(u).begin(), sv->party(u).end());
      }
      network->send(network->dealer(), {u}, payload);
    }
  }
  return triple;
}

ShareVector share_add(const ShareVector& x, const ShareVector& y) {
  require_compatible(x, y);
  const Field field(x.params().p);
  ShareVector out(x.params(), x.dim());
  for (std::size_t i = 0; i < out.raw().size(); ++i) out.raw()[i] = field.add(x.raw()[i], y.raw()[i]);
  return out;
}

ShareVector share_sub(const ShareVector& x, const ShareVector& y) {
  require_compatible(x, y);
  const Field field(x.params().p);
  ShareVector out(x.params(), x.dim());
  for (std::size_t i = 0; i < out.raw().size(); ++i) out.raw()[i] = field.sub(x.raw()[i], y.raw()[i]);
  return out;
}

ShareVector share_neg(const ShareVector& x) {
  const Field field(x.params().p);
  ShareVector out(x.params(), x.dim());
  for (std::size_t i = 0; i < out.raw().size(); ++i) out.raw()[i] = field.neg(x.raw()[i]);
  return out;
}

SharedScalar sum_coordinates(const ShareVector& x) {
  const Field field(x.params().p);
  SharedScalar out(x.params(), 1);
  for (int u = 0; u < x.parties(); ++u) {
    FieldElement acc = 0;
    for (FieldElement v : x.party(u)) acc = field.add(acc, v);
    out.party(u)[0] = acc;
  }
  return out;
}

ShareVector share_mul(const ShareVector& x, const ShareVector& y, BeaverTriple& triple,
                      net::PartyNetwork& network, leakage::SchemeCounters* counters) {
  require_compatible(x, y);
  if (triple.consumed) throw TripleReuse("Beaver triple already consumed");
  if (triple.a.dim() != x.dim() || !(triple.a.params() == x.params())) {
    throw ParameterError("triple does not match the operands");
  }
  triple.consumed = true;

  const FieldParams& params = x.params();
  const Field field(params.p);
  const std::size_t dim = x.dim();
  const ShareVector masked_x = share_sub(x, triple.a);
  const ShareVector masked_y = share_sub(y, triple.b);

  // One round: every party broadcasts its shares of x - a and y - b.
  network.next_round();
  std::vector<std::uint64_t> payload(2 * dim);
  for (int u = 0; u < params.n; ++u) {
    std::copy(masked_x.party(u).begin(), masked_x.party(u).end(), payload.begin());
    std::copy(masked_y.party(u).begin(), masked_y.party(u).end(), payload.begin() + static_cast<std::ptrdiff_t>(dim));
    network.broadcast(u, payload);
  }

  // Every party reconstructs the same openings; computing them once is
  // equivalent in the honest-but-curious model.
  const LagrangeAtZero& basis = cached_basis(first_points(params.t), field);
  std::vector<FieldElement> column(static_cast<std::size_t>(params.t));
  std::vector<FieldElement> dx(dim), ey(dim);
  for (std::size_t j = 0; j < dim; ++j) {
    for (int i = 0; i < params.t; ++i) column[static_cast<std::size_t>(i)] = masked_x.at(i, j);
    dx[j] = basis.combine(column);
    for (int i = 0; i < params.t; ++i) column[static_cast<std::size_t>(i)] = masked_y.at(i, j);
    ey[j] = basis.combine(column);
  }

  // z = c + d*b + e*a + d*e, the public d*e term added to every share.
  ShareVector out(params, dim);
  for (int u = 0; u < params.n; ++u) {
    for (std::size_t j = 0; j < dim; ++j) {
      FieldElement z = triple.c.at(u, j);
      z = field.add(z, field.mul(dx[j], triple.b.at(u, j)));
      z = field.add(z, field.mul(ey[j], triple.a.at(u, j)));
      z = field.add(z, field.mul(dx[j], ey[j]));
      out.party(u)[j] = z;
    }
  }
  if (counters != nullptr) {
    counters->ac_mul_ops += dim;
    counters->recon_ops += 2 * dim;
  }
  return out;
}

SharedScalar ac_distance(const ShareVector& x, const ShareVector& y, SharedMetric metric,
                         TripleDealer& dealer, net::PartyNetwork& network, std::uint64_t coord_bound,
                         leakage::SchemeCounters* counters) {
  require_compatible(x, y);
  const FieldParams& params = x.params();
  const unsigned __int128 term =
      metric == SharedMetric::kSquaredEuclidean ? static_cast<unsigned __int128>(2) * coord_bound : coord_bound;
  const unsigned __int128 worst = static_cast<unsigned __int128>(x.dim()) * term * term;
  if (worst >= params.p / 2) {
    throw OverflowError("distance of " + std::to_string(x.dim()) +
                        "-dimensional vectors may exceed the signed field range");
  }

  BeaverTriple triple = dealer.deal(x.dim(), &network);
  ShareVector products;
  if (metric == SharedMetric::kSquaredEuclidean) {
    const ShareVector diff = share_sub(x, y);
    products = share_mul(diff, diff, triple, network, counters);
  } else {
    products = share_mul(x, y, triple, network, counters);
  }
  if (counters != nullptr) ++counters->ac_distance_ops;
  return sum_coordinates(products);
}

int ac_sign(const SharedScalar& a, const SharedScalar& b, PartyId coordinator, net::PartyNetwork& network,
            std::span<const PartyId> responders, leakage::SchemeCounters* counters) {
  require_compatible(a, b);
  if (a.dim() != 1) throw ParameterError("comparison operands must be scalars");
  const FieldParams& params = a.params();
  if (coordinator < 0 || coordinator >= params.n) throw ParameterError("coordinator out of range");

  std::vector<PartyId> everyone;
  if (responders.empty()) {
    everyone.resize(static_cast<std::size_t>(params.n));
    std::iota(everyone.begin(), everyone.end(), 0);
    responders = everyone;
  }
  if (responders.size() < static_cast<std::size_t>(params.t)) {
    throw InsufficientShares("comparison needs " + std::to_string(params.t) + " responding parties");
  }

  const Field field(params.p);
  const SharedScalar diff = share_sub(a, b);
  network.next_round();
  std::vector<int> points(static_cast<std::size_t>(params.t));
  std::vector<FieldElement> values(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const PartyId u = responders[i];
    if (u < 0 || u >= params.n) throw ParameterError("responder out of range");
    values[i] = diff.at(u, 0);
    if (u != coordinator) network.send(u, {coordinator}, std::span<const std::uint64_t>(&values[i], 1));
    points[i] = u + 1;
  }
  const std::int64_t signed_diff = field.to_signed(cached_basis(points, field).combine(values));
  const int sign = (signed_diff > 0) - (signed_diff < 0);

  network.next_round();
  const std::uint64_t bit = static_cast<std::uint64_t>(sign + 1);
  network.broadcast(coordinator, std::span<const std::uint64_t>(&bit, 1));
  if (counters != nullptr) {
    ++counters->ac_compare_ops;
    ++counters->recon_ops;
  }
  return sign;
}

bool ac_compare(const SharedScalar& a, const SharedScalar& b, PartyId coordinator, net::PartyNetwork& network,
                std::span<const PartyId> responders, leakage::SchemeCounters* counters) {
  return ac_sign(a, b, coordinator, network, responders, counters) > 0;
}

}  // namespace spa2nn::ss
