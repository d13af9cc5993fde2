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

#include "spa2nn/shamir.hpp"

#include <algorithm>
#include <numeric>
#include <string>

#include "spa2nn/errors.hpp"

namespace spa2nn::ss {

std::vector<Share> ss_share(FieldElement secret, const FieldParams& params, RandomSource& rng) {
  const Field field(params.p);
  std::vector<FieldElement> coeffs(static_cast<std::size_t>(params.t));
  coeffs[0] = field.reduce(secret);
  for (int i = 1; i < params.t; ++i) coeffs[static_cast<std::size_t>(i)] = rng.uniform_below(params.p);

  std::vector<Share> shares;
  shares.reserve(static_cast<std::size_t>(params.n));
  for (int x = 1; x <= params.n; ++x) {
    // Horner, highest degree first.
    FieldElement acc = 0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
      acc = field.add(field.mul(acc, static_cast<FieldElement>(x)), *it);
    }
    shares.push_back({x, acc});
  }
  return shares;
}

LagrangeAtZero::LagrangeAtZero(std::span<const int> points, const Field& field)
    : field_(field), points_(points.begin(), points.end()) {
  coeffs_.reserve(points_.size());
  for (std::size_t i = 0; i < points_.size(); ++i) {
    FieldElement num = 1;
    FieldElement den = 1;
    const FieldElement xi = field_.reduce(static_cast<std::uint64_t>(points_[i]));
    for (std::size_t j = 0; j < points_.size(); ++j) {
      if (i == j) continue;
      const FieldElement xj = field_.reduce(static_cast<std::uint64_t>(points_[j]));
      // l_i(0) = prod_j (0 - x_j) / (x_i - x_j)
      num = field_.mul(num, field_.neg(xj));
      den = field_.mul(den, field_.sub(xi, xj));
    }
    coeffs_.push_back(field_.mul(num, field_.inv(den)));
  }
}

FieldElement LagrangeAtZero::combine(std::span<const FieldElement> values) const {
  FieldElement acc = 0;
  for (std::size_t i = 0; i < coeffs_.size(); ++i) acc = field_.add(acc, field_.mul(coeffs_[i], values[i]));
  return acc;
}

FieldElement ss_recon(std::span<const Share> shares, const FieldParams& params) {
  if (shares.size() < static_cast<std::size_t>(params.t)) {
    throw InsufficientShares("need " + std::to_string(params.t) + " shares, got " +
                             std::to_string(shares.size()));
  }
  std::vector<int> points;
  std::vector<FieldElement> values;
  points.reserve(shares.size());
  values.reserve(shares.size());
  for (const Share& s : shares) {
    if (s.point < 1 || s.point > params.n) throw ParameterError("share label out of range");
    if (std::find(points.begin(), points.end(), s.point) != points.end()) {
      throw ParameterError("duplicate share label " + std::to_string(s.point));
    }
    points.push_back(s.point);
    values.push_back(s.value);
  }
  const Field field(params.p);
  return LagrangeAtZero(points, field).combine(values);
}

ShareVector::ShareVector(FieldParams params, std::size_t dim)
    : params_(params), dim_(dim), data_(static_cast<std::size_t>(params.n) * dim, 0) {}

ShareVector ShareVector::share(std::span<const FieldElement> secret, const FieldParams& params,
                               RandomSource& rng) {
  ShareVector out(params, secret.size());
  for (std::size_t j = 0; j < secret.size(); ++j) {
    const auto shares = ss_share(secret[j], params, rng);
    for (int u = 0; u < params.n; ++u) out.data_[static_cast<std::size_t>(u) * out.dim_ + j] = shares[static_cast<std::size_t>(u)].value;
  }
  return out;
}

ShareVector ShareVector::constant(std::span<const FieldElement> value, const FieldParams& params) {
  ShareVector out(params, value.size());
  const Field field(params.p);
  for (int u = 0; u < params.n; ++u) {
    for (std::size_t j = 0; j < value.size(); ++j) out.party(u)[j] = field.reduce(value[j]);
  }
  return out;
}

std::vector<FieldElement> ShareVector::reconstruct(std::span<const PartyId> parties) const {
  if (parties.size() < static_cast<std::size_t>(params_.t)) {
    throw InsufficientShares("reconstruction needs " + std::to_string(params_.t) + " parties");
  }
  std::vector<int> points;
  for (PartyId u : parties) {
    if (u < 0 || u >= params_.n) throw ParameterError("party id out of range");
    points.push_back(u + 1);
  }
  {
    auto sorted = points;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw ParameterError("duplicate party in reconstruction set");
    }
  }
  const Field field(params_.p);
  const LagrangeAtZero basis(points, field);
  std::vector<FieldElement> out(dim_);
  std::vector<FieldElement> column(parties.size());
  for (std::size_t j = 0; j < dim_; ++j) {
    for (std::size_t i = 0; i < parties.size(); ++i) column[i] = at(parties[i], j);
    out[j] = basis.combine(column);
  }
  return out;
}

std::vector<FieldElement> ShareVector::reconstruct() const {
  std::vector<PartyId> parties(static_cast<std::size_t>(params_.t));
  std::iota(parties.begin(), parties.end(), 0);
  return reconstruct(parties);
}

}  // namespace spa2nn::ss
