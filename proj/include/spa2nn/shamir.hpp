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

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "spa2nn/field.hpp"
#include "spa2nn/random.hpp"

namespace spa2nn::ss {

/// Party indices are 0-based; party u evaluates the sharing polynomial at u+1.
using PartyId = int;

/// One labeled share: the polynomial evaluated at `point` (1..n).
struct Share {
  int point = 0;
  FieldElement value = 0;

  bool operator==(const Share&) const = default;
};

/// Shares `secret` with a random degree-(t-1) polynomial whose constant term
/// is the secret. Coefficients are drawn from `rng` in ascending degree order.
std::vector<Share> ss_share(FieldElement secret, const FieldParams& params, RandomSource& rng);

/// Lagrange interpolation at zero over every supplied share.
/// Throws InsufficientShares below the threshold and ParameterError on
/// duplicate or out-of-range labels.
FieldElement ss_recon(std::span<const Share> shares, const FieldParams& params);

/// Lagrange coefficients at zero for a fixed set of evaluation points, so a
/// reconstruction over the same subset is a dot product.
class LagrangeAtZero {
 public:
  LagrangeAtZero(std::span<const int> points, const Field& field);

  FieldElement combine(std::span<const FieldElement> values) const;
  std::span<const int> points() const { return points_; }

 private:
  Field field_;
  std::vector<int> points_;
  std::vector<FieldElement> coeffs_;
};

/// A vector secret split across all n parties. Party u holds `party(u)`,
/// a vector of `dim()` field elements.
class ShareVector {
 public:
  ShareVector() = default;
  ShareVector(FieldParams params, std::size_t dim);

  /// Shares every coordinate of `secret` independently.
  static ShareVector share(std::span<const FieldElement> secret, const FieldParams& params,
                           RandomSource& rng);

  /// The trivial sharing of a public vector: every party holds the constant.
  static ShareVector constant(std::span<const FieldElement> value, const FieldParams& params);

  const FieldParams& params() const { return params_; }
  std::size_t dim() const { return dim_; }
  int parties() const { return params_.n; }

  std::span<const FieldElement> party(PartyId u) const {
    return {data_.data() + static_cast<std::size_t>(u) * dim_, dim_};
  }
  std::span<FieldElement> party(PartyId u) {
    return {data_.data() + static_cast<std::size_t>(u) * dim_, dim_};
  }
  FieldElement at(PartyId u, std::size_t j) const { return data_[static_cast<std::size_t>(u) * dim_ + j]; }

  /// Reconstructs every coordinate from the listed parties.
  std::vector<FieldElement> reconstruct(std::span<const PartyId> parties) const;
  /// Reconstructs from parties 0..t-1.
  std::vector<FieldElement> reconstruct() const;

  /// Per-party storage, flattened party-major. Used by snapshot I/O.
  std::span<const FieldElement> raw() const { return data_; }
  std::span<FieldElement> raw() { return data_; }

  bool operator==(const ShareVector&) const = default;

 private:
  FieldParams params_{};
  std::size_t dim_ = 0;
  std::vector<FieldElement> data_;
};

/// A shared scalar is a ShareVector of dimension one.
using SharedScalar = ShareVector;

}  // namespace spa2nn::ss
