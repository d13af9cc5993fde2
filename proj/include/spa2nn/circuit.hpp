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
#include <span>
#include <vector>

#include "spa2nn/cost_ledger.hpp"
#include "spa2nn/network.hpp"
#include "spa2nn/shamir.hpp"

namespace spa2nn::ss {

/// Correlated randomness for one vector multiplication: independent
/// coordinate-wise triples with c_j = a_j * b_j.
struct BeaverTriple {
  ShareVector a, b, c;
  bool consumed = false;
};

/// Simulation-only trusted dealer that pre-generates Beaver triples.
class TripleDealer {
 public:
  TripleDealer(FieldParams params, std::uint64_t seed);

  /// Deals a fresh triple of dimension `dim`. When a network is given the
  /// per-party distribution is logged as one dealer message per party.
  BeaverTriple deal(std::size_t dim, net::PartyNetwork* network = nullptr);

  std::uint64_t dealt() const { return dealt_; }

 private:
  FieldParams params_;
  Prg rng_;
  std::uint64_t dealt_ = 0;
};

// Party-local linear operations.
ShareVector share_add(const ShareVector& x, const ShareVector& y);
ShareVector share_sub(const ShareVector& x, const ShareVector& y);
ShareVector share_neg(const ShareVector& x);
/// Sum of all coordinates, as a shared scalar.
SharedScalar sum_coordinates(const ShareVector& x);

/// Coordinate-wise product via one broadcast round of masked openings.
/// Throws TripleReuse when `triple` was already consumed.
ShareVector share_mul(const ShareVector& x, const ShareVector& y, BeaverTriple& triple,
                      net::PartyNetwork& network, leakage::SchemeCounters* counters = nullptr);

enum class SharedMetric { kSquaredEuclidean, kInnerProduct };

/// Squared Euclidean distance or inner product over shares. The result is
/// exact at scale 10^(2 rho). `coord_bound` is the public bound on the
/// absolute value of any encoded coordinate; the call throws OverflowError
/// when d * (max term)^2 could reach p/2.
SharedScalar ac_distance(const ShareVector& x, const ShareVector& y, SharedMetric metric,
                         TripleDealer& dealer, net::PartyNetwork& network, std::uint64_t coord_bound,
                         leakage::SchemeCounters* counters = nullptr);

/// Sign of (a - b) as decided by `coordinator`: the responders send their
/// shares of the difference to the coordinator, which reconstructs from the
/// first t of them and broadcasts only the sign. Returns -1, 0 or 1.
/// `responders` defaults to every party. Throws InsufficientShares when
/// fewer than t parties respond.
int ac_sign(const SharedScalar& a, const SharedScalar& b, PartyId coordinator, net::PartyNetwork& network,
            std::span<const PartyId> responders = {}, leakage::SchemeCounters* counters = nullptr);

/// a > b, decided by the coordinator as in ac_sign.
bool ac_compare(const SharedScalar& a, const SharedScalar& b, PartyId coordinator,
                net::PartyNetwork& network, std::span<const PartyId> responders = {},
                leakage::SchemeCounters* counters = nullptr);

}  // namespace spa2nn::ss
