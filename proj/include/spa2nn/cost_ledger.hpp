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

#include <array>
#include <cstdint>
#include <string_view>

namespace spa2nn::leakage {

enum class Scheme { kBasic = 0, kMirror = 1, kReal = 2 };

std::string_view scheme_name(Scheme s);

/// Operation counters for one scheme. All counters only grow.
///
/// `share_ops` counts share values produced for stored data and index
/// records: one SS.Share invocation on a coordinate contributes n. Query
/// sharings are tracked separately in `query_share_ops` so that the index
/// counters match the closed-form cost laws exactly.
struct SchemeCounters {
  std::uint64_t share_ops = 0;
  std::uint64_t query_share_ops = 0;
  std::uint64_t ac_mul_ops = 0;       // Beaver multiplications, per coordinate
  std::uint64_t ac_distance_ops = 0;  // distance circuits evaluated
  std::uint64_t ac_compare_ops = 0;   // sign reveals at the coordinator
  std::uint64_t recon_ops = 0;        // SS.Recon invocations, per field element

  // Shape of the index the counters were measured on.
  std::uint64_t d = 0, n = 0, t = 0;
  std::uint64_t vertices = 0, edges = 0, branches = 0, duplicates = 0;
};

class CostLedger {
 public:
  SchemeCounters& scheme(Scheme s) { return counters_[static_cast<std::size_t>(s)]; }
  const SchemeCounters& scheme(Scheme s) const { return counters_[static_cast<std::size_t>(s)]; }

 private:
  std::array<SchemeCounters, 3> counters_{};
};

}  // namespace spa2nn::leakage
