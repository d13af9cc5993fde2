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

namespace spa2nn {

/// Source of uniform field coefficients. Sharing code only ever asks for
/// values below a bound, so tests can substitute a fixed sequence.
class RandomSource {
 public:
  virtual ~RandomSource() = default;
  virtual std::uint64_t uniform_below(std::uint64_t bound) = 0;
};

/// Deterministic generator keyed by (seed, domain, counter).
///
/// This is the key-derivation function used for every sharing polynomial:
/// the same triple always yields the same stream, which is what makes a
/// protocol run replayable. The output is xoshiro256** seeded through
/// splitmix64, so streams are identical across platforms and standard
/// library implementations.
class Prg final : public RandomSource {
 public:
  explicit Prg(std::uint64_t seed, std::uint64_t domain = 0, std::uint64_t counter = 0);

  std::uint64_t next();

  /// Uniform in [0, bound) by rejection sampling. `bound` must be nonzero.
  std::uint64_t uniform_below(std::uint64_t bound) override;

  /// Uniform in (0, 1], 53-bit resolution.
  double uniform_open_zero();

  /// Uniform in [lo, hi).
  double uniform_real(double lo, double hi);

 private:
  std::uint64_t s_[4];
};

/// Named derivation domains. Keeping them in one place avoids accidental
/// stream reuse between unrelated consumers of the same seed.
namespace domain {
inline constexpr std::uint64_t kPartySeed = 0x5eed;
inline constexpr std::uint64_t kInsertKey = 0x1115;
inline constexpr std::uint64_t kSearchKey = 0x5ea7;
inline constexpr std::uint64_t kReshare = 0x7e5a;
inline constexpr std::uint64_t kDealer = 0xdea1;
inline constexpr std::uint64_t kLevel = 0x1e7e;
inline constexpr std::uint64_t kData = 0xda7a;
inline constexpr std::uint64_t kQuery = 0x9e7;
}  // namespace domain

std::uint64_t splitmix64(std::uint64_t& state);

/// 64-bit FNV-1a, used for payload digests in message logs.
class Fnv1a {
 public:
  void update(std::uint64_t word);
  void update_bytes(const void* data, std::size_t size);
  std::uint64_t value() const { return h_; }

 private:
  std::uint64_t h_ = 0xcbf29ce484222325ULL;
};

}  // namespace spa2nn
