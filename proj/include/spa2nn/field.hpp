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

namespace spa2nn::ss {

/// A field element is a residue in [0, p). All arithmetic below reduces.
using FieldElement = std::uint64_t;

inline constexpr std::uint64_t kMersenne61 = (std::uint64_t{1} << 61) - 1;

/// Deterministic Miller-Rabin, exact for every 64-bit input.
bool is_prime(std::uint64_t value);

/// Public parameters of a (t, n) sharing over Z_p with fixed-point scale 10^rho.
struct FieldParams {
  std::uint64_t p = kMersenne61;
  int k = 40;    // computational security parameter, bits
  int rho = 3;   // fixed-point scale exponent
  int n = 3;     // party count
  int t = 2;     // threshold

  /// Throws ParameterError unless p is prime, p >= max(2^k, ceil(10^rho), n),
  /// p < 2^62, and 1 <= t <= n.
  void validate() const;

  /// 10^rho as an integer.
  std::uint64_t scale() const;

  bool operator==(const FieldParams&) const = default;
};

/// Arithmetic in Z_p.
class Field {
 public:
  explicit Field(std::uint64_t p) : p_(p) {}

  std::uint64_t modulus() const { return p_; }

  FieldElement reduce(std::uint64_t x) const { return x % p_; }
  FieldElement add(FieldElement a, FieldElement b) const {
    const std::uint64_t s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  FieldElement sub(FieldElement a, FieldElement b) const { return a >= b ? a - b : a + p_ - b; }
  FieldElement neg(FieldElement a) const { return a == 0 ? 0 : p_ - a; }
  FieldElement mul(FieldElement a, FieldElement b) const {
    return static_cast<FieldElement>((static_cast<unsigned __int128>(a) * b) % p_);
  }
  FieldElement pow(FieldElement base, std::uint64_t exp) const;
  /// Multiplicative inverse; `a` must be nonzero.
  FieldElement inv(FieldElement a) const;

  /// Two's-complement-style embedding: x < 0 maps to p - |x|.
  FieldElement from_signed(std::int64_t x) const;
  /// Values above p/2 decode as negative.
  std::int64_t to_signed(FieldElement a) const;

 private:
  std::uint64_t p_;
};

/// Scales by 10^rho, rounds to nearest, and embeds into the field.
/// Throws OverflowError when a scaled coordinate does not satisfy |x| < p/2.
std::vector<FieldElement> encode_vector(std::span<const double> v, const FieldParams& params);

/// Inverse of encode_vector. `scale_exponent` defaults to rho; products of two
/// encoded values carry scale 10^(2 rho).
std::vector<double> decode_vector(std::span<const FieldElement> v, const FieldParams& params,
                                  int scale_exponent = -1);

/// Rounds every coordinate to the fixed-point grid, returning the integer
/// representatives as doubles (exact when |x| 10^rho < 2^53).
std::vector<double> quantize_to_integers(std::span<const double> v, int rho);

}  // namespace spa2nn::ss
