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

#include "spa2nn/field.hpp"

#include <cmath>
#include <string>

#include "spa2nn/errors.hpp"

namespace spa2nn::ss {

namespace {

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  b %= m;
  while (e) {
    if (e & 1) r = mulmod(r, b, m);
    b = mulmod(b, b, m);
    e >>= 1;
  }
  return r;
}

}  // namespace

bool is_prime(std::uint64_t value) {
  if (value < 2) return false;
  for (std::uint64_t small : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (value % small == 0) return value == small;
  }
  std::uint64_t d = value - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // These witnesses are sufficient for all n < 2^64.
  for (std::uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    std::uint64_t x = powmod(a, d, value);
    if (x == 1 || x == value - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, value);
      if (x == value - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

std::uint64_t FieldParams::scale() const {
  std::uint64_t s = 1;
  for (int i = 0; i < rho; ++i) s *= 10;
  return s;
}

void FieldParams::validate() const {
  if (n < 1) throw ParameterError("party count n must be at least 1");
  if (t < 1 || t > n) throw ParameterError("threshold must satisfy 1 <= t <= n");
  if (k < 0 || k > 62) throw ParameterError("security parameter k must lie in [0, 62]");
  if (rho < 0 || rho > 18) throw ParameterError("scale exponent rho must lie in [0, 18]");
  if (p >= (std::uint64_t{1} << 62)) throw ParameterError("modulus must be below 2^62");
  if (!is_prime(p)) throw ParameterError("modulus " + std::to_string(p) + " is not prime");
  if (p < (std::uint64_t{1} << k)) throw ParameterError("modulus below 2^k");
  if (p < scale()) throw ParameterError("modulus below the fixed-point scale 10^rho");
  if (p < static_cast<std::uint64_t>(n)) throw ParameterError("modulus below the party count");
}

FieldElement Field::pow(FieldElement base, std::uint64_t exp) const { return powmod(base, exp, p_); }

FieldElement Field::inv(FieldElement a) const {
  if (a % p_ == 0) throw ParameterError("zero has no inverse");
  return powmod(a, p_ - 2, p_);
}

FieldElement Field::from_signed(std::int64_t x) const {
  if (x >= 0) return static_cast<std::uint64_t>(x) % p_;
  const std::uint64_t mag = static_cast<std::uint64_t>(-(x + 1)) + 1;
  return neg(mag % p_);
}

std::int64_t Field::to_signed(FieldElement a) const {
  if (a > p_ / 2) return -static_cast<std::int64_t>(p_ - a);
  return static_cast<std::int64_t>(a);
}

std::vector<FieldElement> encode_vector(std::span<const double> v, const FieldParams& params) {
  const Field field(params.p);
  const double scale = static_cast<double>(params.scale());
  const double half = static_cast<double>(params.p) / 2.0;
  std::vector<FieldElement> out;
  out.reserve(v.size());
  for (std::size_t j = 0; j < v.size(); ++j) {
    const double scaled = std::nearbyint(v[j] * scale);
    if (!std::isfinite(scaled) || std::fabs(scaled) >= half) {
      throw OverflowError("coordinate " + std::to_string(j) + " exceeds the signed field range");
    }
    out.push_back(field.from_signed(static_cast<std::int64_t>(scaled)));
  }
  return out;
}

std::vector<double> decode_vector(std::span<const FieldElement> v, const FieldParams& params,
                                  int scale_exponent) {
  const Field field(params.p);
  const int e = scale_exponent < 0 ? params.rho : scale_exponent;
  const double scale = std::pow(10.0, e);
  std::vector<double> out;
  out.reserve(v.size());
  for (FieldElement x : v) out.push_back(static_cast<double>(field.to_signed(x)) / scale);
  return out;
}

std::vector<double> quantize_to_integers(std::span<const double> v, int rho) {
  const double scale = std::pow(10.0, rho);
  std::vector<double> out;
  out.reserve(v.size());
  for (double x : v) out.push_back(std::nearbyint(x * scale));
  return out;
}

}  // namespace spa2nn::ss
