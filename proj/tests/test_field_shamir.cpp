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

#include <gtest/gtest.h>

#include <algorithm>
#include <chrono>
#include <functional>
#include <cmath>
#include <numeric>
#include <vector>

#include "spa2nn/circuit.hpp"
#include "spa2nn/errors.hpp"
#include "spa2nn/field.hpp"
#include "spa2nn/shamir.hpp"

namespace {

using namespace spa2nn;
using namespace spa2nn::ss;

FieldParams small_params(int n, int t) {
  FieldParams params;
  params.p = 97;
  params.k = 6;
  params.rho = 1;
  params.n = n;
  params.t = t;
  return params;
}

FieldParams big_params(int n, int t, int rho = 3) {
  FieldParams params;
  params.n = n;
  params.t = t;
  params.rho = rho;
  return params;
}

// Always yields the same coefficient.
class FixedSource final : public RandomSource {
 public:
  explicit FixedSource(std::uint64_t value) : value_(value) {}
  std::uint64_t uniform_below(std::uint64_t bound) override { return value_ % bound; }

 private:
  std::uint64_t value_;
};

// Independent reconstruction oracle: solve the Vandermonde system
// V c = y for the polynomial coefficients by Gauss-Jordan elimination mod p
// (modular inverse via Fermat, written out without the library's Field).
std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
}

std::uint64_t powmod(std::uint64_t b, std::uint64_t e, std::uint64_t p) {
  std::uint64_t r = 1;
  b %= p;
  while (e) {
    if (e & 1) r = mulmod(r, b, p);
    b = mulmod(b, b, p);
    e >>= 1;
  }
  return r;
}

std::uint64_t vandermonde_secret(const std::vector<Share>& shares, std::uint64_t p) {
  const std::size_t m = shares.size();
  std::vector<std::vector<std::uint64_t>> a(m, std::vector<std::uint64_t>(m + 1));
  for (std::size_t r = 0; r < m; ++r) {
    std::uint64_t xp = 1;
    for (std::size_t c = 0; c < m; ++c) {
      a[r][c] = xp;
      xp = mulmod(xp, static_cast<std::uint64_t>(shares[r].point), p);
    }
    a[r][m] = shares[r].value % p;
  }
  for (std::size_t col = 0; col < m; ++col) {
    std::size_t piv = col;
    while (a[piv][col] == 0) ++piv;
    std::swap(a[piv], a[col]);
    const std::uint64_t inv = powmod(a[col][col], p - 2, p);
    for (auto& v : a[col]) v = mulmod(v, inv, p);
    for (std::size_t r = 0; r < m; ++r) {
      if (r == col || a[r][col] == 0) continue;
      const std::uint64_t f = a[r][col];
      for (std::size_t c = 0; c <= m; ++c) a[r][c] = (a[r][c] + p - mulmod(f, a[col][c], p)) % p;
    }
  }
  return a[0][m];
}

void for_each_subset(int n, int t, const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> pick(static_cast<std::size_t>(t));
  std::iota(pick.begin(), pick.end(), 0);
  while (true) {
    fn(pick);
    int i = t - 1;
    while (i >= 0 && pick[static_cast<std::size_t>(i)] == n - t + i) --i;
    if (i < 0) return;
    ++pick[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < t; ++j) pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
  }
}

// Wilson-Hilferty approximation of the chi-square upper quantile.
double chi_square_critical(double dof, double z) {
  const double h = 2.0 / (9.0 * dof);
  return dof * std::pow(1.0 - h + z * std::sqrt(h), 3.0);
}

TEST(FieldParams, RejectsModulusBelowPartyCount) {
  FieldParams params = small_params(3, 2);
  params.p = 2;
  params.k = 1;
  params.rho = 0;
  EXPECT_THROW(params.validate(), ParameterError);
}

TEST(FieldParams, RejectsBadThresholdAndComposite) {
  EXPECT_THROW(small_params(3, 4).validate(), ParameterError);
  EXPECT_THROW(small_params(3, 0).validate(), ParameterError);
  FieldParams composite = small_params(3, 2);
  composite.p = 91;
  EXPECT_THROW(composite.validate(), ParameterError);
  FieldParams weak = small_params(3, 2);
  weak.k = 7;
  EXPECT_THROW(weak.validate(), ParameterError);
  EXPECT_NO_THROW(big_params(6, 6).validate());
}

TEST(Primality, MatchesTrialDivision) {
  auto trial = [](std::uint64_t v) {
    if (v < 2) return false;
    for (std::uint64_t d = 2; d * d <= v; ++d)
      if (v % d == 0) return false;
    return true;
  };
  for (std::uint64_t v = 0; v < 5000; ++v) EXPECT_EQ(is_prime(v), trial(v)) << v;
  EXPECT_TRUE(is_prime(kMersenne61));
  EXPECT_FALSE(is_prime(kMersenne61 - 2));
}

TEST(Encoding, ZeroVectorIsZero) {
  for (int rho : {0, 2, 5}) {
    const std::vector<double> zero(4, 0.0);
    const auto enc = encode_vector(zero, big_params(3, 2, rho));
    EXPECT_TRUE(std::all_of(enc.begin(), enc.end(), [](FieldElement v) { return v == 0; }));
  }
}

TEST(Encoding, RoundTripExactAtScale) {
  const FieldParams params = big_params(3, 2, 2);
  const std::vector<double> v{1.5, -2.0};
  const auto enc = encode_vector(v, params);
  EXPECT_EQ(enc[0], 150u);
  EXPECT_EQ(enc[1], params.p - 200);
  EXPECT_EQ(decode_vector(enc, params), v);
}

TEST(Encoding, RoundTripWithinResolution) {
  const FieldParams params = big_params(3, 2, 4);
  Prg rng(11);
  for (int i = 0; i < 1000; ++i) {
    const std::vector<double> v{rng.uniform_real(-1000, 1000), rng.uniform_real(-1, 1)};
    const auto dec = decode_vector(encode_vector(v, params), params);
    for (std::size_t j = 0; j < v.size(); ++j) EXPECT_LE(std::abs(dec[j] - v[j]), 1e-4);
  }
}

TEST(Encoding, OverflowIsRejected) {
  const FieldParams params = small_params(3, 2);  // p = 97, rho = 1
  const std::vector<double> ok{4.8};
  const std::vector<double> bad{4.9};
  EXPECT_NO_THROW(encode_vector(ok, params));
  EXPECT_THROW(encode_vector(bad, params), OverflowError);
  const std::vector<double> neg{-4.9};
  EXPECT_THROW(encode_vector(neg, params), OverflowError);
}

TEST(Share, ThresholdOneCopiesSecret) {
  Prg rng(3);
  for (const auto& s : ss_share(55, small_params(5, 1), rng)) EXPECT_EQ(s.value, 55u);
}

TEST(Share, HandComputedExample) {
  FixedSource seven(7);
  const auto shares = ss_share(42, small_params(3, 2), seven);
  ASSERT_EQ(shares.size(), 3u);
  EXPECT_EQ(shares[0], (Share{1, 49}));
  EXPECT_EQ(shares[1], (Share{2, 56}));
  EXPECT_EQ(shares[2], (Share{3, 63}));
}

TEST(Recon, HandComputedExample) {
  const std::vector<Share> two{{1, 49}, {2, 56}};
  EXPECT_EQ(ss_recon(two, small_params(3, 2)), 42u);
}

TEST(Recon, BelowThresholdThrows) {
  const FieldParams params = big_params(5, 3);
  Prg rng(5);
  auto shares = ss_share(9, params, rng);
  shares.resize(2);
  EXPECT_THROW(ss_recon(shares, params), InsufficientShares);
  const std::vector<Share> dup{{1, 1}, {1, 1}, {2, 2}};
  EXPECT_THROW(ss_recon(dup, params), ParameterError);
}

TEST(Recon, RoundTripRandomSecrets) {
  const FieldParams params = big_params(4, 3);
  Prg rng(21);
  for (int i = 0; i < 1000; ++i) {
    const FieldElement s = rng.uniform_below(params.p);
    EXPECT_EQ(ss_recon(ss_share(s, params, rng), params), s);
  }
}

TEST(Recon, EverySubsetAgreesWithVandermondeOracle) {
  const auto start = std::chrono::steady_clock::now();
  Prg rng(99);
  for (int n = 1; n <= 6; ++n) {
    for (int t = 1; t <= n; ++t) {
      const FieldParams params = big_params(n, t);
      for (int i = 0; i < 1000; ++i) {
        const FieldElement s = rng.uniform_below(params.p);
        const auto shares = ss_share(s, params, rng);
        for_each_subset(n, t, [&](const std::vector<int>& pick) {
          std::vector<Share> sub;
          for (int u : pick) sub.push_back(shares[static_cast<std::size_t>(u)]);
          ASSERT_EQ(ss_recon(sub, params), s);
          if (i < 20) ASSERT_EQ(vandermonde_secret(sub, params.p), s);
        });
      }
    }
  }
  EXPECT_LT(std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count(), 5.0);
}

TEST(Hiding, SingleShareMarginalIndependentOfSecret) {
  const FieldParams params = small_params(3, 2);
  constexpr int kSamples = 10000;
  Prg rng(2024);
  for (int party = 0; party < params.n; ++party) {
    std::vector<double> h0(97), h1(97);
    for (int i = 0; i < kSamples; ++i) {
      h0[ss_share(5, params, rng)[static_cast<std::size_t>(party)].value] += 1;
      h1[ss_share(71, params, rng)[static_cast<std::size_t>(party)].value] += 1;
    }
    // Two-sample chi-square test of homogeneity, 96 degrees of freedom.
    double stat = 0;
    for (std::size_t b = 0; b < 97; ++b) {
      const double expected = (h0[b] + h1[b]) / 2.0;
      if (expected == 0) continue;
      stat += (h0[b] - expected) * (h0[b] - expected) / expected;
      stat += (h1[b] - expected) * (h1[b] - expected) / expected;
    }
    EXPECT_LT(stat, chi_square_critical(96, 2.326348)) << "party " << party;
  }
}

class CircuitTest : public ::testing::Test {
 protected:
  FieldParams params = big_params(4, 3, 0);
  Prg rng{77};
  net::PartyNetwork network{4};
  TripleDealer dealer{params, 5};

  ShareVector share_of(std::vector<std::int64_t> values) {
    const Field field(params.p);
    std::vector<FieldElement> enc;
    for (auto v : values) enc.push_back(field.from_signed(v));
    return ShareVector::share(enc, params, rng);
  }
  std::int64_t open_scalar(const ShareVector& v) { return Field(params.p).to_signed(v.reconstruct()[0]); }
};

TEST_F(CircuitTest, AddAndMulExamples) {
  EXPECT_EQ(open_scalar(share_add(share_of({3}), share_of({4}))), 7);
  auto t1 = dealer.deal(1, &network);
  EXPECT_EQ(open_scalar(share_mul(share_of({0}), share_of({123}), t1, network)), 0);
  auto t2 = dealer.deal(1, &network);
  EXPECT_EQ(open_scalar(share_mul(share_of({5}), share_of({6}), t2, network)), 30);
}

TEST_F(CircuitTest, TripleReuseIsRejected) {
  auto triple = dealer.deal(1);
  share_mul(share_of({2}), share_of({3}), triple, network);
  EXPECT_THROW(share_mul(share_of({2}), share_of({3}), triple, network), TripleReuse);
}

TEST_F(CircuitTest, TripleIsMultiplicative) {
  for (int i = 0; i < 20; ++i) {
    auto triple = dealer.deal(3);
    const Field field(params.p);
    const auto a = triple.a.reconstruct(), b = triple.b.reconstruct(), c = triple.c.reconstruct();
    for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(c[j], field.mul(a[j], b[j]));
  }
}

TEST_F(CircuitTest, HomomorphismOnRandomPairs) {
  const Field field(params.p);
  for (int i = 0; i < 1000; ++i) {
    const FieldElement x = rng.uniform_below(params.p), y = rng.uniform_below(params.p);
    const auto sx = ShareVector::share(std::vector<FieldElement>{x}, params, rng);
    const auto sy = ShareVector::share(std::vector<FieldElement>{y}, params, rng);
    EXPECT_EQ(share_add(sx, sy).reconstruct()[0], field.add(x, y));
    auto triple = dealer.deal(1);
    EXPECT_EQ(share_mul(sx, sy, triple, network).reconstruct()[0], field.mul(x, y));
  }
}

TEST_F(CircuitTest, ReconstructionIndependentOfSubset) {
  const auto v = share_of({-17, 400, 0});
  const std::vector<PartyId> s1{0, 1, 2}, s2{1, 2, 3}, s3{0, 2, 3};
  EXPECT_EQ(v.reconstruct(s1), v.reconstruct(s2));
  EXPECT_EQ(v.reconstruct(s1), v.reconstruct(s3));
}

TEST_F(CircuitTest, DistanceExamples) {
  const auto x = share_of({1, 2});
  EXPECT_EQ(open_scalar(ac_distance(x, x, SharedMetric::kSquaredEuclidean, dealer, network, 10)), 0);
  EXPECT_EQ(open_scalar(ac_distance(x, share_of({4, 6}), SharedMetric::kSquaredEuclidean, dealer, network, 10)),
            25);
  EXPECT_EQ(open_scalar(ac_distance(share_of({1, 0}), share_of({0, 1}), SharedMetric::kInnerProduct, dealer,
                                    network, 10)),
            0);
}

TEST_F(CircuitTest, DistanceExactOnRandomVectors) {
  for (int i = 0; i < 200; ++i) {
    std::vector<std::int64_t> a(16), b(16);
    std::int64_t sq = 0, dot = 0;
    for (std::size_t j = 0; j < 16; ++j) {
      a[j] = static_cast<std::int64_t>(rng.uniform_below(2001)) - 1000;
      b[j] = static_cast<std::int64_t>(rng.uniform_below(2001)) - 1000;
      sq += (a[j] - b[j]) * (a[j] - b[j]);
      dot += a[j] * b[j];
    }
    const auto sa = share_of(a), sb = share_of(b);
    EXPECT_EQ(open_scalar(ac_distance(sa, sb, SharedMetric::kSquaredEuclidean, dealer, network, 1000)), sq);
    EXPECT_EQ(open_scalar(ac_distance(sa, sb, SharedMetric::kInnerProduct, dealer, network, 1000)), dot);
  }
}

TEST_F(CircuitTest, DistanceOverflowIsRejected) {
  const auto x = share_of({1, 2});
  EXPECT_THROW(ac_distance(x, x, SharedMetric::kSquaredEuclidean, dealer, network, std::uint64_t{1} << 30),
               OverflowError);
}

TEST_F(CircuitTest, CompareExamples) {
  EXPECT_FALSE(ac_compare(share_of({7}), share_of({7}), 0, network));
  EXPECT_TRUE(ac_compare(share_of({25}), share_of({9}), 2, network));
  EXPECT_FALSE(ac_compare(share_of({0}), share_of({1}), 1, network));
  EXPECT_EQ(ac_sign(share_of({-3}), share_of({1}), 0, network), -1);
}

TEST_F(CircuitTest, CompareNeedsThresholdResponders) {
  const std::vector<PartyId> two{0, 1};
  EXPECT_THROW(ac_compare(share_of({1}), share_of({0}), 0, network, two), InsufficientShares);
  const std::vector<PartyId> three{3, 1, 2};
  EXPECT_TRUE(ac_compare(share_of({1}), share_of({0}), 0, network, three));
}

TEST(Network, LogRecordsRoundsAndDigests) {
  net::PartyNetwork a(3), b(3);
  for (auto* nw : {&a, &b}) {
    nw->next_round();
    const std::vector<std::uint64_t> payload{1, 2, 3};
    nw->broadcast(0, payload);
    nw->send(nw->dealer(), {1}, payload);
  }
  EXPECT_EQ(a.message_count(), 2u);
  EXPECT_EQ(a.log()[0].receivers, (std::vector<int>{1, 2}));
  EXPECT_EQ(a.export_log(), b.export_log());
  EXPECT_EQ(a.transcript_digest(), b.transcript_digest());
}

}  // namespace
