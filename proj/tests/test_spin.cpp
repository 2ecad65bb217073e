#include <gtest/gtest.h>

#include <cmath>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <vector>

#include "rsa/core/rng.hpp"
#include "rsa/core/spin.hpp"

using namespace rsa;

// Published Random123 known-answer vectors for philox4x32-10.
TEST(Philox, KnownAnswerZero) {
  const auto out = Philox::encrypt({0, 0, 0, 0}, {0, 0});
  EXPECT_EQ(out, (Philox::Block{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u}));
}

TEST(Philox, KnownAnswerAllOnes) {
  const auto out = Philox::encrypt({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu});
  EXPECT_EQ(out, (Philox::Block{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu}));
}

TEST(Philox, KnownAnswerPi) {
  const auto out =
      Philox::encrypt({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u});
  EXPECT_EQ(out, (Philox::Block{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u}));
}

TEST(Philox, StreamIsTheBlockSequence) {
  Philox rng(0);
  const auto b0 = Philox::encrypt({0, 0, 0, 0}, {0, 0});
  const auto b1 = Philox::encrypt({1, 0, 0, 0}, {0, 0});
  for (auto v : b0) EXPECT_EQ(rng(), v);
  for (auto v : b1) EXPECT_EQ(rng(), v);
}

TEST(Philox, SameSeedSameStream) {
  Philox a(42), b(42), c(43);
  bool differs = false;
  for (int k = 0; k < 100; ++k) {
    const auto x = a();
    EXPECT_EQ(x, b());
    differs |= x != c();
  }
  EXPECT_TRUE(differs);
}

TEST(Philox, SplitIsDeterministicAndDistinct) {
  const Philox root(9);
  Philox a = root.split(3), b = root.split(3), c = root.split(4);
  EXPECT_EQ(a.key(), b.key());
  EXPECT_NE(a.key(), c.key());
  EXPECT_NE(root.split(1, 2).key(), root.split(2, 1).key());
  // splitting does not consume the parent
  Philox p(9), q(9);
  (void)p.split(5);
  EXPECT_EQ(p(), q());
}

TEST(Philox, DeriveSeed) {
  EXPECT_EQ(derive_seed(1, 2), derive_seed(1, 2));
  std::set<std::uint64_t> seen;
  for (std::uint64_t s = 0; s < 1000; ++s) seen.insert(derive_seed(7, s));
  EXPECT_EQ(seen.size(), 1000u);
}

TEST(Philox, UniformIndexCoversRangeEvenly) {
  Philox rng(1);
  constexpr std::uint32_t n = 7;
  constexpr int draws = 70000;
  std::vector<int> counts(n, 0);
  for (int k = 0; k < draws; ++k) {
    const auto v = rng.uniform_index(n);
    ASSERT_LT(v, n);
    ++counts[v];
  }
  // chi-square with 6 degrees of freedom; 22.46 is the 0.999 quantile
  double chi2 = 0.0;
  const double expect = static_cast<double>(draws) / n;
  for (int c : counts) chi2 += (c - expect) * (c - expect) / expect;
  EXPECT_LT(chi2, 22.46);
}

TEST(Philox, Uniform01AndCoin) {
  Philox rng(2);
  double sum = 0.0;
  int heads = 0;
  constexpr int draws = 100000;
  for (int k = 0; k < draws; ++k) {
    const double u = rng.uniform01();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
    heads += rng.coin() ? 1 : 0;
  }
  EXPECT_NEAR(sum / draws, 0.5, 5 * std::sqrt(1.0 / 12.0 / draws));
  EXPECT_NEAR(static_cast<double>(heads) / draws, 0.5, 5 * 0.5 / std::sqrt(draws));
}

TEST(SpinVector, RejectsBadInput) {
  EXPECT_THROW(SpinVector(std::size_t{0}), std::invalid_argument);
  EXPECT_THROW(SpinVector(std::vector<int>{1, 0, -1}), std::invalid_argument);
  EXPECT_THROW(SpinVector(std::vector<int>{}), std::invalid_argument);
  SpinVector s{1, -1};
  EXPECT_THROW(s.flip(2), std::out_of_range);
  EXPECT_THROW((void)s.at(5), std::out_of_range);
}

TEST(SpinVector, IndexRoundTrip) {
  for (std::size_t n = 1; n <= 6; ++n)
    for (std::uint64_t idx = 0; idx < (std::uint64_t{1} << n); ++idx) {
      const auto s = SpinVector::from_index(idx, n);
      EXPECT_EQ(s.index(), idx);
      for (std::size_t i = 0; i < n; ++i) EXPECT_EQ(s[i], ((idx >> i) & 1u) ? 1 : -1);
    }
}

TEST(SpinVector, InnerProductAndHamming) {
  Philox rng(5);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + rng.uniform_index(40);
    const auto x = SpinVector::random(n, rng);
    const auto z = SpinVector::random(n, rng);
    int diff = 0;
    for (std::size_t i = 0; i < n; ++i) diff += x[i] != z[i] ? 1 : 0;
    EXPECT_EQ(hamming_distance(x, z), diff);
    EXPECT_EQ(inner_product(x, z), static_cast<int>(n) - 2 * diff);
    EXPECT_EQ(inner_product(x, x), static_cast<int>(n));
    EXPECT_EQ(inner_product(x, x.negated()), -static_cast<int>(n));
    EXPECT_EQ(x.negated().negated(), x);
  }
  EXPECT_THROW((void)inner_product(SpinVector{1}, SpinVector{1, 1}), std::invalid_argument);
}

TEST(SpinVector, FlipIsAnInvolution) {
  SpinVector s{1, -1, 1};
  s.flip(1);
  EXPECT_EQ(s, (SpinVector{1, 1, 1}));
  s.flip(1);
  EXPECT_EQ(s, (SpinVector{1, -1, 1}));
}

TEST(ReplicaEnsemble, CanonicalIndex) {
  // bit a*N + i is set iff sigma_i^a = +1
  const std::size_t n = 3, y = 2;
  for (std::uint64_t idx = 0; idx < 64; ++idx) {
    const auto e = ReplicaEnsemble::from_index(idx, n, y);
    EXPECT_EQ(e.index(), idx);
    for (std::size_t a = 0; a < y; ++a)
      for (std::size_t i = 0; i < n; ++i)
        EXPECT_EQ(e.replica(a)[i], ((idx >> (a * n + i)) & 1u) ? 1 : -1);
  }
}

TEST(ReplicaEnsemble, FieldsTrackFlips) {
  Philox rng(11);
  for (std::size_t y = 1; y <= 5; ++y) {
    auto e = ReplicaEnsemble::random(y, 8, rng);
    ASSERT_TRUE(e.fields_consistent());
    for (int t = 0; t < 500; ++t) {
      const FlipMove m{rng.uniform_index(static_cast<std::uint32_t>(y)), rng.uniform_index(8)};
      const int before = e.replica_field(m.coordinate);
      const int predicted = e.field_after(m);
      EXPECT_EQ(std::abs(predicted - before), 2);
      e.apply_flip(m);
      EXPECT_EQ(e.replica_field(m.coordinate), predicted);
      ASSERT_TRUE(e.fields_consistent());
      for (int f : e.fields()) {
        EXPECT_LE(std::abs(f), static_cast<int>(y));
        EXPECT_EQ((f + static_cast<int>(y)) % 2, 0);
      }
    }
  }
}

TEST(ReplicaEnsemble, FunctionalFlipLeavesInputAlone) {
  const auto e = ReplicaEnsemble::from_index(0, 2, 2);
  const auto f = apply_flip(e, FlipMove{1, 0});
  EXPECT_EQ(e.index(), 0u);
  EXPECT_EQ(f.index(), 1u << 2);
  EXPECT_EQ(f.replica_field(0), 0);
}

TEST(ReplicaEnsemble, RejectsBadShapesAndMoves) {
  EXPECT_THROW(ReplicaEnsemble(std::vector<SpinVector>{}), std::invalid_argument);
  EXPECT_THROW(ReplicaEnsemble(std::vector<SpinVector>{SpinVector{1, 1}, SpinVector{1}}), std::invalid_argument);
  auto e = ReplicaEnsemble::from_index(0, 2, 2);
  EXPECT_THROW(e.apply_flip(FlipMove{2, 0}), std::out_of_range);
  EXPECT_THROW(e.apply_flip(FlipMove{0, 2}), std::out_of_range);
  EXPECT_THROW((void)e.replica_field(2), std::out_of_range);
}
