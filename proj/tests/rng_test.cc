// Copyright 2026 The Parity Trace Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ptrace/rng.h"

#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <cstdint>
#include <set>

namespace ptrace {
namespace {

// Known-answer vectors published with the Random123 distribution.
TEST(PhiloxTest, KnownAnswers) {
  using A4 = std::array<uint32_t, 4>;
  using A2 = std::array<uint32_t, 2>;
  EXPECT_EQ(Philox::Block(A4{0, 0, 0, 0}, A2{0, 0}),
            (A4{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
  EXPECT_EQ(Philox::Block(A4{~0u, ~0u, ~0u, ~0u}, A2{~0u, ~0u}),
            (A4{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
  EXPECT_EQ(Philox::Block(A4{0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344},
                          A2{0xa4093822, 0x299f31d0}),
            (A4{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(PhiloxTest, SameSeedSameStream) {
  Philox a(42), b(42), c(43);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    uint64_t x = a();
    EXPECT_EQ(x, b());
    differs |= x != c();
  }
  EXPECT_TRUE(differs);
}

TEST(PhiloxTest, UniformInUnitInterval) {
  Philox rng(7);
  double sum = 0;
  for (int i = 0; i < 100000; ++i) {
    double u = rng.Uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / 100000, 0.5, 4 * std::sqrt(1.0 / 12 / 100000));
}

TEST(DeriveSeedTest, DistinctChildren) {
  std::set<uint64_t> seen;
  for (uint64_t i = 0; i < 1000; ++i) seen.insert(DeriveSeed(5, i));
  EXPECT_EQ(seen.size(), 1000u);
  EXPECT_EQ(DeriveSeed(5, 3), DeriveSeed(5, 3));
  EXPECT_NE(DeriveSeed(5, 3, 0), DeriveSeed(5, 3, 1));
}

void CheckPoissonMoments(double lambda) {
  Philox rng(11);
  const int trials = 200000;
  double s = 0, s2 = 0;
  for (int i = 0; i < trials; ++i) {
    double x = static_cast<double>(SamplePoisson(rng, lambda));
    s += x;
    s2 += x * x;
  }
  double mean = s / trials, var = s2 / trials - mean * mean;
  EXPECT_NEAR(mean, lambda, 5 * std::sqrt(lambda / trials)) << lambda;
  EXPECT_NEAR(var, lambda, 0.03 * lambda + 0.01) << lambda;
}

TEST(SamplePoissonTest, Moments) {
  for (double lambda : {0.05, 0.7, 4.0, 25.0, 400.0})
    CheckPoissonMoments(lambda);
}

TEST(SamplePoissonTest, NonPositiveRateIsZero) {
  Philox rng(1);
  EXPECT_EQ(SamplePoisson(rng, 0), 0);
  EXPECT_EQ(SamplePoisson(rng, -3), 0);
}

TEST(SamplePositivePoissonTest, NeverZeroAndRightMean) {
  Philox rng(3);
  const double lambda = 0.4;
  double s = 0;
  const int trials = 100000;
  for (int i = 0; i < trials; ++i) {
    int64_t x = SamplePositivePoisson(rng, lambda);
    ASSERT_GE(x, 1);
    s += static_cast<double>(x);
  }
  double expected = lambda / (1 - std::exp(-lambda));
  EXPECT_NEAR(s / trials, expected, 0.01);
}

TEST(SampleBinomialTest, Mean) {
  Philox rng(9);
  double s = 0;
  for (int i = 0; i < 20000; ++i)
    s += static_cast<double>(SampleBinomial(rng, 50, 0.3));
  EXPECT_NEAR(s / 20000, 15, 0.1);
}

TEST(SampleIndexTest, CoversRange) {
  Philox rng(2);
  std::set<uint64_t> seen;
  for (int i = 0; i < 1000; ++i) {
    uint64_t x = SampleIndex(rng, 7);
    ASSERT_LT(x, 7u);
    seen.insert(x);
  }
  EXPECT_EQ(seen.size(), 7u);
}

}  // namespace
}  // namespace ptrace
