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

#include "ptrace/trace_recon.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "ptrace/edit_metrics.h"
#include "ptrace/harness.h"
#include "ptrace/rng.h"

namespace ptrace {
namespace {

using ::std::string;
using ::std::vector;

TEST(DeletionTraceTest, Extremes) {
  EXPECT_EQ(DeletionTrace("0110101", 1.0, 3), "0110101");
  EXPECT_EQ(DeletionTrace("0110101", 0.0, 3), "");
  EXPECT_THROW(DeletionTrace("01", 1.5, 3), std::invalid_argument);
}

TEST(DeletionTraceTest, ExpectedLength) {
  const string x(64, '1');
  const double rho = 0.3;
  const int trials = 100000;
  double s = 0;
  for (int t = 0; t < trials; ++t) {
    s += static_cast<double>(DeletionTrace(x, rho, DeriveSeed(1, t)).size());
  }
  double sigma = std::sqrt(64 * rho * (1 - rho) / trials);
  EXPECT_NEAR(s / trials, 64 * rho, 3 * sigma);
}

TEST(PoissonizeTest, EmptyAndMean) {
  EXPECT_EQ(Poissonize("", 0.5, 1), "");
  EXPECT_THROW(Poissonize("01", 1.0, 1), std::invalid_argument);
  const string x = "1100101101";
  const double rho = 0.4;
  double lambda = PoissonRate(rho);
  const int trials = 40000;
  double s = 0;
  for (int t = 0; t < trials; ++t) {
    string tr = DeletionTrace(x, rho, DeriveSeed(2, t));
    s += static_cast<double>(Poissonize(tr, rho, DeriveSeed(3, t)).size());
  }
  EXPECT_NEAR(s / trials, x.size() * lambda, 0.03);
}

TEST(RetentionTest, InvertsRate) {
  double rho = RetentionForSize(300, 4096);
  EXPECT_NEAR(PoissonRate(rho) * 4096, 300, 1e-9);
}

TEST(SplitTracesTest, PreconditionAndEmpty) {
  vector<int64_t> counts = {4, 4, 4, 4};
  EXPECT_THROW(SplitTraces(counts, 2, 0.1, 1), std::invalid_argument);
  double rho = 1 / (40 * std::sqrt(32.0));
  vector<string> out = SplitTraces(counts, 2, rho, 1);
  EXPECT_EQ(out.size(), 2u);
  EXPECT_LE(2 * 16 * SplitSymbolTV(rho / (1 - rho)), 0.01);
  EXPECT_NEAR(SplitSymbolTV(0.5), 1 - std::exp(-0.5) * 1.5, 1e-15);
}

TEST(SampleDensityTraceTest, SymbolsFollowBlocks) {
  string t = SampleDensityTrace({5, 0, 5}, 1e4, 9);
  // Block 2 is empty, so both nonempty blocks carry '1' and no '0' appears.
  EXPECT_EQ(std::count(t.begin(), t.end(), '0'), 0);
  EXPECT_THROW(SampleDensityTrace({0, 0}, 10, 1), std::invalid_argument);
}

int64_t BruteAlternating(const vector<LabeledPoint>& pts, int64_t k) {
  // Labels change only between distinct positions; try every subset of gaps
  // with at most k switches and both starting values.
  vector<size_t> groups;
  for (size_t i = 0; i < pts.size(); ++i) {
    if (i == 0 || pts[i].position != pts[i - 1].position) groups.push_back(i);
  }
  size_t g = groups.size();
  int64_t best = static_cast<int64_t>(pts.size());
  for (uint32_t mask = 0; mask < (1u << (g > 0 ? g - 1 : 0)); ++mask) {
    if (__builtin_popcount(mask) > k) continue;
    for (int start = 0; start < 2; ++start) {
      int64_t err = 0;
      int val = start;
      size_t grp = 0;
      for (size_t i = 0; i < pts.size(); ++i) {
        if (grp + 1 < g && i == groups[grp + 1]) {
          if (mask >> grp & 1) val ^= 1;
          ++grp;
        }
        err += pts[i].label != val;
      }
      best = std::min(best, err);
    }
  }
  return best;
}

TEST(LearnKAlternatingTest, MatchesBruteForce) {
  Philox rng(41);
  for (int t = 0; t < 3000; ++t) {
    size_t len = SampleIndex(rng, 13);
    vector<LabeledPoint> pts;
    double pos = 0;
    for (size_t i = 0; i < len; ++i) {
      if (i == 0 || SampleIndex(rng, 4) != 0) pos += 1;
      pts.push_back({pos, static_cast<int>(rng() & 1)});
    }
    int64_t k = static_cast<int64_t>(SampleIndex(rng, 4));
    AlternatingFit fit = LearnKAlternating(pts, k);
    ASSERT_EQ(fit.errors, BruteAlternating(pts, k));
    ASSERT_LE(static_cast<int64_t>(fit.switches.size()), k);
    int64_t errs = 0;
    for (size_t i = 0; i < pts.size(); ++i)
      errs += fit.fitted[i] != pts[i].label;
    ASSERT_EQ(errs, fit.errors);
    for (size_t i = 1; i < pts.size(); ++i) {
      if (pts[i].position == pts[i - 1].position) {
        ASSERT_EQ(fit.fitted[i], fit.fitted[i - 1]);
      }
    }
  }
}

TEST(LearnKAlternatingTest, ConsistentAndMajority) {
  AlternatingFit exact = LearnKAlternating("1110001111", 2);
  EXPECT_EQ(exact.errors, 0);
  AlternatingFit zero = LearnKAlternating("1101011", 0);
  EXPECT_EQ(zero.start_value, 1);
  EXPECT_EQ(zero.errors, 2);
  EXPECT_TRUE(zero.switches.empty());
  vector<LabeledPoint> unsorted = {{2, 1}, {1, 0}};
  EXPECT_THROW(LearnKAlternating(unsorted, 1), std::invalid_argument);
  EXPECT_THROW(LearnKAlternating("01", -1), std::invalid_argument);
}

TEST(ValidateSpecTest, Rejections) {
  TraceTestSpec s;
  s.N = 100;
  s.n = 5;
  EXPECT_THROW(ValidateSpec(s), std::invalid_argument);
  s.n = 6;
  EXPECT_THROW(ValidateSpec(s), std::invalid_argument);
  s.n = 4;
  EXPECT_NO_THROW(ValidateSpec(s));
  s.property = TraceProperty::kNBlock;
  s.n = 7;
  EXPECT_NO_THROW(ValidateSpec(s));
  s.n = 0;
  EXPECT_THROW(ValidateSpec(s), std::invalid_argument);
}

TEST(TraceTesterTest, EmptyTraceAccepts) {
  TraceTestSpec s;
  s.N = 64;
  s.n = 4;
  TraceTestConfig cfg;
  for (TraceProperty p : {TraceProperty::kNBlock, TraceProperty::kUniformNBlock,
                          TraceProperty::kUniformNBlockPromised}) {
    s.property = p;
    Verdict v = p == TraceProperty::kNBlock
                    ? TestNBlock("", s, 0.1, cfg, 1)
                    : TestUniformNBlock("", s, 0.1, cfg, 1);
    EXPECT_TRUE(v.accept);
    EXPECT_FALSE(v.warnings.empty());
  }
}

TEST(TraceTesterTest, NegationSymmetry) {
  TraceTestSpec s;
  s.N = 1024;
  s.n = 8;
  s.epsilon = 0.4;
  TraceTestConfig cfg;
  string x = SkewedBlockString(8, 224, 32);
  string y = Complement(x);
  double rho = RetentionForSize(UniformTraceSampleSize(8, 0.4, 1, 3), s.N);
  for (uint64_t seed = 0; seed < 30; ++seed) {
    string tx = DeletionTrace(x, rho, DeriveSeed(seed, 1));
    string ty = DeletionTrace(y, rho, DeriveSeed(seed, 1));
    ASSERT_EQ(ty, Complement(tx));
    Verdict a = TestUniformNBlock(tx, s, rho, cfg, DeriveSeed(seed, 2));
    Verdict b = TestUniformNBlock(ty, s, rho, cfg, DeriveSeed(seed, 2));
    EXPECT_EQ(a.accept, b.accept);
  }
  EXPECT_EQ(Complement("0110"), "1001");
}

TEST(TraceTesterTest, MultitraceWithOneTraceMatchesSingle) {
  TraceTestSpec s;
  s.N = 1024;
  s.n = 8;
  TraceTestConfig cfg;
  string x = UniformBlockString(1024, 8, '1');
  double rho = 0.2;
  for (uint64_t seed = 0; seed < 10; ++seed) {
    string t = DeletionTrace(x, rho, seed);
    Verdict a = TestUniformNBlock(t, s, rho, cfg, 5);
    Verdict b = TestUniformNBlockMultitrace({t}, s, rho, cfg, 5);
    EXPECT_EQ(a.accept, b.accept);
    EXPECT_EQ(a.stats, b.stats);
  }
}

TEST(TraceTesterTest, ConcatenationLength) {
  TraceTestSpec s;
  s.N = 1024;
  s.n = 8;
  s.k = 3;
  TraceTestConfig cfg;
  vector<string> traces = {"1100", "10", "111000"};
  Verdict v = TestUniformNBlockMultitrace(traces, s, 0.01, cfg, 1);
  EXPECT_EQ(v.params.at("concat_length"), 12);
}

TEST(TraceTesterTest, NBlockAcceptsBlockString) {
  TraceTestSpec s;
  s.N = 4096;
  s.n = 16;
  s.epsilon = 0.4;
  s.property = TraceProperty::kNBlock;
  TraceTestConfig cfg;
  string x = SkewedBlockString(16, 400, 112);
  double rho = RetentionForSize(NBlockSampleSize(16, 0.4, cfg.c_nblock), s.N);
  int ok = 0;
  for (uint64_t seed = 0; seed < 50; ++seed) {
    ok += TestNBlock(DeletionTrace(x, rho, seed), s, rho, cfg, seed).accept;
  }
  EXPECT_GE(ok, 45);
}

TEST(SampleSizeTest, TraceFormulas) {
  EXPECT_DOUBLE_EQ(NBlockSampleSize(16, 0.4, 4), 160);
  double want = std::pow(16 / 0.4, 0.8) * std::pow(std::log(16.0), 1.4) /
                    std::pow(4.0, 0.2) +
                std::sqrt(16.0) / (std::sqrt(4.0) * 0.16);
  EXPECT_NEAR(UniformTraceSampleSize(16, 0.4, 4, 1), want, 1e-9);
}

}  // namespace
}  // namespace ptrace
