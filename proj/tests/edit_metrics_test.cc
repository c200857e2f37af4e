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

#include "ptrace/edit_metrics.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "ptrace/rng.h"

namespace ptrace {
namespace {

using ::std::string;
using ::std::vector;

string RandomBits(size_t len, Philox& rng) {
  string s(len, '0');
  for (char& c : s) c = (rng() & 1) ? '1' : '0';
  return s;
}

// Blocky strings exercise the long-run cases the word-level code handles.
string RandomBlocky(size_t len, Philox& rng) {
  string s;
  char c = (rng() & 1) ? '1' : '0';
  while (s.size() < len) {
    s.append(1 + SampleIndex(rng, 12), c);
    c = c == '1' ? '0' : '1';
  }
  s.resize(len);
  return s;
}

int64_t Levenshtein(const string& a, const string& b) {
  vector<int64_t> prev(b.size() + 1), cur(b.size() + 1);
  for (size_t j = 0; j <= b.size(); ++j) prev[j] = static_cast<int64_t>(j);
  for (size_t i = 1; i <= a.size(); ++i) {
    cur[0] = static_cast<int64_t>(i);
    for (size_t j = 1; j <= b.size(); ++j) {
      cur[j] = std::min(
          {prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (a[i - 1] != b[j - 1])});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

TEST(StrOfTest, Examples) {
  FractionalString a = StrOf({1.0});
  ASSERT_EQ(a.size(), 1u);
  EXPECT_EQ(a[0], (FractionalChar{'1', 1.0}));
  FractionalString b = StrOf({0.5, 0.25, 0.25});
  EXPECT_EQ(b, (FractionalString{{'1', .5}, {'0', .25}, {'1', .25}}));
  FractionalString c = StrOf({0, 1});
  EXPECT_EQ(c, (FractionalString{{'1', 0}, {'0', 1}}));
}

TEST(PsiTest, Examples) {
  EXPECT_EQ(Psi(vector<int64_t>{2, 1, 3}), "110111");
  EXPECT_EQ(PsiInvCounts("0011"), (vector<int64_t>{0, 2, 2}));
  vector<double> pi = PsiInv("0011");
  EXPECT_EQ(pi, (vector<double>{0, 0.5, 0.5}));
  EXPECT_EQ(Psi(pi, 4), "0011");
  EXPECT_THROW(Psi(vector<double>{0.3, 0.7}, 4), std::invalid_argument);
  EXPECT_THROW(PsiInvCounts("012"), std::invalid_argument);
  // A 1-led uniform n-block string maps to the uniform sequence.
  vector<double> u = PsiInv("11001100");
  EXPECT_EQ(u, (vector<double>(4, 0.25)));
}

TEST(PsiTest, RoundTripExhaustive) {
  for (int len = 0; len <= 12; ++len) {
    for (uint32_t bits = 0; bits < (1u << len); ++bits) {
      string x(static_cast<size_t>(len), '0');
      for (int i = 0; i < len; ++i) {
        if (bits >> i & 1) x[i] = '1';
      }
      ASSERT_EQ(Psi(PsiInvCounts(x)), x);
      if (len > 0) {
        ASSERT_EQ(Psi(PsiInv(x), len), x);
      }
    }
  }
}

TEST(EditDistanceTest, Examples) {
  EXPECT_EQ(StringEditDistance("0110", "0110"), 0);
  EXPECT_EQ(StringEditDistance("", "01"), 2);
  EXPECT_EQ(StringEditDistance("1100", "1010"), 2);
  EXPECT_DOUBLE_EQ(RelEditDistance("1100", "1010"), 0.5);
  EXPECT_DOUBLE_EQ(RelEditDistance("", ""), 0);
  EXPECT_DOUBLE_EQ(RelEditDistance("0101", ""), 2);
}

TEST(EditDistanceTest, MatchesReferenceAcrossWordBoundaries) {
  Philox rng(17);
  for (int t = 0; t < 1500; ++t) {
    size_t la = SampleIndex(rng, 200), lb = SampleIndex(rng, 200);
    string a = t % 2 ? RandomBits(la, rng) : RandomBlocky(la, rng);
    string b = t % 3 ? RandomBits(lb, rng) : RandomBlocky(lb, rng);
    int64_t want = Levenshtein(a, b);
    ASSERT_EQ(StringEditDistance(a, b), want) << a << " / " << b;
    ASSERT_EQ(StringEditDistanceDP(a, b), want);
  }
}

TEST(EditDistanceTest, MetricAxioms) {
  Philox rng(23);
  for (int t = 0; t < 500; ++t) {
    string a = RandomBits(SampleIndex(rng, 33), rng);
    string b = RandomBits(SampleIndex(rng, 33), rng);
    string c = RandomBits(SampleIndex(rng, 33), rng);
    int64_t ab = StringEditDistance(a, b);
    EXPECT_EQ(ab, StringEditDistance(b, a));
    EXPECT_LE(StringEditDistance(a, c), ab + StringEditDistance(b, c));
    double rel = RelEditDistance(a, b);
    EXPECT_GE(rel, 0);
    EXPECT_LE(rel, 2);
  }
}

TEST(TVDistanceTest, Examples) {
  EXPECT_DOUBLE_EQ(TVDistance(vector<double>{.5, .5}, vector<double>{.5, .5}),
                   0);
  EXPECT_DOUBLE_EQ(TVDistance(vector<double>{1, 0}, vector<double>{0, 1}), 1);
  EXPECT_DOUBLE_EQ(TVDistance(vector<double>{.5, .5}, vector<double>{.75, .25}),
                   .25);
  EXPECT_DOUBLE_EQ(TVDistance(vector<int64_t>{2, 2}, vector<int64_t>{3, 1}),
                   .25);
  EXPECT_DOUBLE_EQ(TVDistance(vector<double>{1}, vector<double>{0.5, 0.5}),
                   0.5);
}

TEST(DistEditBoundsTest, Examples) {
  EditBounds same =
      DistEditBounds(vector<int64_t>{3, 5}, vector<int64_t>{3, 5});
  EXPECT_EQ(same.lower, 0);
  EXPECT_EQ(same.upper, 0);
  // Uniform on {1..4} vs uniform on {5..8}: both map to the same string.
  EditBounds shifted = DistEditBounds(vector<int64_t>{2, 2, 2, 2},
                                      vector<int64_t>{0, 0, 0, 0, 2, 2, 2, 2});
  EXPECT_EQ(shifted.lower, 0);
  EXPECT_EQ(shifted.upper, 0);
  EXPECT_DOUBLE_EQ(shifted.tv, 1);
  EXPECT_THROW(DistEditBounds(vector<int64_t>{1}, vector<int64_t>{2}),
               std::invalid_argument);
}

TEST(DistEditBoundsTest, SandwichOnRandomPairs) {
  Philox rng(31);
  for (int t = 0; t < 500; ++t) {
    int64_t N = 1 + static_cast<int64_t>(SampleIndex(rng, 64));
    auto draw = [&]() {
      vector<int64_t> c(1 + SampleIndex(rng, 8), 0);
      for (int64_t k = 0; k < N; ++k) c[SampleIndex(rng, c.size())]++;
      return c;
    };
    vector<int64_t> a = draw(), b = draw();
    EditBounds e = DistEditBounds(a, b);
    EXPECT_LE(e.lower, e.upper + 1e-15);
    EXPECT_LE(e.rel_edit / 2, e.tv + 1e-15);
  }
}

TEST(DistEditBoundsTest, FractionalInputsAreWidened) {
  EditBounds e =
      DistEditBounds(vector<double>{0.3, 0.7}, vector<double>{0.5, 0.5}, 7);
  EXPECT_GT(e.rounding_error, 0);
  EXPECT_LE(e.lower, e.upper);
  EXPECT_DOUBLE_EQ(e.tv, 0.2);
  EditBounds exact =
      DistEditBounds(vector<double>{0.25, 0.75}, vector<double>{0.5, 0.5}, 4);
  EXPECT_EQ(exact.rounding_error, 0);
}

TEST(RoundToCountsTest, SumsToN) {
  EXPECT_EQ(RoundToCounts({1.0 / 3, 1.0 / 3, 1.0 / 3}, 4),
            (vector<int64_t>{2, 1, 1}));
  Philox rng(3);
  for (int t = 0; t < 100; ++t) {
    vector<double> pi(1 + SampleIndex(rng, 9));
    for (double& x : pi) x = rng.Uniform();
    vector<int64_t> c = RoundToCounts(pi, 50);
    int64_t s = 0;
    for (int64_t x : c) s += x;
    EXPECT_EQ(s, 50);
  }
}

TEST(DistToUniformTest, Examples) {
  EXPECT_EQ(DistToUniform({3, 3, 3}, 3).tv, 0);
  UniformDistance point = DistToUniform({12}, 4);
  EXPECT_DOUBLE_EQ(point.tv, 0.75);
  // Domino-NO along density sequence with eps = 0.4 on 8 entries.
  UniformDistance dn = DistToUniform({7, 3, 5, 5, 3, 7, 5, 5}, 8);
  EXPECT_DOUBLE_EQ(dn.tv, 0.1);
  UniformDistance odd = DistToUniform({2, 1}, 2);
  EXPECT_DOUBLE_EQ(odd.tv, 1.0 / 6);
}

int64_t BruteNBlock(const string& x, int64_t n) {
  int64_t best = static_cast<int64_t>(x.size());
  for (const string& y : AllNBlockStrings(static_cast<int64_t>(x.size()), n)) {
    best = std::min(best, Levenshtein(x, y));
  }
  return best;
}

TEST(NBlockTest, MatchesBruteForce) {
  for (int len = 1; len <= 9; ++len) {
    for (uint32_t bits = 0; bits < (1u << len); ++bits) {
      string x(static_cast<size_t>(len), '0');
      for (int i = 0; i < len; ++i) {
        if (bits >> i & 1) x[i] = '1';
      }
      for (int64_t n = 1; n <= 3; ++n) {
        ASSERT_EQ(NBlockFlips(x, n), BruteNBlock(x, n)) << x << " n=" << n;
      }
    }
  }
}

TEST(NBlockTest, Examples) {
  EXPECT_EQ(DistToNBlock("111000111", 3), 0);
  EXPECT_DOUBLE_EQ(DistToNBlock("01010101", 1), 0.5);
  EXPECT_EQ(DistToNBlock("", 2), 0);
  EXPECT_THROW(NBlockFlips("01", 0), std::invalid_argument);
  EXPECT_EQ(AllNBlockStrings(4, 1).size(), 2u);
  EXPECT_EQ(AllNBlockStrings(4, 4).size(), 16u);
}

}  // namespace
}  // namespace ptrace
