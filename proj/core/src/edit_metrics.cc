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

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "json.hpp"

namespace ptrace {
namespace {

char BlockSymbol(size_t index) { return index % 2 == 0 ? '1' : '0'; }

void CheckBinary(std::string_view x) {
  for (char c : x) {
    if (c != '0' && c != '1') {
      throw std::invalid_argument("string must contain only 0 and 1");
    }
  }
}

}  // namespace

FractionalString StrOf(const DensitySequence& pi) {
  size_t last = 0;
  for (size_t i = 0; i < pi.size(); ++i) {
    if (pi[i] < 0) throw std::invalid_argument("negative density");
    if (pi[i] > 0) last = i + 1;
  }
  FractionalString s;
  for (size_t i = 0; i < last; ++i) s.push_back({BlockSymbol(i), pi[i]});
  return s;
}

std::string Psi(const std::vector<int64_t>& counts) {
  std::string out;
  for (size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] < 0) throw std::invalid_argument("negative count");
    out.append(static_cast<size_t>(counts[i]), BlockSymbol(i));
  }
  return out;
}

std::string Psi(const DensitySequence& pi, int64_t N) {
  if (N < 1) throw std::invalid_argument("N must be positive");
  std::vector<int64_t> counts(pi.size());
  for (size_t i = 0; i < pi.size(); ++i) {
    double scaled = pi[i] * static_cast<double>(N);
    double r = std::round(scaled);
    if (std::abs(scaled - r) > 1e-9 * static_cast<double>(N) || r < 0) {
      throw std::invalid_argument("density is not a multiple of 1/N");
    }
    counts[i] = static_cast<int64_t>(r);
  }
  return Psi(counts);
}

std::vector<int64_t> RunLengths(std::string_view x) {
  std::vector<int64_t> runs;
  for (size_t i = 0; i < x.size(); ++i) {
    if (i > 0 && x[i] == x[i - 1]) {
      ++runs.back();
    } else {
      runs.push_back(1);
    }
  }
  return runs;
}

std::vector<int64_t> PsiInvCounts(std::string_view x) {
  CheckBinary(x);
  std::vector<int64_t> counts = RunLengths(x);
  if (!x.empty() && x.front() == '0') counts.insert(counts.begin(), 0);
  return counts;
}

DensitySequence PsiInv(std::string_view x) {
  std::vector<int64_t> counts = PsiInvCounts(x);
  DensitySequence pi(counts.size());
  for (size_t i = 0; i < counts.size(); ++i) {
    pi[i] = static_cast<double>(counts[i]) / static_cast<double>(x.size());
  }
  return pi;
}

int64_t StringEditDistance(std::string_view u, std::string_view v) {
  // Bit-parallel column recurrence (Myers 1999, block form after Hyyro).
  if (u.size() < v.size()) std::swap(u, v);
  if (v.empty()) return static_cast<int64_t>(u.size());
  // Pattern v runs down the bit vectors, text u across the columns.
  const size_t m = v.size();
  const size_t words = (m + 63) / 64;
  std::array<std::vector<uint64_t>, 256> peq;
  for (unsigned char c : v) {
    if (peq[c].empty()) peq[c].assign(words, 0);
  }
  for (size_t i = 0; i < m; ++i) {
    peq[static_cast<unsigned char>(v[i])][i / 64] |= uint64_t{1} << (i % 64);
  }
  const std::vector<uint64_t> none(words, 0);
  std::vector<uint64_t> vp(words, ~uint64_t{0}), vn(words, 0);
  const uint64_t last_bit = uint64_t{1} << ((m - 1) % 64);
  int64_t score = static_cast<int64_t>(m);
  for (unsigned char c : u) {
    const std::vector<uint64_t>& eq_col = peq[c].empty() ? none : peq[c];
    int hin = 1;
    for (size_t b = 0; b < words; ++b) {
      uint64_t eq = eq_col[b];
      uint64_t pv = vp[b], mv = vn[b];
      uint64_t xv = eq | mv;
      if (hin < 0) eq |= 1;
      uint64_t xh = (((eq & pv) + pv) ^ pv) | eq;
      uint64_t ph = mv | ~(xh | pv);
      uint64_t mh = pv & xh;
      uint64_t top = b + 1 == words ? last_bit : uint64_t{1} << 63;
      int hout = (ph & top) ? 1 : ((mh & top) ? -1 : 0);
      ph <<= 1;
      mh <<= 1;
      if (hin < 0) {
        mh |= 1;
      } else if (hin > 0) {
        ph |= 1;
      }
      vp[b] = mh | ~(xv | ph);
      vn[b] = ph & xv;
      hin = hout;
    }
    score += hin;
  }
  return score;
}

int64_t StringEditDistanceDP(std::string_view u, std::string_view v) {
  std::vector<int64_t> row(v.size() + 1);
  std::iota(row.begin(), row.end(), int64_t{0});
  for (size_t i = 1; i <= u.size(); ++i) {
    int64_t diag = row[0];
    row[0] = static_cast<int64_t>(i);
    for (size_t j = 1; j <= v.size(); ++j) {
      int64_t up = row[j];
      row[j] = std::min(
          {row[j] + 1, row[j - 1] + 1, diag + (u[i - 1] == v[j - 1] ? 0 : 1)});
      diag = up;
    }
  }
  return row[v.size()];
}

double RelEditDistance(std::string_view u, std::string_view v) {
  size_t total = u.size() + v.size();
  if (total == 0) return 0;
  return 2.0 * static_cast<double>(StringEditDistance(u, v)) /
         static_cast<double>(total);
}

double TVDistance(const std::vector<double>& a, const std::vector<double>& b) {
  size_t n = std::max(a.size(), b.size());
  double s = 0;
  for (size_t i = 0; i < n; ++i) {
    double x = i < a.size() ? a[i] : 0.0;
    double y = i < b.size() ? b[i] : 0.0;
    s += std::abs(x - y);
  }
  return s / 2;
}

double TVDistance(const std::vector<int64_t>& a,
                  const std::vector<int64_t>& b) {
  int64_t na = std::accumulate(a.begin(), a.end(), int64_t{0});
  int64_t nb = std::accumulate(b.begin(), b.end(), int64_t{0});
  if (na <= 0 || nb <= 0) throw std::invalid_argument("empty count vector");
  size_t n = std::max(a.size(), b.size());
  // Cross-multiplied so equal totals stay exact.
  int64_t s = 0;
  for (size_t i = 0; i < n; ++i) {
    int64_t x = i < a.size() ? a[i] : 0;
    int64_t y = i < b.size() ? b[i] : 0;
    s += std::abs(x * nb - y * na);
  }
  return static_cast<double>(s) /
         (2.0 * static_cast<double>(na) * static_cast<double>(nb));
}

EditBounds DistEditBounds(const std::vector<int64_t>& a,
                          const std::vector<int64_t>& b) {
  int64_t na = std::accumulate(a.begin(), a.end(), int64_t{0});
  int64_t nb = std::accumulate(b.begin(), b.end(), int64_t{0});
  if (na != nb || na <= 0) {
    throw std::invalid_argument("count vectors need the same positive total");
  }
  EditBounds e;
  e.N = na;
  e.rel_edit = RelEditDistance(Psi(a), Psi(b));
  e.tv = TVDistance(a, b);
  e.lower = e.rel_edit / 2;
  e.upper = std::min(e.rel_edit, e.tv);
  return e;
}

std::vector<int64_t> RoundToCounts(const DensitySequence& pi, int64_t N) {
  if (N < 1) throw std::invalid_argument("N must be positive");
  double total = std::accumulate(pi.begin(), pi.end(), 0.0);
  if (!(total > 0)) throw std::invalid_argument("sequence has no mass");
  std::vector<int64_t> counts(pi.size());
  std::vector<std::pair<double, size_t>> rem;
  int64_t used = 0;
  for (size_t i = 0; i < pi.size(); ++i) {
    if (pi[i] < 0) throw std::invalid_argument("negative density");
    double scaled = pi[i] / total * static_cast<double>(N);
    counts[i] = static_cast<int64_t>(std::floor(scaled));
    used += counts[i];
    rem.push_back({scaled - static_cast<double>(counts[i]), i});
  }
  std::stable_sort(rem.begin(), rem.end(), [](const auto& x, const auto& y) {
    return x.first > y.first;
  });
  for (int64_t k = 0; k < N - used; ++k) ++counts[rem[k].second];
  return counts;
}

EditBounds DistEditBounds(const DensitySequence& a, const DensitySequence& b,
                          int64_t N) {
  std::vector<int64_t> ca = RoundToCounts(a, N);
  std::vector<int64_t> cb = RoundToCounts(b, N);
  auto scaled = [N](const std::vector<int64_t>& c) {
    std::vector<double> out(c.size());
    for (size_t i = 0; i < c.size(); ++i) {
      out[i] = static_cast<double>(c[i]) / static_cast<double>(N);
    }
    return out;
  };
  EditBounds e = DistEditBounds(ca, cb);
  e.rounding_error = TVDistance(a, scaled(ca)) + TVDistance(b, scaled(cb));
  e.tv = TVDistance(a, b);
  e.lower = std::max(0.0, e.rel_edit / 2 - e.rounding_error);
  e.upper = std::min(e.rel_edit + e.rounding_error, e.tv);
  return e;
}

UniformDistance DistToUniform(const std::vector<int64_t>& counts, int64_t k) {
  if (k < 1) throw std::invalid_argument("k must be positive");
  int64_t N = std::accumulate(counts.begin(), counts.end(), int64_t{0});
  if (N <= 0) throw std::invalid_argument("empty count vector");
  std::vector<int64_t> a = counts;
  int64_t total = N;
  if (N % k != 0) {
    for (int64_t& c : a) c *= k;
    total = N * k;
  }
  std::vector<int64_t> u(static_cast<size_t>(k), total / k);
  EditBounds e = DistEditBounds(a, u);
  UniformDistance d;
  d.tv = e.tv;
  d.edit_lower = e.lower;
  d.edit_upper = e.upper;
  d.ratio = d.tv > 0 ? d.edit_lower / d.tv : 0;
  return d;
}

int64_t NBlockFlips(std::string_view x, int64_t n) {
  if (n < 1) throw std::invalid_argument("n must be at least 1");
  CheckBinary(x);
  if (x.empty()) return 0;
  // Boundaries of an optimal target can sit on run boundaries of x, so the
  // target assigns one symbol to each run. cost[j][s]: blocks used j + 1,
  // current target symbol s.
  std::vector<int64_t> runs = RunLengths(x);
  const int64_t blocks =
      std::min<int64_t>(n, static_cast<int64_t>(runs.size()));
  constexpr int64_t kInf = std::numeric_limits<int64_t>::max() / 4;
  std::vector<std::array<int64_t, 2>> cost(blocks, {kInf, kInf});
  char sym = x.front();
  auto flip = [&](size_t r, int s) {
    int run_sym = ((sym == '1') == (r % 2 == 0)) ? 1 : 0;
    return run_sym == s ? 0 : runs[r];
  };
  for (int s = 0; s < 2; ++s) cost[0][s] = flip(0, s);
  for (size_t r = 1; r < runs.size(); ++r) {
    std::vector<std::array<int64_t, 2>> next(blocks, {kInf, kInf});
    for (int64_t j = 0; j < blocks; ++j) {
      for (int s = 0; s < 2; ++s) {
        if (cost[j][s] >= kInf) continue;
        int64_t same = cost[j][s] + flip(r, s);
        next[j][s] = std::min(next[j][s], same);
        if (j + 1 < blocks) {
          int64_t other = cost[j][s] + flip(r, 1 - s);
          next[j + 1][1 - s] = std::min(next[j + 1][1 - s], other);
        }
      }
    }
    cost.swap(next);
  }
  int64_t best = kInf;
  for (const auto& c : cost) best = std::min({best, c[0], c[1]});
  return best;
}

double DistToNBlock(std::string_view x, int64_t n) {
  if (x.empty()) return 0;
  return static_cast<double>(NBlockFlips(x, n)) / static_cast<double>(x.size());
}

std::vector<std::string> AllNBlockStrings(int64_t length, int64_t n) {
  if (length > 24) throw std::invalid_argument("length too large to enumerate");
  std::vector<std::string> out;
  for (uint32_t bits = 0; bits < (uint32_t{1} << length); ++bits) {
    std::string s(static_cast<size_t>(length), '0');
    for (int64_t i = 0; i < length; ++i) {
      if (bits >> i & 1) s[i] = '1';
    }
    if (static_cast<int64_t>(RunLengths(s).size()) <= n) out.push_back(s);
  }
  return out;
}

std::string ToJson(const EditBounds& b) {
  nlohmann::json j;
  j["lower"] = b.lower;
  j["upper"] = b.upper;
  j["rel_edit"] = b.rel_edit;
  j["tv"] = b.tv;
  j["N"] = b.N;
  j["rounding_error"] = b.rounding_error;
  j["metric"] = "edit";
  return j.dump();
}

}  // namespace ptrace
