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

#include "ptrace/core_model.h"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "json.hpp"
#include "ptrace/rng.h"

namespace ptrace {

double PartialDistribution::Mass() const {
  return std::accumulate(w.begin(), w.end(), 0.0);
}

void PartialDistribution::Validate() const {
  for (double v : w) {
    if (!(v >= 0)) throw std::invalid_argument("negative or NaN weight");
  }
  if (Mass() > 1 + 1e-12) {
    throw std::invalid_argument("partial distribution has mass above 1");
  }
}

double DistributionPair::At(int64_t x) const {
  if (x < 1 || x > static_cast<int64_t>(2 * n())) {
    throw std::out_of_range("element outside [2n]");
  }
  int64_t i = (x - 1) / 2;
  return (x % 2 == 1) ? p.w[i] : q.w[i];
}

std::vector<double> DistributionPair::Interleaved() const {
  std::vector<double> full(2 * n());
  for (size_t i = 0; i < n(); ++i) {
    full[2 * i] = p.w[i];
    full[2 * i + 1] = q.w[i];
  }
  return full;
}

void DistributionPair::Validate() const {
  if (p.n() != q.n()) {
    throw std::invalid_argument("odd and even parts differ in length");
  }
  p.Validate();
  q.Validate();
  double total = p.Mass() + q.Mass();
  if (std::abs(total - 1) > 1e-9) {
    throw std::invalid_argument("distribution mass is not 1");
  }
}

DistributionPair DistributionPair::Uniform(size_t n) {
  double mu = 1.0 / (2.0 * static_cast<double>(n));
  return {{std::vector<double>(n, mu)}, {std::vector<double>(n, mu)}};
}

DistributionPair DistributionPair::FromInterleaved(
    const std::vector<double>& full) {
  if (full.size() % 2 != 0) {
    throw std::invalid_argument("interleaved vector has odd length");
  }
  DistributionPair pi;
  size_t n = full.size() / 2;
  pi.p.w.resize(n);
  pi.q.w.resize(n);
  for (size_t i = 0; i < n; ++i) {
    pi.p.w[i] = full[2 * i];
    pi.q.w[i] = full[2 * i + 1];
  }
  return pi;
}

SampleMultiset SampleMultiset::FromElements(
    size_t domain, const std::vector<int64_t>& elements) {
  SampleMultiset s;
  s.counts.assign(domain, 0);
  for (int64_t x : elements) {
    if (x < 1 || x > static_cast<int64_t>(domain)) {
      throw std::out_of_range("sample element outside the domain");
    }
    ++s.counts[x - 1];
  }
  s.total = static_cast<int64_t>(elements.size());
  return s;
}

std::string ParityTrace(const SampleMultiset& sample) {
  std::string out;
  out.reserve(static_cast<size_t>(sample.total));
  for (size_t i = 0; i < sample.counts.size(); ++i) {
    // Element i + 1; odd elements have parity 1.
    out.append(static_cast<size_t>(sample.counts[i]), i % 2 == 0 ? '1' : '0');
  }
  return out;
}

RunLengthTrace CircularRuns(std::string_view bits) {
  RunLengthTrace r;
  r.bits = std::string(bits);
  std::vector<int64_t> lens;
  std::vector<char> syms;
  for (char c : bits) {
    if (c != '0' && c != '1') {
      throw std::invalid_argument("trace must contain only 0 and 1");
    }
    if (!syms.empty() && syms.back() == c) {
      ++lens.back();
    } else {
      syms.push_back(c);
      lens.push_back(1);
    }
  }
  if (lens.empty()) return r;
  if (lens.size() >= 2 && syms.front() == syms.back()) {
    lens.front() += lens.back();
    lens.pop_back();
    syms.pop_back();
  }
  r.lead = syms.front();
  for (size_t i = 0; i < lens.size(); ++i) {
    (syms[i] == '1' ? r.one_runs : r.zero_runs).push_back(lens[i]);
  }
  return r;
}

std::string Reconstruct(const RunLengthTrace& runs) {
  std::string out;
  if (runs.lead == 0) return out;
  const auto& first = runs.lead == '1' ? runs.one_runs : runs.zero_runs;
  const auto& second = runs.lead == '1' ? runs.zero_runs : runs.one_runs;
  char a = runs.lead;
  char b = a == '1' ? '0' : '1';
  for (size_t i = 0; i < first.size() || i < second.size(); ++i) {
    if (i < first.size()) out.append(static_cast<size_t>(first[i]), a);
    if (i < second.size()) out.append(static_cast<size_t>(second[i]), b);
  }
  return out;
}

SampleMultiset SampleExact(const DistributionPair& pi, int64_t m,
                           uint64_t seed) {
  if (m < 0) throw std::invalid_argument("sample size must be non-negative");
  pi.Validate();
  std::vector<double> full = pi.Interleaved();
  Philox rng(seed);
  SampleMultiset s;
  s.counts.assign(full.size(), 0);
  s.total = m;
  // Multinomial by sequential conditional binomials.
  size_t last = 0;
  for (size_t i = 0; i < full.size(); ++i) {
    if (full[i] > 0) last = i;
  }
  int64_t left = m;
  double rest = 1.0;
  for (size_t i = 0; i <= last && left > 0; ++i) {
    double prob = rest > 0 ? std::min(1.0, full[i] / rest) : 1.0;
    int64_t c = (i == last) ? left : SampleBinomial(rng, left, prob);
    s.counts[i] = c;
    left -= c;
    rest -= full[i];
  }
  return s;
}

SampleMultiset SamplePoissonized(const DistributionPair& pi, double m,
                                 uint64_t seed) {
  if (m < 0) throw std::invalid_argument("sample size must be non-negative");
  std::vector<double> full = pi.Interleaved();
  Philox rng(seed);
  SampleMultiset s;
  s.counts.resize(full.size());
  for (size_t i = 0; i < full.size(); ++i) {
    s.counts[i] = SamplePoisson(rng, m * full[i]);
    s.total += s.counts[i];
  }
  return s;
}

std::string PoissonizedTrace(const DistributionPair& pi, double m,
                             uint64_t seed) {
  return ParityTrace(SamplePoissonized(pi, m, seed));
}

std::vector<std::string> RouteSymbols(std::string_view trace, int k,
                                      uint64_t seed) {
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  std::vector<std::string> out(static_cast<size_t>(k));
  Philox rng(seed);
  for (char c : trace) {
    out[SampleIndex(rng, static_cast<uint64_t>(k))].push_back(c);
  }
  return out;
}

std::vector<std::string> SplitSampleK(const DistributionPair& pi, double m,
                                      int k, uint64_t seed) {
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  std::string parent = PoissonizedTrace(pi, m * k, DeriveSeed(seed, 0));
  return RouteSymbols(parent, k, DeriveSeed(seed, 1));
}

double PoissonizedSizeFromStandard(double m, double delta) {
  return std::max(2 * m, 12 * std::log(4 / delta));
}

double StandardSizeFromPoissonized(double m, double delta) {
  return std::max(1.5 * m, 18 * std::log(4 / delta));
}

std::string ToJson(const DistributionPair& pi) {
  nlohmann::json j;
  j["n"] = pi.n();
  j["p"] = pi.p.w;
  j["q"] = pi.q.w;
  return j.dump();
}

DistributionPair DistributionFromJson(std::string_view json) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("bad distribution JSON: ") +
                                e.what());
  }
  DistributionPair pi;
  try {
    pi.p.w = j.at("p").get<std::vector<double>>();
    pi.q.w = j.at("q").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("bad distribution JSON: ") +
                                e.what());
  }
  if (j.contains("n") && j["n"].get<size_t>() != pi.p.n()) {
    throw std::invalid_argument("field n disagrees with the length of p");
  }
  return pi;
}

}  // namespace ptrace
