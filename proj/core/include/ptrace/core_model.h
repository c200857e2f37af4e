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

// Distributions on [2n] split into odd and even halves, sampling, and
// parity traces.
//
// Element x in {1, ..., 2n} is odd-indexed (parity 1) when x = 2i + 1, and
// then carries p[i]; the even element x = 2i + 2 carries q[i]. So the full
// distribution reads (p[0], q[0], p[1], q[1], ...).

#ifndef PTRACE_CORE_MODEL_H_
#define PTRACE_CORE_MODEL_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace ptrace {

// Non-negative weights over Z_n summing to at most one.
struct PartialDistribution {
  std::vector<double> w;

  size_t n() const { return w.size(); }
  double Mass() const;
  // Throws std::invalid_argument on a negative entry or mass above 1.
  void Validate() const;
};

struct DistributionPair {
  PartialDistribution p;  // odd elements
  PartialDistribution q;  // even elements

  size_t n() const { return p.n(); }
  // Probability of element x in {1..2n}.
  double At(int64_t x) const;
  std::vector<double> Interleaved() const;
  // Throws unless both halves share n and the total mass is 1 within 1e-9.
  void Validate() const;

  static DistributionPair Uniform(size_t n);
  static DistributionPair FromInterleaved(const std::vector<double>& full);
};

struct SampleMultiset {
  std::vector<int64_t> counts;  // counts[x - 1] is the multiplicity of x
  int64_t total = 0;

  static SampleMultiset FromElements(size_t domain,
                                     const std::vector<int64_t>& elements);
};

struct RunLengthTrace {
  std::string bits;
  std::vector<int64_t> one_runs;
  std::vector<int64_t> zero_runs;
  // Symbol of the first listed run ('1' or '0'); 0 for the empty trace.
  char lead = 0;
};

// Parities of the sorted sample, one character per sampled element.
std::string ParityTrace(const SampleMultiset& sample);

// Run lengths of the circular word. When the first and last runs share a
// symbol they are joined; the joined run is listed first.
RunLengthTrace CircularRuns(std::string_view bits);

// Rebuilds a circular word from alternating runs starting at `lead`. The
// result is a rotation of the original trace.
std::string Reconstruct(const RunLengthTrace& runs);

// m i.i.d. draws. Throws std::invalid_argument if pi is not a full
// distribution or m < 0.
SampleMultiset SampleExact(const DistributionPair& pi, int64_t m,
                           uint64_t seed);

// Independent Poi(m * pi(x)) counts per element.
SampleMultiset SamplePoissonized(const DistributionPair& pi, double m,
                                 uint64_t seed);

// Parity trace of a Poi(m) sample, built directly from Poisson counts.
std::string PoissonizedTrace(const DistributionPair& pi, double m,
                             uint64_t seed);

// Routes every symbol of `trace` to one of k outputs chosen uniformly.
std::vector<std::string> RouteSymbols(std::string_view trace, int k,
                                      uint64_t seed);

// One parity trace of size Poi(m k), split into k traces that are each
// distributed as an independent trace of size Poi(m).
std::vector<std::string> SplitSampleK(const DistributionPair& pi, double m,
                                      int k, uint64_t seed);

// Sample sizes for moving between fixed-size and Poisson-size testers at
// failure probability delta.
double PoissonizedSizeFromStandard(double m, double delta);
double StandardSizeFromPoissonized(double m, double delta);

std::string ToJson(const DistributionPair& pi);
DistributionPair DistributionFromJson(std::string_view json);

}  // namespace ptrace

#endif  // PTRACE_CORE_MODEL_H_
