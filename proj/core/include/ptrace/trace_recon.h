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

// Deletion-channel traces of binary strings and testers that read them.
//
// A string x of length N is viewed as the density sequence psi^{-1}(x): one
// entry per block, odd entries labeled 1. A rho-retention trace of x,
// Poissonized, is a parity trace of a Poi(N lambda) sample from that density
// sequence, so the parity-trace testers apply unchanged.

#ifndef PTRACE_TRACE_RECON_H_
#define PTRACE_TRACE_RECON_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ptrace/edit_metrics.h"
#include "ptrace/parity_tester.h"
#include "ptrace/verdict.h"

namespace ptrace {

// Keeps each character independently with probability rho in [0, 1].
std::string DeletionTrace(std::string_view x, double rho, uint64_t seed);

// -log(1 - rho).
double PoissonRate(double rho);
// 1 - exp(-m / N): the retention rate whose Poissonized trace has mean m.
double RetentionForSize(double m, int64_t N);

// Replaces every symbol by Poi_{>0}(lambda) copies, lambda = -log(1 - rho).
// Throws std::invalid_argument unless 0 < rho < 1.
std::string Poissonize(std::string_view trace, double rho, uint64_t seed);

// Parity trace of a Poi(m) sample from the density sequence with block counts
// `counts` (total N): block i contributes Poi(m c_i / N) copies of its symbol.
std::string SampleDensityTrace(const std::vector<int64_t>& counts, double m,
                               uint64_t seed);

// One parity trace of size Poi(k N rho / (1 - rho)) from pi, with symbols
// routed uniformly to k strings. Throws std::invalid_argument unless
// rho < 1 / (20 sqrt(k N)).
std::vector<std::string> SplitTraces(const std::vector<int64_t>& counts, int k,
                                     double rho, uint64_t seed);

// TV between Poi(lambda) and Ber(lambda / (1 + lambda)), which is
// Pr[Poi(lambda) >= 2] = 1 - e^{-lambda}(1 + lambda).
double SplitSymbolTV(double lambda);

struct LabeledPoint {
  double position = 0;
  int label = 0;  // 0 or 1
};

struct AlternatingFit {
  int64_t errors = 0;
  int start_value = 1;
  // Labels switch just before each of these positions.
  std::vector<double> switches;
  // Fitted label of every input point, in input order.
  std::vector<int> fitted;
};

// Empirical risk minimizer over functions with at most k alternations.
// Points must be sorted by position; points sharing a position get the same
// fitted label. Throws std::invalid_argument on unsorted input or k < 0.
AlternatingFit LearnKAlternating(const std::vector<LabeledPoint>& sample,
                                 int64_t k);
// Same, treating trace index i as position i.
AlternatingFit LearnKAlternating(std::string_view trace, int64_t k);

enum class TraceProperty { kNBlock, kUniformNBlock, kUniformNBlockPromised };

struct TraceTestSpec {
  int64_t N = 0;
  int64_t n = 0;
  double epsilon = 0.4;
  int k = 1;
  TraceProperty property = TraceProperty::kUniformNBlockPromised;
};

struct TraceTestConfig {
  // Poissonized sample size of the n-block tester: c_nblock n / eps.
  double c_nblock = 4;
  // Per-trace size of the uniform tester, see UniformTraceSampleSize.
  double c_uniform = 3;
  // Multi-trace testers shrink epsilon by this factor.
  double concat_c = 0.25;
  // Reject when the fitted labeling disagrees on more than this times eps.
  double disagreement = 3.0 / 8.0;
  // No-promise verifier: reject when the empirical block masses are more
  // than this times eps from uniform in TV.
  double verify_tv = 0.25;
  PTConfig pt;
};

// c n / eps.
double NBlockSampleSize(int64_t n, double epsilon, double c);
// c ((n/eps)^{4/5} log^{7/5} n / k^{1/5} + sqrt(n) / (sqrt(k) eps^2)).
double UniformTraceSampleSize(int64_t n, double epsilon, int k, double c);

// Throws std::invalid_argument when `spec` is not supported: n < 1, and for
// the uniform properties odd n or n not dividing N.
void ValidateSpec(const TraceTestSpec& spec);

// The trace must come from x at retention rho; `seed` drives Poissonize.
Verdict TestNBlock(std::string_view trace, const TraceTestSpec& spec,
                   double rho, const TraceTestConfig& config, uint64_t seed);

// Promised mode runs the parity-trace tester on the Poissonized trace and on
// its complement with n/2 pairs and eps/2, accepting if either accepts. The
// no-promise mode fits an (n-1)-alternating labeling and checks that its n
// blocks carry near-equal mass.
Verdict TestUniformNBlock(std::string_view trace, const TraceTestSpec& spec,
                          double rho, const TraceTestConfig& config,
                          uint64_t seed);

// Concatenates the k traces and runs the single-trace tester for x^k: length
// kN, kn blocks, eps scaled by concat_c when k > 1.
Verdict TestUniformNBlockMultitrace(const std::vector<std::string>& traces,
                                    const TraceTestSpec& spec, double rho,
                                    const TraceTestConfig& config,
                                    uint64_t seed);

std::string Complement(std::string_view x);

}  // namespace ptrace

#endif  // PTRACE_TRACE_RECON_H_
