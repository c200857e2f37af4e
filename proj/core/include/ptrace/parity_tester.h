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

// Uniformity testers that see only the parity trace of a sample from a
// distribution on [2n].
//
// Two regimes: a run-collision tester for large epsilon and a coverage plus
// histogram tester for small epsilon. TestUniformityPT picks one by comparing
// epsilon with K log^3 n / n^{1/4}.

#ifndef PTRACE_PARITY_TESTER_H_
#define PTRACE_PARITY_TESTER_H_

#include <cstdint>
#include <vector>

#include "ptrace/confused_collector.h"
#include "ptrace/core_model.h"
#include "ptrace/verdict.h"

namespace ptrace {

enum class PTMode { kAuto, kLargeEps, kSmallEps };

struct PTConfig {
  double alpha = 20;
  double beta = 0.25;
  double gamma = 3.3;
  double K = 2;
  double epsilon = 0.3;
  PTMode mode = PTMode::kAuto;
  // Leading constants of the two sample-size formulas.
  double c_large = 1;
  double c_small = 1;
  // Power of log n in the small-epsilon sample size.
  double small_log_exponent = 7;
};

// The expected join matrix of the uniform distribution's parity trace: cycle
// with nu = exp(-m / 2n).
JoinMatrix PhiMu(int64_t n, double m);
double PhiMuSum(int64_t n, double m);

// c (n / eps)^{4/5} log^{7/5} n.
double PTLargeSampleSize(int64_t n, double epsilon, double c);

// max(2n log(100n), C sqrt(n) / eps^2 log^e n) with e = log_exponent.
double PTSmallSampleSize(int64_t n, double epsilon, double c,
                         double log_exponent);

// 2n log(100n), the coverage floor of the small-epsilon tester.
double PTCoverageFloor(int64_t n);

// K log^3 n / n^{1/4}.
double PTRegimeBoundary(int64_t n, double K);
bool RequiresLargeEps(int64_t n, double epsilon, double K);

// Collision tester on the D bins of `counts`, using the realized sample size.
// Accepts iff sum X(X-1) / (m(m-1)) <= (1 + eps^2/2) / D. Throws
// std::invalid_argument when fewer than two samples are present.
Verdict UniformityHistogramTester(const std::vector<int64_t>& counts,
                                  int64_t domain, double epsilon);

// Runs the bias, concentration and collision checks on the 1-runs and then
// the 0-runs. m is the Poisson sample parameter the trace was drawn with.
// Every statistic is computed for both passes; stats["beta_star"] is the
// smallest beta that would still accept (+inf once an earlier step fired).
Verdict TestUniformityPTLarge(const RunLengthTrace& trace, int64_t n,
                              const PTConfig& config, double m);

// Rejects unless there are n 1-runs and n 0-runs, then hands the 2n run
// lengths to the histogram tester over D = 2n bins.
Verdict TestUniformityPTSmall(const RunLengthTrace& trace, int64_t n,
                              const PTConfig& config, double m);

// Dispatches on config.mode; kAuto routes by RequiresLargeEps. The chosen
// branch is recorded in params["large_eps"].
Verdict TestUniformityPT(const RunLengthTrace& trace, int64_t n,
                         const PTConfig& config, double m);

// Sample size the dispatcher would use for (n, epsilon).
double PTSampleSize(int64_t n, const PTConfig& config);

}  // namespace ptrace

#endif  // PTRACE_PARITY_TESTER_H_
