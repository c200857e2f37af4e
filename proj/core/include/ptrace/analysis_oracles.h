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

// Numerical versions of quantities that appear in the analysis of the
// collision testers. None of these are used by a tester; they exist so tests
// can check the testers' supporting identities at finite n.

#ifndef PTRACE_ANALYSIS_ORACLES_H_
#define PTRACE_ANALYSIS_ORACLES_H_

#include <cstdint>
#include <string>
#include <vector>

#include "ptrace/confused_collector.h"
#include "ptrace/core_model.h"

namespace ptrace {

struct ConjugateReport {
  PartialDistribution p_tilde;
  double tau = 0;
  double xi = 0;
  // max_i |(phi p_tilde)_i - tau| with phi the parity-trace join matrix of q.
  double residual = 0;
  // p - p_tilde; empty unless p was supplied.
  std::vector<double> z;
};

// Closed-form odd part that makes every bucket's expected mass equal under
// parity weights 1 - exp(-m q_j). Throws std::invalid_argument if |q|_1 = 0.
ConjugateReport UniformConjugate(const PartialDistribution& q, double m);
ConjugateReport UniformConjugate(const PartialDistribution& q, double m,
                                 const PartialDistribution& p);

// Monte Carlo mean of the renewal walk around vertex i. The walk to the right
// keeps adding u_{i+t} while Poi(m q_{i+t}) comes up zero; the walk to the
// left does the same with u_{i-t} and q_{i-t}. D = left + right - u_i.
struct MarkovEstimate {
  double mean_d = 0;
  double se_d = 0;
  double mean_right = 0;
  double se_right = 0;
};
MarkovEstimate ConjugateMarkovMean(const PartialDistribution& q,
                                   const std::vector<double>& u, double m,
                                   int64_t i, int64_t trials, uint64_t seed);

struct ConcentrationReport {
  double gamma_value = 0;
  // An interval maximizing p[I] / max(q[I*], t).
  CircularInterval argmax;
  // An interval with q[I*] <= t and p[I] >= t * gamma_value / 2.
  CircularInterval witness;
  double t = 0;
};

// p[I] for I = <<start, length>> on Z_n.
double IntervalMass(const std::vector<double>& p, const CircularInterval& c);
// q summed over the length - 1 edges inside I.
double InteriorMass(const std::vector<double>& q, const CircularInterval& c);

// Exhaustive O(n^2) scan over circular intervals of length 1..n. Throws
// std::invalid_argument unless t > 0 and p, q have the same length.
ConcentrationReport RelativeConcentration(const PartialDistribution& p,
                                          const PartialDistribution& q,
                                          double t);

// m p^T phi p.
double ExpectedY(const std::vector<double>& p, const JoinMatrix& phi, double m);

struct VarianceReport {
  double var_h = 0;       // Var over H of E[Y | H]
  double var_t = 0;       // mean over H of the closed-form Var[Y | H]
  double var_direct = 0;  // plain Monte Carlo Var[Y]
  double mean_direct = 0;
};

// Throws std::invalid_argument when trials < 1000.
VarianceReport VarianceComponents(const PartialDistribution& p,
                                  const BaseGraph& g,
                                  const std::vector<double>& weights, double m,
                                  int64_t trials, uint64_t seed);

// 2 |p_G|_2^2 + 4 m |p_G|_3^3 over the bucket masses of a fixed H.
double ConditionalVarianceFormula(const PartialDistribution& p,
                                  const BucketPartition& buckets, double m);
// Empirical Var[Y | H] from `draws` Poisson draws on the fixed buckets.
double ConditionalVarianceMC(const PartialDistribution& p,
                             const BucketPartition& buckets, double m,
                             int64_t draws, uint64_t seed);

struct TanhReport {
  // Largest value of (lhs - rhs) seen for each inequality; <= 0 means it held.
  double linear = 0;     // x/2 <= tanh x <= 2x on (0, 1]
  double quadratic = 0;  // tanh(r+x) quadratic upper bound
  int64_t points = 0;
};

// Checks the linear bounds at `points` values of x in (0, 1] and the quadratic
// bound on the product grid r in r_grid, x in [0, 1/(2 tanh r)] with `points`
// steps.
TanhReport TanhChecks(const std::vector<double>& r_grid, int64_t points);

// For u with mean r and entries in [0, r + 1/(2 tanh r)], returns
//   (1/n) sum tanh(u_i) - [tanh r - tanh r (1 - tanh^2 r) (1/n) sum x_i^2],
// where x = u - r and the sum runs over x_i >= 0. Non-positive when the
// bound holds.
double QuantitativeJensenGap(const std::vector<double>& u);

// With S_i the i-th column sum of the path matrix nu^{|i-j|}, nu = 1 - eta,
// h = (n - 1) / 2, a = ceil(N/2) and b = floor(N/2), returns
//   sum_{i<a} (S_{ceil h + i} - S_i) + sum_{i<b} (S_{floor h - i} - S_{n-1-i}).
// Column sums are taken in closed form. Throws std::invalid_argument unless
// 0 < eta < 1 and 0 <= 2N <= n.
double PathColumnSumGap(int64_t n, double eta, int64_t N);

std::string ToJson(const ConjugateReport& r);
std::string ToJson(const ConcentrationReport& r);

}  // namespace ptrace

#endif  // PTRACE_ANALYSIS_ORACLES_H_
