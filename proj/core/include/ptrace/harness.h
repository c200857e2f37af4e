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

// Instance generators, seeded Monte Carlo acceptance estimates and constant
// calibration.

#ifndef PTRACE_HARNESS_H_
#define PTRACE_HARNESS_H_

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ptrace/core_model.h"

namespace ptrace {

// ---- Instances ----

struct DominoInstance {
  DistributionPair pair;
  double epsilon = 0;
  // choices[j] is true when domino j is left-biased (its first odd element
  // is the heavy one).
  std::vector<bool> choices;
  bool is_yes = true;
};

// YES gives the uniform pair. NO biases each domino (p_{2j}, q_{2j},
// p_{2j+1}, q_{2j+1}) to p entries (1 +- eps)/2n with a fair coin; q stays
// uniform. Throws std::invalid_argument for odd n.
DominoInstance MakeDominoInstance(int64_t n, double epsilon, bool yes,
                                  uint64_t seed);

// A full distribution on Z_n made of pairs (1 +- 2 eps)/n in random
// orientation, at TV distance exactly eps from uniform. Odd n rejected.
PartialDistribution CCFarInstance(int64_t n, double epsilon, uint64_t seed);

// Pairs (p_j, q_j) = (1 +- 2 eps)/2n in random orientation; TV eps.
DistributionPair PairedFarInstance(int64_t n, double epsilon, uint64_t seed);

// Blocks of the given lengths, alternating from `lead`.
std::string BlockString(const std::vector<int64_t>& lengths, char lead);
// n blocks of length N/n. Throws unless n divides N.
std::string UniformBlockString(int64_t N, int64_t n, char lead);
// n blocks alternating between lengths `big` and `small`, starting with '1'.
std::string SkewedBlockString(int64_t n, int64_t big, int64_t small);
// `base` with each character flipped independently with probability p.
std::string NoisyString(std::string_view base, double p, uint64_t seed);

// ---- Parallel trials ----

// Runs fn(i) for i in [0, count) on up to `threads` workers (0 picks the
// hardware concurrency). Work is claimed by index, so outputs written to
// slot i do not depend on scheduling.
void ParallelFor(int64_t count, int threads,
                 const std::function<void(int64_t)>& fn);

struct WilsonInterval {
  double low = 0;
  double high = 1;
};
WilsonInterval Wilson(int64_t successes, int64_t trials);

// ---- Experiments ----

struct TrialParams {
  int64_t n = 64;
  double epsilon = 0.3;
  double eta = 0.5;
  // Sample size; 0 means use the tester's formula with leading constant c.
  double m = 0;
  double c = 1;
  int k = 1;
  int64_t N = 4096;
  // Retention rate for trace testers; 0 derives it from m.
  double rho = 0;
};

struct TrialOutcome {
  bool accept = true;
  // Smallest beta that would still accept (+inf after an early reject).
  double statistic = 0;
  double m = 0;
  double sample_size = 0;
};

struct ExperimentSpec {
  // cc, pt, pt_large, pt_small, trace_uniform, trace_uniform_nopromise,
  // trace_nblock.
  std::string tester = "pt";
  // uniform, domino_no, far for distribution testers; uniform, uniform0,
  // skewed, noisy for trace testers.
  std::string instance = "uniform";
  // Keys among n, epsilon, eta, m, c, k, N, rho; expanded as a product with
  // the last key varying fastest.
  std::vector<std::pair<std::string, std::vector<double>>> grid;
  int64_t trials = 100;
  uint64_t seed = 1;
  int threads = 0;
  // Tester constants by name: alpha, beta, gamma, K, L, c_small,
  // small_log_exponent, c_nblock, concat_c.
  std::map<std::string, double> constants;
};

// Parses the versioned JSON form ({"schema": 1, ...}). Throws
// std::invalid_argument on a bad document or unknown tester id.
ExperimentSpec ParseExperimentSpec(std::string_view json);

// One seeded trial. Throws std::invalid_argument on an unknown tester or
// instance.
TrialOutcome RunTrial(const ExperimentSpec& spec, const TrialParams& params,
                      uint64_t seed);

// Trial t uses DeriveSeed(seed, t).
std::vector<TrialOutcome> RunTrials(const ExperimentSpec& spec,
                                    const TrialParams& params, int64_t trials,
                                    uint64_t seed, int threads);

struct AcceptanceRow {
  std::vector<double> params;
  int64_t trials = 0;
  double accept_rate = 0;
  double ci_low = 0;
  double ci_high = 0;
  double mean_statistic = 0;
};

struct AcceptanceCurve {
  std::vector<std::string> param_names;
  std::vector<AcceptanceRow> rows;
};

AcceptanceCurve EstimateAcceptance(const ExperimentSpec& spec);
// Header: params..., accept_rate, ci_low, ci_high.
std::string ToCsv(const AcceptanceCurve& curve);
std::string ToJson(const AcceptanceCurve& curve);

// ---- Calibration ----

struct CalibrationRequest {
  std::string tester = "pt_large";  // cc or pt_large
  int64_t n = 256;
  double epsilon = 0.3;
  double eta = 0.5;
  double target_error = 0.15;
  uint64_t seed = 1;
  int64_t trials = 200;
  int64_t holdout = 200;
  double c_start = 0.25;
  double c_max = 64;
  int bisect_steps = 6;
  // On a held-out failure, multiply c by `bump`, refit, and verify again.
  int holdout_retries = 4;
  double bump = 1.25;
  // Pick beta from the observed statistics instead of keeping constants.
  bool fit_beta = false;
  int threads = 0;
  std::map<std::string, double> constants;
};

struct CalibrationStep {
  double c = 0;
  double beta = 0;
  double yes_accept = 0;
  double no_reject = 0;
  bool pass = false;
};

struct CalibrationResult {
  bool success = false;
  double c = 0;
  double beta = 0;
  double m = 0;
  double holdout_yes_accept = 0;
  double holdout_no_reject = 0;
  std::vector<CalibrationStep> audit;
  std::string diagnostics;
};

// Searches the leading constant of the sample-size formula by doubling and
// then bisection. A candidate passes when both rates reach
// 1 - target_error + 0.05 on the search seeds; the final choice is then
// checked on `holdout` fresh seeds per side, stepping c up on failure.
CalibrationResult CalibrateConstants(const CalibrationRequest& request);

std::string ToJson(const CalibrationResult& result);

}  // namespace ptrace

#endif  // PTRACE_HARNESS_H_
