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

#include "ptrace/parity_tester.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace ptrace {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void CheckN(int64_t n) {
  if (n < 2) throw std::invalid_argument("n must be at least 2");
}

double Log(int64_t n) { return std::log(static_cast<double>(n)); }

}  // namespace

JoinMatrix PhiMu(int64_t n, double m) {
  if (!(m > 0)) throw std::invalid_argument("m must be positive");
  double eta = -std::expm1(-m / (2.0 * static_cast<double>(n)));
  return PhiExpected({GraphKind::kCycle, n}, eta);
}

double PhiMuSum(int64_t n, double m) {
  return PhiCycleSum(n, std::exp(-m / (2.0 * static_cast<double>(n))));
}

double PTLargeSampleSize(int64_t n, double epsilon, double c) {
  return c * std::pow(static_cast<double>(n) / epsilon, 0.8) *
         std::pow(Log(n), 1.4);
}

double PTCoverageFloor(int64_t n) {
  return 2.0 * static_cast<double>(n) *
         std::log(100.0 * static_cast<double>(n));
}

double PTSmallSampleSize(int64_t n, double epsilon, double c,
                         double log_exponent) {
  double main = c * std::sqrt(static_cast<double>(n)) / (epsilon * epsilon) *
                std::pow(Log(n), log_exponent);
  return std::max(PTCoverageFloor(n), main);
}

double PTRegimeBoundary(int64_t n, double K) {
  return K * std::pow(Log(n), 3) / std::pow(static_cast<double>(n), 0.25);
}

bool RequiresLargeEps(int64_t n, double epsilon, double K) {
  return epsilon >= PTRegimeBoundary(n, K);
}

Verdict UniformityHistogramTester(const std::vector<int64_t>& counts,
                                  int64_t domain, double epsilon) {
  if (domain < 1) throw std::invalid_argument("domain must be positive");
  int64_t m = std::accumulate(counts.begin(), counts.end(), int64_t{0});
  if (m < 2) throw std::invalid_argument("histogram tester needs m >= 2");
  double pairs = 0;
  for (int64_t x : counts) pairs += static_cast<double>(x) * (x - 1);
  double dm = static_cast<double>(m);
  Verdict v;
  v.y = pairs / (dm * (dm - 1));
  v.threshold = (1 + epsilon * epsilon / 2) / static_cast<double>(domain);
  v.params = {
      {"D", static_cast<double>(domain)}, {"epsilon", epsilon}, {"m", dm}};
  v.stats["collision_rate"] = v.y;
  if (v.y > v.threshold) v.Reject(Step::kHistogram);
  return v;
}

Verdict TestUniformityPTLarge(const RunLengthTrace& trace, int64_t n,
                              const PTConfig& config, double m) {
  CheckN(n);
  if (!(m > 0)) throw std::invalid_argument("m must be positive");
  Verdict v;
  v.params = {{"alpha", config.alpha},
              {"beta", config.beta},
              {"gamma", config.gamma},
              {"K", config.K},
              {"epsilon", config.epsilon},
              {"n", static_cast<double>(n)},
              {"m", m}};
  if (!RequiresLargeEps(n, config.epsilon, config.K)) {
    v.warnings.push_back(
        "epsilon below the large-epsilon boundary; small-epsilon tester "
        "applies");
  }
  const double dn = static_cast<double>(n);
  const double base = m / (4 * dn * dn) * PhiMuSum(n, m);
  const double unit = config.epsilon * config.epsilon * m * m / (dn * dn);
  const double bias_limit = 0.5 + config.gamma / std::sqrt(m);
  const double conc_limit = config.alpha * Log(n);
  v.threshold = base + config.beta * unit;
  v.stats["expected_uniform_Y"] = base;
  double beta_star = -kInf;
  bool early = false;
  double worst_y = -kInf;
  // Pass b = 1 reads the 1-runs, pass b = 0 the 0-runs.
  for (int b : {1, 0}) {
    const std::vector<int64_t>& runs =
        b == 1 ? trace.one_runs : trace.zero_runs;
    const std::string tag = std::to_string(b);
    int64_t total = 0, longest = 0;
    double pairs = 0;
    for (int64_t r : runs) {
      total += r;
      longest = std::max(longest, r);
      pairs += static_cast<double>(r) * (r - 1);
    }
    double y = pairs / m;
    double frac = static_cast<double>(total) / m;
    v.stats["N_over_m_" + tag] = frac;
    v.stats["max_run_" + tag] = static_cast<double>(longest);
    v.stats["Y_" + tag] = y;
    worst_y = std::max(worst_y, y);
    if (frac >= bias_limit) {
      v.Reject(Step::kBias);
      early = true;
    } else if (static_cast<double>(longest) >= conc_limit) {
      v.Reject(Step::kConcentration);
      early = true;
    } else if (y >= v.threshold) {
      v.Reject(Step::kCollision);
    }
    beta_star = std::max(beta_star, (y - base) / unit);
  }
  v.y = worst_y;
  v.stats["bias_threshold"] = bias_limit;
  v.stats["concentration_threshold"] = conc_limit;
  v.stats["beta_star"] = early ? kInf : beta_star;
  return v;
}

Verdict TestUniformityPTSmall(const RunLengthTrace& trace, int64_t n,
                              const PTConfig& config, double m) {
  CheckN(n);
  Verdict v;
  v.params = {
      {"epsilon", config.epsilon}, {"n", static_cast<double>(n)}, {"m", m}};
  if (m < PTCoverageFloor(n)) {
    v.warnings.push_back("m below 2n log(100n); coverage is not assured");
  }
  const int64_t ones = static_cast<int64_t>(trace.one_runs.size());
  const int64_t zeros = static_cast<int64_t>(trace.zero_runs.size());
  v.stats["one_runs"] = static_cast<double>(ones);
  v.stats["zero_runs"] = static_cast<double>(zeros);
  if (ones < n || zeros < n) {
    v.Reject(Step::kCoverage);
    v.stats["beta_star"] = kInf;
    return v;
  }
  std::vector<int64_t> hist;
  hist.reserve(static_cast<size_t>(2 * n));
  hist.insert(hist.end(), trace.one_runs.begin(), trace.one_runs.end());
  hist.insert(hist.end(), trace.zero_runs.begin(), trace.zero_runs.end());
  Verdict h = UniformityHistogramTester(hist, 2 * n, config.epsilon);
  v.y = h.y;
  v.threshold = h.threshold;
  v.stats["collision_rate"] = h.y;
  if (!h.accept) v.Reject(Step::kHistogram);
  return v;
}

Verdict TestUniformityPT(const RunLengthTrace& trace, int64_t n,
                         const PTConfig& config, double m) {
  bool large = config.mode == PTMode::kLargeEps ||
               (config.mode == PTMode::kAuto &&
                RequiresLargeEps(n, config.epsilon, config.K));
  Verdict v = large ? TestUniformityPTLarge(trace, n, config, m)
                    : TestUniformityPTSmall(trace, n, config, m);
  v.params["large_eps"] = large ? 1 : 0;
  v.params["regime_boundary"] = PTRegimeBoundary(n, config.K);
  return v;
}

double PTSampleSize(int64_t n, const PTConfig& config) {
  bool large = config.mode == PTMode::kLargeEps ||
               (config.mode == PTMode::kAuto &&
                RequiresLargeEps(n, config.epsilon, config.K));
  return large ? PTLargeSampleSize(n, config.epsilon, config.c_large)
               : PTSmallSampleSize(n, config.epsilon, config.c_small,
                                   config.small_log_exponent);
}

}  // namespace ptrace
