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

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "ptrace/core_model.h"
#include "ptrace/rng.h"

namespace ptrace {
namespace {

char BlockSymbol(size_t index) { return index % 2 == 0 ? '1' : '0'; }

void CheckRetention(double rho) {
  if (!(rho > 0 && rho < 1)) {
    throw std::invalid_argument("retention rate must lie in (0, 1)");
  }
}

Verdict EmptyAccept(const char* why) {
  Verdict v;
  v.warnings.push_back(why);
  v.stats["beta_star"] = -std::numeric_limits<double>::infinity();
  return v;
}

void AddCommonParams(Verdict* v, const TraceTestSpec& spec, double rho,
                     size_t raw, size_t poissonized) {
  v->params["N"] = static_cast<double>(spec.N);
  v->params["n"] = static_cast<double>(spec.n);
  v->params["k"] = spec.k;
  v->params["epsilon"] = spec.epsilon;
  v->params["rho"] = rho;
  v->stats["trace_size"] = static_cast<double>(raw);
  v->stats["poissonized_size"] = static_cast<double>(poissonized);
}

}  // namespace

std::string DeletionTrace(std::string_view x, double rho, uint64_t seed) {
  if (!(rho >= 0 && rho <= 1)) {
    throw std::invalid_argument("retention rate must lie in [0, 1]");
  }
  Philox rng(seed);
  std::string out;
  for (char c : x) {
    if (rng.Uniform() < rho) out.push_back(c);
  }
  return out;
}

double PoissonRate(double rho) {
  CheckRetention(rho);
  return -std::log1p(-rho);
}

double RetentionForSize(double m, int64_t N) {
  if (!(m > 0) || N < 1) throw std::invalid_argument("need m > 0 and N >= 1");
  return -std::expm1(-m / static_cast<double>(N));
}

std::string Poissonize(std::string_view trace, double rho, uint64_t seed) {
  double lambda = PoissonRate(rho);
  Philox rng(seed);
  std::string out;
  out.reserve(trace.size() * 2);
  for (char c : trace) {
    out.append(static_cast<size_t>(SamplePositivePoisson(rng, lambda)), c);
  }
  return out;
}

std::string SampleDensityTrace(const std::vector<int64_t>& counts, double m,
                               uint64_t seed) {
  int64_t total = std::accumulate(counts.begin(), counts.end(), int64_t{0});
  if (total <= 0) throw std::invalid_argument("empty density sequence");
  Philox rng(seed);
  std::string out;
  for (size_t i = 0; i < counts.size(); ++i) {
    double lambda =
        m * static_cast<double>(counts[i]) / static_cast<double>(total);
    out.append(static_cast<size_t>(SamplePoisson(rng, lambda)), BlockSymbol(i));
  }
  return out;
}

std::vector<std::string> SplitTraces(const std::vector<int64_t>& counts, int k,
                                     double rho, uint64_t seed) {
  if (k < 1) throw std::invalid_argument("k must be at least 1");
  int64_t N = std::accumulate(counts.begin(), counts.end(), int64_t{0});
  if (!(rho > 0) || rho >= 1 / (20 * std::sqrt(static_cast<double>(k) *
                                               static_cast<double>(N)))) {
    throw std::invalid_argument("split needs 0 < rho < 1/(20 sqrt(k N))");
  }
  double lambda = rho / (1 - rho);
  double m = static_cast<double>(k) * lambda * static_cast<double>(N);
  std::string parent = SampleDensityTrace(counts, m, DeriveSeed(seed, 0));
  return RouteSymbols(parent, k, DeriveSeed(seed, 1));
}

double SplitSymbolTV(double lambda) {
  return -std::expm1(-lambda) - lambda * std::exp(-lambda);
}

AlternatingFit LearnKAlternating(const std::vector<LabeledPoint>& sample,
                                 int64_t k) {
  if (k < 0) throw std::invalid_argument("k must be non-negative");
  AlternatingFit fit;
  if (sample.empty()) return fit;
  // Group points by position.
  std::vector<size_t> first;
  std::vector<std::array<int64_t, 2>> mismatch;  // errors if value is 0 / 1
  for (size_t i = 0; i < sample.size(); ++i) {
    if (sample[i].label != 0 && sample[i].label != 1) {
      throw std::invalid_argument("labels must be 0 or 1");
    }
    if (i > 0 && sample[i].position < sample[i - 1].position) {
      throw std::invalid_argument("sample must be sorted by position");
    }
    if (i == 0 || sample[i].position != sample[i - 1].position) {
      first.push_back(i);
      mismatch.push_back({0, 0});
    }
    ++mismatch.back()[1 - sample[i].label];
  }
  const size_t groups = first.size();
  const int64_t alts = std::min<int64_t>(k, static_cast<int64_t>(groups) - 1);
  constexpr int64_t kInf = std::numeric_limits<int64_t>::max() / 4;
  const size_t width = static_cast<size_t>(alts + 1) * 2;
  // cost[(a, v)] after each group; from[g] remembers the predecessor value.
  std::vector<int64_t> cost(width, kInf), next(width);
  std::vector<std::vector<int8_t>> from(groups, std::vector<int8_t>(width, -1));
  auto at = [](int64_t a, int v) { return static_cast<size_t>(a * 2 + v); };
  for (int v = 0; v < 2; ++v) cost[at(0, v)] = mismatch[0][v];
  for (size_t g = 1; g < groups; ++g) {
    std::fill(next.begin(), next.end(), kInf);
    for (int64_t a = 0; a <= alts; ++a) {
      for (int v = 0; v < 2; ++v) {
        int64_t keep = cost[at(a, v)];
        int64_t flip = a > 0 ? cost[at(a - 1, 1 - v)] : kInf;
        int64_t best = std::min(keep, flip);
        if (best >= kInf) continue;
        next[at(a, v)] = best + mismatch[g][v];
        from[g][at(a, v)] = static_cast<int8_t>(keep <= flip ? v : 1 - v);
      }
    }
    cost.swap(next);
  }
  // Prefer value 1 at the end and fewer alternations on ties.
  int64_t best = kInf, best_a = 0;
  int best_v = 1;
  for (int64_t a = 0; a <= alts; ++a) {
    for (int v : {1, 0}) {
      if (cost[at(a, v)] < best) {
        best = cost[at(a, v)];
        best_a = a;
        best_v = v;
      }
    }
  }
  std::vector<int> group_value(groups);
  int64_t a = best_a;
  int v = best_v;
  for (size_t g = groups; g-- > 0;) {
    group_value[g] = v;
    if (g == 0) break;
    int prev = from[g][at(a, v)];
    if (prev != v) --a;
    v = prev;
  }
  fit.errors = best;
  fit.start_value = group_value[0];
  fit.fitted.resize(sample.size());
  for (size_t g = 0; g < groups; ++g) {
    size_t end = g + 1 < groups ? first[g + 1] : sample.size();
    for (size_t i = first[g]; i < end; ++i) fit.fitted[i] = group_value[g];
    if (g > 0 && group_value[g] != group_value[g - 1]) {
      fit.switches.push_back(sample[first[g]].position);
    }
  }
  return fit;
}

AlternatingFit LearnKAlternating(std::string_view trace, int64_t k) {
  std::vector<LabeledPoint> pts(trace.size());
  for (size_t i = 0; i < trace.size(); ++i) {
    if (trace[i] != '0' && trace[i] != '1') {
      throw std::invalid_argument("trace must contain only 0 and 1");
    }
    pts[i] = {static_cast<double>(i), trace[i] == '1' ? 1 : 0};
  }
  return LearnKAlternating(pts, k);
}

double NBlockSampleSize(int64_t n, double epsilon, double c) {
  return c * static_cast<double>(n) / epsilon;
}

double UniformTraceSampleSize(int64_t n, double epsilon, int k, double c) {
  double dn = static_cast<double>(n);
  double dk = static_cast<double>(k);
  return c * (std::pow(dn / epsilon, 0.8) * std::pow(std::log(dn), 1.4) /
                  std::pow(dk, 0.2) +
              std::sqrt(dn) / (std::sqrt(dk) * epsilon * epsilon));
}

void ValidateSpec(const TraceTestSpec& spec) {
  if (spec.n < 1 || spec.N < 1 || spec.k < 1) {
    throw std::invalid_argument("N, n and k must be positive");
  }
  if (!(spec.epsilon > 0)) throw std::invalid_argument("epsilon must be > 0");
  if (spec.property != TraceProperty::kNBlock) {
    if (spec.n % 2 != 0) throw std::invalid_argument("n must be even");
    if (spec.N % spec.n != 0) throw std::invalid_argument("n must divide N");
    if (spec.n < 4) throw std::invalid_argument("n must be at least 4");
  }
}

std::string Complement(std::string_view x) {
  std::string out(x);
  for (char& c : out) c = c == '1' ? '0' : '1';
  return out;
}

Verdict TestNBlock(std::string_view trace, const TraceTestSpec& spec,
                   double rho, const TraceTestConfig& config, uint64_t seed) {
  ValidateSpec(spec);
  if (trace.empty()) {
    Verdict v = EmptyAccept("empty trace; accepting without evidence");
    AddCommonParams(&v, spec, rho, 0, 0);
    return v;
  }
  std::string t = Poissonize(trace, rho, seed);
  AlternatingFit fit = LearnKAlternating(t, spec.n - 1);
  Verdict v;
  AddCommonParams(&v, spec, rho, trace.size(), t.size());
  v.y = static_cast<double>(fit.errors) / static_cast<double>(t.size());
  v.threshold = config.disagreement * spec.epsilon;
  v.stats["errors"] = static_cast<double>(fit.errors);
  v.stats["beta_star"] = v.y / spec.epsilon;
  if (v.y > v.threshold) v.Reject(Step::kDisagreement);
  return v;
}

Verdict TestUniformNBlock(std::string_view trace, const TraceTestSpec& spec,
                          double rho, const TraceTestConfig& config,
                          uint64_t seed) {
  ValidateSpec(spec);
  if (trace.empty()) {
    Verdict v = EmptyAccept("empty trace; accepting without evidence");
    AddCommonParams(&v, spec, rho, 0, 0);
    return v;
  }
  std::string t = Poissonize(trace, rho, seed);
  if (spec.property == TraceProperty::kUniformNBlockPromised) {
    const double m = static_cast<double>(spec.N) * PoissonRate(rho);
    PTConfig pc = config.pt;
    pc.epsilon = spec.epsilon / 2;
    const int64_t pairs = spec.n / 2;
    Verdict direct = TestUniformityPT(CircularRuns(t), pairs, pc, m);
    Verdict flipped =
        TestUniformityPT(CircularRuns(Complement(t)), pairs, pc, m);
    Verdict v = direct.accept || !flipped.accept ? direct : flipped;
    v.stats["direct_accept"] = direct.accept ? 1 : 0;
    v.stats["complement_accept"] = flipped.accept ? 1 : 0;
    auto beta = [](const Verdict& x) {
      auto it = x.stats.find("beta_star");
      return it == x.stats.end() ? 0.0 : it->second;
    };
    if (direct.stats.count("beta_star") || flipped.stats.count("beta_star")) {
      v.stats["beta_star"] = std::min(beta(direct), beta(flipped));
    }
    AddCommonParams(&v, spec, rho, trace.size(), t.size());
    v.params["m"] = m;
    return v;
  }
  // No promise: the fitted labeling must explain the trace and give its n
  // blocks near-equal mass.
  Verdict v;
  AddCommonParams(&v, spec, rho, trace.size(), t.size());
  AlternatingFit fit = LearnKAlternating(t, spec.n - 1);
  const double size = static_cast<double>(t.size());
  double dis = static_cast<double>(fit.errors) / size;
  v.stats["disagreement"] = dis;
  if (dis > config.disagreement * spec.epsilon) {
    v.y = dis;
    v.threshold = config.disagreement * spec.epsilon;
    v.Reject(Step::kDisagreement);
    return v;
  }
  std::string labels(fit.fitted.size(), '0');
  for (size_t i = 0; i < labels.size(); ++i) {
    if (fit.fitted[i] == 1) labels[i] = '1';
  }
  std::vector<int64_t> blocks = RunLengths(labels);
  blocks.resize(static_cast<size_t>(spec.n), 0);
  double tv = 0;
  for (int64_t c : blocks) {
    tv += std::abs(static_cast<double>(c) / size -
                   1.0 / static_cast<double>(spec.n));
  }
  tv /= 2;
  v.y = tv;
  v.threshold = config.verify_tv * spec.epsilon;
  v.stats["block_tv"] = tv;
  if (tv > v.threshold) v.Reject(Step::kVerification);
  return v;
}

Verdict TestUniformNBlockMultitrace(const std::vector<std::string>& traces,
                                    const TraceTestSpec& spec, double rho,
                                    const TraceTestConfig& config,
                                    uint64_t seed) {
  ValidateSpec(spec);
  if (static_cast<int>(traces.size()) != spec.k) {
    throw std::invalid_argument("number of traces differs from k");
  }
  std::string joined;
  for (const std::string& t : traces) joined += t;
  TraceTestSpec big = spec;
  big.N = spec.N * spec.k;
  big.n = spec.n * spec.k;
  big.k = 1;
  // With one trace there is nothing to concatenate, so epsilon stays put.
  if (spec.k > 1) big.epsilon = spec.epsilon * config.concat_c;
  Verdict v = spec.property == TraceProperty::kNBlock
                  ? TestNBlock(joined, big, rho, config, seed)
                  : TestUniformNBlock(joined, big, rho, config, seed);
  v.params["k"] = spec.k;
  v.params["concat_length"] = static_cast<double>(joined.size());
  v.params["effective_epsilon"] = big.epsilon;
  return v;
}

}  // namespace ptrace
