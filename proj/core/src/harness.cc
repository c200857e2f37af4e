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

#include "ptrace/harness.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "ptrace/confused_collector.h"
#include "ptrace/parity_tester.h"
#include "ptrace/rng.h"
#include "ptrace/trace_recon.h"

namespace ptrace {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

const std::set<std::string>& KnownTesters() {
  static const std::set<std::string> ids = {"cc",
                                            "pt",
                                            "pt_large",
                                            "pt_small",
                                            "trace_uniform",
                                            "trace_uniform_nopromise",
                                            "trace_nblock"};
  return ids;
}

double Get(const std::map<std::string, double>& c, const std::string& key,
           double fallback) {
  auto it = c.find(key);
  return it == c.end() ? fallback : it->second;
}

double Statistic(const Verdict& v) {
  auto it = v.stats.find("beta_star");
  return it == v.stats.end() ? v.y : it->second;
}

std::string Number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.10g", x);
  return buf;
}

void CheckEvenN(int64_t n) {
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("n must be even");
}

TrialOutcome RunCC(const ExperimentSpec& spec, const TrialParams& tp,
                   uint64_t seed) {
  PartialDistribution p;
  if (spec.instance == "uniform") {
    p.w.assign(static_cast<size_t>(tp.n), 1.0 / static_cast<double>(tp.n));
  } else if (spec.instance == "far") {
    p = CCFarInstance(tp.n, tp.epsilon, DeriveSeed(seed, 0));
  } else {
    throw std::invalid_argument("unknown instance for cc: " + spec.instance);
  }
  const auto& k = spec.constants;
  CCConfig cfg;
  cfg.alpha = Get(k, "alpha", cfg.alpha);
  cfg.beta = Get(k, "beta", cfg.beta);
  cfg.L = Get(k, "L", cfg.L);
  cfg.c = tp.c;
  cfg.epsilon = tp.epsilon;
  cfg.eta = tp.eta;
  cfg.allow_low_eta = Get(k, "allow_low_eta", 0) > 0.5;
  double m = tp.m > 0 ? tp.m : CCSampleSize(tp.n, tp.epsilon, tp.eta, tp.c);
  BaseGraph g{GraphKind::kCycle, tp.n};
  ConfusedSample s = SampleConfused(p, m, g, tp.eta, DeriveSeed(seed, 1));
  Verdict v = TestUniformityCC(s.counts, cfg, tp.n, m);
  double total = 0;
  for (int64_t x : s.counts) total += static_cast<double>(x);
  return {v.accept, Statistic(v), m, total};
}

TrialOutcome RunPT(const ExperimentSpec& spec, const TrialParams& tp,
                   uint64_t seed) {
  DistributionPair pi;
  if (spec.instance == "uniform") {
    pi = DistributionPair::Uniform(static_cast<size_t>(tp.n));
  } else if (spec.instance == "domino_no") {
    pi = MakeDominoInstance(tp.n, tp.epsilon, false, DeriveSeed(seed, 0)).pair;
  } else if (spec.instance == "far") {
    pi = PairedFarInstance(tp.n, tp.epsilon, DeriveSeed(seed, 0));
  } else {
    throw std::invalid_argument("unknown instance for pt: " + spec.instance);
  }
  const auto& k = spec.constants;
  PTConfig cfg;
  cfg.alpha = Get(k, "alpha", cfg.alpha);
  cfg.beta = Get(k, "beta", cfg.beta);
  cfg.gamma = Get(k, "gamma", cfg.gamma);
  cfg.K = Get(k, "K", cfg.K);
  cfg.epsilon = tp.epsilon;
  cfg.c_large = tp.c;
  cfg.c_small = Get(k, "c_small", tp.c);
  cfg.small_log_exponent = Get(k, "small_log_exponent", cfg.small_log_exponent);
  if (spec.tester == "pt_large") cfg.mode = PTMode::kLargeEps;
  if (spec.tester == "pt_small") cfg.mode = PTMode::kSmallEps;
  double m = tp.m > 0 ? tp.m : PTSampleSize(tp.n, cfg);
  std::string trace = PoissonizedTrace(pi, m, DeriveSeed(seed, 1));
  Verdict v = TestUniformityPT(CircularRuns(trace), tp.n, cfg, m);
  return {v.accept, Statistic(v), m, static_cast<double>(trace.size())};
}

TrialOutcome RunTrace(const ExperimentSpec& spec, const TrialParams& tp,
                      uint64_t seed) {
  const auto& k = spec.constants;
  std::string x;
  if (spec.instance == "uniform") {
    x = UniformBlockString(tp.N, tp.n, '1');
  } else if (spec.instance == "uniform0") {
    x = UniformBlockString(tp.N, tp.n, '0');
  } else if (spec.instance == "skewed") {
    int64_t len = tp.N / tp.n;
    int64_t big = static_cast<int64_t>(Get(k, "big", 7.0 * len / 4));
    int64_t small = static_cast<int64_t>(Get(k, "small", len / 4.0));
    x = SkewedBlockString(tp.n, big, small);
  } else if (spec.instance == "noisy") {
    x = NoisyString(UniformBlockString(tp.N, tp.n, '1'), Get(k, "noise", 0.45),
                    DeriveSeed(seed, 0));
  } else {
    throw std::invalid_argument("unknown instance for trace testers: " +
                                spec.instance);
  }
  TraceTestConfig cfg;
  cfg.c_nblock = tp.c;
  cfg.c_uniform = tp.c;
  cfg.concat_c = Get(k, "concat_c", cfg.concat_c);
  cfg.pt.alpha = Get(k, "alpha", cfg.pt.alpha);
  cfg.pt.beta = Get(k, "beta", cfg.pt.beta);
  cfg.pt.gamma = Get(k, "gamma", cfg.pt.gamma);
  cfg.pt.K = Get(k, "K", cfg.pt.K);
  cfg.pt.c_small = Get(k, "c_small", cfg.pt.c_small);
  cfg.pt.small_log_exponent =
      Get(k, "small_log_exponent", cfg.pt.small_log_exponent);
  TraceTestSpec ts;
  ts.N = static_cast<int64_t>(x.size());
  ts.n = tp.n;
  ts.epsilon = tp.epsilon;
  ts.k = tp.k;
  bool nblock = spec.tester == "trace_nblock";
  ts.property = nblock ? TraceProperty::kNBlock
                : spec.tester == "trace_uniform"
                    ? TraceProperty::kUniformNBlockPromised
                    : TraceProperty::kUniformNBlock;
  double m = tp.m > 0 ? tp.m
             : nblock ? NBlockSampleSize(tp.n, tp.epsilon, tp.c)
                      : UniformTraceSampleSize(tp.n, tp.epsilon, tp.k, tp.c);
  double rho = tp.rho > 0 ? tp.rho : RetentionForSize(m, ts.N);
  Verdict v;
  double chars = 0;
  if (tp.k == 1) {
    std::string t = DeletionTrace(x, rho, DeriveSeed(seed, 1));
    chars = static_cast<double>(t.size());
    v = nblock ? TestNBlock(t, ts, rho, cfg, DeriveSeed(seed, 2))
               : TestUniformNBlock(t, ts, rho, cfg, DeriveSeed(seed, 2));
  } else {
    std::vector<std::string> traces(static_cast<size_t>(tp.k));
    for (int j = 0; j < tp.k; ++j) {
      traces[j] = DeletionTrace(x, rho, DeriveSeed(seed, 1, j));
      chars += static_cast<double>(traces[j].size());
    }
    v = TestUniformNBlockMultitrace(traces, ts, rho, cfg, DeriveSeed(seed, 2));
  }
  return {v.accept, Statistic(v), m, chars};
}

std::vector<TrialParams> ExpandGrid(const ExperimentSpec& spec) {
  std::vector<TrialParams> points(1);
  for (const auto& [key, values] : spec.grid) {
    if (values.empty()) throw std::invalid_argument("empty grid axis " + key);
    std::vector<TrialParams> next;
    for (const TrialParams& base : points) {
      for (double x : values) {
        TrialParams p = base;
        if (key == "n") {
          p.n = static_cast<int64_t>(x);
        } else if (key == "epsilon") {
          p.epsilon = x;
        } else if (key == "eta") {
          p.eta = x;
        } else if (key == "m") {
          p.m = x;
        } else if (key == "c") {
          p.c = x;
        } else if (key == "k") {
          p.k = static_cast<int>(x);
        } else if (key == "N") {
          p.N = static_cast<int64_t>(x);
        } else if (key == "rho") {
          p.rho = x;
        } else {
          throw std::invalid_argument("unknown grid key " + key);
        }
        next.push_back(p);
      }
    }
    points.swap(next);
  }
  return points;
}

// Beta maximizing min(yes accept, no reject) when acceptance means
// statistic < beta; among ties the middle candidate.
std::pair<double, double> FitBeta(std::vector<double> yes,
                                  std::vector<double> no) {
  std::vector<double> all;
  for (double x : yes)
    if (std::isfinite(x)) all.push_back(x);
  for (double x : no)
    if (std::isfinite(x)) all.push_back(x);
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  std::vector<double> cand;
  if (all.empty()) {
    cand.push_back(0);
  } else {
    cand.push_back(all.front() - 1);
    for (size_t i = 0; i + 1 < all.size(); ++i) {
      cand.push_back(0.5 * (all[i] + all[i + 1]));
    }
    cand.push_back(all.back() + 1);
  }
  std::sort(yes.begin(), yes.end());
  std::sort(no.begin(), no.end());
  double best = -1;
  std::vector<double> winners;
  for (double b : cand) {
    double ya = static_cast<double>(
                    std::lower_bound(yes.begin(), yes.end(), b) - yes.begin()) /
                static_cast<double>(yes.size());
    double nr = static_cast<double>(no.end() -
                                    std::lower_bound(no.begin(), no.end(), b)) /
                static_cast<double>(no.size());
    double score = std::min(ya, nr);
    if (score > best + 1e-12) {
      best = score;
      winners = {b};
    } else if (std::abs(score - best) <= 1e-12) {
      winners.push_back(b);
    }
  }
  return {winners[winners.size() / 2], best};
}

double Rate(const std::vector<double>& stats, double beta, bool accept) {
  int64_t hits = 0;
  for (double s : stats) hits += (s < beta) == accept;
  return static_cast<double>(hits) / static_cast<double>(stats.size());
}

std::vector<double> Stats(const std::vector<TrialOutcome>& out) {
  std::vector<double> s(out.size());
  for (size_t i = 0; i < out.size(); ++i) s[i] = out[i].statistic;
  return s;
}

}  // namespace

DominoInstance MakeDominoInstance(int64_t n, double epsilon, bool yes,
                                  uint64_t seed) {
  CheckEvenN(n);
  if (!(epsilon >= 0 && epsilon <= 1)) {
    throw std::invalid_argument("epsilon must lie in [0, 1]");
  }
  DominoInstance d;
  d.pair = DistributionPair::Uniform(static_cast<size_t>(n));
  d.epsilon = epsilon;
  d.is_yes = yes;
  if (yes) return d;
  Philox rng(seed);
  const double base = 1.0 / (2.0 * static_cast<double>(n));
  d.choices.resize(static_cast<size_t>(n / 2));
  for (int64_t j = 0; j < n / 2; ++j) {
    bool left = SampleBernoulli(rng, 0.5);
    d.choices[j] = left;
    double sign = left ? 1 : -1;
    d.pair.p.w[2 * j] = base * (1 + sign * epsilon);
    d.pair.p.w[2 * j + 1] = base * (1 - sign * epsilon);
  }
  return d;
}

PartialDistribution CCFarInstance(int64_t n, double epsilon, uint64_t seed) {
  CheckEvenN(n);
  if (!(epsilon >= 0 && epsilon <= 0.5)) {
    throw std::invalid_argument("epsilon must lie in [0, 1/2]");
  }
  Philox rng(seed);
  PartialDistribution p;
  p.w.resize(static_cast<size_t>(n));
  const double base = 1.0 / static_cast<double>(n);
  for (int64_t j = 0; j < n / 2; ++j) {
    double sign = SampleBernoulli(rng, 0.5) ? 1 : -1;
    p.w[2 * j] = base * (1 + 2 * sign * epsilon);
    p.w[2 * j + 1] = base * (1 - 2 * sign * epsilon);
  }
  return p;
}

DistributionPair PairedFarInstance(int64_t n, double epsilon, uint64_t seed) {
  if (n < 1) throw std::invalid_argument("n must be positive");
  if (!(epsilon >= 0 && epsilon <= 0.5)) {
    throw std::invalid_argument("epsilon must lie in [0, 1/2]");
  }
  Philox rng(seed);
  DistributionPair pi = DistributionPair::Uniform(static_cast<size_t>(n));
  const double base = 1.0 / (2.0 * static_cast<double>(n));
  for (int64_t j = 0; j < n; ++j) {
    double sign = SampleBernoulli(rng, 0.5) ? 1 : -1;
    pi.p.w[j] = base * (1 + 2 * sign * epsilon);
    pi.q.w[j] = base * (1 - 2 * sign * epsilon);
  }
  return pi;
}

std::string BlockString(const std::vector<int64_t>& lengths, char lead) {
  if (lead != '0' && lead != '1') throw std::invalid_argument("bad lead");
  std::string out;
  char c = lead;
  for (int64_t len : lengths) {
    if (len < 0) throw std::invalid_argument("negative block length");
    out.append(static_cast<size_t>(len), c);
    c = c == '1' ? '0' : '1';
  }
  return out;
}

std::string UniformBlockString(int64_t N, int64_t n, char lead) {
  if (n < 1 || N % n != 0) throw std::invalid_argument("n must divide N");
  return BlockString(std::vector<int64_t>(static_cast<size_t>(n), N / n), lead);
}

std::string SkewedBlockString(int64_t n, int64_t big, int64_t small) {
  std::vector<int64_t> lengths(static_cast<size_t>(n));
  for (int64_t i = 0; i < n; ++i) lengths[i] = i % 2 == 0 ? big : small;
  return BlockString(lengths, '1');
}

std::string NoisyString(std::string_view base, double p, uint64_t seed) {
  Philox rng(seed);
  std::string out(base);
  for (char& c : out) {
    if (rng.Uniform() < p) c = c == '1' ? '0' : '1';
  }
  return out;
}

void ParallelFor(int64_t count, int threads,
                 const std::function<void(int64_t)>& fn) {
  if (count <= 0) return;
  int workers = threads > 0
                    ? threads
                    : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::max(1, std::min<int>(workers, static_cast<int>(count)));
  if (workers == 1) {
    for (int64_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int64_t> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int64_t i; (i = next.fetch_add(1)) < count;) {
        if (failed.load()) return;
        try {
          fn(i);
        } catch (...) {
          if (!failed.exchange(true)) error = std::current_exception();
          return;
        }
      }
    });
  }
  for (std::thread& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

WilsonInterval Wilson(int64_t successes, int64_t trials) {
  if (trials <= 0) return {0, 1};
  const double z = 1.959964;
  double n = static_cast<double>(trials);
  double p = static_cast<double>(successes) / n;
  double denom = 1 + z * z / n;
  double center = (p + z * z / (2 * n)) / denom;
  double half = z * std::sqrt(p * (1 - p) / n + z * z / (4 * n * n)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

ExperimentSpec ParseExperimentSpec(std::string_view json) {
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(json);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("bad experiment JSON: ") +
                                e.what());
  }
  try {
    if (j.value("schema", 0) != 1) {
      throw std::invalid_argument("experiment spec needs \"schema\": 1");
    }
    ExperimentSpec s;
    s.tester = j.at("tester").get<std::string>();
    if (!KnownTesters().count(s.tester)) {
      throw std::invalid_argument("unknown tester id: " + s.tester);
    }
    s.instance = j.value("instance", s.instance);
    s.trials = j.value("trials", s.trials);
    s.seed = j.value("seed", s.seed);
    s.threads = j.value("threads", s.threads);
    if (s.trials < 1) throw std::invalid_argument("trials must be >= 1");
    if (j.contains("grid")) {
      for (const auto& [key, values] : j["grid"].items()) {
        std::vector<double> v = values.is_array()
                                    ? values.get<std::vector<double>>()
                                    : std::vector<double>{values.get<double>()};
        s.grid.emplace_back(key, v);
      }
    }
    if (j.contains("constants")) {
      for (const auto& [key, value] : j["constants"].items()) {
        s.constants[key] = value.get<double>();
      }
    }
    ExpandGrid(s);  // validates keys
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("bad experiment spec: ") +
                                e.what());
  }
}

TrialOutcome RunTrial(const ExperimentSpec& spec, const TrialParams& params,
                      uint64_t seed) {
  if (spec.tester == "cc") return RunCC(spec, params, seed);
  if (spec.tester == "pt" || spec.tester == "pt_large" ||
      spec.tester == "pt_small") {
    return RunPT(spec, params, seed);
  }
  if (spec.tester.rfind("trace_", 0) == 0 &&
      KnownTesters().count(spec.tester)) {
    return RunTrace(spec, params, seed);
  }
  throw std::invalid_argument("unknown tester id: " + spec.tester);
}

std::vector<TrialOutcome> RunTrials(const ExperimentSpec& spec,
                                    const TrialParams& params, int64_t trials,
                                    uint64_t seed, int threads) {
  std::vector<TrialOutcome> out(
      static_cast<size_t>(std::max<int64_t>(trials, 0)));
  ParallelFor(trials, threads, [&](int64_t t) {
    out[t] = RunTrial(spec, params, DeriveSeed(seed, static_cast<uint64_t>(t)));
  });
  return out;
}

AcceptanceCurve EstimateAcceptance(const ExperimentSpec& spec) {
  if (!KnownTesters().count(spec.tester)) {
    throw std::invalid_argument("unknown tester id: " + spec.tester);
  }
  AcceptanceCurve curve;
  for (const auto& axis : spec.grid) curve.param_names.push_back(axis.first);
  std::vector<TrialParams> points = ExpandGrid(spec);
  // Indices into each axis, advanced like an odometer to recover the values.
  std::vector<size_t> idx(spec.grid.size(), 0);
  for (size_t p = 0; p < points.size(); ++p) {
    AcceptanceRow row;
    for (size_t a = 0; a < spec.grid.size(); ++a) {
      row.params.push_back(spec.grid[a].second[idx[a]]);
    }
    for (size_t a = spec.grid.size(); a-- > 0;) {
      if (++idx[a] < spec.grid[a].second.size()) break;
      idx[a] = 0;
    }
    std::vector<TrialOutcome> out = RunTrials(
        spec, points[p], spec.trials, DeriveSeed(spec.seed, p), spec.threads);
    int64_t accepts = 0;
    double stat_sum = 0;
    int64_t finite = 0;
    for (const TrialOutcome& o : out) {
      accepts += o.accept;
      if (std::isfinite(o.statistic)) {
        stat_sum += o.statistic;
        ++finite;
      }
    }
    row.trials = spec.trials;
    row.accept_rate =
        static_cast<double>(accepts) / static_cast<double>(spec.trials);
    WilsonInterval w = Wilson(accepts, spec.trials);
    row.ci_low = w.low;
    row.ci_high = w.high;
    row.mean_statistic =
        finite > 0 ? stat_sum / static_cast<double>(finite) : kInf;
    curve.rows.push_back(row);
  }
  return curve;
}

std::string ToCsv(const AcceptanceCurve& curve) {
  std::ostringstream os;
  for (const std::string& name : curve.param_names) os << name << ',';
  os << "accept_rate,ci_low,ci_high\n";
  for (const AcceptanceRow& r : curve.rows) {
    for (double x : r.params) os << Number(x) << ',';
    os << Number(r.accept_rate) << ',' << Number(r.ci_low) << ','
       << Number(r.ci_high) << '\n';
  }
  return os.str();
}

std::string ToJson(const AcceptanceCurve& curve) {
  nlohmann::json j;
  j["params"] = curve.param_names;
  j["rows"] = nlohmann::json::array();
  for (const AcceptanceRow& r : curve.rows) {
    nlohmann::json row;
    row["params"] = r.params;
    row["trials"] = r.trials;
    row["accept_rate"] = r.accept_rate;
    row["ci_low"] = r.ci_low;
    row["ci_high"] = r.ci_high;
    row["mean_statistic"] = std::isfinite(r.mean_statistic)
                                ? nlohmann::json(r.mean_statistic)
                                : nlohmann::json("inf");
    j["rows"].push_back(row);
  }
  return j.dump();
}

CalibrationResult CalibrateConstants(const CalibrationRequest& req) {
  if (req.tester != "cc" && req.tester != "pt_large") {
    throw std::invalid_argument("calibration supports cc and pt_large");
  }
  if (!(req.c_start > 0) || req.c_max < req.c_start) {
    throw std::invalid_argument("need 0 < c_start <= c_max");
  }
  ExperimentSpec yes_spec;
  yes_spec.tester = req.tester;
  yes_spec.instance = "uniform";
  yes_spec.constants = req.constants;
  ExperimentSpec no_spec = yes_spec;
  no_spec.instance = req.tester == "cc" ? "far" : "domino_no";
  const double fixed_beta = Get(req.constants, "beta", 0.25);
  const double need = 1 - req.target_error + 0.05;

  auto params_for = [&](double c) {
    TrialParams p;
    p.n = req.n;
    p.epsilon = req.epsilon;
    p.eta = req.eta;
    p.c = c;
    return p;
  };
  auto evaluate = [&](double c, uint64_t yes_seed, uint64_t no_seed,
                      int64_t trials, const double* beta_in) {
    TrialParams p = params_for(c);
    std::vector<double> ys =
        Stats(RunTrials(yes_spec, p, trials, yes_seed, req.threads));
    std::vector<double> ns =
        Stats(RunTrials(no_spec, p, trials, no_seed, req.threads));
    CalibrationStep step;
    step.c = c;
    if (beta_in) {
      step.beta = *beta_in;
    } else if (req.fit_beta) {
      step.beta = FitBeta(ys, ns).first;
    } else {
      step.beta = fixed_beta;
    }
    step.yes_accept = Rate(ys, step.beta, true);
    step.no_reject = Rate(ns, step.beta, false);
    step.pass = std::min(step.yes_accept, step.no_reject) >= need;
    return step;
  };

  const uint64_t yes_seed = DeriveSeed(req.seed, 1);
  const uint64_t no_seed = DeriveSeed(req.seed, 2);
  CalibrationResult res;
  double lo = 0;
  CalibrationStep best;
  bool found = false;
  for (double c = req.c_start; c <= req.c_max * (1 + 1e-12); c *= 2) {
    CalibrationStep s = evaluate(c, yes_seed, no_seed, req.trials, nullptr);
    res.audit.push_back(s);
    if (s.pass) {
      best = s;
      found = true;
      break;
    }
    lo = c;
  }
  if (!found) {
    std::ostringstream os;
    os << "no c <= " << req.c_max << " reached both rates >= " << need;
    res.diagnostics = os.str();
    return res;
  }
  if (lo > 0) {
    double hi = best.c;
    for (int it = 0; it < req.bisect_steps; ++it) {
      double mid = 0.5 * (lo + hi);
      CalibrationStep s = evaluate(mid, yes_seed, no_seed, req.trials, nullptr);
      res.audit.push_back(s);
      if (s.pass) {
        hi = mid;
        best = s;
      } else {
        lo = mid;
      }
    }
  }
  CalibrationStep hold;
  for (int attempt = 0;; ++attempt) {
    hold = evaluate(best.c, DeriveSeed(req.seed, 3), DeriveSeed(req.seed, 4),
                    req.holdout, &best.beta);
    double target = 1 - req.target_error;
    if ((hold.yes_accept >= target && hold.no_reject >= target) ||
        attempt >= req.holdout_retries || best.c * req.bump > req.c_max) {
      break;
    }
    best = evaluate(best.c * req.bump, yes_seed, no_seed, req.trials, nullptr);
    res.audit.push_back(best);
  }
  res.c = best.c;
  res.beta = best.beta;
  res.holdout_yes_accept = hold.yes_accept;
  res.holdout_no_reject = hold.no_reject;
  res.m = req.tester == "cc" ? CCSampleSize(req.n, req.epsilon, req.eta, best.c)
                             : PTLargeSampleSize(req.n, req.epsilon, best.c);
  double target = 1 - req.target_error;
  res.success = hold.yes_accept >= target && hold.no_reject >= target;
  if (!res.success) {
    std::ostringstream os;
    os << "held-out rates " << hold.yes_accept << " / " << hold.no_reject
       << " fell below " << target;
    res.diagnostics = os.str();
  }
  return res;
}

std::string ToJson(const CalibrationResult& r) {
  nlohmann::json j;
  j["success"] = r.success;
  j["c"] = r.c;
  j["beta"] = r.beta;
  j["m"] = r.m;
  j["holdout_yes_accept"] = r.holdout_yes_accept;
  j["holdout_no_reject"] = r.holdout_no_reject;
  j["diagnostics"] = r.diagnostics;
  j["audit"] = nlohmann::json::array();
  for (const CalibrationStep& s : r.audit) {
    j["audit"].push_back({{"c", s.c},
                          {"beta", s.beta},
                          {"yes_accept", s.yes_accept},
                          {"no_reject", s.no_reject},
                          {"pass", s.pass}});
  }
  return j.dump();
}

}  // namespace ptrace
