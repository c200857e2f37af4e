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

#include "ptrace/analysis_oracles.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "json.hpp"
#include "ptrace/rng.h"

namespace ptrace {
namespace {

double Sigmoid(double x) { return 1 / (1 + std::exp(-x)); }

// Running mean and variance.
struct Moments {
  int64_t n = 0;
  double mean = 0;
  double m2 = 0;

  void Add(double x) {
    ++n;
    double d = x - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (x - mean);
  }
  double Variance() const {
    return n > 1 ? m2 / static_cast<double>(n - 1) : 0.0;
  }
  double StdErr() const {
    return n > 0 ? std::sqrt(Variance() / static_cast<double>(n)) : 0.0;
  }
};

std::vector<double> BucketMasses(const PartialDistribution& p,
                                 const BucketPartition& b) {
  std::vector<double> s(b.size(), 0.0);
  for (size_t v = 0; v < b.gamma.size(); ++v) s[b.gamma[v]] += p.w[v];
  return s;
}

nlohmann::json IntervalJson(const CircularInterval& c) {
  return {{"start", c.start}, {"length", c.length}};
}

}  // namespace

ConjugateReport UniformConjugate(const PartialDistribution& q, double m) {
  const size_t n = q.n();
  double qmass = q.Mass();
  if (n == 0 || !(qmass > 0)) {
    throw std::invalid_argument("q must have positive mass");
  }
  if (!(m > 0)) throw std::invalid_argument("m must be positive");
  ConjugateReport r;
  double tanh_sum = 0;
  for (double x : q.w) tanh_sum += std::tanh(m * x / 2);
  r.tau = (1 - qmass) / tanh_sum;
  r.p_tilde.w.resize(n);
  for (size_t i = 0; i < n; ++i) {
    double prev = q.w[(i + n - 1) % n];
    r.p_tilde.w[i] = r.tau * (Sigmoid(m * q.w[i]) + Sigmoid(m * prev) - 1);
  }
  double e = std::exp(-m * qmass);
  r.xi = e / ((1 - e) * (1 - e));
  BaseGraph g{GraphKind::kCycle, static_cast<int64_t>(n)};
  JoinMatrix phi = PhiExpectedWeighted(g, ParityWeights(q.w, m));
  for (size_t i = 0; i < n; ++i) {
    double row = 0;
    for (size_t j = 0; j < n; ++j) row += phi(i, j) * r.p_tilde.w[j];
    r.residual = std::max(r.residual, std::abs(row - r.tau));
  }
  return r;
}

ConjugateReport UniformConjugate(const PartialDistribution& q, double m,
                                 const PartialDistribution& p) {
  if (p.n() != q.n()) throw std::invalid_argument("p and q differ in length");
  ConjugateReport r = UniformConjugate(q, m);
  r.z.resize(p.n());
  for (size_t i = 0; i < p.n(); ++i) r.z[i] = p.w[i] - r.p_tilde.w[i];
  return r;
}

MarkovEstimate ConjugateMarkovMean(const PartialDistribution& q,
                                   const std::vector<double>& u, double m,
                                   int64_t i, int64_t trials, uint64_t seed) {
  const int64_t n = static_cast<int64_t>(q.n());
  if (static_cast<int64_t>(u.size()) != n || i < 0 || i >= n) {
    throw std::invalid_argument("bad vertex or vector length");
  }
  if (!(m * q.Mass() > 0)) {
    throw std::invalid_argument("walk never stops when m |q|_1 = 0");
  }
  if (trials < 2) throw std::invalid_argument("need at least two trials");
  Philox rng(seed);
  Moments d, right;
  for (int64_t trial = 0; trial < trials; ++trial) {
    double r_sum = 0;
    for (int64_t t = 0;; ++t) {
      int64_t v = (i + t) % n;
      r_sum += u[v];
      if (SamplePoisson(rng, m * q.w[v]) > 0) break;
    }
    double l_sum = 0;
    for (int64_t t = 0;; ++t) {
      int64_t v = ((i - t) % n + n) % n;
      l_sum += u[v];
      if (SamplePoisson(rng, m * q.w[(v + n - 1) % n]) > 0) break;
    }
    right.Add(r_sum);
    d.Add(l_sum + r_sum - u[i]);
  }
  return {d.mean, d.StdErr(), right.mean, right.StdErr()};
}

double IntervalMass(const std::vector<double>& p, const CircularInterval& c) {
  const int64_t n = static_cast<int64_t>(p.size());
  double s = 0;
  for (int64_t t = 0; t < c.length; ++t) s += p[(c.start + t) % n];
  return s;
}

double InteriorMass(const std::vector<double>& q, const CircularInterval& c) {
  const int64_t n = static_cast<int64_t>(q.size());
  double s = 0;
  for (int64_t t = 0; t + 1 < c.length; ++t) s += q[(c.start + t) % n];
  return s;
}

ConcentrationReport RelativeConcentration(const PartialDistribution& p,
                                          const PartialDistribution& q,
                                          double t) {
  if (!(t > 0)) throw std::invalid_argument("t must be positive");
  if (p.n() != q.n() || p.n() == 0) {
    throw std::invalid_argument("p and q must be non-empty and equal length");
  }
  const int64_t n = static_cast<int64_t>(p.n());
  std::vector<double> pp(2 * n + 1, 0.0), qp(2 * n + 1, 0.0);
  for (int64_t k = 0; k < 2 * n; ++k) {
    pp[k + 1] = pp[k] + p.w[k % n];
    qp[k + 1] = qp[k] + q.w[k % n];
  }
  ConcentrationReport r;
  r.t = t;
  r.gamma_value = -1;
  for (int64_t i = 0; i < n; ++i) {
    for (int64_t d = 1; d <= n; ++d) {
      double pm = pp[i + d] - pp[i];
      double qm = qp[i + d - 1] - qp[i];
      double ratio = pm / std::max(qm, t);
      if (ratio > r.gamma_value) {
        r.gamma_value = ratio;
        r.argmax = {i, d};
      }
    }
  }
  if (InteriorMass(q.w, r.argmax) <= t) {
    r.witness = r.argmax;
    return r;
  }
  // Cut the maximizer wherever the next interior edge would push the piece's
  // q-mass past t, and keep the heaviest piece.
  CircularInterval piece{r.argmax.start, 1};
  double inside = 0;
  double best = -1;
  auto consider = [&](const CircularInterval& c) {
    double mass = IntervalMass(p.w, c);
    if (mass > best) {
      best = mass;
      r.witness = c;
    }
  };
  for (int64_t s = 0; s + 1 < r.argmax.length; ++s) {
    double edge = q.w[(r.argmax.start + s) % n];
    if (inside + edge <= t) {
      inside += edge;
      ++piece.length;
    } else {
      consider(piece);
      piece = {(r.argmax.start + s + 1) % n, 1};
      inside = 0;
    }
  }
  consider(piece);
  return r;
}

double ExpectedY(const std::vector<double>& p, const JoinMatrix& phi,
                 double m) {
  if (static_cast<int64_t>(p.size()) != phi.n) {
    throw std::invalid_argument("dimension mismatch");
  }
  double s = 0;
  for (int64_t i = 0; i < phi.n; ++i) {
    double row = 0;
    for (int64_t j = 0; j < phi.n; ++j) row += phi(i, j) * p[j];
    s += p[i] * row;
  }
  return m * s;
}

double ConditionalVarianceFormula(const PartialDistribution& p,
                                  const BucketPartition& buckets, double m) {
  double v = 0;
  for (double s : BucketMasses(p, buckets)) v += 2 * s * s + 4 * m * s * s * s;
  return v;
}

double ConditionalVarianceMC(const PartialDistribution& p,
                             const BucketPartition& buckets, double m,
                             int64_t draws, uint64_t seed) {
  if (draws < 2) throw std::invalid_argument("need at least two draws");
  std::vector<double> s = BucketMasses(p, buckets);
  Philox rng(seed);
  Moments y;
  std::vector<int64_t> x(s.size());
  for (int64_t k = 0; k < draws; ++k) {
    for (size_t b = 0; b < s.size(); ++b) x[b] = SamplePoisson(rng, m * s[b]);
    y.Add(CollisionStatistic(x, m));
  }
  return y.Variance();
}

VarianceReport VarianceComponents(const PartialDistribution& p,
                                  const BaseGraph& g,
                                  const std::vector<double>& weights, double m,
                                  int64_t trials, uint64_t seed) {
  if (trials < 1000) throw std::invalid_argument("trials must be >= 1000");
  if (static_cast<int64_t>(p.n()) != g.n) {
    throw std::invalid_argument("distribution size differs from graph size");
  }
  Philox rng(seed);
  Moments cond_mean, cond_var, direct;
  std::vector<int64_t> x;
  for (int64_t k = 0; k < trials; ++k) {
    BucketPartition b = BucketsFromEdges(g, SampleEdges(g, weights, rng));
    std::vector<double> s = BucketMasses(p, b);
    double e = 0, v = 0;
    x.resize(s.size());
    for (size_t j = 0; j < s.size(); ++j) {
      e += m * s[j] * s[j];
      v += 2 * s[j] * s[j] + 4 * m * s[j] * s[j] * s[j];
      x[j] = SamplePoisson(rng, m * s[j]);
    }
    cond_mean.Add(e);
    cond_var.Add(v);
    direct.Add(CollisionStatistic(x, m));
  }
  return {cond_mean.Variance(), cond_var.mean, direct.Variance(), direct.mean};
}

TanhReport TanhChecks(const std::vector<double>& r_grid, int64_t points) {
  if (points < 1) throw std::invalid_argument("points must be positive");
  TanhReport rep;
  rep.linear = -std::numeric_limits<double>::infinity();
  rep.quadratic = -std::numeric_limits<double>::infinity();
  for (int64_t k = 1; k <= points; ++k) {
    double x = static_cast<double>(k) / static_cast<double>(points);
    double th = std::tanh(x);
    rep.linear = std::max({rep.linear, x / 2 - th, th - 2 * x});
    ++rep.points;
  }
  for (double r : r_grid) {
    double tr = std::tanh(r);
    double slope = 1 - tr * tr;
    double top = 1 / (2 * tr);
    for (int64_t k = 0; k <= points; ++k) {
      double x = top * static_cast<double>(k) / static_cast<double>(points);
      double rhs = tr + slope * x - tr * slope * x * x;
      rep.quadratic = std::max(rep.quadratic, std::tanh(r + x) - rhs);
      ++rep.points;
    }
  }
  return rep;
}

double QuantitativeJensenGap(const std::vector<double>& u) {
  if (u.empty()) throw std::invalid_argument("empty vector");
  const double n = static_cast<double>(u.size());
  double r = 0;
  for (double v : u) r += v;
  r /= n;
  double tr = std::tanh(r);
  double lhs = 0, sq = 0;
  for (double v : u) {
    lhs += std::tanh(v);
    double x = v - r;
    if (x >= 0) sq += x * x;
  }
  return lhs / n - (tr - tr * (1 - tr * tr) * sq / n);
}

double PathColumnSumGap(int64_t n, double eta, int64_t N) {
  if (!(eta > 0 && eta < 1)) throw std::invalid_argument("need 0 < eta < 1");
  if (n < 1 || N < 0 || 2 * N > n) {
    throw std::invalid_argument("need n >= 1 and 0 <= 2N <= n");
  }
  const double nu = 1 - eta;
  // S_i = sum_{j<=i} nu^{i-j} + sum_{j>i} nu^{j-i}.
  auto column = [&](int64_t i) {
    return (1 - std::pow(nu, static_cast<double>(i + 1))) / eta +
           (nu - std::pow(nu, static_cast<double>(n - i))) / eta;
  };
  const int64_t hi = n / 2;        // ceil((n - 1) / 2)
  const int64_t lo = (n - 1) / 2;  // floor((n - 1) / 2)
  const int64_t a = (N + 1) / 2, b = N / 2;
  double total = 0;
  for (int64_t i = 0; i < a; ++i) total += column(hi + i) - column(i);
  for (int64_t i = 0; i < b; ++i) total += column(lo - i) - column(n - 1 - i);
  return total;
}

std::string ToJson(const ConjugateReport& r) {
  nlohmann::json j;
  j["p_tilde"] = r.p_tilde.w;
  j["tau"] = r.tau;
  j["xi"] = r.xi;
  j["residual"] = r.residual;
  if (!r.z.empty()) j["z"] = r.z;
  return j.dump();
}

std::string ToJson(const ConcentrationReport& r) {
  nlohmann::json j;
  j["gamma"] = r.gamma_value;
  j["t"] = r.t;
  j["argmax"] = IntervalJson(r.argmax);
  j["witness"] = IntervalJson(r.witness);
  return j.dump();
}

}  // namespace ptrace
