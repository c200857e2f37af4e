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

#include "ptrace/confused_collector.h"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace ptrace {
namespace {

constexpr int64_t kDenseLimit = 4096;

void CheckEta(double eta) {
  if (!(eta > 0 && eta <= 1)) {
    throw std::invalid_argument("eta must lie in (0, 1]");
  }
}

void CheckWeights(const BaseGraph& g, const std::vector<double>& w) {
  if (static_cast<int64_t>(w.size()) < g.EdgeCount()) {
    throw std::invalid_argument("fewer weights than edges");
  }
  for (double x : w) {
    if (!(x >= 0 && x <= 1)) {
      throw std::invalid_argument("edge weights must lie in [0, 1]");
    }
  }
}

int64_t MinVertex(const CircularInterval& c, int64_t n) {
  return c.start + c.length > n ? 0 : c.start;
}

// Survival products along the cycle starting at vertex i:
// fwd[d] = prod_{t<d} keep[i+t], bwd[d] = prod_{d<=t<n} keep[i+t].
void ArcProducts(const std::vector<double>& keep, int64_t i,
                 std::vector<double>* fwd, std::vector<double>* bwd) {
  int64_t n = static_cast<int64_t>(keep.size());
  fwd->assign(n + 1, 1.0);
  bwd->assign(n + 1, 1.0);
  for (int64_t d = 0; d < n; ++d) {
    (*fwd)[d + 1] = (*fwd)[d] * keep[(i + d) % n];
  }
  for (int64_t d = n - 1; d >= 0; --d) {
    (*bwd)[d] = (*bwd)[d + 1] * keep[(i + d) % n];
  }
}

// Eigenvalues of a symmetric tridiagonal matrix below x (Sturm count).
int64_t CountBelow(const std::vector<double>& diag, double off, double x) {
  int64_t count = 0;
  double d = 1;
  for (size_t i = 0; i < diag.size(); ++i) {
    double prev = (i == 0) ? 0.0 : off * off / d;
    d = diag[i] - x - prev;
    if (d == 0) d = -1e-300;
    if (d < 0) ++count;
  }
  return count;
}

}  // namespace

double JoinMatrix::Sum() const {
  return std::accumulate(a.begin(), a.end(), 0.0);
}

std::vector<double> ConstantWeights(const BaseGraph& g, double eta) {
  return std::vector<double>(static_cast<size_t>(g.n), eta);
}

std::vector<double> ParityWeights(const std::vector<double>& q, double m) {
  std::vector<double> w(q.size());
  for (size_t j = 0; j < q.size(); ++j) w[j] = -std::expm1(-m * q[j]);
  return w;
}

std::vector<bool> SampleEdges(const BaseGraph& g,
                              const std::vector<double>& weights, Philox& rng) {
  std::vector<bool> present(static_cast<size_t>(g.n), false);
  for (int64_t e = 0; e < g.EdgeCount(); ++e) {
    present[e] = rng.Uniform() >= weights[e];
  }
  return present;
}

BucketPartition BucketsFromEdges(const BaseGraph& g,
                                 const std::vector<bool>& present) {
  const int64_t n = g.n;
  BucketPartition b;
  b.gamma.assign(static_cast<size_t>(n), 0);
  if (n == 0) return b;
  auto edge_up = [&](int64_t e) {
    return e < g.EdgeCount() && present[static_cast<size_t>(e)];
  };
  // Start right after a missing edge so no component is cut in two.
  int64_t start = 0;
  if (g.kind == GraphKind::kCycle) {
    int64_t missing = -1;
    for (int64_t e = 0; e < n; ++e) {
      if (!edge_up(e)) {
        missing = e;
        break;
      }
    }
    if (missing < 0) {
      b.components.push_back({0, n});
      return b;
    }
    start = (missing + 1) % n;
  }
  std::vector<CircularInterval> comps;
  CircularInterval cur{start, 1};
  for (int64_t t = 0; t + 1 < n; ++t) {
    int64_t v = (start + t) % n;
    if (edge_up(v)) {
      ++cur.length;
    } else {
      comps.push_back(cur);
      cur = {(v + 1) % n, 1};
    }
  }
  comps.push_back(cur);
  std::sort(comps.begin(), comps.end(),
            [n](const CircularInterval& x, const CircularInterval& y) {
              return MinVertex(x, n) < MinVertex(y, n);
            });
  for (size_t id = 0; id < comps.size(); ++id) {
    for (int64_t t = 0; t < comps[id].length; ++t) {
      b.gamma[(comps[id].start + t) % n] = static_cast<int64_t>(id);
    }
  }
  b.components = std::move(comps);
  return b;
}

ConfusedSample SampleConfusedWeighted(const PartialDistribution& p, double m,
                                      const BaseGraph& g,
                                      const std::vector<double>& weights,
                                      uint64_t seed) {
  if (static_cast<int64_t>(p.n()) != g.n) {
    throw std::invalid_argument("distribution size differs from graph size");
  }
  CheckWeights(g, weights);
  Philox rng(seed);
  ConfusedSample s;
  s.buckets = BucketsFromEdges(g, SampleEdges(g, weights, rng));
  s.counts.resize(s.buckets.size());
  for (size_t id = 0; id < s.buckets.size(); ++id) {
    const CircularInterval& c = s.buckets.components[id];
    double mass = 0;
    for (int64_t t = 0; t < c.length; ++t) mass += p.w[(c.start + t) % g.n];
    s.counts[id] = SamplePoisson(rng, m * mass);
  }
  return s;
}

ConfusedSample SampleConfused(const PartialDistribution& p, double m,
                              const BaseGraph& g, double eta, uint64_t seed) {
  CheckEta(eta);
  return SampleConfusedWeighted(p, m, g, ConstantWeights(g, eta), seed);
}

double CollisionStatistic(const std::vector<int64_t>& counts, double m) {
  double s = 0;
  for (int64_t x : counts) s += static_cast<double>(x) * (x - 1);
  return s / m;
}

JoinMatrix RealizedJoin(const BucketPartition& buckets) {
  int64_t n = static_cast<int64_t>(buckets.gamma.size());
  JoinMatrix phi(n);
  for (const CircularInterval& c : buckets.components) {
    for (int64_t s = 0; s < c.length; ++s) {
      for (int64_t t = 0; t < c.length; ++t) {
        phi((c.start + s) % n, (c.start + t) % n) = 1;
      }
    }
  }
  return phi;
}

JoinMatrix PhiExpected(const BaseGraph& g, double eta) {
  CheckEta(eta);
  const int64_t n = g.n;
  const double nu = 1 - eta;
  std::vector<double> pw(static_cast<size_t>(n + 1));
  for (int64_t d = 0; d <= n; ++d) pw[d] = std::pow(nu, static_cast<double>(d));
  JoinMatrix phi(n);
  for (int64_t i = 0; i < n; ++i) {
    for (int64_t j = 0; j < n; ++j) {
      int64_t d = std::abs(i - j);
      phi(i, j) =
          g.kind == GraphKind::kPath ? pw[d] : pw[d] + pw[n - d] - pw[n];
    }
  }
  return phi;
}

JoinMatrix PhiExpectedWeighted(const BaseGraph& g,
                               const std::vector<double>& weights) {
  CheckWeights(g, weights);
  const int64_t n = g.n;
  std::vector<double> keep(static_cast<size_t>(n), 0.0);
  for (int64_t e = 0; e < g.EdgeCount(); ++e) keep[e] = 1 - weights[e];
  JoinMatrix phi(n);
  std::vector<double> fwd, bwd;
  for (int64_t i = 0; i < n; ++i) {
    ArcProducts(keep, i, &fwd, &bwd);
    phi(i, i) = 1;
    for (int64_t d = 1; d < n; ++d) {
      int64_t j = (i + d) % n;
      if (g.kind == GraphKind::kPath) {
        if (j > i) {
          phi(i, j) = fwd[d];
          phi(j, i) = fwd[d];
        }
      } else {
        phi(i, j) = fwd[d] + bwd[d] - fwd[n];
      }
    }
  }
  return phi;
}

JoinMatrix PhiEmpirical(const BaseGraph& g, double eta, int64_t trials,
                        uint64_t seed) {
  CheckEta(eta);
  if (trials < 1) throw std::invalid_argument("trials must be at least 1");
  const int64_t n = g.n;
  std::vector<double> w = ConstantWeights(g, eta);
  Philox rng(seed);
  std::vector<int64_t> hits(static_cast<size_t>(n * n), 0);
  for (int64_t t = 0; t < trials; ++t) {
    BucketPartition b = BucketsFromEdges(g, SampleEdges(g, w, rng));
    for (const CircularInterval& c : b.components) {
      for (int64_t s = 0; s < c.length; ++s) {
        int64_t row = ((c.start + s) % n) * n;
        for (int64_t u = 0; u < c.length; ++u) ++hits[row + (c.start + u) % n];
      }
    }
  }
  JoinMatrix phi(n);
  for (size_t k = 0; k < hits.size(); ++k) {
    phi.a[k] = static_cast<double>(hits[k]) / static_cast<double>(trials);
  }
  return phi;
}

double PhiCycleSum(int64_t n, double nu) {
  double dn = static_cast<double>(n);
  if (nu >= 1) return dn * dn;
  double nun = std::pow(nu, dn);
  double geo =
      nu > 0 ? std::expm1(dn * std::log(nu)) / std::expm1(std::log(nu)) : 1.0;
  double row = (1 + nu) * geo - dn * nun;
  return dn * row;
}

double PhiPathSum(int64_t n, double nu) {
  double s = static_cast<double>(n);
  double pw = 1;
  for (int64_t d = 1; d < n; ++d) {
    pw *= nu;
    s += 2.0 * static_cast<double>(n - d) * pw;
  }
  return s;
}

std::vector<double> CirculantEigenvalues(const std::vector<double>& row) {
  const size_t n = row.size();
  std::vector<double> cosines(n);
  for (size_t k = 0; k < n; ++k) {
    cosines[k] =
        std::cos(2 * M_PI * static_cast<double>(k) / static_cast<double>(n));
  }
  std::vector<double> lambda(n, 0.0);
  for (size_t l = 0; l < n; ++l) {
    double s = 0;
    for (size_t k = 0; k < n; ++k) s += row[k] * cosines[(l * k) % n];
    lambda[l] = s;
  }
  return lambda;
}

double MinEigenvalue(const JoinMatrix& phi) {
  const int64_t n = phi.n;
  if (n == 0) throw std::invalid_argument("empty matrix");
  for (int64_t i = 0; i < n; ++i) {
    for (int64_t j = i + 1; j < n; ++j) {
      double a = phi(i, j), b = phi(j, i);
      if (std::abs(a - b) > 1e-12 * std::max(1.0, std::abs(a))) {
        throw std::invalid_argument("matrix is not symmetric");
      }
    }
  }
  if (n > kDenseLimit) {
    bool circulant = true;
    for (int64_t i = 1; i < n && circulant; ++i) {
      for (int64_t j = 0; j < n; ++j) {
        if (phi(i, j) != phi(0, (j - i + n) % n)) {
          circulant = false;
          break;
        }
      }
    }
    if (circulant) {
      std::vector<double> row(phi.a.begin(), phi.a.begin() + n);
      std::vector<double> ev = CirculantEigenvalues(row);
      return *std::min_element(ev.begin(), ev.end());
    }
  }
  Eigen::Map<const Eigen::MatrixXd> m(phi.a.data(), n, n);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m,
                                                        Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("eigensolver did not converge");
  }
  return solver.eigenvalues().minCoeff();
}

double PhiMinEigenvalue(const BaseGraph& g, double eta) {
  CheckEta(eta);
  const int64_t n = g.n;
  const double nu = 1 - eta;
  if (n == 1 || nu == 0) return 1;
  if (g.kind == GraphKind::kCycle) {
    std::vector<double> row(static_cast<size_t>(n));
    double nun = std::pow(nu, static_cast<double>(n));
    row[0] = 1;
    for (int64_t k = 1; k < n; ++k) {
      row[k] = std::pow(nu, static_cast<double>(k)) +
               std::pow(nu, static_cast<double>(n - k)) - nun;
    }
    std::vector<double> ev = CirculantEigenvalues(row);
    return *std::min_element(ev.begin(), ev.end());
  }
  // The inverse of [nu^|i-j|] is tridiag(-nu; 1, 1+nu^2, ..., 1+nu^2, 1)
  // divided by 1 - nu^2.
  std::vector<double> diag(static_cast<size_t>(n), 1 + nu * nu);
  diag.front() = 1;
  diag.back() = 1;
  double lo = 0, hi = (1 + nu) * (1 + nu);
  for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
    double mid = 0.5 * (lo + hi);
    if (CountBelow(diag, -nu, mid) < n) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return (1 - nu * nu) / (0.5 * (lo + hi));
}

double ZetaExact(const BaseGraph& g, const std::vector<double>& weights) {
  if (g.kind == GraphKind::kPath) return 0;
  CheckWeights(g, weights);
  const int64_t n = g.n;
  std::vector<double> keep(static_cast<size_t>(n));
  for (int64_t e = 0; e < n; ++e) keep[e] = 1 - weights[e];
  double best = 0;
  std::vector<double> fwd, bwd;
  for (int64_t i = 0; i < n; ++i) {
    ArcProducts(keep, i, &fwd, &bwd);
    for (int64_t d = 1; d < n; ++d)
      best = std::max(best, std::min(fwd[d], bwd[d]));
  }
  return best;
}

double ZetaBound(const BaseGraph& g, const std::vector<double>& weights) {
  if (g.kind == GraphKind::kPath) return 0;
  CheckWeights(g, weights);
  double log_all = 0;
  for (int64_t e = 0; e < g.n; ++e) log_all += std::log1p(-weights[e]);
  return std::exp(0.5 * log_all);
}

double CCSampleSize(int64_t n, double epsilon, double eta, double c) {
  double ln = std::log(static_cast<double>(n));
  return c * std::sqrt(static_cast<double>(n)) / (epsilon * epsilon) * ln * ln /
         std::pow(eta, 1.5);
}

double CCEtaLowerBound(int64_t n, double epsilon, double L) {
  double ln = std::log(static_cast<double>(n));
  return L * std::pow(ln, 0.8) /
         (std::pow(static_cast<double>(n), 0.2) * std::pow(epsilon, 0.8));
}

Verdict TestUniformityCC(const std::vector<int64_t>& counts,
                         const CCConfig& config, int64_t n, double m) {
  if (!(m > 0)) throw std::invalid_argument("m must be positive");
  CheckEta(config.eta);
  Verdict v;
  v.params = {{"alpha", config.alpha},
              {"beta", config.beta},
              {"c", config.c},
              {"L", config.L},
              {"epsilon", config.epsilon},
              {"eta", config.eta},
              {"n", static_cast<double>(n)},
              {"m", m}};
  double eta_min = CCEtaLowerBound(n, config.epsilon, config.L);
  if (config.eta < eta_min) {
    if (!config.allow_low_eta) {
      throw std::domain_error("eta below the tester's lower bound");
    }
    v.warnings.push_back("eta below the lower bound; no guarantee applies");
  }
  if (m > static_cast<double>(n) * config.eta) {
    v.warnings.push_back("m exceeds n*eta; regime not covered by the analysis");
  }
  const double ln = std::log(static_cast<double>(n));
  int64_t max_count = 0;
  for (int64_t x : counts) max_count = std::max(max_count, x);
  const double nu = 1 - config.eta;
  const double dn = static_cast<double>(n);
  const double phi_sum =
      config.graph == GraphKind::kPath ? PhiPathSum(n, nu) : PhiCycleSum(n, nu);
  const double base = m / (dn * dn) * phi_sum;
  const double unit = m / dn * config.epsilon * config.epsilon * config.eta;
  v.y = CollisionStatistic(counts, m);
  v.threshold = base + config.beta * unit;
  v.stats["max_count"] = static_cast<double>(max_count);
  v.stats["concentration_threshold"] = config.alpha * ln;
  v.stats["expected_uniform_Y"] = base;
  bool early = static_cast<double>(max_count) >= config.alpha * ln;
  v.stats["beta_star"] =
      early ? std::numeric_limits<double>::infinity() : (v.y - base) / unit;
  if (early) {
    v.Reject(Step::kConcentration);
  } else if (v.y >= v.threshold) {
    v.Reject(Step::kCollision);
  }
  return v;
}

}  // namespace ptrace
