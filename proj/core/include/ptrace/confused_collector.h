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

// Random subgraphs of a path or cycle, bucket counts, join matrices, and the
// bucket-collision uniformity tester.
//
// Vertices are Z_n. Edge j joins j and j+1 (mod n); the path omits edge n-1.
// A weight w[j] is the probability that edge j is missing from the sampled
// subgraph H.

#ifndef PTRACE_CONFUSED_COLLECTOR_H_
#define PTRACE_CONFUSED_COLLECTOR_H_

#include <cstdint>
#include <vector>

#include "ptrace/core_model.h"
#include "ptrace/rng.h"
#include "ptrace/verdict.h"

namespace ptrace {

enum class GraphKind { kPath, kCycle };

struct BaseGraph {
  GraphKind kind = GraphKind::kCycle;
  int64_t n = 0;

  int64_t EdgeCount() const { return kind == GraphKind::kPath ? n - 1 : n; }
};

// Vertices {start, start+1, ..., start+length-1} mod n.
struct CircularInterval {
  int64_t start = 0;
  int64_t length = 0;

  bool operator==(const CircularInterval&) const = default;
};

struct BucketPartition {
  std::vector<int64_t> gamma;  // vertex -> bucket id
  // Bucket b occupies components[b]. Buckets are numbered by their smallest
  // vertex, which also serves as the representative.
  std::vector<CircularInterval> components;

  size_t size() const { return components.size(); }
};

// Dense symmetric n x n matrix, row major.
struct JoinMatrix {
  int64_t n = 0;
  std::vector<double> a;

  explicit JoinMatrix(int64_t dim = 0)
      : n(dim), a(static_cast<size_t>(dim * dim), 0.0) {}
  double& operator()(int64_t i, int64_t j) { return a[i * n + j]; }
  double operator()(int64_t i, int64_t j) const { return a[i * n + j]; }
  double Sum() const;
};

std::vector<double> ConstantWeights(const BaseGraph& g, double eta);

// Edge weights of the cycle seen by a parity trace: edge j is present exactly
// when the even element between vertices j and j+1 gets no sample.
std::vector<double> ParityWeights(const std::vector<double>& q, double m);

// present[j] tells whether edge j survived.
std::vector<bool> SampleEdges(const BaseGraph& g,
                              const std::vector<double>& weights, Philox& rng);

BucketPartition BucketsFromEdges(const BaseGraph& g,
                                 const std::vector<bool>& present);

struct ConfusedSample {
  BucketPartition buckets;
  std::vector<int64_t> counts;  // X_b ~ Poi(m p[bucket b])
};

// Throws std::invalid_argument unless 0 < eta <= 1.
ConfusedSample SampleConfused(const PartialDistribution& p, double m,
                              const BaseGraph& g, double eta, uint64_t seed);
ConfusedSample SampleConfusedWeighted(const PartialDistribution& p, double m,
                                      const BaseGraph& g,
                                      const std::vector<double>& weights,
                                      uint64_t seed);

// (1/m) sum_b X_b (X_b - 1).
double CollisionStatistic(const std::vector<int64_t>& counts, double m);

JoinMatrix RealizedJoin(const BucketPartition& buckets);

// Expected join matrix for constant weight eta, in closed form.
JoinMatrix PhiExpected(const BaseGraph& g, double eta);

// Expected join matrix for arbitrary weights. On the cycle two vertices are
// joined through either arc, so the entry is arc1 + arc2 - (all edges).
JoinMatrix PhiExpectedWeighted(const BaseGraph& g,
                               const std::vector<double>& weights);

JoinMatrix PhiEmpirical(const BaseGraph& g, double eta, int64_t trials,
                        uint64_t seed);

// Sum of all entries of the constant-weight cycle matrix, in closed form.
double PhiCycleSum(int64_t n, double nu);
double PhiPathSum(int64_t n, double nu);

// Smallest eigenvalue. Dense symmetric solver up to n = 4096; larger
// circulant inputs use the closed-form spectrum. Throws std::invalid_argument
// on an asymmetric matrix.
double MinEigenvalue(const JoinMatrix& phi);

// Spectrum of the symmetric circulant matrix with first row `row`.
std::vector<double> CirculantEigenvalues(const std::vector<double>& row);

// Smallest eigenvalue of the expected matrix without forming it: closed-form
// circulant spectrum for the cycle, and for the path the largest eigenvalue
// of its tridiagonal inverse by bisection.
double PhiMinEigenvalue(const BaseGraph& g, double eta);

// max over vertex pairs of the probability that they are joined through the
// less likely arc. Zero on the path.
double ZetaExact(const BaseGraph& g, const std::vector<double>& weights);

// Upper bound on ZetaExact: 0 on the path, and the square root of the
// probability that every edge survives on the cycle. This is (1-eta)^(n/2)
// for constant weights and exp(-m |q|_1 / 2) for parity weights.
double ZetaBound(const BaseGraph& g, const std::vector<double>& weights);

struct CCConfig {
  double alpha = 20;
  double beta = 0.25;
  double c = 1;
  double L = 0.1;
  double epsilon = 0.1;
  double eta = 1;
  GraphKind graph = GraphKind::kCycle;
  // Run even when eta is below the lower bound the analysis needs.
  bool allow_low_eta = false;
};

// c sqrt(n) / eps^2 * log^2 n / eta^{3/2}.
double CCSampleSize(int64_t n, double epsilon, double eta, double c);

// L log^{4/5} n / (n^{1/5} eps^{4/5}).
double CCEtaLowerBound(int64_t n, double epsilon, double L);

// Rejects when some bucket count reaches alpha log n, or when the collision
// statistic reaches (m/n^2) sum(phi) + beta (m/n) eps^2 eta. Throws
// std::domain_error when eta is below the bound and allow_low_eta is unset.
Verdict TestUniformityCC(const std::vector<int64_t>& counts,
                         const CCConfig& config, int64_t n, double m);

}  // namespace ptrace

#endif  // PTRACE_CONFUSED_COLLECTOR_H_
