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

#include "ptrace/rng.h"

#include <cmath>
#include <random>

namespace ptrace {
namespace {

constexpr uint32_t kM0 = 0xD2511F53u;
constexpr uint32_t kM1 = 0xCD9E8D57u;
constexpr uint32_t kW0 = 0x9E3779B9u;
constexpr uint32_t kW1 = 0xBB67AE85u;

inline void MulHiLo(uint32_t a, uint32_t b, uint32_t* hi, uint32_t* lo) {
  uint64_t prod = static_cast<uint64_t>(a) * b;
  *hi = static_cast<uint32_t>(prod >> 32);
  *lo = static_cast<uint32_t>(prod);
}

}  // namespace

std::array<uint32_t, 4> Philox::Block(std::array<uint32_t, 4> ctr,
                                      std::array<uint32_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      key[0] += kW0;
      key[1] += kW1;
    }
    uint32_t hi0, lo0, hi1, lo1;
    MulHiLo(kM0, ctr[0], &hi0, &lo0);
    MulHiLo(kM1, ctr[2], &hi1, &lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

Philox::Philox(uint64_t seed, uint64_t stream)
    : key_{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32)},
      ctr_{0, 0, static_cast<uint32_t>(stream),
           static_cast<uint32_t>(stream >> 32)} {}

void Philox::Refill() {
  buf_ = Block(ctr_, key_);
  // 64-bit increment of the low half; the high half holds the stream id.
  if (++ctr_[0] == 0) ++ctr_[1];
  pos_ = 0;
}

Philox::result_type Philox::operator()() {
  if (pos_ >= 4) Refill();
  uint64_t lo = buf_[pos_];
  uint64_t hi = buf_[pos_ + 1];
  pos_ += 2;
  return (hi << 32) | lo;
}

double Philox::Uniform() {
  return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

uint64_t Mix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

uint64_t DeriveSeed(uint64_t master, uint64_t index) {
  return Mix64(Mix64(master) ^ Mix64(index + 0x632BE59BD9B4E019ull));
}

uint64_t DeriveSeed(uint64_t master, uint64_t a, uint64_t b) {
  return DeriveSeed(DeriveSeed(master, a), b);
}

int64_t SamplePoisson(Philox& rng, double lambda) {
  if (!(lambda > 0)) return 0;
  std::poisson_distribution<int64_t> dist(lambda);
  return dist(rng);
}

int64_t SamplePositivePoisson(Philox& rng, double lambda) {
  if (!(lambda > 0)) return 1;
  if (lambda > 1.0) {
    // P(X > 0) >= 1 - 1/e, so rejection terminates quickly.
    for (;;) {
      int64_t x = SamplePoisson(rng, lambda);
      if (x > 0) return x;
    }
  }
  // Inversion on the truncated pmf; mass above a few terms is tiny here.
  double u = rng.Uniform() * -std::expm1(-lambda);
  double pmf = lambda * std::exp(-lambda);
  int64_t k = 1;
  double cdf = pmf;
  while (u >= cdf && k < 10000) {
    ++k;
    pmf *= lambda / static_cast<double>(k);
    if (pmf == 0) break;
    cdf += pmf;
  }
  return k;
}

int64_t SampleBinomial(Philox& rng, int64_t trials, double p) {
  if (trials <= 0 || p <= 0) return 0;
  if (p >= 1) return trials;
  std::binomial_distribution<int64_t> dist(trials, p);
  return dist(rng);
}

bool SampleBernoulli(Philox& rng, double p) { return rng.Uniform() < p; }

uint64_t SampleIndex(Philox& rng, uint64_t bound) {
  std::uniform_int_distribution<uint64_t> dist(0, bound - 1);
  return dist(rng);
}

}  // namespace ptrace
