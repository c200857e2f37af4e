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

#ifndef PTRACE_RNG_H_
#define PTRACE_RNG_H_

#include <array>
#include <cstdint>
#include <limits>

namespace ptrace {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11). Each 128-bit
// counter value maps to four 32-bit words under a 64-bit key; we hand them out
// as two 64-bit results.
class Philox {
 public:
  using result_type = uint64_t;

  explicit Philox(uint64_t seed = 0, uint64_t stream = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() {
    return std::numeric_limits<result_type>::max();
  }

  result_type operator()();

  // Double in [0, 1) with 53 random bits.
  double Uniform();

  // The raw block function, exposed for known-answer tests.
  static std::array<uint32_t, 4> Block(std::array<uint32_t, 4> ctr,
                                       std::array<uint32_t, 2> key);

 private:
  void Refill();

  std::array<uint32_t, 2> key_;
  std::array<uint32_t, 4> ctr_;
  std::array<uint32_t, 4> buf_{};
  int pos_ = 4;
};

// splitmix64 finalizer.
uint64_t Mix64(uint64_t x);

// Child seed for item `index` under `master`. Children of distinct indices are
// decorrelated, and the mapping is fixed so runs reproduce bit for bit.
uint64_t DeriveSeed(uint64_t master, uint64_t index);
uint64_t DeriveSeed(uint64_t master, uint64_t a, uint64_t b);

// Poisson draw; lambda <= 0 gives 0.
int64_t SamplePoisson(Philox& rng, double lambda);

// Poisson conditioned on being positive.
int64_t SamplePositivePoisson(Philox& rng, double lambda);

int64_t SampleBinomial(Philox& rng, int64_t trials, double p);

bool SampleBernoulli(Philox& rng, double p);

// Uniform integer in [0, bound).
uint64_t SampleIndex(Philox& rng, uint64_t bound);

}  // namespace ptrace

#endif  // PTRACE_RNG_H_
