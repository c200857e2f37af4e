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

// Binary strings versus density sequences.
//
// A density sequence pi = (pi(1), pi(2), ...) corresponds to the alternating
// word 1^{pi(1)} 0^{pi(2)} 1^{pi(3)} ...; when every pi(i) is a multiple of
// 1/N this is a length-N binary string. Exact computations take integer
// counts c(i) = N pi(i).

#ifndef PTRACE_EDIT_METRICS_H_
#define PTRACE_EDIT_METRICS_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace ptrace {

using DensitySequence = std::vector<double>;

struct FractionalChar {
  char symbol = '1';
  double mass = 0;

  bool operator==(const FractionalChar&) const = default;
};
using FractionalString = std::vector<FractionalChar>;

// Alternating fractional string 1^{pi(1)} 0^{pi(2)} ... through the last
// nonzero entry. Leading zero-mass blocks are kept.
FractionalString StrOf(const DensitySequence& pi);

// 1^{c(1)} 0^{c(2)} 1^{c(3)} ...
std::string Psi(const std::vector<int64_t>& counts);
// Throws std::invalid_argument unless every pi(i) N is an integer within
// 1e-9.
std::string Psi(const DensitySequence& pi, int64_t N);

// Block lengths of x in the alternating order above; a leading 0 block
// yields c(1) = 0.
std::vector<int64_t> PsiInvCounts(std::string_view x);
DensitySequence PsiInv(std::string_view x);

// Maximal runs of x, in order.
std::vector<int64_t> RunLengths(std::string_view x);

// Unit-cost Levenshtein distance, bit-parallel over 64-bit words.
int64_t StringEditDistance(std::string_view u, std::string_view v);
// Reference O(|u||v|) dynamic program.
int64_t StringEditDistanceDP(std::string_view u, std::string_view v);

// 2 ed(u, v) / (|u| + |v|), and 0 for two empty strings.
double RelEditDistance(std::string_view u, std::string_view v);

// Total variation between two density sequences; the shorter one is padded
// with zeros.
double TVDistance(const std::vector<double>& a, const std::vector<double>& b);
double TVDistance(const std::vector<int64_t>& a, const std::vector<int64_t>& b);

struct EditBounds {
  double lower = 0;
  double upper = 0;
  double rel_edit = 0;
  double tv = 0;
  int64_t N = 0;
  // Sum of the TV distances moved by rounding both inputs onto 1/N; zero for
  // count inputs. The bounds are already widened by this amount.
  double rounding_error = 0;
};

// Exact bounds on the distribution edit distance of two count vectors with
// the same total N: lower = rel/2, upper = min(rel, TV).
EditBounds DistEditBounds(const std::vector<int64_t>& a,
                          const std::vector<int64_t>& b);
// Rounds both sequences onto multiples of 1/N (largest remainder).
EditBounds DistEditBounds(const DensitySequence& a, const DensitySequence& b,
                          int64_t N);

// Largest-remainder rounding of pi onto counts summing to N.
std::vector<int64_t> RoundToCounts(const DensitySequence& pi, int64_t N);

struct UniformDistance {
  double tv = 0;
  double edit_lower = 0;
  double edit_upper = 0;
  // edit_lower / tv, or 0 when tv = 0. Diagnostic only.
  double ratio = 0;
};

// Distances from counts (total N) to the uniform sequence on {1..k}. When k
// does not divide N both sides are scaled by k.
UniformDistance DistToUniform(const std::vector<int64_t>& counts, int64_t k);

// Minimum number of substitutions turning x into a string with at most n
// maximal runs. Throws std::invalid_argument if n < 1.
int64_t NBlockFlips(std::string_view x, int64_t n);

// Relative edit distance from x to the nearest n-block string of the same
// length. This equals NBlockFlips / |x| because for equal-length targets an
// optimal alignment can be taken to be a pure substitution alignment.
double DistToNBlock(std::string_view x, int64_t n);

// Every binary string of length `length` with at most n runs.
std::vector<std::string> AllNBlockStrings(int64_t length, int64_t n);

std::string ToJson(const EditBounds& b);

}  // namespace ptrace

#endif  // PTRACE_EDIT_METRICS_H_
