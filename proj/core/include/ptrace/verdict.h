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

#ifndef PTRACE_VERDICT_H_
#define PTRACE_VERDICT_H_

#include <map>
#include <string>
#include <vector>

namespace ptrace {

enum class Step {
  kNone,
  kBias,
  kConcentration,
  kCollision,
  kHistogram,
  kCoverage,
  kDisagreement,
  kVerification,
};

const char* StepName(Step step);

struct Verdict {
  bool accept = true;
  Step fired = Step::kNone;
  // Collision statistic and the threshold it was compared against, for the
  // step that decided (or the last one evaluated on acceptance).
  double y = 0;
  double threshold = 0;
  std::map<std::string, double> stats;
  std::map<std::string, double> params;
  std::vector<std::string> warnings;

  void Reject(Step step) {
    if (accept) {
      accept = false;
      fired = step;
    }
  }
};

// {accept, step, Y, threshold, params, stats, warnings}
std::string ToJson(const Verdict& v);

}  // namespace ptrace

#endif  // PTRACE_VERDICT_H_
