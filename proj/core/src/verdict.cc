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

#include "ptrace/verdict.h"

#include <cmath>

#include "json.hpp"

namespace ptrace {

const char* StepName(Step step) {
  switch (step) {
    case Step::kNone:
      return "none";
    case Step::kBias:
      return "bias";
    case Step::kConcentration:
      return "concentration";
    case Step::kCollision:
      return "collision";
    case Step::kHistogram:
      return "histogram";
    case Step::kCoverage:
      return "coverage";
    case Step::kDisagreement:
      return "disagreement";
    case Step::kVerification:
      return "verification";
  }
  return "unknown";
}

namespace {

// JSON has no infinities; emit them as strings.
nlohmann::json Number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

}  // namespace

std::string ToJson(const Verdict& v) {
  nlohmann::json j;
  j["accept"] = v.accept;
  j["step"] = StepName(v.fired);
  j["Y"] = Number(v.y);
  j["threshold"] = Number(v.threshold);
  j["params"] = nlohmann::json::object();
  for (const auto& [k, x] : v.params) j["params"][k] = Number(x);
  j["stats"] = nlohmann::json::object();
  for (const auto& [k, x] : v.stats) j["stats"][k] = Number(x);
  j["warnings"] = v.warnings;
  return j.dump();
}

}  // namespace ptrace
