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

// Command-line front end. Exit codes: 0 success, 1 usage error (bad flags,
// unreadable files), 2 precondition violation reported by the library.

#include <cctype>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "ptrace/analysis_oracles.h"
#include "ptrace/confused_collector.h"
#include "ptrace/core_model.h"
#include "ptrace/edit_metrics.h"
#include "ptrace/harness.h"
#include "ptrace/parity_tester.h"
#include "ptrace/rng.h"
#include "ptrace/trace_recon.h"

namespace {

using nlohmann::json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string ReadFile(const std::string& path) {
  if (path == "-") {
    std::ostringstream os;
    os << std::cin.rdbuf();
    return os.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void WriteOutput(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("cannot write " + path);
  out << text;
}

// Binary string from a file; whitespace is ignored.
std::string ReadBits(const std::string& path) {
  std::string raw = ReadFile(path), bits;
  for (char ch : raw) {
    if (ch == '0' || ch == '1') {
      bits.push_back(ch);
    } else if (!std::isspace(static_cast<unsigned char>(ch))) {
      throw std::invalid_argument(path + ": expected only 0/1 characters");
    }
  }
  return bits;
}

// A JSON array or whitespace/comma separated numbers.
std::vector<double> ReadNumbers(const std::string& path) {
  std::string raw = ReadFile(path);
  size_t first = raw.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && raw[first] == '[') {
    try {
      return json::parse(raw).get<std::vector<double>>();
    } catch (const json::exception& e) {
      throw std::invalid_argument(path + ": " + e.what());
    }
  }
  for (char& ch : raw) {
    if (ch == ',') ch = ' ';
  }
  std::istringstream is(raw);
  std::vector<double> out;
  std::string tok;
  while (is >> tok) {
    try {
      size_t used = 0;
      out.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::logic_error&) {
      throw std::invalid_argument(path + ": not a number: " + tok);
    }
  }
  return out;
}

std::vector<int64_t> ToCounts(const std::vector<double>& v) {
  std::vector<int64_t> out;
  for (double x : v) {
    if (x < 0 || x != static_cast<double>(static_cast<int64_t>(x))) {
      throw std::invalid_argument("counts must be non-negative integers");
    }
    out.push_back(static_cast<int64_t>(x));
  }
  return out;
}

ptrace::DistributionPair ReadPair(const std::string& path, int64_t uniform_n) {
  if (!path.empty()) return ptrace::DistributionFromJson(ReadFile(path));
  if (uniform_n < 1) throw UsageError("need --pi FILE or --uniform N");
  return ptrace::DistributionPair::Uniform(static_cast<size_t>(uniform_n));
}

ptrace::GraphKind ParseGraph(const std::string& s) {
  if (s == "cycle") return ptrace::GraphKind::kCycle;
  if (s == "path") return ptrace::GraphKind::kPath;
  throw UsageError("graph must be cycle or path");
}

std::string MatrixJson(const ptrace::JoinMatrix& m) {
  json rows = json::array();
  for (int64_t i = 0; i < m.n; ++i) {
    std::vector<double> row(m.a.begin() + i * m.n, m.a.begin() + (i + 1) * m.n);
    rows.push_back(row);
  }
  return rows.dump();
}

std::string MatrixCsv(const ptrace::JoinMatrix& m) {
  std::ostringstream os;
  char buf[32];
  for (int64_t i = 0; i < m.n; ++i) {
    for (int64_t j = 0; j < m.n; ++j) {
      std::snprintf(buf, sizeof(buf), "%.10g", m(i, j));
      os << (j ? "," : "") << buf;
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parity-trace and confused-collector testing toolkit"};
  app.require_subcommand(1);
  // Global flags may follow the subcommand.
  app.fallthrough();
  uint64_t seed = 1;
  int threads = 0;
  std::string out_path;
  app.add_option("--seed", seed, "Master seed")->capture_default_str();
  app.add_option("--threads", threads, "Worker cap, 0 for all cores")
      ->capture_default_str();
  app.add_option("-o,--out", out_path, "Output file (default stdout)");

  // ---- sample ----
  auto* sample = app.add_subcommand("sample", "Draw samples and traces");
  sample->require_subcommand(1);

  std::string pi_path;
  int64_t uniform_n = 0;
  double m = 0;
  bool exact = false;
  auto* sample_pt = sample->add_subcommand("pt", "Parity trace of a sample");
  sample_pt->add_option("--pi", pi_path, "DistributionPair JSON");
  sample_pt->add_option("--uniform", uniform_n, "Use the uniform pair on [2n]");
  sample_pt->add_option("--m", m, "Sample size (Poisson mean)")->required();
  sample_pt->add_flag("--exact", exact, "Draw exactly m elements");

  std::string p_path, graph = "cycle";
  int64_t cc_n = 0;
  double eta = 0.5;
  auto* sample_cc =
      sample->add_subcommand("cc", "Confused-collector bucket counts");
  sample_cc->add_option("--p", p_path, "Weights of p on Z_n (default uniform)");
  sample_cc->add_option("--n", cc_n, "Domain size when p is uniform");
  sample_cc->add_option("--m", m, "Poisson sample parameter")->required();
  sample_cc->add_option("--eta", eta, "Edge-absence probability")
      ->capture_default_str();
  sample_cc->add_option("--graph", graph, "cycle or path")
      ->capture_default_str();

  std::string x_path;
  double rho = 0.5;
  int k = 1;
  bool poissonize = false;
  auto* sample_del =
      sample->add_subcommand("deletion", "Deletion-channel traces of a string");
  sample_del->add_option("--x", x_path, "Binary string file")->required();
  sample_del->add_option("--rho", rho, "Retention probability")
      ->capture_default_str();
  sample_del->add_option("--k", k, "Number of traces")->capture_default_str();
  sample_del->add_flag("--poissonize", poissonize,
                       "Poissonize each trace before printing");

  // ---- test ----
  auto* test = app.add_subcommand("test", "Run a tester on a file or stdin");
  test->require_subcommand(1);
  int64_t n = 0;
  double eps = 0.3;
  std::string trace_path = "-";
  ptrace::PTConfig pt_cfg;
  auto add_pt = [&](CLI::App* c) {
    c->add_option("--n", n, "Pairs (domain [2n])")->required();
    c->add_option("--eps", eps, "Distance parameter")->capture_default_str();
    c->add_option("--trace", trace_path, "Trace file, - for stdin")
        ->capture_default_str();
    c->add_option("--m", m, "Poisson sample parameter (default trace length)");
    c->add_option("--alpha", pt_cfg.alpha)->capture_default_str();
    c->add_option("--beta", pt_cfg.beta)->capture_default_str();
    c->add_option("--gamma", pt_cfg.gamma)->capture_default_str();
    c->add_option("--K", pt_cfg.K)->capture_default_str();
  };
  auto* test_pt = test->add_subcommand("pt", "Parity-trace tester (auto)");
  auto* test_large = test->add_subcommand("pt_large", "Large-eps tester");
  auto* test_small = test->add_subcommand("pt_small", "Small-eps tester");
  for (auto* c : {test_pt, test_large, test_small}) add_pt(c);

  std::string counts_path = "-";
  ptrace::CCConfig cc_cfg;
  auto* test_cc = test->add_subcommand("cc", "Confused-collector tester");
  test_cc->add_option("--n", n, "Domain size")->required();
  test_cc->add_option("--eps", eps)->capture_default_str();
  test_cc->add_option("--eta", eta)->capture_default_str();
  test_cc->add_option("--m", m, "Poisson sample parameter")->required();
  test_cc->add_option("--counts", counts_path, "Bucket counts, - for stdin")
      ->capture_default_str();
  test_cc->add_option("--alpha", cc_cfg.alpha)->capture_default_str();
  test_cc->add_option("--beta", cc_cfg.beta)->capture_default_str();
  test_cc->add_option("--L", cc_cfg.L)->capture_default_str();
  test_cc->add_option("--graph", graph)->capture_default_str();
  test_cc->add_flag("--allow-low-eta", cc_cfg.allow_low_eta);

  std::string property = "uniform";
  int64_t big_n = 0;
  std::vector<std::string> trace_paths;
  ptrace::TraceTestConfig tr_cfg;
  auto* test_trace = test->add_subcommand("trace", "Trace property tester");
  test_trace
      ->add_option("--property", property,
                   "uniform, uniform-nopromise or nblock")
      ->capture_default_str();
  test_trace->add_option("--N", big_n, "Length of the hidden string")
      ->required();
  test_trace->add_option("--n", n, "Number of blocks")->required();
  test_trace->add_option("--eps", eps)->capture_default_str();
  test_trace->add_option("--rho", rho, "Retention rate of the traces")
      ->required();
  test_trace->add_option("--trace", trace_paths, "Trace files (k >= 1)")
      ->required();
  test_trace->add_option("--concat-c", tr_cfg.concat_c)->capture_default_str();

  // ---- phi ----
  auto* phi = app.add_subcommand("phi", "Expected join matrices");
  std::string weights_path, format = "json";
  bool summary = false;
  phi->add_option("--graph", graph)->capture_default_str();
  phi->add_option("--n", n, "Vertices")->required();
  phi->add_option("--eta", eta)->capture_default_str();
  phi->add_option("--weights", weights_path, "Per-edge absence probabilities");
  phi->add_option("--format", format, "json or csv")->capture_default_str();
  phi->add_flag("--summary", summary, "Print sum and smallest eigenvalue only");

  // ---- dist ----
  auto* dist = app.add_subcommand("dist", "Distances between inputs");
  std::string metric = "edit";
  std::vector<std::string> inputs;
  bool strings = false;
  dist->add_option("--metric", metric, "edit, tv or uniform")
      ->capture_default_str();
  dist->add_option("--N", big_n, "Resolution for fractional inputs");
  dist->add_option("--k", k, "Support size for --metric uniform");
  dist->add_flag("--strings", strings, "Inputs are binary strings");
  dist->add_option("inputs", inputs, "Density sequence or string files")
      ->required();

  // ---- instance ----
  auto* inst = app.add_subcommand("instance", "Instance generators");
  inst->require_subcommand(1);
  bool yes = false;
  auto* inst_domino = inst->add_subcommand("domino", "Domino YES/NO pair");
  inst_domino->add_option("--n", n)->required();
  inst_domino->add_option("--eps", eps)->capture_default_str();
  inst_domino->add_flag("--yes", yes, "YES instance (default NO)");
  auto* inst_far = inst->add_subcommand("cc-far", "Far distribution on Z_n");
  inst_far->add_option("--n", n)->required();
  inst_far->add_option("--eps", eps)->capture_default_str();
  std::string kind = "uniform";
  int64_t big = 0, small = 0;
  double noise = 0.1;
  auto* inst_string = inst->add_subcommand("string", "Block strings");
  inst_string->add_option("--kind", kind, "uniform, uniform0, skewed, noisy")
      ->capture_default_str();
  inst_string->add_option("--N", big_n)->required();
  inst_string->add_option("--n", n)->required();
  inst_string->add_option("--big", big, "Long block length for skewed");
  inst_string->add_option("--small", small, "Short block length for skewed");
  inst_string->add_option("--noise", noise)->capture_default_str();

  // ---- experiment ----
  auto* exp = app.add_subcommand("experiment", "Run an ExperimentSpec");
  std::string spec_path;
  bool as_json = false;
  exp->add_option("spec", spec_path, "ExperimentSpec JSON")->required();
  exp->add_flag("--json", as_json, "JSON instead of CSV");

  // ---- calibrate ----
  auto* cal = app.add_subcommand("calibrate", "Search the leading constant");
  ptrace::CalibrationRequest req;
  double cal_alpha = 0;
  cal->add_option("--tester", req.tester, "cc or pt_large")
      ->capture_default_str();
  cal->add_option("--n", req.n)->capture_default_str();
  cal->add_option("--eps", req.epsilon)->capture_default_str();
  cal->add_option("--eta", req.eta)->capture_default_str();
  cal->add_option("--target-error", req.target_error)->capture_default_str();
  cal->add_option("--trials", req.trials)->capture_default_str();
  cal->add_option("--holdout", req.holdout)->capture_default_str();
  cal->add_option("--c-start", req.c_start)->capture_default_str();
  cal->add_option("--c-max", req.c_max)->capture_default_str();
  cal->add_option("--alpha", cal_alpha, "Override the concentration constant");
  cal->add_flag("--fit-beta", req.fit_beta);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    std::string out;
    if (*sample_pt) {
      ptrace::DistributionPair pi = ReadPair(pi_path, uniform_n);
      if (exact) {
        out = ptrace::ParityTrace(
            ptrace::SampleExact(pi, static_cast<int64_t>(m), seed));
      } else {
        out = ptrace::PoissonizedTrace(pi, m, seed);
      }
    } else if (*sample_cc) {
      ptrace::PartialDistribution p;
      if (!p_path.empty()) {
        p.w = ReadNumbers(p_path);
      } else if (cc_n > 0) {
        p.w.assign(static_cast<size_t>(cc_n), 1.0 / static_cast<double>(cc_n));
      } else {
        throw UsageError("need --p FILE or --n");
      }
      p.Validate();
      ptrace::BaseGraph g{ParseGraph(graph), static_cast<int64_t>(p.n())};
      ptrace::ConfusedSample s = ptrace::SampleConfused(p, m, g, eta, seed);
      json j;
      j["counts"] = s.counts;
      json comps = json::array();
      for (const auto& c : s.buckets.components) {
        comps.push_back({c.start, c.length});
      }
      j["buckets"] = comps;
      out = j.dump();
    } else if (*sample_del) {
      std::string x = ReadBits(x_path);
      for (int j = 0; j < k; ++j) {
        std::string t =
            ptrace::DeletionTrace(x, rho, ptrace::DeriveSeed(seed, j));
        if (poissonize) {
          t = ptrace::Poissonize(t, rho, ptrace::DeriveSeed(seed, j, 1));
        }
        out += t + "\n";
      }
    } else if (*test_pt || *test_large || *test_small) {
      std::string bits = ReadBits(trace_path);
      pt_cfg.epsilon = eps;
      if (*test_large) pt_cfg.mode = ptrace::PTMode::kLargeEps;
      if (*test_small) pt_cfg.mode = ptrace::PTMode::kSmallEps;
      double mm = m > 0 ? m : static_cast<double>(bits.size());
      if (!(mm > 0)) throw std::invalid_argument("empty trace and no --m");
      out = ptrace::ToJson(
          ptrace::TestUniformityPT(ptrace::CircularRuns(bits), n, pt_cfg, mm));
    } else if (*test_cc) {
      cc_cfg.epsilon = eps;
      cc_cfg.eta = eta;
      cc_cfg.graph = ParseGraph(graph);
      out = ptrace::ToJson(ptrace::TestUniformityCC(
          ToCounts(ReadNumbers(counts_path)), cc_cfg, n, m));
    } else if (*test_trace) {
      ptrace::TraceTestSpec ts;
      ts.N = big_n;
      ts.n = n;
      ts.epsilon = eps;
      ts.k = static_cast<int>(trace_paths.size());
      if (property == "uniform") {
        ts.property = ptrace::TraceProperty::kUniformNBlockPromised;
      } else if (property == "uniform-nopromise") {
        ts.property = ptrace::TraceProperty::kUniformNBlock;
      } else if (property == "nblock") {
        ts.property = ptrace::TraceProperty::kNBlock;
      } else {
        throw UsageError("unknown property " + property);
      }
      std::vector<std::string> traces;
      for (const auto& path : trace_paths) traces.push_back(ReadBits(path));
      ptrace::Verdict v;
      if (ts.property == ptrace::TraceProperty::kNBlock) {
        if (traces.size() != 1) throw UsageError("nblock takes one trace");
        v = ptrace::TestNBlock(traces[0], ts, rho, tr_cfg, seed);
      } else if (traces.size() == 1) {
        v = ptrace::TestUniformNBlock(traces[0], ts, rho, tr_cfg, seed);
      } else {
        v = ptrace::TestUniformNBlockMultitrace(traces, ts, rho, tr_cfg, seed);
      }
      out = ptrace::ToJson(v);
    } else if (*phi) {
      ptrace::BaseGraph g{ParseGraph(graph), n};
      std::vector<double> w = weights_path.empty()
                                  ? ptrace::ConstantWeights(g, eta)
                                  : ReadNumbers(weights_path);
      if (summary) {
        json j;
        ptrace::JoinMatrix mat = ptrace::PhiExpectedWeighted(g, w);
        j["n"] = n;
        j["sum"] = mat.Sum();
        j["min_eigenvalue"] = ptrace::MinEigenvalue(mat);
        j["zeta"] = ptrace::ZetaExact(g, w);
        out = j.dump();
      } else {
        ptrace::JoinMatrix mat = ptrace::PhiExpectedWeighted(g, w);
        if (format == "json") {
          out = MatrixJson(mat);
        } else if (format == "csv") {
          out = MatrixCsv(mat);
        } else {
          throw UsageError("format must be json or csv");
        }
      }
    } else if (*dist) {
      if (metric == "uniform") {
        if (inputs.size() != 1 || k < 1) {
          throw UsageError("uniform takes one input and --k");
        }
        std::vector<int64_t> counts =
            strings ? ptrace::PsiInvCounts(ReadBits(inputs[0]))
                    : ToCounts(ReadNumbers(inputs[0]));
        ptrace::UniformDistance d = ptrace::DistToUniform(counts, k);
        out = json{{"tv", d.tv},
                   {"edit_lower", d.edit_lower},
                   {"edit_upper", d.edit_upper}}
                  .dump();
      } else {
        if (inputs.size() != 2) throw UsageError("dist takes two inputs");
        ptrace::EditBounds b;
        if (strings) {
          b = ptrace::DistEditBounds(ptrace::PsiInvCounts(ReadBits(inputs[0])),
                                     ptrace::PsiInvCounts(ReadBits(inputs[1])));
        } else {
          if (big_n < 1) throw UsageError("--N is required for sequences");
          b = ptrace::DistEditBounds(ReadNumbers(inputs[0]),
                                     ReadNumbers(inputs[1]), big_n);
        }
        if (metric == "edit") {
          out = ptrace::ToJson(b);
        } else if (metric == "tv") {
          out = json{{"metric", "tv"}, {"tv", b.tv}}.dump();
        } else {
          throw UsageError("metric must be edit, tv or uniform");
        }
      }
    } else if (*inst_domino) {
      out = ptrace::ToJson(ptrace::MakeDominoInstance(n, eps, yes, seed).pair);
    } else if (*inst_far) {
      out = json(ptrace::CCFarInstance(n, eps, seed).w).dump();
    } else if (*inst_string) {
      if (kind == "uniform") {
        out = ptrace::UniformBlockString(big_n, n, '1');
      } else if (kind == "uniform0") {
        out = ptrace::UniformBlockString(big_n, n, '0');
      } else if (kind == "skewed") {
        if (n < 1) throw std::invalid_argument("n must be positive");
        int64_t len = big_n / n;
        out = ptrace::SkewedBlockString(n, big > 0 ? big : 7 * len / 4,
                                        small > 0 ? small : len / 4);
      } else if (kind == "noisy") {
        out = ptrace::NoisyString(ptrace::UniformBlockString(big_n, n, '1'),
                                  noise, seed);
      } else {
        throw UsageError("unknown string kind " + kind);
      }
    } else if (*exp) {
      ptrace::ExperimentSpec spec =
          ptrace::ParseExperimentSpec(ReadFile(spec_path));
      if (app.get_option("--seed")->count() > 0) spec.seed = seed;
      if (app.get_option("--threads")->count() > 0) spec.threads = threads;
      ptrace::AcceptanceCurve curve = ptrace::EstimateAcceptance(spec);
      out = as_json ? ptrace::ToJson(curve) : ptrace::ToCsv(curve);
    } else if (*cal) {
      req.seed = seed;
      req.threads = threads;
      if (cal_alpha > 0) req.constants["alpha"] = cal_alpha;
      ptrace::CalibrationResult r = ptrace::CalibrateConstants(req);
      WriteOutput(out_path, ptrace::ToJson(r));
      return r.success ? 0 : 2;
    }
    WriteOutput(out_path, out);
    return 0;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
