// Copyright 2026 The hotm Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hotm/diagnostics.hpp"
#include "hotm/methods.hpp"
#include "hotm/problems.hpp"
#include "hotm/trace.hpp"

namespace hotm {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitConfig = 2,
  kExitMethod = 3,
  kExitDiagnostics = 4,
};

struct SynthSpec {
  Eigen::Index n = 1000;
  Eigen::Index d = 20;
  std::uint64_t seed = 1;
};

struct ProblemSpec {
  ProblemKind kind = ProblemKind::kLogistic;
  std::optional<std::string> dataset;  // LibSVM path
  std::optional<SynthSpec> synth;
  std::optional<Eigen::Index> dimension;  // nesterov_lb size, or LibSVM width
  double mu = 0.0;
  bool normalize = true;
  std::map<int, double> lipschitz;
  std::vector<double> x0;  // one value fills every coordinate
  std::optional<std::pair<Eigen::Index, Eigen::Index>> expected_shape;  // (n, d)
};

struct MethodEntry {
  std::string label;
  MethodConfig cfg;
};

struct RunBlock {
  int max_iters = 100;
  double grad_tol = 1e-12;
  int fstar_budget = 500;
  double fstar_tol = 1e-13;
  std::optional<double> fstar;  // skips the pre-run
};

struct OutputBlock {
  std::string directory = "hotm-out";
  std::vector<std::string> formats{"csv"};
};

struct BenchmarkConfig {
  std::string name = "benchmark";
  ProblemSpec problem;
  std::vector<MethodEntry> methods;
  RunBlock run;
  OutputBlock output;
  nlohmann::json source;  // the merged document, echoed into outputs
};

/// Parses and validates; throws ConfigError.
BenchmarkConfig parse_config(const nlohmann::json& doc);

std::vector<std::string> preset_names();
std::string preset_description(const std::string& name);
nlohmann::json preset_json(const std::string& name);

struct Instance {
  ProblemOracle oracle;
  Vector x0;
  std::vector<std::string> warnings;
};

/// Loads or generates the data. Missing or unreadable datasets throw ConfigError.
Instance build_instance(const ProblemSpec& spec);

struct FstarEstimate {
  double fstar = 0.0;
  Vector xstar;
  int iters = 0;
  double grad_norm = 0.0;
};

/// Cubic Newton with M = L2 until |grad f| <= tol or the budget runs out.
FstarEstimate estimate_fstar(const Objective& f, const Vector& x0, double L2, int budget,
                             double tol);

struct MethodSummary {
  std::string label;
  std::string method;
  int p = 0;
  RunStatus status = RunStatus::kBudget;
  std::string message;
  int iterations = 0;
  double final_f = 0.0;
  std::optional<double> final_gap;
  double final_grad_norm = 0.0;
  long long subsolver_evals = 0;
  double wall_ms = 0.0;
  bool diagnostics_passed = true;
};

struct Checkpoint {
  int iter = 0;
  std::vector<std::string> order;  // labels by ascending f at `iter`
};

struct RunSummary {
  std::vector<MethodSummary> methods;
  std::vector<Checkpoint> checkpoints;
};

/// Derives every number from the traces.
RunSummary summarize(const std::vector<MethodEntry>& methods, const std::vector<RunTrace>& traces,
                     const std::vector<DiagnosticsReport>& reports, std::optional<double> fstar);

nlohmann::json to_json(const RunSummary& summary);

struct BenchmarkResult {
  std::vector<RunTrace> traces;
  std::vector<DiagnosticsReport> reports;
  std::optional<FstarEstimate> reference;
  RunSummary summary;
  std::vector<std::string> warnings;

  int exit_code(bool check) const;
};

/// Contract checks for every run; theorem checks for basic methods on
/// strongly convex problems when a reference solution is available.
DiagnosticsReport diagnose(const RunTrace& trace, const MethodEntry& entry, const ProblemSpec& spec,
                           const Vector& x0, const std::optional<FstarEstimate>& reference);

BenchmarkResult run_benchmark(const BenchmarkConfig& config);

/// One trace file per method and summary.json under config.output.directory.
void write_outputs(const BenchmarkConfig& config, const BenchmarkResult& result);

}  // namespace hotm
