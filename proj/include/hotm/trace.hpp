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

#include <optional>
#include <string>
#include <vector>

#include "hotm/core.hpp"

namespace hotm {

enum class RunStatus { kConverged, kBudget, kError };

std::string to_string(RunStatus status);
RunStatus run_status_from_string(const std::string& name);

/// One row of a run. Record 0 describes the starting point.
///
/// Fields after `wall_ms` are contract witnesses that diagnostics re-check
/// after the fact; each method fills only the ones it owns.
struct TraceRecord {
  int iter = 0;
  double f = 0.0;
  double grad_norm = 0.0;
  std::optional<double> step_norm;  // |x_t - x_{t-1}|
  std::optional<double> A;          // A_t (or its adaptive counterpart)
  std::optional<double> nu;         // nu_t (NATA)
  std::optional<double> lambda;     // lambda_t (near-optimal, optimal)
  int inner_iters = 0;
  int subsolver_evals = 0;
  double wall_ms = 0.0;

  std::optional<double> a;           // a_t = A_t - A_{t-1}
  std::optional<double> psi_min;     // psi_t(v_t)
  std::optional<double> psi_min_closed;  // closed-form minimum value of psi_t
  std::optional<double> pair_value;  // lambda M |x - y|^{p-1} / (p-1)!
  std::optional<double> sigma_lhs;   // |grad g_lambda(x, y)| at inner exit
  std::optional<double> sigma_rhs;   // sigma / lambda |x - y| at inner exit
  std::optional<double> cert_lhs;    // third-order step certificate
  std::optional<double> cert_rhs;
};

struct RunTrace {
  std::string method;
  int p = 0;
  double M = 0.0;
  std::vector<TraceRecord> records;
  /// Iterates parallel to `records`, filled when the run was asked to keep them.
  std::vector<Vector> iterates;
  /// The point the method returns (last iterate, or best-f for near-optimal).
  Vector solution;
  RunStatus status = RunStatus::kBudget;
  std::string message;

  bool empty() const { return records.empty(); }
};

}  // namespace hotm
