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

#include <json.hpp>

#include "hotm/core.hpp"
#include "hotm/trace.hpp"

namespace hotm {

/// Unique root in (0, 1) of h_z(a) = a^p z + a - 1.
double alpha_star(double z, int p);

/// min{1/2, 1/2 ((p+1)! mu / (q (M + L) D^{p-q+1}))^{1/p}}.
double alpha_low(double mu, double M, double L, double D, int p, int q = 2);

/// q (M + L) x_dist^{p-q+1} / ((p+1)! mu).
double kappa_t(double x_dist, double mu, double M, double L, int p, int q = 2);

/// (M + L) q^{(q+1)/q} / ((p+1)! mu^{(q+1)/q}) (1 - alpha_low)^{t/q} gap0^{1/q}.
double kappa_sl(int t, double gap0, double mu, double M, double L, int p, int q,
                double alpha_low);

/// Gaps at or below this are treated as zero.
double gap_noise_floor(double fstar);

struct RateDiagnostics {
  std::vector<double> gaps;   // f(x_t) - f*, truncated at the noise floor
  std::vector<double> alpha;  // 1 - gap_{t+1} / gap_t, size gaps.size() - 1
  std::size_t truncated_at = 0;  // number of records kept
};

/// Throws Error when fstar exceeds the smallest recorded f beyond the noise floor.
RateDiagnostics rate_series(const RunTrace& trace, double fstar);

/// True when `alpha` is nondecreasing over its last `window` entries within `slack`.
bool nondecreasing_tail(const std::vector<double>& alpha, std::size_t window, double slack);

enum class CheckStatus { kPass, kFail, kSkipped };

std::string to_string(CheckStatus status);

struct Violation {
  int iter = 0;
  double lhs = 0.0;
  double rhs = 0.0;
};

/// One-sided inequality lhs <= rhs + slack tested at every applicable record.
struct CheckResult {
  std::string name;
  CheckStatus status = CheckStatus::kSkipped;
  int checked = 0;
  std::vector<Violation> violations;
  double worst_margin = 0.0;  // max of lhs - rhs over checked records
  int worst_iter = -1;
  std::string note;
};

struct DiagnosticsReport {
  std::vector<CheckResult> checks;

  bool passed() const;
  const CheckResult* find(const std::string& name) const;
  void append(const DiagnosticsReport& other);
};

nlohmann::json to_json(const DiagnosticsReport& report);

struct TheoremInputs {
  double mu = 0.0;
  double M = 0.0;
  double L = 0.0;
  int p = 2;
  int q = 2;
  double fstar = 0.0;
  std::optional<Vector> xstar;
};

/// Per-step contraction with alpha_star(kappa_t), aggregated product bound with
/// alpha_star(kappa_sl), and the growth condition. The per-step and growth
/// checks need trace.iterates and xstar; without them they are skipped.
DiagnosticsReport verify_theorem1(const RunTrace& trace, const TheoremInputs& in);

struct ContractInputs {
  std::optional<double> nu_p;   // NATA schedule floor
  std::optional<double> fstar;  // NATM gap bound
  std::optional<Vector> xstar;
  std::optional<Vector> x0;
  double lambda_tol = 1e-10;    // relative to max(1, lambda)
};

/// Method-specific invariants re-checked from the trace witnesses.
DiagnosticsReport verify_contracts(const RunTrace& trace, const ContractInputs& in);

}  // namespace hotm
