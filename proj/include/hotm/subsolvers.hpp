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

#include "hotm/core.hpp"
#include "hotm/problems.hpp"

namespace hotm {

/// Regularized local model
///
///   reg_order 3:  <g, h> + 1/2 <H h, h> + (reg_const / 6) |h|^3
///   reg_order 4:  <g, h> + 1/2 <H h, h> + (reg_const / 4) |h|^4
///
/// `evd` may carry a precomputed decomposition of H; solvers reuse it.
struct ModelSubproblem {
  Vector g;
  Matrix H;
  int reg_order = 3;
  double reg_const = 1.0;
  std::optional<EigenDecomposition<double>> evd;
};

struct SubsolverResult {
  Vector h;
  double tau = 0.0;  // dual variable of the norm term
  double stationarity_residual = 0.0;
  int inner_evals = 0;  // root-finder function evaluations
};

/// Membership test for the relatively inexact solution set:
/// |grad Omega_{x,M}(y)| <= gamma |grad f(y)|.
struct InexactnessCertificate {
  double gamma = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  bool satisfied = false;
};

/// Value of the model at h (constant term dropped).
double model_value(const ModelSubproblem& sp, const Vector& h);

/// Gradient of the model at h.
Vector model_gradient(const ModelSubproblem& sp, const Vector& h);

/// Exact minimizer of the cubic model via EVD of H and a safeguarded
/// root-find on phi(tau) = |(H + tau I)^{-1} g| - 2 tau / M.
/// Rejects H with lambda_min < -1e-10 |H| and non-finite g.
SubsolverResult solve_cubic_model(const ModelSubproblem& sp);

/// Exact minimizer of the quartic model through its one-dimensional concave
/// dual in tau >= 0 with coupling sqrt(2 L).
SubsolverResult solve_quartic_model(const ModelSubproblem& sp);

/// Dispatches on sp.reg_order.
SubsolverResult solve_model(const ModelSubproblem& sp);

/// gradient of the p-th order regularized Taylor model of f around x at y:
///   grad f(x) + H (y-x) [+ 1/2 D3 f(x)[y-x]^2 for p = 3] + (M/p!) |y-x|^{p-1} (y-x)
InexactnessCertificate certify_inexact(const Objective& f, const Vector& x, const Vector& y,
                                       double M, int p, double gamma);

struct BdgmResult {
  Vector h;
  InexactnessCertificate certificate;
  int iters = 0;          // BDGM iterations (quartic model solves)
  int subsolver_evals = 0;  // total root-finder evaluations
};

/// The BDGM iteration did not reach the inexactness set within its budget.
class BdgmError : public Error {
 public:
  BdgmError(const std::string& what, double best_lhs, double best_rhs)
      : Error(what), best_lhs_(best_lhs), best_rhs_(best_rhs) {}
  double best_lhs() const { return best_lhs_; }
  double best_rhs() const { return best_rhs_; }

 private:
  double best_lhs_;
  double best_rhs_;
};

/// Bregman distance gradient method for the third-order regularized step
///
///   min_h <g, h> + 1/2 <H h, h> + 1/6 D3 f(x)[h]^3 + (M3/24) |h|^4
///
/// with scaling function 1/2 <H h, h> + (M3/24) |h|^4. Starts from h = 0 and
/// stops as soon as x + h lies in the inexact set with tolerance gamma.
BdgmResult bdgm_solve(const Objective& f, const Vector& x, double M3, double gamma = 1.0 / 6.0,
                      int max_iters = 100);

}  // namespace hotm
