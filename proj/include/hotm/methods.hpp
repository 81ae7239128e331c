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

#include "hotm/core.hpp"
#include "hotm/problems.hpp"
#include "hotm/subsolvers.hpp"
#include "hotm/trace.hpp"

namespace hotm {

enum class MethodKind { kGd, kCrn, kBtm, kNatm, kNata, kNearOptimal, kPpss, kOptimal };

std::string to_string(MethodKind kind);
MethodKind method_kind_from_string(const std::string& name);

/// Rejected method configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A run could not continue; carries the outer iteration that failed.
class MethodError : public Error {
 public:
  MethodError(const std::string& what, int iteration) : Error(what), iteration_(iteration) {}
  int iteration() const { return iteration_; }

 private:
  int iteration_;
};

struct MethodConfig {
  MethodKind method = MethodKind::kCrn;
  int p = 2;
  double M = 1.0;  // M_p
  /// L_p, used where a method's defaults depend on it (optimal nu, near-optimal
  /// admissibility). Falls back to M when unset.
  std::optional<double> L;
  int max_iters = 100;
  double grad_tol = 1e-12;
  bool keep_iterates = false;

  // Third-order steps.
  double gamma = 1.0 / 6.0;
  int bdgm_max_iters = 100;

  // natm / nata
  std::optional<double> nu_p;    // defaults to default_nu(p)
  std::optional<double> nu_max;  // nata, defaults to 100 nu_p
  std::optional<double> nu0;     // nata, defaults to nu_max
  double theta = 2.0;

  // near_optimal
  int bisect_max = 64;

  // ppss
  std::optional<double> H;  // defaults to L
  int segment_max_probes = 40;
  int prox_max_steps = 10;

  // optimal
  double sigma = 0.5;
  std::optional<double> nu_opt;
  std::optional<double> R;  // distance estimate for the default nu_opt
  int inner_max = 200;
};

/// Throws ConfigError when `cfg` is inconsistent (p vs method, ranges).
void validate(const MethodConfig& cfg);

/// Main-text schedule constants: 1/24 for p = 2, 5/3024 for p = 3.
double default_nu(int p);

/// (2p-1) / ((p+1)(2p+1)) * (p-1)! / (2p)^p, which gives 1/80 at p = 2.
double appendix_nu(int p);

/// psi(z) = (1/power) |z - x0|^power + <s, z> + c, accumulated from affine
/// minorants a_i [f(x_i) + <grad f(x_i), z - x_i>].
class EstimatingFunction {
 public:
  EstimatingFunction(Vector x0, int power);

  void add(double a, double f_x, const Vector& grad_x, const Vector& x);

  double value(const Vector& z) const;
  /// Closed-form min_z psi(z).
  double min_value() const;

  const Vector& x0() const { return x0_; }
  int power() const { return power_; }
  const Vector& s() const { return s_; }
  double c() const { return c_; }
  double A() const { return A_; }

 private:
  Vector x0_;
  int power_;
  Vector s_;
  double c_ = 0.0;
  double A_ = 0.0;
};

/// v = x0 - s |s|^{1/(power-1) - 1}.
Vector psi_argmin(const EstimatingFunction& psi);

/// x - grad f(x) / M1.
Vector gd_step(const Objective& f, const Vector& x, double M1);

struct CrnStep {
  Vector x;
  SubsolverResult sub;
};
CrnStep crn_step(const Objective& f, const Vector& x, double M2);

struct BtmStep {
  Vector x;
  InexactnessCertificate certificate;
  int iters = 0;
  int subsolver_evals = 0;
};
BtmStep btm_step(const Objective& f, const Vector& x, double M3, double gamma = 1.0 / 6.0,
                 int max_iters = 100);

/// One p-th order step from y (p = 1: gradient, 2: cubic Newton, 3: BDGM).
struct TensorStep {
  Vector x;
  int inner_iters = 0;
  int subsolver_evals = 0;
  std::optional<InexactnessCertificate> certificate;
};
TensorStep tensor_step(const Objective& f, const Vector& y, int p, double M, double gamma = 1.0 / 6.0,
                       int bdgm_max_iters = 100);

/// f(x) + H/(p+1) |x - y|^{p+1}.
class ProxObjective final : public Objective {
 public:
  ProxObjective(const Objective& f, Vector center, int p, double H);

  Eigen::Index dimension() const override { return f_.dimension(); }
  double value(const Vector& x) const override;
  Vector gradient(const Vector& x) const override;
  Matrix hessian(const Vector& x) const override;
  Vector third_dir(const Vector& x, const Vector& h) const override;

 private:
  const Objective& f_;
  Vector center_;
  int p_;
  double H_;
};

/// f(x) + |x - y|^2 / (2 lambda).
class ShiftedObjective final : public Objective {
 public:
  ShiftedObjective(const Objective& f, Vector center, double lambda);

  Eigen::Index dimension() const override { return f_.dimension(); }
  double value(const Vector& x) const override;
  Vector gradient(const Vector& x) const override;
  Matrix hessian(const Vector& x) const override;
  Vector third_dir(const Vector& x, const Vector& h) const override;

 private:
  const Objective& f_;
  Vector center_;
  double lambda_;
};

/// Basic loops (gd, crn, btm) repeat their step from x0.
RunTrace basic_run(const Objective& f, const Vector& x0, const MethodConfig& cfg);
RunTrace natm_run(const Objective& f, const Vector& x0, const MethodConfig& cfg);
RunTrace nata_run(const Objective& f, const Vector& x0, const MethodConfig& cfg);
RunTrace near_optimal_run(const Objective& f, const Vector& x0, const MethodConfig& cfg);
RunTrace ppss_run(const Objective& f, const Vector& x0, const MethodConfig& cfg);
RunTrace optimal_run(const Objective& f, const Vector& x0, const MethodConfig& cfg);

/// Dispatches on cfg.method. Method failures end the trace with status kError;
/// configuration problems throw ConfigError.
RunTrace run_method(const Objective& f, const Vector& x0, const MethodConfig& cfg);

/// Default nu for the optimal method from its convergence theorem with R.
double optimal_default_nu(int p, double M, double L, double sigma, double R);

}  // namespace hotm
