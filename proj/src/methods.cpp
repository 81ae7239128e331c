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

#include "hotm/methods.hpp"

#include <cmath>
#include <utility>

#include "run_support.hpp"

namespace hotm {

using detail::factorial;

std::string to_string(RunStatus status) {
  switch (status) {
    case RunStatus::kConverged: return "converged";
    case RunStatus::kBudget: return "budget";
    case RunStatus::kError: return "error";
  }
  return "error";
}

RunStatus run_status_from_string(const std::string& name) {
  if (name == "converged") return RunStatus::kConverged;
  if (name == "budget") return RunStatus::kBudget;
  if (name == "error") return RunStatus::kError;
  throw Error("unknown run status '" + name + "'");
}

std::string to_string(MethodKind kind) {
  switch (kind) {
    case MethodKind::kGd: return "gd";
    case MethodKind::kCrn: return "crn";
    case MethodKind::kBtm: return "btm";
    case MethodKind::kNatm: return "natm";
    case MethodKind::kNata: return "nata";
    case MethodKind::kNearOptimal: return "near_optimal";
    case MethodKind::kPpss: return "ppss";
    case MethodKind::kOptimal: return "optimal";
  }
  return "unknown";
}

MethodKind method_kind_from_string(const std::string& name) {
  for (MethodKind k : {MethodKind::kGd, MethodKind::kCrn, MethodKind::kBtm, MethodKind::kNatm,
                       MethodKind::kNata, MethodKind::kNearOptimal, MethodKind::kPpss,
                       MethodKind::kOptimal}) {
    if (to_string(k) == name) return k;
  }
  throw ConfigError("unknown method '" + name + "'");
}

void validate(const MethodConfig& cfg) {
  const std::string name = to_string(cfg.method);
  switch (cfg.method) {
    case MethodKind::kGd:
      if (cfg.p != 1) throw ConfigError("gd requires p = 1");
      break;
    case MethodKind::kCrn:
      if (cfg.p != 2) throw ConfigError("crn requires p = 2");
      break;
    case MethodKind::kBtm:
      if (cfg.p != 3) throw ConfigError("btm requires p = 3");
      break;
    default:
      if (cfg.p != 2 && cfg.p != 3) throw ConfigError(name + " requires p in {2, 3}");
  }
  if (!(cfg.M > 0.0) || !std::isfinite(cfg.M)) throw ConfigError(name + ": M must be positive");
  if (cfg.L && !(*cfg.L > 0.0)) throw ConfigError(name + ": L must be positive");
  if (cfg.max_iters < 0) throw ConfigError(name + ": max_iters must be nonnegative");
  if (!(cfg.grad_tol >= 0.0)) throw ConfigError(name + ": grad_tol must be nonnegative");
  if (!(cfg.gamma >= 0.0 && cfg.gamma < 1.0)) throw ConfigError(name + ": gamma must lie in [0, 1)");
  if (cfg.bdgm_max_iters < 1) throw ConfigError(name + ": bdgm_max_iters must be positive");
  if (cfg.nu_p && !(*cfg.nu_p > 0.0)) throw ConfigError(name + ": nu_p must be positive");
  if (cfg.method == MethodKind::kNata) {
    if (!(cfg.theta > 1.0)) throw ConfigError("nata: theta must exceed 1");
    const double nu_min = cfg.nu_p.value_or(default_nu(cfg.p));
    if (cfg.nu_max && *cfg.nu_max < nu_min) throw ConfigError("nata: nu_max must be >= nu_p");
    if (cfg.nu0 && *cfg.nu0 < nu_min) throw ConfigError("nata: nu0 must be >= nu_p");
  }
  if (cfg.method == MethodKind::kNearOptimal) {
    if (cfg.bisect_max < 1) throw ConfigError("near_optimal: bisect_max must be positive");
    // Exact cubic steps have gamma = 0.
    const double gamma = cfg.p == 2 ? 0.0 : cfg.gamma;
    const double xi = cfg.M / cfg.L.value_or(cfg.M);
    if (1.0 < 2.0 * gamma + 1.0 / (xi * (cfg.p + 1)) - 1e-12) {
      throw ConfigError("near_optimal: need 1 >= 2 gamma + 1 / (xi (p + 1)) with xi = M / L");
    }
  }
  if (cfg.method == MethodKind::kPpss) {
    if (cfg.H && !(*cfg.H > 0.0)) throw ConfigError("ppss: H must be positive");
    if (cfg.segment_max_probes < 1 || cfg.prox_max_steps < 1) {
      throw ConfigError("ppss: probe and step budgets must be positive");
    }
  }
  if (cfg.method == MethodKind::kOptimal) {
    if (!(cfg.sigma > 0.0 && cfg.sigma < 1.0)) throw ConfigError("optimal: sigma must lie in (0, 1)");
    if (cfg.nu_opt && !(*cfg.nu_opt > 0.0)) throw ConfigError("optimal: nu must be positive");
    if (cfg.R && !(*cfg.R > 0.0)) throw ConfigError("optimal: R must be positive");
    if (cfg.inner_max < 1) throw ConfigError("optimal: inner_max must be positive");
    const double L = cfg.L.value_or(cfg.M);
    if (!cfg.nu_opt && !(cfg.p * cfg.M > L)) throw ConfigError("optimal: default nu needs p M > L");
  }
}

double default_nu(int p) {
  switch (p) {
    case 2: return 1.0 / 24.0;
    case 3: return 5.0 / 3024.0;
    default: throw ConfigError("no schedule constant for p = " + std::to_string(p));
  }
}

double appendix_nu(int p) {
  return (2.0 * p - 1.0) / ((p + 1.0) * (2.0 * p + 1.0)) * factorial(p - 1) /
         std::pow(2.0 * p, p);
}

EstimatingFunction::EstimatingFunction(Vector x0, int power)
    : x0_(std::move(x0)), power_(power), s_(Vector::Zero(x0_.size())) {
  if (power_ < 2) throw Error("estimating function: power must be at least 2");
}

void EstimatingFunction::add(double a, double f_x, const Vector& grad_x, const Vector& x) {
  s_ += a * grad_x;
  c_ += a * (f_x - grad_x.dot(x));
  A_ += a;
}

double EstimatingFunction::value(const Vector& z) const {
  return std::pow((z - x0_).norm(), power_) / power_ + s_.dot(z) + c_;
}

double EstimatingFunction::min_value() const {
  const double q = power_ - 1.0;
  return c_ + s_.dot(x0_) - q / (q + 1.0) * std::pow(s_.norm(), (q + 1.0) / q);
}

Vector psi_argmin(const EstimatingFunction& psi) {
  const double sn = psi.s().norm();
  if (sn == 0.0) return psi.x0();
  const double q = psi.power() - 1.0;
  return psi.x0() - std::pow(sn, 1.0 / q - 1.0) * psi.s();
}

Vector gd_step(const Objective& f, const Vector& x, double M1) {
  if (!(M1 > 0.0)) throw NumericError("gd_step: M1 must be positive", -1);
  return x - f.gradient(x) / M1;
}

CrnStep crn_step(const Objective& f, const Vector& x, double M2) {
  ModelSubproblem sp;
  sp.g = f.gradient(x);
  sp.H = f.hessian(x);
  sp.reg_order = 3;
  sp.reg_const = M2;
  CrnStep out;
  out.sub = solve_cubic_model(sp);
  out.x = x + out.sub.h;
  return out;
}

BtmStep btm_step(const Objective& f, const Vector& x, double M3, double gamma, int max_iters) {
  const BdgmResult r = bdgm_solve(f, x, M3, gamma, max_iters);
  return {x + r.h, r.certificate, r.iters, r.subsolver_evals};
}

TensorStep tensor_step(const Objective& f, const Vector& y, int p, double M, double gamma,
                       int bdgm_max_iters) {
  TensorStep out;
  switch (p) {
    case 1:
      out.x = gd_step(f, y, M);
      break;
    case 2: {
      CrnStep s = crn_step(f, y, M);
      out.x = std::move(s.x);
      out.inner_iters = 1;
      out.subsolver_evals = s.sub.inner_evals;
      break;
    }
    case 3: {
      BtmStep s = btm_step(f, y, M, gamma, bdgm_max_iters);
      out.x = std::move(s.x);
      out.inner_iters = s.iters;
      out.subsolver_evals = s.subsolver_evals;
      out.certificate = s.certificate;
      break;
    }
    default: throw Error("tensor_step: order must be 1, 2 or 3");
  }
  return out;
}

ProxObjective::ProxObjective(const Objective& f, Vector center, int p, double H)
    : f_(f), center_(std::move(center)), p_(p), H_(H) {
  if (p_ < 1) throw Error("prox objective: order must be positive");
  if (center_.size() != f_.dimension()) throw DimensionError("prox objective: center dimension");
}

double ProxObjective::value(const Vector& x) const {
  return f_.value(x) + H_ / (p_ + 1) * std::pow((x - center_).norm(), p_ + 1);
}

Vector ProxObjective::gradient(const Vector& x) const {
  const Vector d = x - center_;
  return f_.gradient(x) + H_ * std::pow(d.norm(), p_ - 1) * d;
}

Matrix ProxObjective::hessian(const Vector& x) const {
  const Vector d = x - center_;
  const double r = d.norm();
  Matrix out = f_.hessian(x);
  if (r == 0.0) return out;
  out.diagonal().array() += H_ * std::pow(r, p_ - 1);
  out += H_ * (p_ - 1) * std::pow(r, p_ - 3) * (d * d.transpose());
  return out;
}

Vector ProxObjective::third_dir(const Vector& x, const Vector& h) const {
  const Vector d = x - center_;
  const double r = d.norm();
  Vector out = f_.third_dir(x, h);
  if (r == 0.0) return out;
  const double dh = d.dot(h);
  const double k = p_ - 1.0;
  out += H_ * (k * std::pow(r, p_ - 3) * (h.squaredNorm() * d + 2.0 * dh * h) +
               k * (p_ - 3.0) * std::pow(r, p_ - 5) * dh * dh * d);
  return out;
}

ShiftedObjective::ShiftedObjective(const Objective& f, Vector center, double lambda)
    : f_(f), center_(std::move(center)), lambda_(lambda) {
  if (!(lambda_ > 0.0)) throw NumericError("shifted objective: lambda must be positive", -1);
  if (center_.size() != f_.dimension()) throw DimensionError("shifted objective: center dimension");
}

double ShiftedObjective::value(const Vector& x) const {
  return f_.value(x) + (x - center_).squaredNorm() / (2.0 * lambda_);
}

Vector ShiftedObjective::gradient(const Vector& x) const {
  return f_.gradient(x) + (x - center_) / lambda_;
}

Matrix ShiftedObjective::hessian(const Vector& x) const {
  Matrix out = f_.hessian(x);
  out.diagonal().array() += 1.0 / lambda_;
  return out;
}

Vector ShiftedObjective::third_dir(const Vector& x, const Vector& h) const {
  return f_.third_dir(x, h);
}

RunTrace basic_run(const Objective& f, const Vector& x0, const MethodConfig& cfg) {
  validate(cfg);
  RunTrace trace;
  detail::Recorder rec(trace, cfg);
  Vector x = x0;
  double fx = f.value(x);
  Vector g = f.gradient(x);
  rec.push(0, x, fx, g.norm());

  for (int t = 0; t < cfg.max_iters; ++t) {
    if (g.norm() <= cfg.grad_tol) {
      rec.converged();
      return trace;
    }
    TensorStep step;
    try {
      step = tensor_step(f, x, cfg.p, cfg.M, cfg.gamma, cfg.bdgm_max_iters);
    } catch (const Error& e) {
      rec.fail(t + 1, e.what());
      return trace;
    }
    const Vector prev = std::exchange(x, std::move(step.x));
    fx = f.value(x);
    g = f.gradient(x);
    TraceRecord& r = rec.push(t + 1, x, fx, g.norm(), &prev);
    r.inner_iters = step.inner_iters;
    r.subsolver_evals = step.subsolver_evals;
    if (step.certificate) {
      r.cert_lhs = step.certificate->lhs;
      r.cert_rhs = step.certificate->rhs;
    }
  }
  if (g.norm() <= cfg.grad_tol) rec.converged();
  return trace;
}

RunTrace run_method(const Objective& f, const Vector& x0, const MethodConfig& cfg) {
  if (x0.size() != f.dimension()) throw DimensionError("run: x0 dimension does not match problem");
  switch (cfg.method) {
    case MethodKind::kGd:
    case MethodKind::kCrn:
    case MethodKind::kBtm: return basic_run(f, x0, cfg);
    case MethodKind::kNatm: return natm_run(f, x0, cfg);
    case MethodKind::kNata: return nata_run(f, x0, cfg);
    case MethodKind::kNearOptimal: return near_optimal_run(f, x0, cfg);
    case MethodKind::kPpss: return ppss_run(f, x0, cfg);
    case MethodKind::kOptimal: return optimal_run(f, x0, cfg);
  }
  throw ConfigError("unknown method");
}

double optimal_default_nu(int p, double M, double L, double sigma, double R) {
  const double C = std::pow(p, p) * std::pow(M, p) * (1.0 + 1.0 / sigma) /
                   (factorial(p) * std::pow(p * M - L, 0.5 * p) * std::pow(p * M + L, 0.5 * p - 1.0));
  const double denom = std::pow(3.0 * p + 1.0, p) * C * std::pow(R, p - 1) /
                       (std::pow(2.0, p) * std::sqrt(static_cast<double>(p))) *
                       std::pow((1.0 + sigma) / (1.0 - sigma), 0.5 * (p - 1));
  return 1.0 / denom;
}

}  // namespace hotm
