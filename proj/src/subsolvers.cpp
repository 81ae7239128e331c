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

#include "hotm/subsolvers.hpp"

#include <cmath>
#include <limits>

#include "hotm/roots.hpp"

namespace hotm {
namespace {

constexpr double kDenominatorFloor = 1e-300;
constexpr double kIndefiniteTolerance = 1e-10;

void check_subproblem(const ModelSubproblem& sp, int order) {
  if (sp.reg_order != order) {
    throw Error("model subproblem: expected regularization order " + std::to_string(order));
  }
  if (!(sp.reg_const > 0.0) || !std::isfinite(sp.reg_const)) {
    throw NumericError("model subproblem: regularization constant must be positive", -1);
  }
  if (sp.H.rows() != sp.g.size() || sp.H.cols() != sp.g.size()) {
    throw DimensionError("model subproblem: g and H dimensions disagree");
  }
  require_finite(sp.g, "model subproblem g");
}

const EigenDecomposition<double>& decomposition(const ModelSubproblem& sp,
                                                std::optional<EigenDecomposition<double>>& local) {
  if (sp.evd) return *sp.evd;
  local = evd_symmetric(sp.H);
  return *local;
}

void require_convex(const EigenDecomposition<double>& evd) {
  const double lmin = evd.eigenvalues[0];
  const double scale = evd.eigenvalues.cwiseAbs().maxCoeff();
  if (lmin < -kIndefiniteTolerance * std::max(scale, 1.0)) {
    throw NumericError("model subproblem: H is indefinite (lambda_min = " + std::to_string(lmin) +
                           ")",
                       0);
  }
}

// w_i = ghat_i / (S_i + shift), denominators floored.
Vector shifted_solve(const Vector& S, const Vector& ghat, double shift) {
  Vector w(S.size());
  for (Eigen::Index i = 0; i < S.size(); ++i) {
    w[i] = ghat[i] / std::max(S[i] + shift, kDenominatorFloor);
  }
  return w;
}

double sum_cubed_ratio(const Vector& S, const Vector& ghat, double shift) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < S.size(); ++i) {
    const double den = std::max(S[i] + shift, kDenominatorFloor);
    acc += ghat[i] * ghat[i] / (den * den * den);
  }
  return acc;
}

}  // namespace

double model_value(const ModelSubproblem& sp, const Vector& h) {
  const double r = h.norm();
  const double reg = sp.reg_order == 3 ? sp.reg_const / 6.0 * r * r * r
                                       : sp.reg_const / 4.0 * r * r * r * r;
  return sp.g.dot(h) + 0.5 * h.dot(sp.H * h) + reg;
}

Vector model_gradient(const ModelSubproblem& sp, const Vector& h) {
  const double r = h.norm();
  const double coeff = sp.reg_order == 3 ? 0.5 * sp.reg_const * r : sp.reg_const * r * r;
  return sp.g + sp.H * h + coeff * h;
}

SubsolverResult solve_cubic_model(const ModelSubproblem& sp) {
  check_subproblem(sp, 3);
  const Eigen::Index d = sp.g.size();
  SubsolverResult out;
  if (sp.g.squaredNorm() == 0.0) {
    out.h = Vector::Zero(d);
    return out;
  }
  std::optional<EigenDecomposition<double>> local;
  const auto& evd = decomposition(sp, local);
  require_convex(evd);
  const Vector& S = evd.eigenvalues;
  const Vector ghat = evd.eigenvectors.transpose() * sp.g;
  const double M = sp.reg_const;

  // phi is strictly decreasing on (tau_lo, inf).
  auto phi = [&](double tau) { return shifted_solve(S, ghat, tau).norm() - 2.0 * tau / M; };
  auto phi_d = [&](double tau) -> std::pair<double, double> {
    ++out.inner_evals;
    const double wn = shifted_solve(S, ghat, tau).norm();
    const double f = wn - 2.0 * tau / M;
    const double df = (wn > 0.0 ? -sum_cubed_ratio(S, ghat, tau) / wn : 0.0) - 2.0 / M;
    return {f, df};
  };

  const double tau_lo = std::max(0.0, -S[0]);
  double tau = tau_lo;
  if (phi(tau_lo) > 0.0) {
    const double guess = std::sqrt(0.5 * M * sp.g.norm());
    const double tau_hi = grow_bracket_decreasing(phi, tau_lo, guess);
    tau = safeguarded_root(phi_d, tau_lo, tau_hi).root;
  }

  const Vector w = shifted_solve(S, ghat, tau);
  out.h = -(evd.eigenvectors * w);
  out.tau = tau;
  out.stationarity_residual = model_gradient(sp, out.h).norm();
  return out;
}

SubsolverResult solve_quartic_model(const ModelSubproblem& sp) {
  check_subproblem(sp, 4);
  const Eigen::Index d = sp.g.size();
  SubsolverResult out;
  if (sp.g.squaredNorm() == 0.0) {
    out.h = Vector::Zero(d);
    return out;
  }
  std::optional<EigenDecomposition<double>> local;
  const auto& evd = decomposition(sp, local);
  require_convex(evd);
  const Vector& S = evd.eigenvalues;
  const Vector ghat = evd.eigenvectors.transpose() * sp.g;
  const double c = std::sqrt(2.0 * sp.reg_const);

  // Derivative of the concave dual: (c/2)|v(tau)|^2 - tau, decreasing in tau.
  auto phi = [&](double tau) { return 0.5 * c * shifted_solve(S, ghat, c * tau).squaredNorm() - tau; };
  auto phi_d = [&](double tau) -> std::pair<double, double> {
    ++out.inner_evals;
    const double f = 0.5 * c * shifted_solve(S, ghat, c * tau).squaredNorm() - tau;
    const double df = -c * c * sum_cubed_ratio(S, ghat, c * tau) - 1.0;
    return {f, df};
  };

  const double tau_lo = std::max(0.0, -S[0] / c);
  double tau = tau_lo;
  if (phi(tau_lo) > 0.0) {
    const double guess = std::cbrt(sp.g.squaredNorm() / (2.0 * c));
    const double tau_hi = grow_bracket_decreasing(phi, tau_lo, guess);
    tau = safeguarded_root(phi_d, tau_lo, tau_hi).root;
  }

  const Vector w = shifted_solve(S, ghat, c * tau);
  out.h = -(evd.eigenvectors * w);
  out.tau = tau;
  out.stationarity_residual = model_gradient(sp, out.h).norm();
  return out;
}

SubsolverResult solve_model(const ModelSubproblem& sp) {
  switch (sp.reg_order) {
    case 3: return solve_cubic_model(sp);
    case 4: return solve_quartic_model(sp);
    default: throw Error("solve_model: regularization order must be 3 or 4");
  }
}

namespace {

InexactnessCertificate make_certificate(const Vector& model_grad, const Vector& grad_y,
                                        double gamma) {
  InexactnessCertificate cert;
  cert.gamma = gamma;
  cert.lhs = model_grad.norm();
  cert.rhs = gamma * grad_y.norm();
  cert.satisfied = cert.lhs <= cert.rhs;
  return cert;
}

}  // namespace

InexactnessCertificate certify_inexact(const Objective& f, const Vector& x, const Vector& y,
                                       double M, int p, double gamma) {
  if (p < 1 || p > 3) throw Error("certify_inexact: order must be 1, 2 or 3");
  if (!(M > 0.0)) throw NumericError("certify_inexact: M must be positive", -1);
  const Vector h = y - x;
  const double r = h.norm();
  Vector grad_model = f.gradient(x);
  double factorial = 1.0;
  if (p >= 2) {
    grad_model += f.hessian(x) * h;
    factorial = 2.0;
  }
  if (p >= 3) {
    grad_model += 0.5 * f.third_dir(x, h);
    factorial = 6.0;
  }
  grad_model += (M / factorial) * std::pow(r, p - 1) * h;
  return make_certificate(grad_model, f.gradient(y), gamma);
}

BdgmResult bdgm_solve(const Objective& f, const Vector& x, double M3, double gamma,
                      int max_iters) {
  if (!(M3 > 0.0)) throw NumericError("bdgm: M3 must be positive", -1);
  if (!(gamma >= 0.0 && gamma < 1.0)) throw NumericError("bdgm: gamma must lie in [0, 1)", -1);

  const Eigen::Index d = x.size();
  const Vector grad = f.gradient(x);
  BdgmResult out;
  out.h = Vector::Zero(d);
  if (grad.norm() <= 1e-14) {
    out.certificate = {gamma, 0.0, 0.0, true};
    return out;
  }

  // Quartic weight M3/24 = L/4 with L = M3/6.
  const double L = M3 / 6.0;
  const double c_grad = (2.0 - std::sqrt(2.0)) / 2.0;
  const double c_scale = std::sqrt(2.0) / 2.0;

  ModelSubproblem sp;
  sp.H = f.hessian(x);
  sp.reg_order = 4;
  sp.reg_const = L;
  sp.evd = evd_symmetric(sp.H);

  Vector h = Vector::Zero(d);
  Vector third = Vector::Zero(d);  // D3 f(x)[h]^2 at the current h
  double best_ratio = std::numeric_limits<double>::infinity();
  InexactnessCertificate best;

  for (int k = 1; k <= max_iters; ++k) {
    const Vector Hh = sp.H * h;
    sp.g = c_grad * (grad + 0.5 * third) - c_scale * (Hh + L * h.squaredNorm() * h);
    const SubsolverResult step = solve_quartic_model(sp);
    out.subsolver_evals += step.inner_evals;
    h = step.h;
    out.iters = k;

    third = f.third_dir(x, h);
    const Vector grad_model = grad + sp.H * h + 0.5 * third + L * h.squaredNorm() * h;
    const Vector y = x + h;
    const InexactnessCertificate cert = make_certificate(grad_model, f.gradient(y), gamma);
    if (cert.satisfied) {
      out.h = h;
      out.certificate = cert;
      return out;
    }
    const double ratio = cert.rhs > 0.0 ? cert.lhs / cert.rhs : std::numeric_limits<double>::infinity();
    if (ratio < best_ratio || k == 1) {
      best_ratio = ratio;
      best = cert;
    }
  }
  throw BdgmError("bdgm: no certified step within " + std::to_string(max_iters) +
                      " iterations (best |grad model| = " + std::to_string(best.lhs) +
                      ", gamma |grad f| = " + std::to_string(best.rhs) + ")",
                  best.lhs, best.rhs);
}

}  // namespace hotm
