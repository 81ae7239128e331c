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

#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include "hotm/methods.hpp"
#include "run_support.hpp"

namespace hotm {

using detail::factorial;
using detail::Recorder;

namespace {

void attach_certificate(TraceRecord& r, const TensorStep& step) {
  if (step.certificate) {
    r.cert_lhs = step.certificate->lhs;
    r.cert_rhs = step.certificate->rhs;
  }
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

RunTrace natm_run(const Objective& f, const Vector& x0, const MethodConfig& cfg) {
  validate(cfg);
  const int p = cfg.p;
  const double nu = cfg.nu_p.value_or(default_nu(p));
  RunTrace trace;
  Recorder rec(trace, cfg);

  EstimatingFunction psi(x0, p + 1);
  Vector x = x0;
  Vector v = x0;
  double A = 0.0;
  double fx = f.value(x);
  Vector g = f.gradient(x);
  TraceRecord& r0 = rec.push(0, x, fx, g.norm());
  r0.A = 0.0;

  for (int t = 0; t < cfg.max_iters; ++t) {
    if (g.norm() <= cfg.grad_tol) {
      rec.converged();
      return trace;
    }
    const double A_next = nu / cfg.M * std::pow(t + 1.0, p + 1);
    const double a = A_next - A;
    const Vector y = (A * x + a * v) / A_next;
    TensorStep step;
    try {
      step = tensor_step(f, y, p, cfg.M, cfg.gamma, cfg.bdgm_max_iters);
    } catch (const Error& e) {
      rec.fail(t + 1, e.what());
      return trace;
    }
    const Vector prev = std::exchange(x, std::move(step.x));
    fx = f.value(x);
    g = f.gradient(x);
    psi.add(a, fx, g, x);
    v = psi_argmin(psi);
    A = A_next;

    TraceRecord& r = rec.push(t + 1, x, fx, g.norm(), &prev);
    r.A = A;
    r.a = a;
    r.psi_min = psi.value(v);
    r.psi_min_closed = psi.min_value();
    r.inner_iters = step.inner_iters;
    r.subsolver_evals = step.subsolver_evals;
    attach_certificate(r, step);
  }
  if (g.norm() <= cfg.grad_tol) rec.converged();
  return trace;
}

RunTrace nata_run(const Objective& f, const Vector& x0, const MethodConfig& cfg) {
  validate(cfg);
  const int p = cfg.p;
  const double nu_min = cfg.nu_p.value_or(default_nu(p));
  const double nu_max = cfg.nu_max.value_or(100.0 * nu_min);
  double nu_t = cfg.nu0.value_or(nu_max);
  RunTrace trace;
  Recorder rec(trace, cfg);

  EstimatingFunction psi(x0, p + 1);
  Vector x = x0;
  Vector v = x0;
  double A = 0.0;
  double fx = f.value(x);
  Vector g = f.gradient(x);
  TraceRecord& r0 = rec.push(0, x, fx, g.norm());
  r0.A = 0.0;
  r0.nu = nu_t;

  for (int t = 0; t < cfg.max_iters; ++t) {
    if (g.norm() <= cfg.grad_tol) {
      rec.converged();
      return trace;
    }
    const double growth = std::pow(t + 1.0, p + 1) - std::pow(static_cast<double>(t), p + 1);
    double nu = nu_t * cfg.theta;
    int attempts = 0;
    int evals = 0;
    double a = 0.0;
    double A_next = 0.0;
    double psi_v = 0.0;
    double fx_new = 0.0;
    Vector x_new;
    Vector g_new;
    std::optional<EstimatingFunction> accepted;
    TensorStep step;
    while (true) {
      nu = std::max(nu / cfg.theta, nu_min);
      ++attempts;
      a = nu / cfg.M * growth;
      A_next = A + a;
      const Vector y = (A * x + a * v) / A_next;
      try {
        step = tensor_step(f, y, p, cfg.M, cfg.gamma, cfg.bdgm_max_iters);
      } catch (const Error& e) {
        rec.fail(t + 1, e.what());
        return trace;
      }
      evals += step.subsolver_evals;
      x_new = step.x;
      fx_new = f.value(x_new);
      g_new = f.gradient(x_new);
      EstimatingFunction trial = psi;
      trial.add(a, fx_new, g_new, x_new);
      psi_v = trial.value(psi_argmin(trial));
      if (psi_v >= A_next * fx_new) {
        accepted = std::move(trial);
        break;
      }
      if (nu <= nu_min) {
        rec.fail(t + 1, "acceptance test fails at nu_min (psi(v) = " + fmt(psi_v) +
                            ", A f(x) = " + fmt(A_next * fx_new) + ")");
        return trace;
      }
    }
    psi = std::move(*accepted);
    v = psi_argmin(psi);
    A = A_next;
    const Vector prev = std::exchange(x, std::move(x_new));
    fx = fx_new;
    g = std::move(g_new);

    TraceRecord& r = rec.push(t + 1, x, fx, g.norm(), &prev);
    r.A = A;
    r.a = a;
    r.nu = nu;
    r.psi_min = psi_v;
    r.psi_min_closed = psi.min_value();
    r.inner_iters = attempts;
    r.subsolver_evals = evals;
    attach_certificate(r, step);
    nu_t = std::min(nu * cfg.theta, nu_max);
  }
  if (g.norm() <= cfg.grad_tol) rec.converged();
  return trace;
}

RunTrace near_optimal_run(const Objective& f, const Vector& x0, const MethodConfig& cfg) {
  validate(cfg);
  const int p = cfg.p;
  const double fact = factorial(p - 1);
  const double lo_target = 0.5;
  const double hi_target = p / (p + 1.0);
  RunTrace trace;
  Recorder rec(trace, cfg);

  Vector x = x0;
  Vector v = x0;
  double A = 0.0;
  double fx = f.value(x);
  Vector g = f.gradient(x);
  TraceRecord& r0 = rec.push(0, x, fx, g.norm());
  r0.A = 0.0;
  Vector best = x;
  double best_f = fx;

  auto finish = [&]() -> RunTrace {
    trace.solution = best;
    return std::move(trace);
  };

  for (int t = 0; t < cfg.max_iters; ++t) {
    if (g.norm() <= cfg.grad_tol) {
      rec.converged();
      return finish();
    }
    TensorStep step;
    Vector y;
    double r = 0.0;
    double lambda = 0.0;
    int probes = 0;
    int evals = 0;
    try {
      if (A == 0.0) {
        // y does not depend on theta, so the pair condition fixes lambda directly.
        y = x;
        step = tensor_step(f, y, p, cfg.M, cfg.gamma, cfg.bdgm_max_iters);
        probes = 1;
        evals = step.subsolver_evals;
        r = (step.x - y).norm();
        if (r > 0.0) {
          lambda = 0.5 * (lo_target + hi_target) * fact / (cfg.M * std::pow(r, p - 1));
        }
      } else {
        double lo = 0.0;
        double hi = 1.0;
        double theta = 0.5;
        bool found = false;
        for (probes = 1; probes <= cfg.bisect_max; ++probes) {
          y = theta * x + (1.0 - theta) * v;
          step = tensor_step(f, y, p, cfg.M, cfg.gamma, cfg.bdgm_max_iters);
          evals += step.subsolver_evals;
          r = (step.x - y).norm();
          const double zeta =
              (1.0 - theta) * (1.0 - theta) / theta * A * cfg.M * std::pow(r, p - 1) / fact;
          if (r == 0.0 || (zeta >= lo_target && zeta <= hi_target)) {
            lambda = (1.0 - theta) * (1.0 - theta) * A / theta;
            found = true;
            break;
          }
          if (zeta > hi_target) {
            lo = theta;
          } else {
            hi = theta;
          }
          theta = 0.5 * (lo + hi);
        }
        if (!found) {
          rec.fail(t + 1, "theta bisection exhausted " + std::to_string(cfg.bisect_max) +
                              " halvings, bracket [" + fmt(lo) + ", " + fmt(hi) + "]");
          return finish();
        }
        probes = std::min(probes, cfg.bisect_max);
      }
    } catch (const Error& e) {
      rec.fail(t + 1, e.what());
      return finish();
    }

    const Vector prev = std::exchange(x, std::move(step.x));
    fx = f.value(x);
    g = f.gradient(x);
    if (r == 0.0) {
      // y is stationary; the step cannot move.
      TraceRecord& rr = rec.push(t + 1, x, fx, g.norm(), &prev);
      rr.A = A;
      rr.inner_iters = probes;
      rr.subsolver_evals = evals;
      if (fx < best_f) {
        best_f = fx;
        best = x;
      }
      rec.converged();
      return finish();
    }
    const double a = 0.5 * (lambda + std::sqrt(lambda * lambda + 4.0 * lambda * A));
    A += a;
    v -= a * g;

    TraceRecord& rr = rec.push(t + 1, x, fx, g.norm(), &prev);
    rr.A = A;
    rr.a = a;
    rr.lambda = lambda;
    rr.pair_value = lambda * cfg.M * std::pow(r, p - 1) / fact;
    rr.inner_iters = probes;
    rr.subsolver_evals = evals;
    attach_certificate(rr, step);
    if (fx < best_f) {
      best_f = fx;
      best = x;
    }
  }
  if (g.norm() <= cfg.grad_tol) rec.converged();
  return finish();
}

namespace {

struct ProxPoint {
  Vector w;
  double fw = 0.0;
  Vector gw;
  int steps = 0;
  int evals = 0;
};

// A point of A^gamma_{p,H}(y): repeated tensor steps on f + H/(p+1)|x - y|^{p+1}.
ProxPoint inexact_prox(const Objective& f, const Vector& y, const MethodConfig& cfg, double H,
                       double M_comp) {
  const ProxObjective F(f, y, cfg.p, H);
  ProxPoint out;
  out.w = y;
  for (;;) {
    out.gw = f.gradient(out.w);
    const double lhs = F.gradient(out.w).norm();
    // Below grad_tol the relative test is lost in rounding; w is already a solution.
    if (lhs <= cfg.gamma * out.gw.norm() || out.gw.norm() <= cfg.grad_tol) break;
    if (out.steps == cfg.prox_max_steps) {
      throw Error("inexact proximal point not reached within " +
                  std::to_string(cfg.prox_max_steps) + " steps (|grad F| = " + fmt(lhs) +
                  ", gamma |grad f| = " + fmt(cfg.gamma * out.gw.norm()) + ")");
    }
    const TensorStep step = tensor_step(F, out.w, cfg.p, M_comp, cfg.gamma, cfg.bdgm_max_iters);
    out.w = step.x;
    out.evals += step.subsolver_evals;
    ++out.steps;
  }
  out.fw = f.value(out.w);
  return out;
}

}  // namespace

RunTrace ppss_run(const Objective& f, const Vector& x0, const MethodConfig& cfg) {
  validate(cfg);
  const int p = cfg.p;
  const double L = cfg.L.value_or(cfg.M);
  const double H = cfg.H.value_or(L);
  const double M_comp = cfg.M + cfg.M / L * factorial(p) * H;
  const double scale = 0.5 * std::pow((1.0 - cfg.gamma) / H, 1.0 / p);
  const double q = (p + 1.0) / p;
  RunTrace trace;
  Recorder rec(trace, cfg);

  EstimatingFunction psi(x0, 2);
  Vector x = x0;
  Vector v = x0;
  double fx = f.value(x);
  Vector g = f.gradient(x);
  TraceRecord& r0 = rec.push(0, x, fx, g.norm());
  r0.A = 0.0;

  for (int t = 0; t < cfg.max_iters; ++t) {
    if (g.norm() <= cfg.grad_tol) {
      rec.converged();
      return trace;
    }
    const Vector u = v - x;
    int probes = 0;
    int evals = 0;
    Vector x_new;
    double g_t = 0.0;
    // Pieces of phi_t: weights with (f, grad, point).
    struct Piece {
      double w;
      double f;
      Vector g;
      Vector x;
    };
    std::vector<Piece> pieces;
    try {
      ProxPoint p0 = inexact_prox(f, x, cfg, H, M_comp);
      ++probes;
      evals += p0.evals;
      if (p0.gw.dot(u) >= 0.0) {
        g_t = p0.gw.norm();
        x_new = p0.w;
        pieces.push_back({1.0, p0.fw, p0.gw, p0.w});
      } else {
        ProxPoint p1 = inexact_prox(f, v, cfg, H, M_comp);
        ++probes;
        evals += p1.evals;
        if (p1.gw.dot(u) <= 0.0) {
          g_t = p1.gw.norm();
          x_new = p1.w;
          pieces.push_back({1.0, p1.fw, p1.gw, p1.w});
        } else {
          double tau1 = 0.0;
          double tau2 = 1.0;
          ProxPoint w1 = std::move(p0);
          ProxPoint w2 = std::move(p1);
          double alpha = 0.0;
          for (;;) {
            const double b1 = w1.gw.dot(u);
            const double b2 = w2.gw.dot(u);
            alpha = b2 / (b2 - b1);
            g_t = std::pow(alpha * std::pow(w1.gw.norm(), q) +
                               (1.0 - alpha) * std::pow(w2.gw.norm(), q),
                           1.0 / q);
            if (alpha * (tau1 - tau2) * b1 <= scale * std::pow(g_t, q)) break;
            if (probes >= cfg.segment_max_probes) {
              throw Error("segment search exhausted " + std::to_string(cfg.segment_max_probes) +
                          " probes, tau bracket [" + fmt(tau1) + ", " + fmt(tau2) + "]");
            }
            const double tau = 0.5 * (tau1 + tau2);
            ProxPoint mid = inexact_prox(f, x + tau * u, cfg, H, M_comp);
            ++probes;
            evals += mid.evals;
            if (mid.gw.dot(u) <= 0.0) {
              tau1 = tau;
              w1 = std::move(mid);
            } else {
              tau2 = tau;
              w2 = std::move(mid);
            }
          }
          x_new = alpha * w1.w + (1.0 - alpha) * w2.w;
          pieces.push_back({alpha, w1.fw, w1.gw, w1.w});
          pieces.push_back({1.0 - alpha, w2.fw, w2.gw, w2.w});
        }
      }
    } catch (const Error& e) {
      rec.fail(t + 1, e.what());
      return trace;
    }

    const double A = psi.A();
    const double kappa = scale * std::pow(g_t, (1.0 - p) / static_cast<double>(p));
    const double a = 0.5 * (kappa + std::sqrt(kappa * kappa + 4.0 * kappa * A));
    for (const Piece& piece : pieces) psi.add(a * piece.w, piece.f, piece.g, piece.x);
    v = psi_argmin(psi);

    const Vector prev = std::exchange(x, std::move(x_new));
    fx = f.value(x);
    g = f.gradient(x);
    TraceRecord& r = rec.push(t + 1, x, fx, g.norm(), &prev);
    r.A = psi.A();
    r.a = a;
    r.psi_min = psi.value(v);
    r.psi_min_closed = psi.min_value();
    r.inner_iters = probes;
    r.subsolver_evals = evals;
  }
  if (g.norm() <= cfg.grad_tol) rec.converged();
  return trace;
}

RunTrace optimal_run(const Objective& f, const Vector& x0, const MethodConfig& cfg) {
  validate(cfg);
  const int p = cfg.p;
  const double fact = factorial(p - 1);
  const double L = cfg.L.value_or(cfg.M);
  const double R = cfg.R.value_or(x0.norm() + 1.0);
  const double nu = cfg.nu_opt.value_or(optimal_default_nu(p, cfg.M, L, cfg.sigma, R));
  RunTrace trace;
  Recorder rec(trace, cfg);

  Vector x = x0;
  Vector v = x0;
  double A = 0.0;
  double fx = f.value(x);
  Vector g = f.gradient(x);
  TraceRecord& r0 = rec.push(0, x, fx, g.norm());
  r0.A = 0.0;

  for (int t = 0; t < cfg.max_iters; ++t) {
    if (g.norm() <= cfg.grad_tol) {
      rec.converged();
      return trace;
    }
    const double a = nu * std::pow(t + 1.0, 0.5 * (3 * p - 1));
    const double A_next = A + a;
    const double lambda = a * a / A_next;
    const Vector y = (A * x + a * v) / A_next;
    const ShiftedObjective G(f, y, lambda);

    Vector yk = y;
    Vector xk;
    double lhs = 0.0;
    double rhs = 0.0;
    int k = 0;
    int evals = 0;
    bool done = false;
    try {
      while (k < cfg.inner_max) {
        const TensorStep step = tensor_step(G, yk, p, p * cfg.M, cfg.gamma, cfg.bdgm_max_iters);
        ++k;
        evals += step.subsolver_evals;
        xk = step.x;
        const Vector gg = G.gradient(xk);
        lhs = gg.norm();
        rhs = cfg.sigma / lambda * (xk - y).norm();
        if (lhs <= rhs) {
          done = true;
          break;
        }
        const double r = (xk - yk).norm();
        if (r == 0.0) break;
        yk -= fact / (cfg.M * std::pow(r, p - 1)) * gg;
      }
    } catch (const Error& e) {
      rec.fail(t + 1, e.what());
      return trace;
    }
    if (!done) {
      rec.fail(t + 1, "extragradient loop did not meet the sigma test within " +
                          std::to_string(cfg.inner_max) + " steps (last ratio " +
                          fmt(rhs > 0.0 ? lhs / rhs : std::numeric_limits<double>::infinity()) +
                          ")");
      return trace;
    }

    const Vector prev = std::exchange(x, std::move(xk));
    fx = f.value(x);
    g = f.gradient(x);
    v -= a * g;
    A = A_next;

    TraceRecord& r = rec.push(t + 1, x, fx, g.norm(), &prev);
    r.A = A;
    r.a = a;
    r.lambda = lambda;
    r.sigma_lhs = lhs;
    r.sigma_rhs = rhs;
    r.inner_iters = k;
    r.subsolver_evals = evals;
  }
  if (g.norm() <= cfg.grad_tol) rec.converged();
  return trace;
}

}  // namespace hotm
