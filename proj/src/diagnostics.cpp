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

#include "hotm/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hotm/roots.hpp"

namespace hotm {
namespace {

double factorial(int n) {
  double out = 1.0;
  for (int i = 2; i <= n; ++i) out *= i;
  return out;
}

class CheckBuilder {
 public:
  explicit CheckBuilder(std::string name) {
    r_.name = std::move(name);
    r_.worst_margin = -std::numeric_limits<double>::infinity();
  }

  void test(int iter, double lhs, double rhs, double slack) {
    ++r_.checked;
    const double margin = lhs - rhs;
    if (margin > r_.worst_margin || r_.worst_iter < 0) {
      r_.worst_margin = margin;
      r_.worst_iter = iter;
    }
    if (!(margin <= slack)) r_.violations.push_back({iter, lhs, rhs});
  }

  CheckResult done(std::string note = {}) {
    if (r_.checked == 0) {
      r_.status = CheckStatus::kSkipped;
      r_.worst_margin = 0.0;
    } else {
      r_.status = r_.violations.empty() ? CheckStatus::kPass : CheckStatus::kFail;
    }
    r_.note = std::move(note);
    return std::move(r_);
  }

 private:
  CheckResult r_;
};

CheckResult skipped(std::string name, std::string note) {
  CheckBuilder b(std::move(name));
  return b.done(std::move(note));
}

bool is_basic(const std::string& method) {
  return method == "gd" || method == "crn" || method == "btm";
}

}  // namespace

double alpha_star(double z, int p) {
  if (!(z > 0.0) || !std::isfinite(z)) throw Error("alpha_star: z must be positive and finite");
  if (p < 1) throw Error("alpha_star: p must be positive");
  auto fdf = [&](double a) -> std::pair<double, double> {
    const double ap1 = std::pow(a, p - 1);
    return {ap1 * a * z + a - 1.0, p * ap1 * z + 1.0};
  };
  const double hi = std::min(1.0, std::pow(z, -1.0 / p));
  return safeguarded_root(fdf, 0.0, hi, RootOptions{200, 1e-15}).root;
}

double alpha_low(double mu, double M, double L, double D, int p, int q) {
  const double inner = factorial(p + 1) * mu / (q * (M + L) * std::pow(D, p - q + 1));
  return std::min(0.5, 0.5 * std::pow(inner, 1.0 / p));
}

double kappa_t(double x_dist, double mu, double M, double L, int p, int q) {
  return q * (M + L) * std::pow(x_dist, p - q + 1) / (factorial(p + 1) * mu);
}

double kappa_sl(int t, double gap0, double mu, double M, double L, int p, int q,
                double alpha_low_value) {
  const double e = (q + 1.0) / q;
  return (M + L) * std::pow(q, e) / (factorial(p + 1) * std::pow(mu, e)) *
         std::pow(1.0 - alpha_low_value, static_cast<double>(t) / q) * std::pow(gap0, 1.0 / q);
}

double gap_noise_floor(double fstar) {
  return 10.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(fstar));
}

RateDiagnostics rate_series(const RunTrace& trace, double fstar) {
  RateDiagnostics out;
  if (trace.records.empty()) return out;
  const double floor = gap_noise_floor(fstar);
  double fmin = std::numeric_limits<double>::infinity();
  for (const auto& r : trace.records) fmin = std::min(fmin, r.f);
  if (fstar > fmin + floor) {
    throw Error("rate_series: fstar exceeds the smallest recorded f; bad hint");
  }
  for (const auto& r : trace.records) {
    const double gap = r.f - fstar;
    if (!(gap > floor)) break;
    out.gaps.push_back(gap);
  }
  out.truncated_at = out.gaps.size();
  for (std::size_t i = 0; i + 1 < out.gaps.size(); ++i) {
    out.alpha.push_back(1.0 - out.gaps[i + 1] / out.gaps[i]);
  }
  return out;
}

bool nondecreasing_tail(const std::vector<double>& alpha, std::size_t window, double slack) {
  const std::size_t n = alpha.size();
  const std::size_t start = n > window ? n - window : 0;
  for (std::size_t i = start; i + 1 < n; ++i) {
    if (alpha[i + 1] < alpha[i] - slack) return false;
  }
  return true;
}

std::string to_string(CheckStatus status) {
  switch (status) {
    case CheckStatus::kPass: return "pass";
    case CheckStatus::kFail: return "fail";
    case CheckStatus::kSkipped: return "skipped";
  }
  return "fail";
}

bool DiagnosticsReport::passed() const {
  return std::none_of(checks.begin(), checks.end(),
                      [](const CheckResult& c) { return c.status == CheckStatus::kFail; });
}

const CheckResult* DiagnosticsReport::find(const std::string& name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

void DiagnosticsReport::append(const DiagnosticsReport& other) {
  checks.insert(checks.end(), other.checks.begin(), other.checks.end());
}

nlohmann::json to_json(const DiagnosticsReport& report) {
  nlohmann::json checks = nlohmann::json::array();
  for (const auto& c : report.checks) {
    nlohmann::json v = nlohmann::json::array();
    for (const auto& x : c.violations) v.push_back({{"iter", x.iter}, {"lhs", x.lhs}, {"rhs", x.rhs}});
    nlohmann::json j = {{"name", c.name},
                        {"status", to_string(c.status)},
                        {"checked", c.checked},
                        {"violations", v}};
    if (c.status != CheckStatus::kSkipped) {
      j["worst_margin"] = c.worst_margin;
      j["worst_iter"] = c.worst_iter;
    }
    if (!c.note.empty()) j["note"] = c.note;
    checks.push_back(std::move(j));
  }
  return {{"passed", report.passed()}, {"checks", checks}};
}

DiagnosticsReport verify_theorem1(const RunTrace& trace, const TheoremInputs& in) {
  if (!(in.mu > 0.0)) throw Error("verify_theorem1: needs mu > 0");
  DiagnosticsReport report;
  const auto& recs = trace.records;
  const std::size_t n = recs.size();
  auto slack = [](double gap) { return 1e-12 * std::max(1.0, std::abs(gap)); };

  const bool have_x = in.xstar && trace.iterates.size() == n;
  if (have_x) {
    CheckBuilder contraction("contraction");
    CheckBuilder growth("growth");
    for (std::size_t t = 0; t < n; ++t) {
      const double gap = recs[t].f - in.fstar;
      const double dist = (trace.iterates[t] - *in.xstar).norm();
      growth.test(recs[t].iter, in.mu / in.q * std::pow(dist, in.q), gap, slack(gap));
      if (t + 1 < n) {
        const double z = kappa_t(dist, in.mu, in.M, in.L, in.p, in.q);
        const double a = z > 0.0 ? alpha_star(z, in.p) : 1.0;
        contraction.test(recs[t + 1].iter, recs[t + 1].f - in.fstar, (1.0 - a) * gap, slack(gap));
      }
    }
    report.checks.push_back(contraction.done());
    report.checks.push_back(growth.done());
  } else {
    const std::string why = in.xstar ? "trace has no iterates" : "no xstar";
    report.checks.push_back(skipped("contraction", why));
    report.checks.push_back(skipped("growth", why));
  }

  CheckBuilder aggregated("aggregated");
  const double gap0 = n ? recs[0].f - in.fstar : 0.0;
  if (gap0 > 0.0) {
    const double D = std::pow(in.q * gap0 / in.mu, 1.0 / in.q);
    const double low = alpha_low(in.mu, in.M, in.L, D, in.p, in.q);
    double product = 1.0;
    for (std::size_t T = 1; T < n; ++T) {
      // kappa_t at the growth bound on |x_t - x*|; equals kappa_sl when p == q.
      const double dist =
          std::pow(in.q / in.mu * std::pow(1.0 - low, static_cast<double>(T)) * gap0, 1.0 / in.q);
      const double z = kappa_t(dist, in.mu, in.M, in.L, in.p, in.q);
      product *= 1.0 - (z > 0.0 ? alpha_star(z, in.p) : 1.0);
      const double gap = recs[T].f - in.fstar;
      aggregated.test(recs[T].iter, gap, gap0 * product, slack(gap));
    }
  }
  report.checks.push_back(aggregated.done(gap0 > 0.0 ? "" : "initial gap is not positive"));
  return report;
}

DiagnosticsReport verify_contracts(const RunTrace& trace, const ContractInputs& in) {
  DiagnosticsReport report;
  const auto& recs = trace.records;
  const std::string& m = trace.method;
  const int p = trace.p;

  if (is_basic(m)) {
    CheckBuilder b("monotone");
    for (std::size_t t = 1; t < recs.size(); ++t) {
      b.test(recs[t].iter, recs[t].f, recs[t - 1].f, 1e-12 * std::max(1.0, std::abs(recs[t - 1].f)));
    }
    report.checks.push_back(b.done());
  }

  {
    CheckBuilder b("certificate");
    for (const auto& r : recs) {
      if (r.cert_lhs && r.cert_rhs) b.test(r.iter, *r.cert_lhs, *r.cert_rhs, 0.0);
    }
    if (p == 3) report.checks.push_back(b.done());
  }

  if (m == "natm" || m == "nata" || m == "ppss") {
    CheckBuilder b("psi_reproducible");
    for (const auto& r : recs) {
      if (r.psi_min && r.psi_min_closed) {
        b.test(r.iter, std::abs(*r.psi_min - *r.psi_min_closed), 0.0,
               1e-9 * std::max(1.0, std::abs(*r.psi_min)));
      }
    }
    report.checks.push_back(b.done());
  }

  if (m == "nata") {
    CheckBuilder inv("nata_invariant");
    CheckBuilder floor("nata_schedule_floor");
    for (const auto& r : recs) {
      if (r.iter == 0 || !r.A || !r.psi_min) continue;
      inv.test(r.iter, *r.A * r.f, *r.psi_min, 0.0);
      if (in.nu_p) {
        const double bound = *in.nu_p / trace.M * std::pow(static_cast<double>(r.iter), p + 1);
        floor.test(r.iter, bound, *r.A, 1e-12 * bound);
      }
    }
    report.checks.push_back(inv.done());
    report.checks.push_back(in.nu_p ? floor.done() : skipped("nata_schedule_floor", "no nu_p"));
  }

  if (m == "near_optimal") {
    CheckBuilder b("pair_bracket");
    for (const auto& r : recs) {
      if (!r.pair_value) continue;
      b.test(r.iter, 0.5, *r.pair_value, 0.0);
      b.test(r.iter, *r.pair_value, p / (p + 1.0), 0.0);
    }
    report.checks.push_back(b.done());
  }

  if (m == "near_optimal" || m == "optimal") {
    CheckBuilder b("lambda_identity");
    for (const auto& r : recs) {
      if (!r.lambda || !r.a || !r.A) continue;
      b.test(r.iter, std::abs(*r.lambda - *r.a * *r.a / *r.A), 0.0,
             in.lambda_tol * std::max(1.0, *r.lambda));
    }
    report.checks.push_back(b.done());
  }

  if (m == "optimal") {
    CheckBuilder b("sigma_test");
    for (const auto& r : recs) {
      if (r.sigma_lhs && r.sigma_rhs) b.test(r.iter, *r.sigma_lhs, *r.sigma_rhs, 0.0);
    }
    report.checks.push_back(b.done());
  }

  if (m == "natm") {
    if (in.fstar && in.xstar && in.x0) {
      CheckBuilder b("natm_gap_bound");
      const double R = std::pow((*in.xstar - *in.x0).norm(), p + 1);
      for (const auto& r : recs) {
        if (r.iter < 1 || !r.A || !(*r.A > 0.0)) continue;
        const double bound = R / ((p + 1) * *r.A);
        b.test(r.iter, r.f - *in.fstar, bound, 1e-10 * bound);
      }
      report.checks.push_back(b.done());
    } else {
      report.checks.push_back(skipped("natm_gap_bound", "needs fstar, xstar and x0"));
    }
  }
  return report;
}

}  // namespace hotm
