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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "hotm/benchmark.hpp"
#include "hotm/diagnostics.hpp"
#include "hotm/methods.hpp"
#include "oracles.hpp"

using namespace hotm;
namespace ht = hotm::testing;

namespace {

RunTrace trace_from_values(std::initializer_list<double> fs) {
  RunTrace t;
  t.method = "crn";
  t.p = 2;
  t.M = 1.0;
  int i = 0;
  for (double f : fs) {
    TraceRecord r;
    r.iter = i++;
    r.f = f;
    t.records.push_back(r);
  }
  return t;
}

std::vector<double> log_uniform(std::uint64_t seed, int n, double lo, double hi) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  std::vector<double> z(n);
  for (auto& v : z) v = std::exp(u(rng));
  return z;
}

}  // namespace

TEST_CASE("alpha_star") {
  CHECK(alpha_star(2.0, 2) == doctest::Approx(0.5).epsilon(1e-15));
  const double cubic_root = ht::bisect([](double a) { return a * a * a + a - 1.0; }, 0.0, 1.0);
  CHECK(alpha_star(1.0, 3) == doctest::Approx(cubic_root).epsilon(1e-13));
  CHECK(alpha_star(1.0, 3) == doctest::Approx(0.68233).epsilon(1e-5));
  CHECK(alpha_star(1e-12, 2) == doctest::Approx(1.0).epsilon(1e-11));
  CHECK_THROWS(alpha_star(0.0, 2));
  CHECK_THROWS(alpha_star(-1.0, 3));
}

TEST_CASE("Lemma 1 bounds, monotonicity and closed form") {
  for (int p : {2, 3}) {
    std::vector<double> z = log_uniform(100 + p, 1000, 1e-6, 1e6);
    std::sort(z.begin(), z.end());
    double prev = 2.0;
    for (double zi : z) {
      const double a = alpha_star(zi, p);
      CAPTURE(zi);
      CAPTURE(p);
      const double s = std::pow(zi, -1.0 / p);
      CHECK(a < std::min(1.0, s));
      CHECK(a > std::min(0.5, 0.5 * s));
      if (zi <= 1.0) {
        CHECK(1.0 - zi / (p + 1) >= a);
        CHECK(a >= 1.0 - zi);
      }
      CHECK(a < prev);
      prev = a;
      CHECK(std::abs(std::pow(a, p) * zi + a - 1.0) <= 1e-10);
      if (p == 2) CHECK(std::abs(a - (-1.0 + std::sqrt(1.0 + 4.0 * zi)) / (2.0 * zi)) <= 1e-10);
    }
  }
}

TEST_CASE("alpha_low") {
  CHECK(alpha_low(1.0, 2.0, 1.0, 1.0, 2, 2) == doctest::Approx(0.5));
  CHECK(alpha_low(24.0, 12.0, 12.0, 1.0, 3, 2) == doctest::Approx(0.5));
  const double tiny = alpha_low(1e-12, 2.0, 1.0, 1.0, 2, 2);
  CHECK(tiny > 0.0);
  CHECK(tiny < 1e-5);
  CHECK(tiny == doctest::Approx(std::sqrt(3e-12 / 12.0)).epsilon(1e-12));
}

TEST_CASE("kappa_t") {
  CHECK(kappa_t(1.0, 1.0, 2.0, 1.0, 2, 2) == doctest::Approx(1.0));
  CHECK(kappa_t(0.0, 1.0, 2.0, 1.0, 2, 2) == 0.0);
  CHECK(kappa_t(2.0, 1.0, 2.0, 1.0, 2, 2) == doctest::Approx(2.0));
  CHECK(kappa_t(1.0, 0.5, 3.0, 1.0, 3, 2) == doctest::Approx(2.0 * 4.0 / (24.0 * 0.5)));
}

TEST_CASE("kappa_sl") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.1, 3.0);
  for (int k = 0; k < 5; ++k) {
    const double mu = u(rng), M = u(rng), L = u(rng), gap0 = u(rng), low = 0.2 * u(rng) / 3.0;
    const double main_text = (M + L) * std::sqrt(2.0) / (3.0 * std::pow(mu, 1.5)) * std::sqrt(gap0);
    CHECK(kappa_sl(0, gap0, mu, M, L, 2, 2, low) == doctest::Approx(main_text).epsilon(1e-12));
  }
  double prev = kappa_sl(0, 1.0, 0.1, 1.0, 1.0, 2, 2, 0.3);
  for (int t = 1; t < 30; ++t) {
    const double next = kappa_sl(t, 1.0, 0.1, 1.0, 1.0, 2, 2, 0.3);
    CHECK(next < prev);
    CHECK(next / prev == doctest::Approx(std::sqrt(0.7)).epsilon(1e-12));
    prev = next;
  }
}

TEST_CASE("rate_series") {
  SUBCASE("arithmetic") {
    const RateDiagnostics r = rate_series(trace_from_values({1.0, 0.5, 0.125}), 0.0);
    REQUIRE(r.alpha.size() == 2);
    CHECK(r.alpha[0] == doctest::Approx(0.5));
    CHECK(r.alpha[1] == doctest::Approx(0.75));
  }
  SUBCASE("constant gap") {
    const RateDiagnostics r = rate_series(trace_from_values({2.0, 2.0, 2.0, 2.0}), 1.0);
    REQUIRE(r.alpha.size() == 3);
    for (double a : r.alpha) CHECK(a == 0.0);
  }
  SUBCASE("truncates at the optimum") {
    const RateDiagnostics r = rate_series(trace_from_values({1.0, 0.5, 0.0, 0.0}), 0.0);
    CHECK(r.truncated_at == 2);
    CHECK(r.alpha.size() == 1);
  }
  SUBCASE("bad hint") { CHECK_THROWS(rate_series(trace_from_values({1.0, 0.5}), 0.7)); }
  SUBCASE("nondecreasing tail") {
    CHECK(nondecreasing_tail({0.1, 0.5, 0.4, 0.6, 0.7}, 3, 0.0));
    CHECK_FALSE(nondecreasing_tail({0.1, 0.5, 0.4, 0.6, 0.7}, 4, 0.0));
    CHECK(nondecreasing_tail({0.1, 0.5, 0.4, 0.6, 0.7}, 4, 0.2));
  }
}

TEST_CASE("theorem checks on cubic Newton") {
  const ProblemOracle f =
      ProblemOracle::logistic(synth_instance(SynthKind::kLogistic, 1000, 20, 1), 1e-3);
  const Vector x0 = Vector::Constant(20, 3.0);
  const FstarEstimate ref = estimate_fstar(f, x0, 0.1, 500, 1e-13);
  REQUIRE(ref.grad_norm <= 1e-13);

  MethodConfig c;
  c.method = MethodKind::kCrn;
  c.M = 0.1;
  c.max_iters = 30;
  c.keep_iterates = true;
  const RunTrace t = basic_run(f, x0, c);

  TheoremInputs in;
  in.mu = 1e-3;
  in.M = 0.1;
  in.L = 0.1;
  in.fstar = ref.fstar;
  in.xstar = ref.xstar;
  const DiagnosticsReport report = verify_theorem1(t, in);
  for (const char* name : {"contraction", "aggregated", "growth"}) {
    const CheckResult* r = report.find(name);
    REQUIRE(r != nullptr);
    CAPTURE(name);
    CHECK(r->status == CheckStatus::kPass);
    CHECK(r->violations.empty());
    CHECK(r->checked > 0);
  }
  const RateDiagnostics rates = rate_series(t, ref.fstar);
  CHECK(nondecreasing_tail(rates.alpha, 10, 1e-3));

  SUBCASE("without xstar the distance checks are skipped") {
    TheoremInputs no_x = in;
    no_x.xstar.reset();
    const DiagnosticsReport r = verify_theorem1(t, no_x);
    CHECK(r.find("contraction")->status == CheckStatus::kSkipped);
    CHECK(r.find("growth")->status == CheckStatus::kSkipped);
    CHECK(r.find("aggregated")->status == CheckStatus::kPass);
  }
  SUBCASE("a corrupted trace is flagged") {
    RunTrace bad = t;
    bad.records[3].f = bad.records[2].f;  // no progress at all
    bad.iterates[3] = bad.iterates[2];
    const DiagnosticsReport r = verify_theorem1(bad, in);
    CHECK(r.find("contraction")->status == CheckStatus::kFail);
    CHECK_FALSE(r.passed());
  }
}

TEST_CASE("theorem checks at the optimum are vacuous") {
  RunTrace t = trace_from_values({-1.0, -1.0, -1.0});
  for (int i = 0; i < 3; ++i) t.iterates.push_back(Vector::Zero(2));
  TheoremInputs in;
  in.mu = 1.0;
  in.M = 1.0;
  in.L = 1.0;
  in.fstar = -1.0;
  in.xstar = Vector::Zero(2);
  const DiagnosticsReport r = verify_theorem1(t, in);
  CHECK(r.passed());
  for (const auto& c : r.checks) CHECK(c.violations.empty());
}

TEST_CASE("upper bounds are one-sided") {
  // Gradient descent is slower than cubic Newton; with a tiny mu the cubic
  // bound is loose and a gradient trace still satisfies it.
  const ProblemOracle f =
      ProblemOracle::logistic(synth_instance(SynthKind::kLogistic, 400, 10, 2), 1e-6);
  const Vector x0 = Vector::Constant(10, 1.0);
  const FstarEstimate ref = estimate_fstar(f, x0, 0.1, 1000, 1e-13);
  MethodConfig c;
  c.method = MethodKind::kGd;
  c.p = 1;
  c.M = 0.25;
  c.max_iters = 30;
  c.keep_iterates = true;
  const RunTrace t = basic_run(f, x0, c);
  TheoremInputs in;
  in.mu = 1e-6;
  in.M = 0.1;
  in.L = 0.1;
  in.fstar = ref.fstar;
  in.xstar = ref.xstar;
  const DiagnosticsReport r = verify_theorem1(t, in);
  CHECK(r.find("aggregated")->violations.empty());
  for (const auto& chk : r.checks) CHECK(chk.status != CheckStatus::kFail);
}

TEST_CASE("contracts") {
  const ProblemOracle f =
      ProblemOracle::logistic(synth_instance(SynthKind::kLogistic, 300, 8, 1), 0.0);
  const Vector x0 = Vector::Constant(8, 3.0);
  MethodConfig c;
  c.method = MethodKind::kNata;
  c.M = 0.1;
  c.max_iters = 10;
  const RunTrace t = nata_run(f, x0, c);
  ContractInputs in;
  in.nu_p = default_nu(2);
  const DiagnosticsReport ok = verify_contracts(t, in);
  CHECK(ok.passed());
  REQUIRE(ok.find("nata_invariant") != nullptr);
  CHECK(ok.find("nata_invariant")->checked == 10);

  RunTrace bad = t;
  *bad.records[4].psi_min = 0.5 * *bad.records[4].A * bad.records[4].f;
  const DiagnosticsReport broken = verify_contracts(bad, in);
  CHECK(broken.find("nata_invariant")->status == CheckStatus::kFail);
  CHECK(broken.find("nata_invariant")->worst_iter == 4);

  const nlohmann::json j = to_json(broken);
  CHECK(j.at("passed") == false);
  CHECK(j.at("checks").is_array());
}

TEST_CASE("natm gap bound") {
  const ProblemOracle f =
      ProblemOracle::logistic(synth_instance(SynthKind::kLogistic, 300, 8, 1), 1e-4);
  const Vector x0 = Vector::Constant(8, 3.0);
  const FstarEstimate ref = estimate_fstar(f, x0, 0.1, 500, 1e-13);
  MethodConfig c;
  c.method = MethodKind::kNatm;
  c.M = 0.1;
  c.max_iters = 40;
  const RunTrace t = natm_run(f, x0, c);
  ContractInputs in;
  in.fstar = ref.fstar;
  in.xstar = ref.xstar;
  in.x0 = x0;
  const DiagnosticsReport r = verify_contracts(t, in);
  REQUIRE(r.find("natm_gap_bound") != nullptr);
  CHECK(r.find("natm_gap_bound")->status == CheckStatus::kPass);
  CHECK(r.find("natm_gap_bound")->checked == 40);
}
