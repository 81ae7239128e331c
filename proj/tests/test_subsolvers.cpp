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

#include <cmath>
#include <random>

#include "hotm/methods.hpp"
#include "hotm/problems.hpp"
#include "hotm/subsolvers.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace hotm;
namespace ht = hotm::testing;

namespace {

ModelSubproblem model(const Vector& g, const Matrix& H, int order, double c) {
  ModelSubproblem sp;
  sp.g = g;
  sp.H = H;
  sp.reg_order = order;
  sp.reg_const = c;
  return sp;
}

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out[i++] = x;
  return out;
}

// Random convex model of dimension 1 or 2 with a PSD Hessian.
ModelSubproblem random_model(std::mt19937_64& rng, int d, int order) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Matrix B = Matrix::NullaryExpr(d, d, [&]() { return 2.0 * u(rng) - 1.0; });
  Matrix H = B * B.transpose();
  if (u(rng) < 0.3) H.setZero();  // degenerate curvature
  const Vector g = 3.0 * ht::random_vector(rng, d);
  const double c = std::exp(std::log(1e-2) + u(rng) * std::log(1e4));
  return model(g, H, order, c);
}

}  // namespace

TEST_CASE("cubic model") {
  SUBCASE("zero gradient") {
    const SubsolverResult r = solve_cubic_model(model(Vector::Zero(3), Matrix::Identity(3, 3), 3, 1.0));
    CHECK(r.h.norm() == 0.0);
    CHECK(r.tau == 0.0);
  }
  SUBCASE("one dimension") {
    const SubsolverResult r = solve_cubic_model(model(vec({-3}), Matrix::Identity(1, 1), 3, 2.0));
    CHECK(r.h[0] == doctest::Approx((-1.0 + std::sqrt(13.0)) / 2.0).epsilon(1e-12));
    CHECK(r.h[0] == doctest::Approx(1.30278).epsilon(1e-5));
  }
  SUBCASE("two dimensions against the grid") {
    Matrix H = Matrix::Zero(2, 2);
    H.diagonal() << 1, 2;
    const ModelSubproblem sp = model(vec({-1, -1}), H, 3, 6.0);
    const SubsolverResult r = solve_cubic_model(sp);
    const Vector ref = ht::grid_minimize([&](const ht::Vec& h) { return model_value(sp, h); }, 2, 2.0);
    CHECK((r.h - ref).norm() <= 1e-6);
  }
  SUBCASE("indefinite Hessian is rejected") {
    Matrix H = Matrix::Identity(2, 2);
    H(1, 1) = -1.0;
    CHECK_THROWS_AS(solve_cubic_model(model(vec({1, 1}), H, 3, 1.0)), NumericError);
  }
  SUBCASE("non-finite gradient is rejected") {
    CHECK_THROWS_AS(solve_cubic_model(model(vec({NAN}), Matrix::Identity(1, 1), 3, 1.0)),
                    NumericError);
  }
  SUBCASE("precomputed decomposition gives the same step") {
    std::mt19937_64 rng(3);
    ModelSubproblem sp = random_model(rng, 2, 3);
    const Vector h = solve_cubic_model(sp).h;
    sp.evd = evd_symmetric<double>(sp.H);
    CHECK((solve_cubic_model(sp).h - h).norm() <= 1e-14);
  }
}

TEST_CASE("quartic model") {
  SUBCASE("zero gradient") {
    const SubsolverResult r = solve_quartic_model(model(Vector::Zero(2), Matrix::Identity(2, 2), 4, 1.0));
    CHECK(r.h.norm() == 0.0);
    CHECK(r.tau == 0.0);
  }
  SUBCASE("no curvature") {
    const SubsolverResult r = solve_quartic_model(model(vec({-1}), Matrix::Zero(1, 1), 4, 1.0));
    CHECK(r.h[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(r.tau == doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-12));
  }
  SUBCASE("one dimension against bisection") {
    const SubsolverResult r = solve_quartic_model(model(vec({-2}), Matrix::Identity(1, 1), 4, 4.0));
    const double y = ht::bisect([](double y) { return 4.0 * y * y * y + y - 2.0; }, 0.0, 1.0);
    CHECK(r.h[0] == doctest::Approx(y).epsilon(1e-12));
    CHECK(r.h[0] == doctest::Approx(0.689398).epsilon(1e-6));
  }
}

TEST_CASE("random models against grid refinement") {
  std::mt19937_64 rng(2026);
  for (int k = 0; k < 50; ++k) {
    const int d = 1 + k % 2;
    const int order = k % 4 < 2 ? 3 : 4;
    const ModelSubproblem sp = random_model(rng, d, order);
    const SubsolverResult r = solve_model(sp);
    const auto m = [&](const ht::Vec& h) { return model_value(sp, h); };
    const double radius = 2.0 * std::max(1.0, 2.0 * r.h.norm());
    const Vector ref = ht::grid_minimize(m, d, radius);
    CAPTURE(k);
    CHECK(model_value(sp, r.h) <= m(ref) + 1e-8);

    // Dual identities: h = -(H + s I)^{-1} g with s tied to |h|.
    const double hn = r.h.norm();
    const double shift = order == 3 ? r.tau : std::sqrt(2.0 * sp.reg_const) * r.tau;
    const double tau_expected =
        order == 3 ? 0.5 * sp.reg_const * hn : 0.5 * std::sqrt(2.0 * sp.reg_const) * hn * hn;
    CHECK(std::abs(r.tau - tau_expected) <= 1e-9 * std::max(1.0, r.tau));
    const Matrix K = sp.H + shift * Matrix::Identity(d, d);
    CHECK((K * r.h + sp.g).norm() <= 1e-9 * std::max(1.0, sp.g.norm()));
  }
}

TEST_CASE("inexactness certificate") {
  const ProblemOracle f = ProblemOracle::nesterov_lower_bound(6, 1e-3);
  const Vector x = Vector::Constant(6, 0.2);
  SUBCASE("at the center the model gradient is the gradient") {
    const InexactnessCertificate c = certify_inexact(f, x, x, 60.0, 3, 1.0 / 6.0);
    CHECK(c.lhs == doctest::Approx(f.gradient(x).norm()));
    CHECK(c.rhs == doctest::Approx(f.gradient(x).norm() / 6.0));
    CHECK_FALSE(c.satisfied);
  }
  SUBCASE("exact cubic step certifies for p = 2") {
    const Vector y = crn_step(f, x, 10.0).x;
    const InexactnessCertificate c = certify_inexact(f, x, y, 10.0, 2, 1e-6);
    CHECK(c.lhs <= 1e-9);
    CHECK(c.satisfied);
  }
}

TEST_CASE("bdgm") {
  SUBCASE("stationary point") {
    // Two opposite labels on the same feature: the gradient vanishes at 0.
    Dataset d;
    d.features = Matrix(2, 2);
    d.features << 1, 0, 1, 0;
    d.labels = vec({1, -1});
    const ProblemOracle f = ProblemOracle::logistic(d, 1.0);
    REQUIRE(f.gradient(Vector::Zero(2)).norm() <= 1e-14);
    const BdgmResult r = bdgm_solve(f, Vector::Zero(2), 6.0);
    CHECK(r.h.norm() == 0.0);
    CHECK(r.certificate.satisfied);
  }
  SUBCASE("first inner gradient") {
    // With h0 = 0 only the scaled gradient survives in the inner model.
    const ProblemOracle f = ProblemOracle::logistic(synth_instance(SynthKind::kLogistic, 50, 3, 2), 0.1);
    const Vector x = Vector::Constant(3, 0.5);
    const double M3 = 6.0;
    const SubsolverResult first = solve_quartic_model(
        model((2.0 - std::sqrt(2.0)) / 2.0 * f.gradient(x), f.hessian(x), 4, M3 / 6.0));
    const BdgmResult r = bdgm_solve(f, x, M3, 0.999, 1);
    CHECK(r.iters == 1);
    CHECK((r.h - first.h).norm() <= 1e-14);
  }
  SUBCASE("lower-bound function from the origin") {
    const ProblemOracle f = ProblemOracle::nesterov_lower_bound(20, 1e-3);
    const BdgmResult r = bdgm_solve(f, Vector::Zero(20), 60.0, 1.0 / 6.0, 100);
    CHECK(r.certificate.satisfied);
    CHECK(r.iters <= 50);
    CHECK(f.value(r.h) < f.value(Vector::Zero(20)));
  }
  SUBCASE("quadratic reduces to the quartic step") {
    // No third derivative: BDGM converges to the quartic model minimizer.
    Matrix Q(2, 2);
    Q << 2, 0.5, 0.5, 1;
    const ht::Quadratic f(Q, vec({1, -2}));
    const Vector x = vec({0.5, 0.5});
    const double M3 = 3.0;
    const BtmStep s = btm_step(f, x, M3, 1e-8, 1000);
    const SubsolverResult q = solve_quartic_model(model(f.gradient(x), Q, 4, M3 / 6.0));
    CHECK((s.x - (x + q.h)).norm() <= 1e-6);
  }
}
