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

// Reference computations that share no code with the library.

#pragma once

#include <cmath>
#include <functional>
#include <random>

#include <Eigen/Dense>

namespace hotm::testing {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Plain bisection for a sign change on [lo, hi].
inline double bisect(const std::function<double(double)>& f, double lo, double hi, int iters = 200) {
  double flo = f(lo);
  for (int i = 0; i < iters; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

inline Vec central_gradient(const std::function<double(const Vec&)>& f, const Vec& x, double h) {
  Vec g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    Vec xp = x, xm = x;
    xp[i] += h;
    xm[i] -= h;
    g[i] = (f(xp) - f(xm)) / (2.0 * h);
  }
  return g;
}

/// Directional derivative of a vector field along u by central differences.
inline Vec central_directional(const std::function<Vec(const Vec&)>& F, const Vec& x, const Vec& u,
                               double h) {
  return (F(x + h * u) - F(x - h * u)) / (2.0 * h);
}

/// Second difference of a vector field along u.
inline Vec second_difference(const std::function<Vec(const Vec&)>& F, const Vec& x, const Vec& u,
                             double h) {
  return (F(x + h * u) - 2.0 * F(x) + F(x - h * u)) / (h * h);
}

inline double rel_err(const Vec& a, const Vec& b) {
  return (a - b).norm() / std::max(1.0, b.norm());
}

/// Minimizes a function of one or two variables: coarse grid on the box,
/// then repeated local grid refinement around the incumbent.
inline Vec grid_minimize(const std::function<double(const Vec&)>& f, int d, double radius,
                         int points = 41, int rounds = 60) {
  Vec best = Vec::Zero(d);
  double best_f = f(best);
  Vec center = Vec::Zero(d);
  double half = radius;
  for (int r = 0; r < rounds; ++r) {
    const double step = 2.0 * half / (points - 1);
    Vec z(d);
    for (int i = 0; i < points; ++i) {
      for (int j = 0; j < (d == 2 ? points : 1); ++j) {
        z[0] = center[0] - half + i * step;
        if (d == 2) z[1] = center[1] - half + j * step;
        const double v = f(z);
        if (v < best_f) {
          best_f = v;
          best = z;
        }
      }
    }
    center = best;
    half = 2.0 * step;
  }
  return best;
}

inline Vec random_vector(std::mt19937_64& rng, Eigen::Index d, double scale = 1.0) {
  std::normal_distribution<double> n(0.0, scale);
  Vec v(d);
  for (Eigen::Index i = 0; i < d; ++i) v[i] = n(rng);
  return v;
}

}  // namespace hotm::testing
