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

#include <cmath>
#include <limits>
#include <utility>

#include "hotm/core.hpp"

namespace hotm {

struct RootOptions {
  int max_iters = 200;
  double rel_tol = 1e-12;
};

struct RootResult {
  double root = 0.0;
  double value = 0.0;
  int iters = 0;
};

/// Newton iteration safeguarded by bisection on a sign-changing bracket.
///
/// `fdf(t)` returns {f(t), f'(t)}. Requires f(lo) and f(hi) of opposite sign
/// (or one of them zero). Each Newton proposal that leaves the current bracket
/// is replaced by the midpoint, so the bracket shrinks on every iteration.
/// Iteration continues past rel_tol for a few polishing steps until the
/// bracket stops shrinking, since callers check residuals much tighter than
/// the root location.
template <class FdF>
RootResult safeguarded_root(FdF&& fdf, double lo, double hi, const RootOptions& opts = {}) {
  auto [flo, dlo] = fdf(lo);
  if (flo == 0.0) return {lo, 0.0, 0};
  auto [fhi, dhi] = fdf(hi);
  if (fhi == 0.0) return {hi, 0.0, 0};
  (void)dlo;
  (void)dhi;
  if ((flo > 0.0) == (fhi > 0.0)) {
    throw NumericError("safeguarded_root: bracket does not change sign", -1);
  }
  // Orient so that f(neg) < 0 < f(pos).
  double neg = flo < 0.0 ? lo : hi;
  double pos = flo < 0.0 ? hi : lo;

  double t = 0.5 * (lo + hi);
  RootResult best{t, std::numeric_limits<double>::infinity(), 0};
  int polish = 0;
  for (int it = 1; it <= opts.max_iters; ++it) {
    auto [f, df] = fdf(t);
    best.iters = it;
    if (std::abs(f) < std::abs(best.value)) {
      best.root = t;
      best.value = f;
    }
    if (f == 0.0) break;
    if (f < 0.0) {
      neg = t;
    } else {
      pos = t;
    }
    const double a = std::min(neg, pos);
    const double b = std::max(neg, pos);
    const double width = b - a;
    if (width <= opts.rel_tol * std::max(std::abs(t), std::numeric_limits<double>::min())) {
      if (++polish > 3) break;
    }
    double next = (df != 0.0 && std::isfinite(df)) ? t - f / df : 0.5 * (a + b);
    if (!(next > a && next < b)) next = 0.5 * (a + b);
    if (next == t) break;
    t = next;
  }
  return best;
}

/// Finds hi > lo with f(hi) < 0 for a decreasing f, growing the step geometrically.
template <class F>
double grow_bracket_decreasing(F&& f, double lo, double initial_step, int max_doublings = 2000) {
  double step = std::max(initial_step, 1e-300);
  double hi = lo + step;
  for (int i = 0; i < max_doublings; ++i) {
    if (f(hi) < 0.0) return hi;
    step *= 2.0;
    hi = lo + step;
    if (!std::isfinite(hi)) break;
  }
  throw NumericError("grow_bracket_decreasing: no sign change found", -1);
}

}  // namespace hotm
