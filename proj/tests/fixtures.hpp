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

#include "hotm/problems.hpp"

namespace hotm::testing {

/// f(x) = 1/2 x'Qx + b'x; the third derivative vanishes.
class Quadratic final : public Objective {
 public:
  Quadratic(Matrix Q, Vector b) : Q_(std::move(Q)), b_(std::move(b)) {}
  Eigen::Index dimension() const override { return b_.size(); }
  double value(const Vector& x) const override { return 0.5 * x.dot(Q_ * x) + b_.dot(x); }
  Vector gradient(const Vector& x) const override { return Q_ * x + b_; }
  Matrix hessian(const Vector&) const override { return Q_; }
  Vector third_dir(const Vector&, const Vector&) const override { return Vector::Zero(b_.size()); }

 private:
  Matrix Q_;
  Vector b_;
};

}  // namespace hotm::testing
