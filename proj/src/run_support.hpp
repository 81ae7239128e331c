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

#include <chrono>
#include <string>

#include "hotm/methods.hpp"

namespace hotm::detail {

class Recorder {
 public:
  Recorder(RunTrace& trace, const MethodConfig& cfg)
      : trace_(trace), keep_(cfg.keep_iterates), start_(std::chrono::steady_clock::now()) {
    trace_.method = to_string(cfg.method);
    trace_.p = cfg.p;
    trace_.M = cfg.M;
  }

  TraceRecord& push(int iter, const Vector& x, double fx, double grad_norm,
                    const Vector* prev = nullptr) {
    TraceRecord rec;
    rec.iter = iter;
    rec.f = fx;
    rec.grad_norm = grad_norm;
    if (prev) rec.step_norm = (x - *prev).norm();
    const auto now = std::chrono::steady_clock::now();
    rec.wall_ms = std::chrono::duration<double, std::milli>(now - start_).count();
    trace_.records.push_back(rec);
    if (keep_) trace_.iterates.push_back(x);
    trace_.solution = x;
    return trace_.records.back();
  }

  void fail(int iter, const std::string& what) {
    trace_.status = RunStatus::kError;
    trace_.message = "iteration " + std::to_string(iter) + ": " + what;
  }

  void converged() { trace_.status = RunStatus::kConverged; }
  void budget() { trace_.status = RunStatus::kBudget; }

 private:
  RunTrace& trace_;
  bool keep_;
  std::chrono::steady_clock::time_point start_;
};

inline double factorial(int n) {
  double out = 1.0;
  for (int i = 2; i <= n; ++i) out *= i;
  return out;
}

}  // namespace hotm::detail
