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
#include <filesystem>
#include <limits>
#include <sstream>

#include "hotm/methods.hpp"
#include "hotm/trace_io.hpp"

using namespace hotm;

namespace {

RunTrace sample_trace() {
  const ProblemOracle f =
      ProblemOracle::logistic(synth_instance(SynthKind::kLogistic, 200, 6, 3), 1e-3);
  MethodConfig c;
  c.method = MethodKind::kNata;
  c.M = 0.1;
  c.max_iters = 6;
  c.keep_iterates = true;
  return run_method(f, Vector::Constant(6, 3.0), c);
}

bool same(const std::optional<double>& a, const std::optional<double>& b) {
  return a.has_value() == b.has_value() && (!a || *a == *b);
}

void check_equal(const RunTrace& a, const RunTrace& b) {
  CHECK(a.method == b.method);
  CHECK(a.p == b.p);
  CHECK(a.M == b.M);
  CHECK(a.status == b.status);
  CHECK(a.message == b.message);
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    const TraceRecord& x = a.records[i];
    const TraceRecord& y = b.records[i];
    CHECK(x.iter == y.iter);
    CHECK(x.f == y.f);
    CHECK(x.grad_norm == y.grad_norm);
    CHECK(x.wall_ms == y.wall_ms);
    CHECK(x.inner_iters == y.inner_iters);
    CHECK(x.subsolver_evals == y.subsolver_evals);
    CHECK(same(x.step_norm, y.step_norm));
    CHECK(same(x.A, y.A));
    CHECK(same(x.nu, y.nu));
    CHECK(same(x.lambda, y.lambda));
  }
}

}  // namespace

TEST_CASE("csv header") {
  std::ostringstream out;
  write_trace_csv(out, RunTrace{}, std::nullopt);
  CHECK(out.str() ==
        "iter,f,fgap,grad_norm,step_norm,A_t,nu_t,lambda_t,inner_iters,subsolver_evals,wall_ms\n");
}

TEST_CASE("csv columns") {
  const RunTrace t = sample_trace();
  std::ostringstream with, without;
  write_trace_csv(with, t, -1.0);
  write_trace_csv(without, t, std::nullopt);
  std::istringstream a(with.str()), b(without.str());
  std::string la, lb;
  std::getline(a, la);
  std::getline(b, lb);
  std::getline(a, la);
  std::getline(b, lb);
  // Row 0: no step, lambda never applies to nata.
  CHECK(lb.rfind("0,", 0) == 0);
  CHECK(lb.find(",,") != std::string::npos);
  // fgap is the third column.
  const auto third = [](const std::string& s) {
    std::istringstream in(s);
    std::string field;
    for (int i = 0; i < 3; ++i) std::getline(in, field, ',');
    return field;
  };
  CHECK(third(lb).empty());
  CHECK_FALSE(third(la).empty());
}

TEST_CASE("csv round-trip") {
  const RunTrace t = sample_trace();
  std::ostringstream out;
  write_trace_csv(out, t, std::nullopt);
  std::istringstream in(out.str());
  RunTrace back = read_trace_csv(in);
  back.method = t.method;
  back.p = t.p;
  back.M = t.M;
  back.status = t.status;
  back.message = t.message;
  check_equal(t, back);
}

TEST_CASE("json round-trip is lossless") {
  RunTrace t = sample_trace();
  t.records[1].f = std::nextafter(t.records[1].f, 0.0);
  const RunTrace back = trace_from_json(nlohmann::json::parse(trace_to_json(t).dump()));
  check_equal(t, back);
  for (std::size_t i = 0; i < t.records.size(); ++i) {
    CHECK(same(t.records[i].psi_min, back.records[i].psi_min));
    CHECK(same(t.records[i].psi_min_closed, back.records[i].psi_min_closed));
    CHECK(same(t.records[i].a, back.records[i].a));
  }
  CHECK(t.solution == back.solution);
  REQUIRE(t.iterates.size() == back.iterates.size());
  for (std::size_t i = 0; i < t.iterates.size(); ++i) CHECK(t.iterates[i] == back.iterates[i]);
}

TEST_CASE("malformed input") {
  std::istringstream bad_header("iter,f\n");
  CHECK_THROWS(read_trace_csv(bad_header));
  std::istringstream bad_row(std::string(kCsvHeader) + "\n0,abc,,1,,,,,0,0,0\n");
  CHECK_THROWS(read_trace_csv(bad_row));
  CHECK_THROWS(trace_from_json(nlohmann::json::object()));
  CHECK_THROWS_AS(read_text_file("/nonexistent/trace.json"), IoError);
  CHECK_THROWS_AS(write_text_file("/nonexistent/dir/trace.json", "x"), IoError);
}

TEST_CASE("load_trace accepts documents and files by extension") {
  const RunTrace t = sample_trace();
  const auto dir = std::filesystem::temp_directory_path() / "hotm_trace_io_test";
  std::filesystem::create_directories(dir);
  const std::string json_path = (dir / "t.json").string();
  const std::string csv_path = (dir / "t.csv").string();
  write_text_file(json_path, nlohmann::json{{"trace", trace_to_json(t)}, {"fstar", 1.0}}.dump());
  std::ostringstream csv;
  write_trace_csv(csv, t, std::nullopt);
  write_text_file(csv_path, csv.str());

  nlohmann::json doc;
  check_equal(t, load_trace(json_path, &doc));
  CHECK(doc.at("fstar") == 1.0);
  CHECK(load_trace(csv_path).records.size() == t.records.size());
  std::filesystem::remove_all(dir);
}
