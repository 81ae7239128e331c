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

#include "hotm/trace_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string_view>
#include <vector>

namespace hotm {
namespace {

using nlohmann::json;

void put(std::string& line, double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  line += buf;
}

void put(std::string& line, const std::optional<double>& v) {
  if (v) put(line, *v);
}

std::vector<std::string_view> split(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = s.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, comma - start));
    start = comma + 1;
  }
}

double to_double(std::string_view s, std::size_t line) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw Error("trace csv line " + std::to_string(line) + ": bad number '" + std::string(s) + "'");
  }
  return v;
}

std::optional<double> to_optional(std::string_view s, std::size_t line) {
  if (s.empty()) return std::nullopt;
  return to_double(s, line);
}

void put_opt(json& j, const char* key, const std::optional<double>& v) {
  if (v) j[key] = *v;
}

std::optional<double> get_opt(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return it->get<double>();
}

json vector_json(const Vector& v) {
  return json(std::vector<double>(v.data(), v.data() + v.size()));
}

Vector vector_from(const json& j) {
  const auto values = j.get<std::vector<double>>();
  Vector v(static_cast<Eigen::Index>(values.size()));
  for (std::size_t i = 0; i < values.size(); ++i) v[static_cast<Eigen::Index>(i)] = values[i];
  return v;
}

}  // namespace

void write_trace_csv(std::ostream& out, const RunTrace& trace, std::optional<double> fstar) {
  out << kCsvHeader << '\n';
  std::string line;
  for (const auto& r : trace.records) {
    line.clear();
    line += std::to_string(r.iter);
    line += ',';
    put(line, r.f);
    line += ',';
    if (fstar) put(line, r.f - *fstar);
    line += ',';
    put(line, r.grad_norm);
    line += ',';
    put(line, r.step_norm);
    line += ',';
    put(line, r.A);
    line += ',';
    put(line, r.nu);
    line += ',';
    put(line, r.lambda);
    line += ',';
    line += std::to_string(r.inner_iters);
    line += ',';
    line += std::to_string(r.subsolver_evals);
    line += ',';
    put(line, r.wall_ms);
    out << line << '\n';
  }
}

RunTrace read_trace_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) throw Error("trace csv: unexpected header");
  RunTrace trace;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != 11) throw Error("trace csv line " + std::to_string(line_no) + ": expected 11 fields");
    TraceRecord r;
    r.iter = static_cast<int>(to_double(f[0], line_no));
    r.f = to_double(f[1], line_no);
    r.grad_norm = to_double(f[3], line_no);
    r.step_norm = to_optional(f[4], line_no);
    r.A = to_optional(f[5], line_no);
    r.nu = to_optional(f[6], line_no);
    r.lambda = to_optional(f[7], line_no);
    r.inner_iters = static_cast<int>(to_double(f[8], line_no));
    r.subsolver_evals = static_cast<int>(to_double(f[9], line_no));
    r.wall_ms = to_double(f[10], line_no);
    trace.records.push_back(r);
  }
  return trace;
}

json trace_to_json(const RunTrace& trace) {
  json records = json::array();
  for (const auto& r : trace.records) {
    json j = {{"iter", r.iter},
              {"f", r.f},
              {"grad_norm", r.grad_norm},
              {"inner_iters", r.inner_iters},
              {"subsolver_evals", r.subsolver_evals},
              {"wall_ms", r.wall_ms}};
    put_opt(j, "step_norm", r.step_norm);
    put_opt(j, "A_t", r.A);
    put_opt(j, "nu_t", r.nu);
    put_opt(j, "lambda_t", r.lambda);
    put_opt(j, "a", r.a);
    put_opt(j, "psi_min", r.psi_min);
    put_opt(j, "psi_min_closed", r.psi_min_closed);
    put_opt(j, "pair_value", r.pair_value);
    put_opt(j, "sigma_lhs", r.sigma_lhs);
    put_opt(j, "sigma_rhs", r.sigma_rhs);
    put_opt(j, "cert_lhs", r.cert_lhs);
    put_opt(j, "cert_rhs", r.cert_rhs);
    records.push_back(std::move(j));
  }
  json out = {{"method", trace.method},
              {"p", trace.p},
              {"M", trace.M},
              {"status", to_string(trace.status)},
              {"message", trace.message},
              {"records", std::move(records)}};
  if (trace.solution.size() > 0) out["solution"] = vector_json(trace.solution);
  if (!trace.iterates.empty()) {
    json its = json::array();
    for (const auto& x : trace.iterates) its.push_back(vector_json(x));
    out["iterates"] = std::move(its);
  }
  return out;
}

RunTrace trace_from_json(const json& j) {
  RunTrace t;
  try {
    t.method = j.at("method").get<std::string>();
    t.p = j.at("p").get<int>();
    t.M = j.at("M").get<double>();
    t.status = run_status_from_string(j.at("status").get<std::string>());
    t.message = j.value("message", std::string());
    for (const auto& r : j.at("records")) {
      TraceRecord rec;
      rec.iter = r.at("iter").get<int>();
      rec.f = r.at("f").get<double>();
      rec.grad_norm = r.at("grad_norm").get<double>();
      rec.inner_iters = r.value("inner_iters", 0);
      rec.subsolver_evals = r.value("subsolver_evals", 0);
      rec.wall_ms = r.value("wall_ms", 0.0);
      rec.step_norm = get_opt(r, "step_norm");
      rec.A = get_opt(r, "A_t");
      rec.nu = get_opt(r, "nu_t");
      rec.lambda = get_opt(r, "lambda_t");
      rec.a = get_opt(r, "a");
      rec.psi_min = get_opt(r, "psi_min");
      rec.psi_min_closed = get_opt(r, "psi_min_closed");
      rec.pair_value = get_opt(r, "pair_value");
      rec.sigma_lhs = get_opt(r, "sigma_lhs");
      rec.sigma_rhs = get_opt(r, "sigma_rhs");
      rec.cert_lhs = get_opt(r, "cert_lhs");
      rec.cert_rhs = get_opt(r, "cert_rhs");
      t.records.push_back(rec);
    }
    if (j.contains("solution")) t.solution = vector_from(j.at("solution"));
    if (j.contains("iterates")) {
      for (const auto& x : j.at("iterates")) t.iterates.push_back(vector_from(x));
    }
  } catch (const json::exception& e) {
    throw Error(std::string("trace json: ") + e.what());
  }
  return t;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << text;
  out.close();
  if (!out) throw IoError("failed writing '" + path + "'");
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RunTrace load_trace(const std::string& path, json* document) {
  const std::string text = read_text_file(path);
  const bool is_csv = path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0;
  if (is_csv) {
    std::istringstream in(text);
    return read_trace_csv(in);
  }
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw Error("trace '" + path + "': " + e.what());
  }
  RunTrace t = trace_from_json(doc.contains("trace") ? doc.at("trace") : doc);
  if (document) *document = std::move(doc);
  return t;
}

}  // namespace hotm
