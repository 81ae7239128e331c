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

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hotm/problems.hpp"

namespace hotm {
namespace {

struct SparseRow {
  double label;
  std::vector<std::pair<Eigen::Index, double>> entries;  // 0-based column
};

bool parse_double(std::string_view s, double& out) {
  if (s.empty()) return false;
  // from_chars rejects a leading '+', which LibSVM labels commonly carry.
  if (s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

bool parse_index(std::string_view s, long long& out) {
  if (s.empty()) return false;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\v' || c == '\f'; }

}  // namespace

Dataset parse_libsvm(std::istream& in, const LibsvmOptions& options, std::string name) {
  std::vector<SparseRow> rows;
  Eigen::Index max_index = 0;
  std::string line;
  std::size_t line_no = 0;

  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view(line);
    if (const auto hash = view.find('#'); hash != std::string_view::npos) {
      view = view.substr(0, hash);
    }

    SparseRow row{0.0, {}};
    bool have_label = false;
    long long last_index = 0;
    std::size_t pos = 0;
    while (pos < view.size()) {
      while (pos < view.size() && is_space(view[pos])) ++pos;
      if (pos >= view.size()) break;
      const std::size_t start = pos;
      while (pos < view.size() && !is_space(view[pos])) ++pos;
      const std::string_view token = view.substr(start, pos - start);
      const std::size_t column = start + 1;

      if (!have_label) {
        if (!parse_double(token, row.label)) {
          throw ParseError("libsvm: malformed label '" + std::string(token) + "'", line_no,
                           column);
        }
        have_label = true;
        continue;
      }
      const auto colon = token.find(':');
      if (colon == std::string_view::npos) {
        throw ParseError("libsvm: expected <index>:<value>, got '" + std::string(token) + "'",
                         line_no, column);
      }
      long long index = 0;
      double value = 0.0;
      if (!parse_index(token.substr(0, colon), index) || index < 1) {
        throw ParseError("libsvm: malformed index in '" + std::string(token) + "'", line_no,
                         column);
      }
      if (!parse_double(token.substr(colon + 1), value)) {
        throw ParseError("libsvm: malformed value in '" + std::string(token) + "'", line_no,
                         column + colon + 1);
      }
      if (index <= last_index) {
        throw ParseError("libsvm: indices must be strictly increasing", line_no, column);
      }
      last_index = index;
      max_index = std::max<Eigen::Index>(max_index, static_cast<Eigen::Index>(index));
      row.entries.emplace_back(static_cast<Eigen::Index>(index - 1), value);
    }
    if (have_label) rows.push_back(std::move(row));
  }

  if (rows.empty()) throw ParseError("libsvm: no samples in input", line_no, 1);

  Eigen::Index d = max_index;
  if (options.dimension) {
    if (*options.dimension < max_index) {
      throw DimensionError("libsvm: explicit dimension " + std::to_string(*options.dimension) +
                           " is smaller than the largest index " + std::to_string(max_index));
    }
    d = *options.dimension;
  }
  if (d < 1) throw DimensionError("libsvm: dataset has no features");

  Dataset out;
  out.name = std::move(name);
  out.features = Matrix::Zero(static_cast<Eigen::Index>(rows.size()), d);
  out.labels.resize(static_cast<Eigen::Index>(rows.size()));
  bool zero_one = true;
  bool has_zero = false;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    out.labels[r] = rows[i].label;
    if (rows[i].label != 0.0 && rows[i].label != 1.0) zero_one = false;
    if (rows[i].label == 0.0) has_zero = true;
    for (const auto& [col, value] : rows[i].entries) out.features(r, col) = value;
  }
  if (options.remap_binary && zero_one && has_zero) {
    out.labels = (2.0 * out.labels.array() - 1.0).matrix();
  }
  return out;
}

Dataset load_libsvm(const std::string& path, const LibsvmOptions& options) {
  std::ifstream in(path);
  if (!in) throw Error("libsvm: cannot open '" + path + "'");
  return parse_libsvm(in, options, path);
}

}  // namespace hotm
