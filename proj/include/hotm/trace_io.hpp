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

#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

#include "hotm/trace.hpp"

namespace hotm {

/// I/O failure; the message names the path.
class IoError : public Error {
 public:
  using Error::Error;
};

inline constexpr const char* kCsvHeader =
    "iter,f,fgap,grad_norm,step_norm,A_t,nu_t,lambda_t,inner_iters,subsolver_evals,wall_ms";

/// One line per record, %.17g, empty fields where a column does not apply.
void write_trace_csv(std::ostream& out, const RunTrace& trace, std::optional<double> fstar);

/// Reads what write_trace_csv produced. Witness fields are not part of CSV.
RunTrace read_trace_csv(std::istream& in);

nlohmann::json trace_to_json(const RunTrace& trace);
RunTrace trace_from_json(const nlohmann::json& j);

/// Writes `doc` (or the CSV) to `path`, throwing IoError on failure.
void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

/// Loads a trace written as JSON (either a bare trace or a document with a
/// "trace" member) or CSV, chosen by extension.
RunTrace load_trace(const std::string& path, nlohmann::json* document = nullptr);

}  // namespace hotm
