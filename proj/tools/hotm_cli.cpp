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

// hotm: runs benchmark configurations and replays diagnostics on saved traces.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "hotm/benchmark.hpp"
#include "hotm/diagnostics.hpp"
#include "hotm/trace_io.hpp"

namespace {

using nlohmann::json;
using namespace hotm;

int cmd_run(const std::string& config_path, const std::string& preset, const std::string& out,
            const std::string& format, bool check) {
  BenchmarkConfig config;
  try {
    json doc = json::object();
    if (!preset.empty()) doc = preset_json(preset);
    if (!config_path.empty()) {
      json user;
      try {
        user = json::parse(read_text_file(config_path));
      } catch (const json::exception& e) {
        throw ConfigError("config '" + config_path + "': " + e.what());
      }
      doc.merge_patch(user);
    }
    if (!out.empty()) doc["output"]["directory"] = out;
    if (!format.empty()) doc["output"]["formats"] = {format};
    config = parse_config(doc);
  } catch (const Error& e) {
    std::cerr << "hotm: " << e.what() << '\n';
    return kExitConfig;
  }

  BenchmarkResult result;
  try {
    result = run_benchmark(config);
  } catch (const ConfigError& e) {
    std::cerr << "hotm: " << e.what() << '\n';
    return kExitConfig;
  }
  for (const auto& w : result.warnings) std::cerr << "hotm: warning: " << w << '\n';

  try {
    write_outputs(config, result);
  } catch (const IoError& e) {
    std::cerr << "hotm: " << e.what() << '\n';
    return kExitConfig;
  }

  for (const auto& m : result.summary.methods) {
    std::cout << m.label << ": " << to_string(m.status) << " after " << m.iterations
              << " iterations, f = " << m.final_f;
    if (m.final_gap) std::cout << ", gap = " << *m.final_gap;
    if (!m.diagnostics_passed) std::cout << ", diagnostics FAILED";
    if (!m.message.empty()) std::cout << " (" << m.message << ")";
    std::cout << '\n';
  }
  if (check) {
    for (std::size_t i = 0; i < result.reports.size(); ++i) {
      for (const auto& c : result.reports[i].checks) {
        if (c.status == CheckStatus::kFail) {
          std::cerr << "hotm: " << config.methods[i].label << ": check '" << c.name
                    << "' failed at iteration " << c.worst_iter << '\n';
        }
      }
    }
  }
  return result.exit_code(check);
}

int cmd_list_presets() {
  for (const auto& name : preset_names()) {
    std::cout << name << "  " << preset_description(name) << '\n';
  }
  return kExitOk;
}

int cmd_verify(const std::string& path, double fstar) {
  json doc;
  RunTrace trace;
  try {
    trace = load_trace(path, &doc);
  } catch (const Error& e) {
    std::cerr << "hotm: " << e.what() << '\n';
    return kExitConfig;
  }
  const json context = doc.is_object() ? doc.value("context", json::object()) : json::object();

  json out = {{"trace", path}, {"fstar", fstar}};
  try {
    const RateDiagnostics rates = rate_series(trace, fstar);
    out["alpha"] = rates.alpha;
    out["records_used"] = rates.truncated_at;
  } catch (const Error& e) {
    std::cerr << "hotm: " << e.what() << '\n';
    return kExitConfig;
  }

  ContractInputs in;
  in.fstar = fstar;
  if (context.contains("nu_p")) in.nu_p = context.at("nu_p").get<double>();
  DiagnosticsReport report = verify_contracts(trace, in);

  const bool basic = trace.method == "crn" || trace.method == "btm";
  const double mu = context.value("mu", 0.0);
  if (basic && mu > 0.0 && context.contains("L")) {
    TheoremInputs t;
    t.mu = mu;
    t.M = trace.M;
    t.L = context.at("L").get<double>();
    t.p = trace.p;
    t.fstar = fstar;
    report.append(verify_theorem1(trace, t));
  }
  out["diagnostics"] = to_json(report);
  std::cout << out.dump(1) << '\n';
  return report.passed() ? kExitOk : kExitDiagnostics;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hotm: higher-order optimization methods benchmark"};
  app.require_subcommand(1);

  std::string config_path, preset, out, format;
  bool check = false;
  CLI::App* run = app.add_subcommand("run", "Run a benchmark configuration");
  run->add_option("--config", config_path, "JSON configuration file");
  run->add_option("--preset", preset, "Built-in preset; --config entries override it");
  run->add_option("--out", out, "Output directory");
  run->add_option("--format", format, "Trace format")->check(CLI::IsMember({"csv", "json"}));
  run->add_flag("--check", check, "Fail with exit code 4 when a diagnostic check fails");

  CLI::App* list = app.add_subcommand("list-presets", "List built-in presets");

  std::string trace_path;
  double fstar = 0.0;
  CLI::App* verify = app.add_subcommand("verify", "Replay diagnostics on a saved trace");
  verify->add_option("--trace", trace_path, "Trace file (.json or .csv)")->required();
  verify->add_option("--fstar", fstar, "Reference optimal value")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (*run) {
    if (config_path.empty() && preset.empty()) {
      std::cerr << "hotm: run needs --config or --preset\n";
      return kExitUsage;
    }
    return cmd_run(config_path, preset, out, format, check);
  }
  if (*list) return cmd_list_presets();
  if (*verify) return cmd_verify(trace_path, fstar);
  return kExitUsage;
}
