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

#include "hotm/benchmark.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "hotm/trace_io.hpp"

namespace hotm {
namespace {

using nlohmann::json;

void check_keys(const json& j, const char* where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError(std::string(where) + ": expected an object");
  for (const auto& [key, value] : j.items()) {
    (void)value;
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
      throw ConfigError(std::string(where) + ": unknown key '" + key + "'");
    }
  }
}

template <typename T>
T get(const json& j, const char* key, const char* where) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string(where) + ": '" + key + "' is missing or has the wrong type");
  }
}

template <typename T>
void maybe(const json& j, const char* key, const char* where, T& out) {
  if (j.contains(key) && !j.at(key).is_null()) out = get<T>(j, key, where);
}

template <typename T>
void maybe(const json& j, const char* key, const char* where, std::optional<T>& out) {
  if (j.contains(key) && !j.at(key).is_null()) out = get<T>(j, key, where);
}

int default_order(MethodKind m) {
  switch (m) {
    case MethodKind::kGd: return 1;
    case MethodKind::kBtm: return 3;
    default: return 2;
  }
}

bool is_basic(MethodKind m) {
  return m == MethodKind::kGd || m == MethodKind::kCrn || m == MethodKind::kBtm;
}

ProblemSpec parse_problem(const json& j) {
  const char* where = "problem";
  check_keys(j, where,
             {"kind", "dataset", "synth", "dimension", "mu", "normalize", "lipschitz", "x0",
              "expected_shape"});
  ProblemSpec spec;
  try {
    spec.kind = problem_kind_from_string(get<std::string>(j, "kind", where));
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(std::string("problem: ") + e.what());
  }
  maybe(j, "dataset", where, spec.dataset);
  if (j.contains("synth")) {
    const json& s = j.at("synth");
    check_keys(s, "problem.synth", {"n", "d", "seed"});
    SynthSpec synth;
    synth.n = get<Eigen::Index>(s, "n", "problem.synth");
    synth.d = get<Eigen::Index>(s, "d", "problem.synth");
    maybe(s, "seed", "problem.synth", synth.seed);
    if (synth.n < 1 || synth.d < 1) throw ConfigError("problem.synth: n and d must be positive");
    spec.synth = synth;
  }
  maybe(j, "dimension", where, spec.dimension);
  maybe(j, "mu", where, spec.mu);
  maybe(j, "normalize", where, spec.normalize);
  if (!(spec.mu >= 0.0)) throw ConfigError("problem: mu must be nonnegative");
  if (j.contains("lipschitz")) {
    const json& l = j.at("lipschitz");
    if (!l.is_object()) throw ConfigError("problem.lipschitz: expected an object");
    for (const auto& [key, value] : l.items()) {
      if (key != "1" && key != "2" && key != "3") {
        throw ConfigError("problem.lipschitz: keys must be \"1\", \"2\" or \"3\"");
      }
      if (!value.is_number() || !(value.get<double>() > 0.0)) {
        throw ConfigError("problem.lipschitz: constants must be positive numbers");
      }
      spec.lipschitz[std::stoi(key)] = value.get<double>();
    }
  }
  if (j.contains("x0")) {
    const json& x = j.at("x0");
    if (x.is_number()) {
      spec.x0 = {x.get<double>()};
    } else if (x.is_array()) {
      spec.x0 = get<std::vector<double>>(j, "x0", where);
    } else {
      throw ConfigError("problem.x0: expected a number or an array");
    }
  }
  if (j.contains("expected_shape")) {
    const auto shape = get<std::vector<Eigen::Index>>(j, "expected_shape", where);
    if (shape.size() != 2) throw ConfigError("problem.expected_shape: expected [n, d]");
    spec.expected_shape = std::make_pair(shape[0], shape[1]);
  }

  const bool data_kind = spec.kind != ProblemKind::kNesterovLowerBound;
  if (data_kind && !spec.dataset == !spec.synth) {
    throw ConfigError("problem: give exactly one of 'dataset' or 'synth'");
  }
  if (!data_kind && !spec.dimension) throw ConfigError("problem: nesterov_lb needs 'dimension'");
  return spec;
}

MethodEntry parse_method(const json& j, const ProblemSpec& problem, const RunBlock& run,
                         std::size_t index) {
  const std::string where_s = "methods[" + std::to_string(index) + "]";
  const char* where = where_s.c_str();
  check_keys(j, where,
             {"method", "label", "p", "M", "L", "max_iters", "grad_tol", "gamma",
              "bdgm_max_iters", "nu_p", "nu_max", "nu0", "theta", "bisect_max", "H",
              "segment_max_probes", "prox_max_steps", "sigma", "nu", "R", "inner_max"});
  MethodEntry e;
  MethodConfig& c = e.cfg;
  c.method = method_kind_from_string(get<std::string>(j, "method", where));
  c.p = default_order(c.method);
  maybe(j, "p", where, c.p);
  c.max_iters = run.max_iters;
  c.grad_tol = run.grad_tol;

  auto it = problem.lipschitz.find(c.p);
  if (it != problem.lipschitz.end()) {
    c.L = it->second;
    c.M = c.p == 3 ? 6.0 * it->second : it->second;
  }
  const bool has_M = j.contains("M");
  maybe(j, "M", where, c.M);
  maybe(j, "L", where, c.L);
  if (!has_M && it == problem.lipschitz.end()) {
    throw ConfigError(where_s + ": no 'M' and no Lipschitz constant for p = " +
                      std::to_string(c.p));
  }
  maybe(j, "max_iters", where, c.max_iters);
  maybe(j, "grad_tol", where, c.grad_tol);
  maybe(j, "gamma", where, c.gamma);
  maybe(j, "bdgm_max_iters", where, c.bdgm_max_iters);
  maybe(j, "nu_p", where, c.nu_p);
  maybe(j, "nu_max", where, c.nu_max);
  maybe(j, "nu0", where, c.nu0);
  maybe(j, "theta", where, c.theta);
  maybe(j, "bisect_max", where, c.bisect_max);
  maybe(j, "H", where, c.H);
  maybe(j, "segment_max_probes", where, c.segment_max_probes);
  maybe(j, "prox_max_steps", where, c.prox_max_steps);
  maybe(j, "sigma", where, c.sigma);
  maybe(j, "nu", where, c.nu_opt);
  maybe(j, "R", where, c.R);
  maybe(j, "inner_max", where, c.inner_max);
  e.label = to_string(c.method);
  if (!is_basic(c.method)) e.label += "_p" + std::to_string(c.p);
  maybe(j, "label", where, e.label);
  validate(c);
  return e;
}

Vector make_x0(const ProblemSpec& spec, Eigen::Index d) {
  if (spec.x0.empty()) return Vector::Zero(d);
  if (spec.x0.size() == 1) return Vector::Constant(d, spec.x0[0]);
  if (static_cast<Eigen::Index>(spec.x0.size()) != d) {
    throw ConfigError("problem.x0: has " + std::to_string(spec.x0.size()) +
                      " entries, problem dimension is " + std::to_string(d));
  }
  return Eigen::Map<const Vector>(spec.x0.data(), d);
}

}  // namespace

BenchmarkConfig parse_config(const json& doc) {
  check_keys(doc, "config", {"name", "problem", "methods", "run", "output"});
  BenchmarkConfig cfg;
  cfg.source = doc;
  maybe(doc, "name", "config", cfg.name);
  if (!doc.contains("problem")) throw ConfigError("config: missing 'problem'");
  cfg.problem = parse_problem(doc.at("problem"));

  if (doc.contains("run")) {
    const json& r = doc.at("run");
    check_keys(r, "run", {"max_iters", "grad_tol", "fstar_budget", "fstar_tol", "fstar"});
    maybe(r, "max_iters", "run", cfg.run.max_iters);
    maybe(r, "grad_tol", "run", cfg.run.grad_tol);
    maybe(r, "fstar_budget", "run", cfg.run.fstar_budget);
    maybe(r, "fstar_tol", "run", cfg.run.fstar_tol);
    maybe(r, "fstar", "run", cfg.run.fstar);
    if (cfg.run.max_iters < 0 || cfg.run.fstar_budget < 0) {
      throw ConfigError("run: budgets must be nonnegative");
    }
  }
  if (doc.contains("output")) {
    const json& o = doc.at("output");
    check_keys(o, "output", {"directory", "formats"});
    maybe(o, "directory", "output", cfg.output.directory);
    maybe(o, "formats", "output", cfg.output.formats);
    for (const auto& f : cfg.output.formats) {
      if (f != "csv" && f != "json") throw ConfigError("output.formats: expected 'csv' or 'json'");
    }
  }

  if (!doc.contains("methods") || !doc.at("methods").is_array() || doc.at("methods").empty()) {
    throw ConfigError("config: 'methods' must be a non-empty list");
  }
  std::set<std::string> labels;
  std::size_t i = 0;
  for (const auto& m : doc.at("methods")) {
    try {
      cfg.methods.push_back(parse_method(m, cfg.problem, cfg.run, i));
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      throw ConfigError("methods[" + std::to_string(i) + "]: " + e.what());
    }
    if (!labels.insert(cfg.methods.back().label).second) {
      throw ConfigError("methods: duplicate label '" + cfg.methods.back().label + "'");
    }
    ++i;
  }
  return cfg;
}

std::vector<std::string> preset_names() {
  return {"a9a-logreg-strong", "a9a-logreg-convex", "nesterov-lb", "poisson-synth"};
}

std::string preset_description(const std::string& name) {
  if (name == "a9a-logreg-strong") return "a9a logistic regression, mu = 1e-4, x0 = 3e, L2 = 0.1";
  if (name == "a9a-logreg-convex") return "a9a logistic regression, mu = 0, x0 = 3e, L2 = L3 = 0.1";
  if (name == "nesterov-lb") return "third-order lower-bound function, d = 20, mu = 1e-3, L2 = L3 = 10, x0 = 0";
  if (name == "poisson-synth") return "synthetic Poisson regression, n = 6000, d = 21, L1 = L2 = L3 = 1, x0 = e";
  throw ConfigError("unknown preset '" + name + "'");
}

json preset_json(const std::string& name) {
  if (name == "a9a-logreg-strong") {
    return {{"name", name},
            {"problem",
             {{"kind", "logistic"},
              {"dataset", "data/a9a"},
              {"dimension", 123},
              {"expected_shape", {32561, 123}},
              {"mu", 1e-4},
              {"normalize", true},
              {"lipschitz", {{"2", 0.1}}},
              {"x0", 3.0}}},
            {"methods", json::array({{{"method", "crn"}}})},
            {"run", {{"max_iters", 100}}}};
  }
  if (name == "a9a-logreg-convex") {
    return {{"name", name},
            {"problem",
             {{"kind", "logistic"},
              {"dataset", "data/a9a"},
              {"dimension", 123},
              {"expected_shape", {32561, 123}},
              {"mu", 0.0},
              {"normalize", true},
              {"lipschitz", {{"2", 0.1}, {"3", 0.1}}},
              {"x0", 3.0}}},
            {"methods", json::array({{{"method", "crn"}},
                                     {{"method", "natm"}, {"p", 2}},
                                     {{"method", "nata"}, {"p", 2}},
                                     {{"method", "near_optimal"}, {"p", 2}},
                                     {{"method", "ppss"}, {"p", 2}},
                                     {{"method", "optimal"}, {"p", 2}}})},
            {"run", {{"max_iters", 50}}}};
  }
  if (name == "nesterov-lb") {
    return {{"name", name},
            {"problem",
             {{"kind", "nesterov_lb"},
              {"dimension", 20},
              {"mu", 1e-3},
              {"lipschitz", {{"2", 10.0}, {"3", 10.0}}},
              {"x0", 0.0}}},
            {"methods", json::array({{{"method", "crn"}}, {{"method", "btm"}}})},
            {"run", {{"max_iters", 2000}, {"fstar_budget", 5000}}}};
  }
  if (name == "poisson-synth") {
    return {{"name", name},
            {"problem",
             {{"kind", "poisson"},
              {"synth", {{"n", 6000}, {"d", 21}, {"seed", 1}}},
              {"mu", 0.0},
              {"normalize", false},
              {"lipschitz", {{"1", 1.0}, {"2", 1.0}, {"3", 1.0}}},
              {"x0", 1.0}}},
            // L = 1 is far below the true constants of the unscaled sum, which
            // NATA's acceptance floor cannot tolerate; it gets larger M.
            {"methods", json::array({{{"method", "crn"}},
                                     {{"method", "nata"}, {"p", 2}, {"M", 100.0}},
                                     {{"method", "optimal"}, {"p", 2}},
                                     {{"method", "btm"}},
                                     {{"method", "nata"}, {"p", 3}, {"M", 600.0}},
                                     {{"method", "natm"}, {"p", 3}},
                                     {{"method", "optimal"}, {"p", 3}}})},
            // f is near 6e3, so gradients below about 1e-9 are rounding noise.
            {"run", {{"max_iters", 100}, {"grad_tol", 1e-9}}}};
  }
  throw ConfigError("unknown preset '" + name + "'");
}

Instance build_instance(const ProblemSpec& spec) {
  std::vector<std::string> warnings;
  if (spec.kind == ProblemKind::kNesterovLowerBound) {
    const Eigen::Index d = *spec.dimension;
    ProblemOracle oracle = ProblemOracle::nesterov_lower_bound(d, spec.mu);
    for (const auto& [p, L] : spec.lipschitz) oracle.set_lipschitz(p, L);
    return {std::move(oracle), make_x0(spec, d), {}};
  }

  Dataset data;
  if (spec.dataset) {
    if (!std::filesystem::exists(*spec.dataset)) {
      throw ConfigError("dataset '" + *spec.dataset + "' not found");
    }
    LibsvmOptions opts;
    opts.dimension = spec.dimension;
    try {
      data = load_libsvm(*spec.dataset, opts);
    } catch (const Error& e) {
      throw ConfigError(std::string("dataset: ") + e.what());
    }
    if (spec.expected_shape &&
        (data.samples() != spec.expected_shape->first ||
         data.dimension() != spec.expected_shape->second)) {
      std::ostringstream os;
      os << "dataset '" << *spec.dataset << "' has shape (" << data.samples() << ", "
         << data.dimension() << "), expected (" << spec.expected_shape->first << ", "
         << spec.expected_shape->second << ")";
      warnings.push_back(os.str());
    }
  } else {
    const SynthKind k =
        spec.kind == ProblemKind::kPoisson ? SynthKind::kPoisson : SynthKind::kLogistic;
    data = synth_instance(k, spec.synth->n, spec.synth->d, spec.synth->seed);
  }
  if (spec.normalize) {
    NormalizedDataset nd = normalize_rows(std::move(data));
    if (nd.zero_rows > 0) {
      warnings.push_back(std::to_string(nd.zero_rows) + " all-zero rows left unnormalized");
    }
    data = std::move(nd.data);
  }
  const Eigen::Index d = data.dimension();
  try {
    ProblemOracle oracle = spec.kind == ProblemKind::kPoisson
                               ? ProblemOracle::poisson(std::move(data), spec.mu)
                               : ProblemOracle::logistic(std::move(data), spec.mu);
    for (const auto& [p, L] : spec.lipschitz) oracle.set_lipschitz(p, L);
    return {std::move(oracle), make_x0(spec, d), std::move(warnings)};
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(std::string("dataset: ") + e.what());
  }
}

FstarEstimate estimate_fstar(const Objective& f, const Vector& x0, double L2, int budget,
                             double tol) {
  MethodConfig c;
  c.method = MethodKind::kCrn;
  c.p = 2;
  c.M = L2;
  c.max_iters = budget;
  c.grad_tol = tol;
  const RunTrace t = basic_run(f, x0, c);
  if (t.status == RunStatus::kError) throw Error("reference run failed: " + t.message);
  FstarEstimate out;
  out.fstar = t.records.back().f;
  out.xstar = t.solution;
  out.iters = t.records.back().iter;
  out.grad_norm = t.records.back().grad_norm;
  return out;
}

RunSummary summarize(const std::vector<MethodEntry>& methods, const std::vector<RunTrace>& traces,
                     const std::vector<DiagnosticsReport>& reports, std::optional<double> fstar) {
  RunSummary s;
  int longest = 0;
  for (std::size_t i = 0; i < traces.size(); ++i) {
    const RunTrace& t = traces[i];
    MethodSummary m;
    m.label = methods[i].label;
    m.method = t.method;
    m.p = t.p;
    m.status = t.status;
    m.message = t.message;
    if (!t.records.empty()) {
      const TraceRecord& last = t.records.back();
      m.iterations = last.iter;
      m.final_f = last.f;
      if (fstar) m.final_gap = last.f - *fstar;
      m.final_grad_norm = last.grad_norm;
      m.wall_ms = last.wall_ms;
      for (const auto& r : t.records) m.subsolver_evals += r.subsolver_evals;
      longest = std::max(longest, last.iter);
    }
    if (i < reports.size()) m.diagnostics_passed = reports[i].passed();
    s.methods.push_back(std::move(m));
  }
  for (int it : {1, 10, 30, 100, 300, 1000, 3000, 10000}) {
    if (it > longest) break;
    Checkpoint cp;
    cp.iter = it;
    std::vector<std::pair<double, std::string>> at;
    for (std::size_t i = 0; i < traces.size(); ++i) {
      for (const auto& r : traces[i].records) {
        if (r.iter == it) at.emplace_back(r.f, methods[i].label);
      }
    }
    std::stable_sort(at.begin(), at.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    for (auto& [f, label] : at) cp.order.push_back(label);
    s.checkpoints.push_back(std::move(cp));
  }
  return s;
}

json to_json(const RunSummary& summary) {
  json methods = json::array();
  for (const auto& m : summary.methods) {
    json j = {{"label", m.label},
              {"method", m.method},
              {"p", m.p},
              {"status", to_string(m.status)},
              {"iterations", m.iterations},
              {"final_f", m.final_f},
              {"final_grad_norm", m.final_grad_norm},
              {"subsolver_evals", m.subsolver_evals},
              {"wall_ms", m.wall_ms},
              {"diagnostics_passed", m.diagnostics_passed}};
    if (m.final_gap) j["final_gap"] = *m.final_gap;
    if (!m.message.empty()) j["message"] = m.message;
    methods.push_back(std::move(j));
  }
  json checkpoints = json::array();
  for (const auto& c : summary.checkpoints) checkpoints.push_back({{"iter", c.iter}, {"order", c.order}});
  return {{"methods", methods}, {"checkpoints", checkpoints}};
}

int BenchmarkResult::exit_code(bool check) const {
  for (const auto& t : traces) {
    if (t.status == RunStatus::kError) return kExitMethod;
  }
  if (check) {
    for (const auto& r : reports) {
      if (!r.passed()) return kExitDiagnostics;
    }
  }
  return kExitOk;
}

DiagnosticsReport diagnose(const RunTrace& trace, const MethodEntry& entry, const ProblemSpec& spec,
                           const Vector& x0, const std::optional<FstarEstimate>& reference) {
  const MethodConfig& c = entry.cfg;
  ContractInputs in;
  if (c.method == MethodKind::kNata) in.nu_p = c.nu_p.value_or(default_nu(c.p));
  if (reference) {
    in.fstar = reference->fstar;
    if (reference->xstar.size() > 0) in.xstar = reference->xstar;
  }
  in.x0 = x0;
  DiagnosticsReport report = verify_contracts(trace, in);

  const bool theorem = (c.method == MethodKind::kCrn || c.method == MethodKind::kBtm) &&
                       spec.mu > 0.0 && reference && spec.lipschitz.count(c.p);
  if (theorem) {
    TheoremInputs t;
    t.mu = spec.mu;
    t.M = c.M;
    t.L = spec.lipschitz.at(c.p);
    t.p = c.p;
    t.fstar = reference->fstar;
    if (reference->xstar.size() > 0) t.xstar = reference->xstar;
    report.append(verify_theorem1(trace, t));
  }
  return report;
}

BenchmarkResult run_benchmark(const BenchmarkConfig& config) {
  BenchmarkResult result;
  Instance inst = build_instance(config.problem);
  result.warnings = inst.warnings;

  if (config.run.fstar) {
    FstarEstimate e;
    e.fstar = *config.run.fstar;
    result.reference = e;
  } else if (config.problem.lipschitz.count(2) && config.run.fstar_budget > 0) {
    try {
      result.reference = estimate_fstar(inst.oracle, inst.x0, config.problem.lipschitz.at(2),
                                        config.run.fstar_budget, config.run.fstar_tol);
      if (result.reference->grad_norm > config.run.fstar_tol) {
        result.warnings.push_back("reference run stopped at |grad f| = " +
                                  std::to_string(result.reference->grad_norm) + " after " +
                                  std::to_string(result.reference->iters) + " iterations");
      }
    } catch (const Error& e) {
      result.warnings.push_back(std::string("no reference optimum: ") + e.what());
    }
  }
  for (const MethodEntry& entry : config.methods) {
    MethodConfig c = entry.cfg;
    const bool theorem = (c.method == MethodKind::kCrn || c.method == MethodKind::kBtm) &&
                         config.problem.mu > 0.0;
    c.keep_iterates = c.keep_iterates || theorem;
    RunTrace t;
    try {
      t = run_method(inst.oracle, inst.x0, c);
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      t.method = to_string(c.method);
      t.p = c.p;
      t.M = c.M;
      t.status = RunStatus::kError;
      t.message = e.what();
    }
    DiagnosticsReport report = diagnose(t, entry, config.problem, inst.x0, result.reference);
    result.traces.push_back(std::move(t));
    result.reports.push_back(std::move(report));
  }
  std::optional<double> fstar;
  if (result.reference) fstar = result.reference->fstar;
  result.summary = summarize(config.methods, result.traces, result.reports, fstar);
  return result;
}

void write_outputs(const BenchmarkConfig& config, const BenchmarkResult& result) {
  namespace fs = std::filesystem;
  const fs::path dir(config.output.directory);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create '" + dir.string() + "': " + ec.message());

  std::optional<double> fstar;
  if (result.reference) fstar = result.reference->fstar;
  for (std::size_t i = 0; i < result.traces.size(); ++i) {
    const RunTrace& t = result.traces[i];
    const std::string& label = config.methods[i].label;
    for (const auto& format : config.output.formats) {
      const fs::path path = dir / (label + "." + format);
      if (format == "csv") {
        std::ostringstream os;
        write_trace_csv(os, t, fstar);
        write_text_file(path.string(), os.str());
      } else {
        json doc = {{"config", config.source},
                    {"label", label},
                    {"trace", trace_to_json(t)},
                    {"diagnostics", to_json(result.reports[i])}};
        if (fstar) doc["fstar"] = *fstar;
        doc["context"] = {{"mu", config.problem.mu}};
        if (config.methods[i].cfg.L) doc["context"]["L"] = *config.methods[i].cfg.L;
        if (config.methods[i].cfg.method == MethodKind::kNata) {
          doc["context"]["nu_p"] =
              config.methods[i].cfg.nu_p.value_or(default_nu(config.methods[i].cfg.p));
        }
        write_text_file(path.string(), doc.dump(1) + "\n");
      }
    }
  }
  json summary = to_json(result.summary);
  summary["name"] = config.name;
  if (fstar) summary["fstar"] = *fstar;
  summary["warnings"] = result.warnings;
  write_text_file((dir / "summary.json").string(), summary.dump(1) + "\n");
}

}  // namespace hotm
