// Copyright 2026 The randhyp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "randhyp/report.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <memory>

#include "randhyp/cocycle.hpp"
#include "randhyp/ergodic_optimizer.hpp"
#include "randhyp/errors.hpp"
#include "randhyp/expansion.hpp"
#include "randhyp/lyapunov.hpp"
#include "randhyp/splitting.hpp"
#include "randhyp/version.hpp"

namespace randhyp {

namespace {

using nlohmann::json;
using Issues = std::vector<ConfigError::Issue>;

constexpr std::array<std::pair<Task, const char*>, 7> kTaskNames{{
    {Task::lyapunov, "lyapunov"},
    {Task::certify_expansion, "certify-expansion"},
    {Task::minimize, "minimize"},
    {Task::splitting, "splitting"},
    {Task::variable_rate, "variable-rate"},
    {Task::trajectory, "trajectory"},
    {Task::full_pipeline, "full-pipeline"},
}};

class ParamReader {
 public:
  ParamReader(const json& params, Issues& issues) : params_(params), issues_(issues) {}

  void count(const char* key, std::size_t& out, std::size_t lo, std::size_t hi) {
    const auto it = params_.find(key);
    if (it == params_.end()) return;
    const bool integral = it->is_number_unsigned() || (it->is_number_integer() && it->get<std::int64_t>() >= 0);
    if (!integral || it->get<std::uint64_t>() < lo || it->get<std::uint64_t>() > hi) {
      issues_.push_back({path(key), "must be an integer in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]"});
      return;
    }
    out = it->get<std::size_t>();
  }

  void positive(const char* key, double& out) {
    std::optional<double> v;
    positive(key, v);
    if (v) out = *v;
  }

  void positive(const char* key, std::optional<double>& out) {
    const auto it = params_.find(key);
    if (it == params_.end()) return;
    if (!it->is_number() || !std::isfinite(it->get<double>()) || it->get<double>() <= 0.0) {
      issues_.push_back({path(key), "must be a positive finite number"});
      return;
    }
    out = it->get<double>();
  }

  void positive_list(const char* key, std::optional<std::vector<double>>& out) {
    const auto it = params_.find(key);
    if (it == params_.end()) return;
    std::vector<double> values;
    bool ok = it->is_array() && !it->empty();
    if (ok) {
      for (const auto& e : *it) {
        ok = ok && e.is_number() && std::isfinite(e.get<double>()) && e.get<double>() > 0.0;
        if (ok) values.push_back(e.get<double>());
      }
    }
    if (!ok) {
      issues_.push_back({path(key), "must be a non-empty array of positive numbers"});
      return;
    }
    out = std::move(values);
  }

  static std::string path(const char* key) { return std::string("params.") + key; }

 private:
  const json& params_;
  Issues& issues_;
};

TaskParams parse_params(const json& j, Issues& issues) {
  TaskParams p;
  if (!j.is_object()) {
    issues.push_back({"params", "must be an object"});
    return p;
  }
  static const std::vector<std::string> known{
      "samples", "n", "batches", "n_max", "grid_size", "depth", "lambda", "a_bound",
      "supadditivity_n", "supadditivity_samples", "curve_n_max", "curve_samples", "curve_stride",
      "temperedness_threshold", "horizon", "p_max", "birkhoff_starts", "birkhoff_n", "rates"};
  for (const auto& [key, value] : j.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      issues.push_back({"params." + key, "unknown parameter"});
    }
  }
  constexpr std::size_t kBig = 100'000'000;
  ParamReader r(j, issues);
  r.count("samples", p.samples, 1, 1'000'000);
  r.count("n", p.n, 2, kBig);
  r.count("batches", p.batches, 1, 100'000);
  r.count("n_max", p.n_max, 4, 1'000'000);
  r.count("grid_size", p.grid_size, 1, std::size_t{1} << 24);
  r.count("depth", p.depth, 1, 100'000);
  r.positive("lambda", p.lambda);
  r.positive("a_bound", p.a_bound);
  r.count("supadditivity_n", p.supadditivity_n, 2, 20);
  r.count("supadditivity_samples", p.supadditivity_samples, 1, 1'000'000);
  r.count("curve_n_max", p.curve_n_max, 1, 1'000'000);
  r.count("curve_samples", p.curve_samples, 1, 100'000);
  r.count("curve_stride", p.curve_stride, 1, 1'000'000);
  r.positive("temperedness_threshold", p.temperedness_threshold);
  r.count("horizon", p.horizon, 2, 100'000);
  r.count("p_max", p.p_max, 0, 12);
  r.count("birkhoff_starts", p.birkhoff_starts, 1, 100'000);
  r.count("birkhoff_n", p.birkhoff_n, 1, kBig);
  r.positive_list("rates", p.rates);
  if (p.batches > p.n) issues.push_back({"params.batches", "must not exceed params.n"});
  if (p.lambda && p.a_bound && *p.lambda >= *p.a_bound) {
    issues.push_back({"params.lambda", "lambda = " + format_number(*p.lambda) +
                                           " violates the requirement Λ > λ > 0 (declared A bound " +
                                           format_number(*p.a_bound) + ")"});
  }
  return p;
}

json params_json(const TaskParams& p) {
  json j{{"samples", p.samples},
         {"n", p.n},
         {"batches", p.batches},
         {"n_max", p.n_max},
         {"grid_size", p.grid_size},
         {"depth", p.depth},
         {"supadditivity_n", p.supadditivity_n},
         {"supadditivity_samples", p.supadditivity_samples},
         {"curve_n_max", p.curve_n_max},
         {"curve_samples", p.curve_samples},
         {"curve_stride", p.curve_stride},
         {"temperedness_threshold", p.temperedness_threshold},
         {"horizon", p.horizon},
         {"p_max", p.p_max},
         {"birkhoff_starts", p.birkhoff_starts},
         {"birkhoff_n", p.birkhoff_n}};
  if (p.lambda) j["lambda"] = *p.lambda;
  if (p.a_bound) j["a_bound"] = *p.a_bound;
  if (p.rates) j["rates"] = *p.rates;
  return j;
}

std::vector<std::string> row(std::initializer_list<double> values) {
  std::vector<std::string> out;
  for (double v : values) out.push_back(format_number(v));
  return out;
}

std::string word_string(const std::vector<int>& word) {
  std::string s;
  for (int c : word) s += (s.empty() ? "" : ".") + std::to_string(c);
  return s;
}

/// Everything a task needs, built once per run.
struct Context {
  const ExperimentConfig& config;
  std::shared_ptr<const BaseSystem> system;
  FiberFamily family;
  unsigned threads;
  std::vector<CsvTable>& tables;
};

json lyapunov_payload(Context& c) {
  const auto& p = c.config.params;
  const auto report = exponent_positivity_report(c.family, c.system, c.config.seed, p.samples, p.n, c.threads);
  const BaseState omega = sample_base(c.system, c.config.seed, 1).front();
  const ManifoldPoint x = sample_points(c.family.dim(), c.config.seed, 1).front();
  const Vector v = sample_directions(c.family.dim(), c.config.seed, 1).front();
  const auto top = top_exponent(c.family, make_tangent_point(omega, x, v), p.n, p.batches);
  const auto spectrum = oseledets_spectrum(c.family, omega, x, p.n);
  double sum = 0.0;
  for (double e : spectrum.exponents) sum += e;

  CsvTable table{"lyapunov_samples.csv", {"omega"}, {}};
  for (int k = 0; k < c.family.dim(); ++k) table.header.push_back("exponent_" + std::to_string(k + 1));
  for (const auto& s : report.per_sample) {
    std::vector<std::string> r{std::to_string(s.index)};
    for (double e : s.exponents) r.push_back(format_number(e));
    table.rows.push_back(std::move(r));
  }
  c.tables.push_back(std::move(table));

  return {{"positivity", to_json(report)},
          {"top_exponent", {{"value", top.value}, {"n", top.n}, {"batch_std_err", top.batch_std_err},
                            {"batches", top.batches}}},
          {"spectrum", {{"exponents", spectrum.exponents}, {"n", spectrum.n},
                        {"log_det_mean", spectrum.log_det_mean},
                        {"sum_rule_error", std::abs(sum - spectrum.log_det_mean)}}}};
}

json certify_payload(Context& c, Verdict& verdict) {
  const auto& p = c.config.params;
  CertifyOptions options;
  options.samples = p.samples;
  options.n_max = p.n_max;
  options.grid_size = p.grid_size;
  options.depth = p.depth;
  options.lambda = p.lambda;
  options.supadditivity_n = p.supadditivity_n;
  options.supadditivity_samples = p.supadditivity_samples;
  options.curve_n_max = p.curve_n_max;
  options.curve_samples = p.curve_samples;
  options.curve_stride = p.curve_stride;
  options.temperedness_threshold = p.temperedness_threshold;
  options.threads = c.threads;
  const auto cert = certify_expansion(c.family, c.system, c.config.seed, options);
  verdict = cert.verdict;

  CsvTable a_table{"a_table.csv", {"n", "lower", "upper"}, {}};
  for (const auto& r : cert.first_table->rows) {
    a_table.rows.push_back(row({static_cast<double>(r.n), r.lower, r.upper}));
  }
  CsvTable trend{"a_trend.csv", {"n", "mean_upper_over_n", "mean_lower_over_n"}, {}};
  for (std::size_t k = 0; k < cert.rate.trend_n.size(); ++k) {
    trend.rows.push_back(row({static_cast<double>(cert.rate.trend_n[k]), cert.rate.trend[k], cert.rate.trend_lower[k]}));
  }
  CsvTable curve{"temperedness.csv", {"n", "value"}, {}};
  for (const auto& q : cert.temperedness_curve) curve.rows.push_back(row({static_cast<double>(q.n), q.value}));
  c.tables.push_back(std::move(a_table));
  c.tables.push_back(std::move(trend));
  c.tables.push_back(std::move(curve));
  return to_json(cert);
}

json minimize_payload(Context& c) {
  const auto& p = c.config.params;
  LambdaOptions options;
  options.samples = p.samples;
  options.n = p.n_max;
  options.grid_size = p.grid_size;
  options.birkhoff_starts = p.birkhoff_starts;
  options.birkhoff_n = p.birkhoff_n;
  options.p_max = p.p_max;
  options.threads = c.threads;
  const auto estimate = lambda_estimate(c.family, c.system, c.config.seed, options);
  if (!estimate.orbits.empty()) {
    CsvTable orbits{"orbits.csv", {"word", "period"}, {}};
    for (int k = 0; k < c.family.dim(); ++k) orbits.header.push_back("x0_" + std::to_string(k + 1));
    for (int k = 0; k < c.family.dim(); ++k) orbits.header.push_back("v0_" + std::to_string(k + 1));
    orbits.header.push_back("phi_average");
    orbits.header.push_back("residual");
    for (const auto& o : estimate.orbits) {
      std::vector<std::string> r{word_string(o.word), std::to_string(o.period)};
      for (double x : o.x0.coords) r.push_back(format_number(x));
      for (double v : o.v0) r.push_back(format_number(v));
      r.push_back(format_number(o.phi_average));
      r.push_back(format_number(o.residual));
      orbits.rows.push_back(std::move(r));
    }
    c.tables.push_back(std::move(orbits));
  }
  return to_json(estimate);
}

json splitting_payload(Context& c, Verdict& verdict) {
  const auto& p = c.config.params;
  SplittingOptions options;
  options.samples = p.samples;
  options.horizon = p.horizon;
  options.n = p.n;
  options.depth = p.depth;
  options.lambda = p.lambda;
  options.threads = c.threads;
  const auto cert = hyperbolicity_certificate(c.family, c.system, c.config.seed, options);
  verdict = cert.verdict;
  CsvTable table{"splitting_samples.csv", {"omega", "angle", "rate1", "rate2", "residual"}, {}};
  for (const auto& s : cert.samples) {
    table.rows.push_back(row({static_cast<double>(s.index), s.angle, s.rate1, s.rate2, s.residual}));
  }
  c.tables.push_back(std::move(table));
  return to_json(cert);
}

json variable_rate_payload(Context& c, Verdict& verdict) {
  const auto& p = c.config.params;
  RateFunction rates = analytic_step_rates(c.family);
  if (p.rates) {
    const auto values = *p.rates;
    rates = [values](int symbol) { return values.at(static_cast<std::size_t>(symbol)); };
  }
  CorollaryOptions options;
  options.n_max = p.n_max;
  options.grid_size = p.grid_size;
  options.rate_samples = p.samples;
  options.threads = c.threads;
  const auto result = variable_rate_corollary(c.family, c.system, c.config.seed, p.samples, rates, options);
  verdict = result.verdict;
  json j = to_json(result);
  j["rates_source"] = p.rates ? "params.rates" : "analytic minimum one-step expansion";
  return j;
}

json trajectory_payload(Context& c) {
  const auto& p = c.config.params;
  const BaseState omega = sample_base(c.system, c.config.seed, 1).front();
  const ManifoldPoint x = sample_points(c.family.dim(), c.config.seed, 1).front();
  const Vector v = sample_directions(c.family.dim(), c.config.seed, 1).front();
  const auto start = make_tangent_point(omega, x, v);
  const auto rows = trajectory(c.family, start, p.n);
  CsvTable table{"trajectory.csv", {"step", "symbol"}, {}};
  for (int k = 0; k < c.family.dim(); ++k) table.header.push_back("x" + std::to_string(k + 1));
  table.header.push_back("log_deriv");
  const auto symbols = omega.symbols(0, p.n);
  for (const auto& r : rows) {
    std::vector<std::string> cells{std::to_string(r.step), std::to_string(symbols[r.step])};
    for (double q : r.coords) cells.push_back(format_number(q));
    cells.push_back(format_number(r.log_deriv));
    table.rows.push_back(std::move(cells));
  }
  c.tables.push_back(std::move(table));
  return {{"n", p.n}, {"birkhoff_sum", birkhoff_sum_phi(c.family, start, p.n)}, {"rows", rows.size()}};
}

json run_payload(Context& c, Task task, std::optional<Verdict>& verdict) {
  Verdict v = Verdict::complete;
  json payload;
  switch (task) {
    case Task::lyapunov: payload = lyapunov_payload(c); break;
    case Task::certify_expansion: payload = certify_payload(c, v); break;
    case Task::minimize: payload = minimize_payload(c); break;
    case Task::splitting: payload = splitting_payload(c, v); break;
    case Task::variable_rate: payload = variable_rate_payload(c, v); break;
    case Task::trajectory: payload = trajectory_payload(c); break;
    case Task::full_pipeline: {
      payload["lyapunov"] = lyapunov_payload(c);
      Verdict expansion = Verdict::inconclusive;
      payload["certify_expansion"] = certify_payload(c, expansion);
      payload["minimize"] = minimize_payload(c);
      v = expansion;
      if (c.family.invertible() && c.family.dim() == 2) {
        Verdict hyperbolic = Verdict::inconclusive;
        payload["splitting"] = splitting_payload(c, hyperbolic);
        if (expansion != Verdict::certified_expanding && hyperbolic == Verdict::certified_hyperbolic) {
          v = hyperbolic;
        }
      }
      break;
    }
  }
  verdict = v;
  return payload;
}

}  // namespace

std::string to_string(Task task) {
  for (const auto& [t, name] : kTaskNames) {
    if (t == task) return name;
  }
  return "unknown";
}

std::optional<Task> parse_task(std::string_view name) {
  for (const auto& [t, n] : kTaskNames) {
    if (name == n) return t;
  }
  return std::nullopt;
}

std::vector<std::string> task_names() {
  std::vector<std::string> out;
  for (const auto& entry : kTaskNames) out.emplace_back(entry.second);
  return out;
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  std::array<char, 32> buffer{};
  const auto result = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
  return {buffer.data(), result.ptr};
}

std::string to_csv(const CsvTable& table) {
  std::string out;
  auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out += (i ? "," : "") + cells[i];
    out += '\n';
  };
  line(table.header);
  for (const auto& r : table.rows) line(r);
  return out;
}

ExperimentConfig parse_config(std::string_view text) {
  json document;
  try {
    document = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("$", std::string("malformed JSON: ") + e.what());
  }
  return config_from_json(document);
}

ExperimentConfig config_from_json(const json& document) {
  if (!document.is_object()) throw ConfigError("$", "configuration must be a JSON object");
  ExperimentConfig config;
  Issues issues;
  auto absorb = [&issues](auto&& fn) {
    try {
      fn();
      return true;
    } catch (const ConfigError& e) {
      issues.insert(issues.end(), e.issues().begin(), e.issues().end());
      return false;
    }
  };

  for (const auto& [key, value] : document.items()) {
    static const std::vector<std::string> known{"seed", "task", "base", "fiber", "params", "out_dir"};
    if (std::find(known.begin(), known.end(), key) == known.end()) issues.push_back({key, "unknown field"});
  }

  if (!document.contains("seed")) {
    issues.push_back({"seed", "missing (the seed is mandatory)"});
  } else {
    const auto& s = document["seed"];
    if (s.is_number_unsigned() || (s.is_number_integer() && s.get<std::int64_t>() >= 0)) {
      config.seed = s.get<std::uint64_t>();
    } else {
      issues.push_back({"seed", "must be a non-negative integer"});
    }
  }

  if (document.contains("task")) {
    const auto& t = document["task"];
    const auto task = t.is_string() ? parse_task(t.get<std::string>()) : std::nullopt;
    if (task) config.task = task;
    else issues.push_back({"task", "unknown task; expected one of lyapunov, certify-expansion, minimize, "
                                   "splitting, variable-rate, trajectory, full-pipeline"});
  }

  bool base_ok = false;
  bool fiber_ok = false;
  if (!document.contains("base")) issues.push_back({"base", "missing"});
  else base_ok = absorb([&] { config.base = parse_base_spec(document["base"], "base"); });
  if (!document.contains("fiber")) issues.push_back({"fiber", "missing"});
  else fiber_ok = absorb([&] { config.fiber = parse_fiber_spec(document["fiber"], "fiber"); });

  if (document.contains("params")) config.params = parse_params(document["params"], issues);

  if (document.contains("out_dir")) {
    if (document["out_dir"].is_string()) config.out_dir = document["out_dir"].get<std::string>();
    else issues.push_back({"out_dir", "must be a string"});
  }

  if (base_ok && fiber_ok) {
    absorb([&] {
      const auto family = FiberFamily::create(config.fiber, config.base.alphabet_size);
      if (!family.x_independent() && config.params.grid_size < 64) {
        issues.push_back({"params.grid_size", "must be at least 64 for " + to_string(family.kind())});
      }
    });
    if (config.params.rates &&
        config.params.rates->size() != static_cast<std::size_t>(config.base.alphabet_size)) {
      issues.push_back({"params.rates", "need one rate per base symbol"});
    }
  }
  if (!issues.empty()) throw ConfigError(std::move(issues));
  return config;
}

json to_json(const ExperimentConfig& config) {
  json j;
  j["seed"] = config.seed;
  if (config.task) j["task"] = to_string(*config.task);
  j["base"] = to_json(config.base);
  j["fiber"] = FiberFamily::create(config.fiber, config.base.alphabet_size).spec_json();
  j["params"] = params_json(config.params);
  if (config.out_dir) j["out_dir"] = *config.out_dir;
  return j;
}

RunReport run_task(const ExperimentConfig& config, Task task, unsigned threads) {
  const auto start = std::chrono::steady_clock::now();
  RunReport report;
  json& doc = report.document;
  doc["schema"] = std::string(kReportSchema);
  doc["version"] = std::string(kVersion);
  doc["task"] = to_string(task);
  doc["config"] = to_json(config);
  doc["payload"] = nullptr;
  doc["error"] = nullptr;
  try {
    auto system = BaseSystem::create(config.base);
    Context context{config, system, FiberFamily::create(config.fiber, config.base.alphabet_size),
                    std::max(1u, threads), report.tables};
    doc["payload"] = run_payload(context, task, report.verdict);
    report.exit_code = exit_code(*report.verdict);
  } catch (const ConfigError& e) {
    json issues = json::array();
    for (const auto& i : e.issues()) issues.push_back({{"path", i.path}, {"message", i.message}});
    doc["error"] = {{"type", "configuration"}, {"message", e.what()}, {"issues", issues}};
  } catch (const UnsupportedError& e) {
    doc["error"] = {{"type", "unsupported"}, {"message", e.what()}};
  } catch (const std::exception& e) {
    doc["error"] = {{"type", "runtime"}, {"message", e.what()}};
  }
  if (doc["error"].is_object()) {
    report.verdict.reset();
    report.exit_code = 1;
    report.tables.clear();
  }
  doc["verdict"] = report.verdict ? json(to_string(*report.verdict)) : json(nullptr);
  doc["exit_code"] = report.exit_code;
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start;
  doc["runtime"] = {{"wall_time_s", elapsed.count()}, {"threads", std::max(1u, threads)}};
  return report;
}

std::vector<std::filesystem::path> write_report(const RunReport& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  auto write = [&](const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ResourceError("cannot write " + path.string());
    out << text;
    written.push_back(path);
  };
  write(dir / "report.json", report.document.dump(2) + "\n");
  for (const auto& table : report.tables) write(dir / table.name, to_csv(table));
  return written;
}

}  // namespace randhyp
