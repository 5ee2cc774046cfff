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

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "randhyp/base_dynamics.hpp"
#include "randhyp/fiber_dynamics.hpp"
#include "randhyp/verdict.hpp"

namespace randhyp {

enum class Task { lyapunov, certify_expansion, minimize, splitting, variable_rate, trajectory, full_pipeline };

std::string to_string(Task task);
std::optional<Task> parse_task(std::string_view name);
std::vector<std::string> task_names();

/// Numeric task parameters, wire key in brackets. Defaults are filled by
/// parse_config and echoed in every report.
struct TaskParams {
  std::size_t samples = 20;                // [samples]
  std::size_t n = 10000;                   // [n] trajectory length
  std::size_t batches = 20;                // [batches]
  std::size_t n_max = 12;                  // [n_max] horizon of A_n
  std::size_t grid_size = 4096;            // [grid_size]
  std::size_t depth = 50;                  // [depth] truncation of C
  std::optional<double> lambda;            // [lambda]
  std::optional<double> a_bound;           // [a_bound] declared bound on A
  std::size_t supadditivity_n = 12;        // [supadditivity_n]
  std::size_t supadditivity_samples = 4;   // [supadditivity_samples]
  std::size_t curve_n_max = 64;            // [curve_n_max]
  std::size_t curve_samples = 4;           // [curve_samples]
  std::size_t curve_stride = 1;            // [curve_stride]
  double temperedness_threshold = 0.02;    // [temperedness_threshold]
  std::size_t horizon = 50;                // [horizon]
  std::size_t p_max = 8;                   // [p_max] 0 disables the orbit search
  std::size_t birkhoff_starts = 8;         // [birkhoff_starts]
  std::size_t birkhoff_n = 1000;           // [birkhoff_n]
  std::optional<std::vector<double>> rates;  // [rates] per-symbol lambda(omega)
};

/// {"seed": 1, "task": "...", "base": {...}, "fiber": {...},
///  "params": {...}, "out_dir": "..."}; only seed, base and fiber are required.
struct ExperimentConfig {
  BaseSystemSpec base;
  FiberFamilySpec fiber;
  std::uint64_t seed = 0;
  std::optional<Task> task;
  TaskParams params;
  std::optional<std::string> out_dir;
};

/// Throws ConfigError listing every problem found.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig config_from_json(const nlohmann::json& document);

/// Fully populated configuration; parse_config(to_json(c)) reproduces c.
nlohmann::json to_json(const ExperimentConfig& config);

/// Series written next to the report.
struct CsvTable {
  std::string name;  // file name
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

std::string format_number(double value);
std::string to_csv(const CsvTable& table);

struct RunReport {
  nlohmann::json document;  // schema, version, task, config, runtime, payload, verdict, error
  std::optional<Verdict> verdict;
  int exit_code = 1;
  std::vector<CsvTable> tables;
};

/// Runs `task` on a validated config. Library errors are captured in the
/// report ("error" member, exit code 1); the numeric payload depends only on
/// the config, not on `threads`.
RunReport run_task(const ExperimentConfig& config, Task task, unsigned threads = 1);

/// Writes report.json and the CSV tables into dir (created if missing).
std::vector<std::filesystem::path> write_report(const RunReport& report,
                                                const std::filesystem::path& dir);

}  // namespace randhyp
