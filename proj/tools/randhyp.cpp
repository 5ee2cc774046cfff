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

// randhyp <task> --config <file> [--out <dir>] [--threads N]
//
// Exit codes: 0 certified / positive / complete, 2 inconclusive or violated,
// 1 on any error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "randhyp/errors.hpp"
#include "randhyp/report.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Random uniformly expanding and hyperbolic skew products"};
  std::string task_name;
  std::string config_path;
  std::string out_dir;
  unsigned threads = 1;
  app.add_option("task", task_name, "Task to run")
      ->required()
      ->check(CLI::IsMember(randhyp::task_names()));
  app.add_option("--config", config_path, "Experiment configuration (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "Output directory (default: config out_dir, else .)");
  app.add_option("--threads", threads, "Worker threads")
      ->envname("RANDHYP_THREADS")
      ->check(CLI::Range(1u, 1024u));
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  std::ifstream in(config_path);
  std::stringstream text;
  text << in.rdbuf();

  randhyp::ExperimentConfig config;
  try {
    config = randhyp::parse_config(text.str());
  } catch (const randhyp::ConfigError& e) {
    std::cerr << e.what() << '\n';
    return 1;
  }
  const auto task = *randhyp::parse_task(task_name);
  if (out_dir.empty()) out_dir = config.out_dir.value_or(".");

  const auto report = randhyp::run_task(config, task, threads);
  try {
    for (const auto& path : randhyp::write_report(report, out_dir)) std::cout << "wrote " << path.string() << '\n';
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  if (report.verdict) {
    std::cout << "verdict: " << randhyp::to_string(*report.verdict) << '\n';
  } else {
    std::cerr << "error: " << report.document["error"]["message"].get<std::string>() << '\n';
  }
  return report.exit_code;
}
