// Copyright 2026 The gpe Authors.

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gpe/constants.hpp"
#include "gpe/error.hpp"
#include "gpe/scenario.hpp"

namespace gpe::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kValidation = 2,
  kTolerance = 3,
  kUsage = 64,
};

inline int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Detector-transition simulator for classical and quantized driving fields", "gpe"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  std::string run_config;
  std::filesystem::path out_dir = "out";
  std::optional<double> dt;
  std::optional<double> t_max;
  unsigned workers = 1;
  auto* run = app.add_subcommand("run", "Run a scenario and write its artifacts");
  run->add_option("config", run_config, "Config file or bundled scenario name")->required();
  run->add_option("-o,--out", out_dir, "Output directory")->capture_default_str();
  run->add_option("--dt", dt, "Override evolution.dt");
  run->add_option("--t-max", t_max, "Override evolution.t_max");
  run->add_option("-j,--workers", workers, "Worker threads for scans")->check(CLI::Range(1u, 256u));

  std::vector<std::string> validate_configs;
  auto* validate = app.add_subcommand("validate", "Validate configs without running them");
  validate->add_option("configs", validate_configs, "Config files or bundled scenario names")->required();

  auto* list = app.add_subcommand("list-scenarios", "List bundled scenarios");
  auto* version = app.add_subcommand("version", "Print version and constants table hash");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  const auto dir = scenario::default_scenario_dir();
  try {
    if (*version) {
      const PhysicalConstants k = active_constants();
      out << "gpe " << GPE_VERSION << '\n'
          << "constants " << k.version << " sha256:" << scenario::sha256_hex(k.canonical_text()) << '\n';
      return kOk;
    }
    if (*list) {
      for (const auto& s : scenario::list_bundled(dir)) out << s.name << "\t" << s.description << '\n';
      return kOk;
    }
    if (*validate) {
      int status = kOk;
      for (const auto& arg : validate_configs) {
        try {
          const auto path = scenario::resolve_config(arg, dir);
          scenario::parse(scenario::load_json(path));
          out << "ok " << path.string() << '\n';
        } catch (const DomainError& e) {
          err << "invalid " << arg << ": " << e.what() << '\n';
          status = kValidation;
        }
      }
      return status;
    }
    if (*run) {
      const auto path = scenario::resolve_config(run_config, dir);
      const std::string text = scenario::read_file(path);
      nlohmann::json j;
      try {
        j = nlohmann::json::parse(text);
      } catch (const nlohmann::json::parse_error& e) {
        throw DomainError("config " + path.string() + " is not valid JSON: " + e.what());
      }
      scenario::Scenario s = scenario::parse(j);
      const auto summary = scenario::run(std::move(s), text, {out_dir, workers, dt, t_max});
      for (const auto& a : summary.artifacts) out << a.sha256 << "  " << (out_dir / a.file).string() << '\n';
      return kOk;
    }
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const ToleranceError& e) {
    err << "tolerance abort: " << e.what() << '\n';
    return kTolerance;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kUsage;
}

}  // namespace gpe::cli
