/*
 * Copyright 2026 The ccopt Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ccopt/csv.hpp"
#include "ccopt/error.hpp"
#include "ccopt/experiment.hpp"
#include "ccopt/summary.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitRuntime = 2;

void print_table(const ccopt::CsvTable& t) {
  auto line = [](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) std::cout << (i ? "," : "") << fields[i];
    std::cout << '\n';
  };
  line(t.header);
  for (const auto& r : t.rows) line(r);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Antenna tilt and beamwidth optimization experiments"};
  app.require_subcommand(1);

  std::string run_config;
  std::string out_dir;
  unsigned workers = 0;
  auto* run = app.add_subcommand("run", "Run every (algorithm, seed) pair of a config");
  run->add_option("config", run_config, "Experiment config (JSON)")->required();
  run->add_option("--out", out_dir, "Output directory (overrides output_dir)");
  run->add_option("--workers", workers, "Parallel runs (overrides workers)")
      ->check(CLI::PositiveNumber);

  std::string summary_dir;
  auto* summarize = app.add_subcommand("summarize", "Print the summary table of a run directory");
  summarize->add_option("dir", summary_dir, "Run directory")->required();

  std::string nb_config;
  auto* validate = app.add_subcommand("validate-neighborhoods",
                                      "Check interferer capture of the configured neighbourhoods");
  validate->add_option("config", nb_config, "Experiment config (JSON)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*run) {
      auto config = ccopt::load_experiment_config(run_config);
      if (!out_dir.empty()) config.output_dir = out_dir;
      if (workers > 0) config.workers = workers;
      ccopt::run_experiment(config);
      print_table(ccopt::summarize(config.output_dir).table());
    } else if (*summarize) {
      print_table(ccopt::summarize(summary_dir).table());
    } else if (*validate) {
      const auto config = ccopt::load_experiment_config(nb_config);
      const auto r = ccopt::check_neighborhoods(config);
      std::cout << "neighborhood_size,gamma,interferers_checked,probes,mean_capture\n"
                << config.neighborhood_size << ',' << ccopt::format_double(config.neighborhood_gamma)
                << ',' << r.interferers_checked << ',' << config.neighborhood_probes << ','
                << ccopt::format_double(r.mean) << '\n';
    }
  } catch (const ccopt::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ccopt::SchemaError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ccopt::ParseError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitOk;
}
