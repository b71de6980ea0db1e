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

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ccopt/baselines.hpp"
#include "ccopt/netgen.hpp"
#include "ccopt/optimizer.hpp"
#include "ccopt/radio.hpp"

namespace ccopt {

enum class ThresholdMode {
  kFixed,
  /// Per seed: run the proposed optimizer with beta = 1 on both links and use
  /// the 10th-percentile DL SINR of its best configuration as T.
  kP10FromRateRun,
};

/// Algorithm names accepted in ExperimentConfig::algorithms.
inline const std::vector<std::string>& known_algorithms() {
  static const std::vector<std::string> names = {"proposed", "bo_ei", "random_search",
                                                 "default_3gpp"};
  return names;
}

struct ExperimentConfig {
  std::optional<std::filesystem::path> layout_file;  // absolute after loading
  HexLayoutParams layout;                            // used when no file is given
  RadioParams radio;
  ObjectiveSpec objective;
  ThresholdMode threshold_mode = ThresholdMode::kFixed;

  DeParams de;  // seed overridden per run
  std::size_t population_size = 200;
  std::size_t neighborhood_size = 8;
  bool share_dl_neighborhood = false;
  AntennaSetting default_setting;
  SurrogateOptions surrogate;
  long n_iter = 1000;

  std::size_t bo_n_init = 0;  // 0: population_size
  long bo_n_iter = -1;        // negative: n_iter
  int bo_restarts = 64;
  int bo_local_steps = 30;
  std::size_t random_search_budget = 0;  // 0: population_size + n_iter

  double neighborhood_gamma = 0.6;
  int neighborhood_probes = 50;

  std::vector<std::string> algorithms = known_algorithms();
  std::vector<std::uint64_t> seeds = {1};
  std::filesystem::path output_dir = "out";
  unsigned workers = 1;
  bool record_timing = false;

  /// Layout-independent checks; run_experiment adds the layout-dependent ones.
  void validate() const;

  std::size_t effective_bo_n_init() const { return bo_n_init ? bo_n_init : population_size; }
  long effective_bo_n_iter() const { return bo_n_iter < 0 ? n_iter : bo_n_iter; }
  std::size_t effective_random_search_budget() const {
    return random_search_budget ? random_search_budget
                                : population_size + static_cast<std::size_t>(n_iter);
  }
};

/// Parses a JSON experiment description. Unknown keys and wrongly typed
/// values raise SchemaError; a relative layout file is resolved against
/// `base_dir`.
ExperimentConfig parse_experiment_config(const std::string& json_text,
                                         const std::filesystem::path& base_dir = {});
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

NetworkLayout build_layout(const ExperimentConfig& config);

OptimizerOptions optimizer_options(const ExperimentConfig& config, std::uint64_t seed,
                                   unsigned workers);
BoOptions bo_options(const ExperimentConfig& config, std::uint64_t seed);

/// One (algorithm, seed) run against a fixed environment.
RunResult run_algorithm(const std::string& algorithm, const RadioEnvironment& env,
                        const ObjectiveSpec& spec, const ExperimentConfig& config,
                        std::uint64_t seed, unsigned workers = 1);

/// Threshold for one seed under the configured ThresholdMode.
double resolve_threshold(const RadioEnvironment& env, const ExperimentConfig& config,
                         std::uint64_t seed, unsigned workers = 1);

struct RunRecord {
  std::string algorithm;
  std::uint64_t seed = 0;
  double threshold_db = 0.0;
  RunResult result;
};

/// Runs every (algorithm, seed) pair, writes the per-run files, run.json and
/// the aggregate tables into config.output_dir. Runs execute on up to
/// config.workers threads. A failing run is reported as
/// "<algorithm> seed <seed>: <reason>" with the original error type.
std::vector<RunRecord> run_experiment(const ExperimentConfig& config);

/// Capture check of the configured neighbourhood size on the configured
/// layout, probing with the first seed.
CaptureReport check_neighborhoods(const ExperimentConfig& config);

/// File names of one run inside the output directory.
std::string trace_file_name(const std::string& algorithm, std::uint64_t seed);
std::string sinr_file_name(const std::string& algorithm, std::uint64_t seed);
std::string config_file_name(const std::string& algorithm, std::uint64_t seed);

}  // namespace ccopt
