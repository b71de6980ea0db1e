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

#include <atomic>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "ccopt/antenna.hpp"
#include "ccopt/gpr.hpp"
#include "ccopt/metrics.hpp"
#include "ccopt/neighborhood.hpp"
#include "ccopt/radio.hpp"
#include "ccopt/random.hpp"

namespace ccopt {

/// The expensive black box: one call is one "true" evaluation. Wraps any
/// AntennaConfig -> SinrReport mapping and counts calls.
class TrueEvaluator {
 public:
  using Simulator = std::function<SinrReport(const AntennaConfig&)>;

  TrueEvaluator(Simulator simulator, ObjectiveSpec spec);
  TrueEvaluator(const RadioEnvironment& env, ObjectiveSpec spec);

  struct Result {
    SinrReport report;
    ObjectiveValue value;
  };

  Result evaluate(const AntennaConfig& config) const;

  const ObjectiveSpec& spec() const noexcept { return spec_; }
  std::size_t evaluations() const noexcept { return count_.load(); }

 private:
  Simulator simulator_;
  ObjectiveSpec spec_;
  mutable std::atomic<std::size_t> count_{0};
};

/// Differential-evolution control parameters.
struct DeParams {
  double scale_factor = 0.7;
  double crossover_prob = 0.8;
  std::uint64_t seed = 1;

  void validate() const;
};

/// Fixed-size set of evaluated configurations.
struct Population {
  std::vector<AntennaConfig> configs;
  Eigen::MatrixXd dl_sinr;  // S x N, dB
  Eigen::MatrixXd ul_sinr;  // S x N, dB
  std::vector<ObjectiveValue> values;
  std::vector<SinrReport> reports;

  std::size_t size() const noexcept { return configs.size(); }
  double objective(std::size_t i) const { return values[i].f_total; }
  /// Highest objective, lowest index on ties.
  std::size_t best_index() const;
  /// Lowest objective, lowest index on ties.
  std::size_t worst_index() const;

  /// Evaluates every configuration truly.
  static Population evaluate(std::vector<AntennaConfig> configs, const TrueEvaluator& evaluator);

  void set(std::size_t i, AntennaConfig config, const TrueEvaluator::Result& result);
};

/// v = x + F (best - x) + F (r1 - r2); no bound handling.
Eigen::VectorXd de_current_to_best(const Eigen::VectorXd& x, const Eigen::VectorXd& best,
                                   const Eigen::VectorXd& r1, const Eigen::VectorXd& r2,
                                   double scale_factor);

/// Draws r1 != r2 uniformly from the indices other than i and best, applies
/// the current-to-best/1 rule and clips to bounds. Requires S >= 4.
Eigen::VectorXd mutate(const Population& pop, std::size_t i, double scale_factor,
                       const AntennaBounds& bounds, Rng& rng);

/// Takes each coordinate from `mutant` with probability p_c, else from `x`.
Eigen::VectorXd crossover(const Eigen::VectorXd& x, const Eigen::VectorXd& mutant,
                          double crossover_prob, Rng& rng);

/// Settings of the per-UE Gaussian-process surrogate.
struct SurrogateOptions {
  double init_length_scale = 0.5;  // in box-normalized input units
  double init_signal_variance = 1.0;
  double init_noise_variance = 1e-3;
  FitOptions fit;
  RefitPolicy refit;
  bool optimize_hyperparameters = true;
  unsigned workers = 1;
};

struct SurrogatePrediction {
  Eigen::MatrixXd dl_sinr;  // trials x N, dB
  Eigen::MatrixXd ul_sinr;
  std::vector<ObjectiveValue> values;
  std::size_t fallbacks = 0;  // UE models that fell back to nearest neighbour
};

/// One GP per UE and link direction, each fed only the 3 * size parameters
/// of that UE's neighbourhood cells (normalized to the unit box). Keeps the
/// latest hyperparameters of every model as the warm start for the next fit.
class PerUeSurrogate {
 public:
  PerUeSurrogate(Neighborhood neighborhood, AntennaBounds bounds, std::size_t num_cells,
                 SurrogateOptions options);

  /// Fits on the population's stored SINRs and predicts every trial.
  /// `iteration` drives the refit schedule.
  SurrogatePrediction predict(const Population& pop, const std::vector<AntennaConfig>& trials,
                              const ObjectiveSpec& spec, long iteration);

  /// Normalized input rows for one UE's neighbourhood.
  Eigen::MatrixXd features(const std::vector<AntennaConfig>& configs,
                           const std::vector<int>& cells) const;

  const Neighborhood& neighborhood() const noexcept { return neighborhood_; }
  const KernelParams& dl_params(std::size_t n) const { return dl_params_[n]; }
  const KernelParams& ul_params(std::size_t n) const { return ul_params_[n]; }

 private:
  Eigen::VectorXd predict_one(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                              const Eigen::MatrixXd& xq, KernelParams& params, bool refit,
                              std::size_t& fallbacks) const;

  Neighborhood neighborhood_;
  AntennaBounds bounds_;
  std::size_t num_cells_;
  SurrogateOptions options_;
  std::vector<KernelParams> dl_params_;
  std::vector<KernelParams> ul_params_;
  bool fitted_ = false;
};

/// Per-iteration record shared by the optimizer and the baselines.
struct IterationRecord {
  long iter = 0;
  double predicted_best_f = 0.0;  // surrogate value of the evaluated candidate (NaN if none)
  double true_f = 0.0;            // true objective of the evaluated candidate
  double best_f_so_far = 0.0;
  ObjectiveValue best_value;      // components of the incumbent
  double surrogate_ms = 0.0;      // model building + candidate selection
  double cumulative_model_ms = 0.0;
  bool replaced = false;          // population changed / incumbent improved
};

struct OptimizerOptions {
  DeParams de;
  std::size_t population_size = 200;
  std::size_t neighborhood_size = 8;
  bool share_dl_neighborhood = false;
  AntennaSetting default_setting;
  SurrogateOptions surrogate;

  void validate(std::size_t num_cells) const;
};

/// Surrogate-assisted differential evolution: each iteration builds a
/// full trial population, ranks it with the per-UE surrogate, and spends
/// exactly one true evaluation on the predicted best trial, which replaces
/// the worst member when it is at least as good.
class SampleEfficientOptimizer {
 public:
  SampleEfficientOptimizer(const TrueEvaluator& evaluator, Neighborhood neighborhood,
                           std::size_t num_cells, OptimizerOptions options);

  /// Draws and truly evaluates the initial population.
  void initialize();
  void initialize(Population pop);

  IterationRecord step();

  const Population& population() const noexcept { return pop_; }
  long iteration() const noexcept { return iteration_; }
  const PerUeSurrogate& surrogate() const noexcept { return surrogate_; }

 private:
  const TrueEvaluator& evaluator_;
  std::size_t num_cells_;
  OptimizerOptions options_;
  PerUeSurrogate surrogate_;
  Rng mutation_rng_;
  Rng crossover_rng_;
  Population pop_;
  long iteration_ = 0;
  double cumulative_ms_ = 0.0;
};

struct RunResult {
  std::string algorithm;
  AntennaConfig best_config;
  ObjectiveValue best_value;
  SinrReport best_report;
  std::vector<IterationRecord> trace;
  std::size_t true_evaluations = 0;
};

/// Uniform random configurations drawn from the shared initialization
/// stream, so every algorithm run with the same seed starts from the same
/// sample.
std::vector<AntennaConfig> initial_configs(std::size_t num_cells, const AntennaBounds& bounds,
                                           std::size_t count, std::uint64_t seed);

/// Builds neighbourhoods under the default setting, initializes S random
/// configurations and runs `n_iter` iterations. Performs exactly S + n_iter
/// true evaluations.
RunResult run_sample_efficient(const RadioEnvironment& env, const ObjectiveSpec& spec,
                               const OptimizerOptions& options, long n_iter);

/// Same, with an explicit evaluator and neighbourhood.
RunResult run_sample_efficient(const TrueEvaluator& evaluator, const Neighborhood& neighborhood,
                               std::size_t num_cells, const OptimizerOptions& options, long n_iter);

}  // namespace ccopt
