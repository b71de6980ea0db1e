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

#include "ccopt/gpr.hpp"
#include "ccopt/optimizer.hpp"

namespace ccopt {

/// Every cell at the same fixed setting (12, 10, 70 degrees by default);
/// one true evaluation.
RunResult default_3gpp(const TrueEvaluator& evaluator, std::size_t num_cells,
                       AntennaSetting setting = {});

/// Uniform samples from the box, keeping the best. `budget` true
/// evaluations, one trace row per evaluation.
RunResult random_search(const TrueEvaluator& evaluator, std::size_t num_cells,
                        std::size_t budget, std::uint64_t seed);

/// (mu - best) Phi(z) + sigma phi(z) with z = (mu - best) / sigma;
/// max(0, mu - best) when sigma is zero.
double expected_improvement(double mean, double stddev, double incumbent);

struct BoOptions {
  std::size_t n_init = 200;
  long n_iter = 500;
  int restarts = 64;
  int local_steps = 30;
  double initial_step = 0.1;  // box-normalized units
  double init_length_scale = 0.5;
  double init_signal_variance = 1.0;
  double init_noise_variance = 1e-3;
  FitOptions fit;
  RefitPolicy refit;
  std::uint64_t seed = 1;

  void validate() const;
};

/// State of a running Bayesian optimization: every evaluated point and a
/// single GP over the full 3M-dimensional box-normalized input.
struct BoState {
  Eigen::MatrixXd inputs;  // T x 3M, normalized
  Eigen::VectorXd objectives;
  std::vector<AntennaConfig> configs;
  std::vector<SinrReport> reports;
  std::vector<ObjectiveValue> values;
  KernelParams params;
};

/// Maximizes expected improvement over the unit box by a batched random
/// local search. Up to half of the `restarts` start from the rows of
/// `anchors` (e.g. the best observed points), the rest from uniform points.
/// Returns the normalized argmax.
Eigen::VectorXd maximize_expected_improvement(const GpModel& model, double incumbent,
                                              const Eigen::MatrixXd& anchors,
                                              const BoOptions& options, Rng& rng);

/// Conventional Bayesian optimization with expected improvement. The
/// training set grows by one row per iteration; `cumulative_model_ms` in the
/// trace accumulates model fitting plus acquisition time.
RunResult bo_ei(const TrueEvaluator& evaluator, std::size_t num_cells, const BoOptions& options);

}  // namespace ccopt
