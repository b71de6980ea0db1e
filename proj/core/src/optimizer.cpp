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

#include "ccopt/optimizer.hpp"

#include <chrono>
#include <cmath>
#include <iostream>
#include <limits>
#include <random>

#include "ccopt/error.hpp"
#include "ccopt/parallel.hpp"

namespace ccopt {

TrueEvaluator::TrueEvaluator(Simulator simulator, ObjectiveSpec spec)
    : simulator_(std::move(simulator)), spec_(spec) {
  spec_.validate();
}

TrueEvaluator::TrueEvaluator(const RadioEnvironment& env, ObjectiveSpec spec)
    : TrueEvaluator([&env](const AntennaConfig& c) { return env.evaluate(c); }, spec) {}

TrueEvaluator::Result TrueEvaluator::evaluate(const AntennaConfig& config) const {
  ++count_;
  Result r;
  r.report = simulator_(config);
  r.value = objective(r.report, spec_);
  return r;
}

void DeParams::validate() const {
  if (!(scale_factor > 0.0 && scale_factor < 1.0)) {
    throw ConfigError("DE scale factor must lie in (0, 1)");
  }
  if (!(crossover_prob >= 0.0 && crossover_prob <= 1.0)) {
    throw ConfigError("DE crossover probability must lie in [0, 1]");
  }
}

std::size_t Population::best_index() const {
  std::size_t best = 0;
  for (std::size_t i = 1; i < size(); ++i) {
    if (objective(i) > objective(best)) best = i;
  }
  return best;
}

std::size_t Population::worst_index() const {
  std::size_t worst = 0;
  for (std::size_t i = 1; i < size(); ++i) {
    if (objective(i) < objective(worst)) worst = i;
  }
  return worst;
}

Population Population::evaluate(std::vector<AntennaConfig> configs,
                                 const TrueEvaluator& evaluator) {
  if (configs.empty()) throw ConfigError("population must not be empty");
  Population pop;
  const auto s = configs.size();
  pop.values.resize(s);
  pop.reports.resize(s);
  for (std::size_t i = 0; i < s; ++i) {
    const auto r = evaluator.evaluate(configs[i]);
    if (i == 0) {
      const auto n = static_cast<Eigen::Index>(r.report.num_ues());
      pop.dl_sinr.resize(static_cast<Eigen::Index>(s), n);
      pop.ul_sinr.resize(static_cast<Eigen::Index>(s), n);
    }
    pop.configs.push_back(configs[i]);
    pop.set(i, configs[i], r);
  }
  return pop;
}

void Population::set(std::size_t i, AntennaConfig config, const TrueEvaluator::Result& result) {
  const auto row = static_cast<Eigen::Index>(i);
  const auto n = static_cast<Eigen::Index>(result.report.num_ues());
  if (n != dl_sinr.cols()) throw ConfigError("SINR report length does not match the population");
  dl_sinr.row(row) = Eigen::Map<const Eigen::RowVectorXd>(result.report.dl_sinr_db.data(), n);
  ul_sinr.row(row) = Eigen::Map<const Eigen::RowVectorXd>(result.report.ul_sinr_db.data(), n);
  configs[i] = std::move(config);
  values[i] = result.value;
  reports[i] = result.report;
}

Eigen::VectorXd de_current_to_best(const Eigen::VectorXd& x, const Eigen::VectorXd& best,
                                   const Eigen::VectorXd& r1, const Eigen::VectorXd& r2,
                                   double scale_factor) {
  return x + scale_factor * (best - x) + scale_factor * (r1 - r2);
}

Eigen::VectorXd mutate(const Population& pop, std::size_t i, double scale_factor,
                       const AntennaBounds& bounds, Rng& rng) {
  const std::size_t s = pop.size();
  if (s < 4) throw ConfigError("mutation needs a population of at least 4");
  const std::size_t best = pop.best_index();

  std::vector<std::size_t> pool;
  pool.reserve(s);
  for (std::size_t k = 0; k < s; ++k) {
    if (k != i && k != best) pool.push_back(k);
  }
  // Two draws without replacement.
  const auto a = std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng);
  std::swap(pool[a], pool.back());
  const std::size_t r1 = pool.back();
  const auto b = std::uniform_int_distribution<std::size_t>(0, pool.size() - 2)(rng);
  const std::size_t r2 = pool[b];

  const auto v = de_current_to_best(pop.configs[i].flat(), pop.configs[best].flat(),
                                    pop.configs[r1].flat(), pop.configs[r2].flat(), scale_factor);
  return AntennaConfig(v).clipped(bounds).flat();
}

Eigen::VectorXd crossover(const Eigen::VectorXd& x, const Eigen::VectorXd& mutant,
                          double crossover_prob, Rng& rng) {
  if (x.size() != mutant.size()) throw ConfigError("crossover: length mismatch");
  Eigen::VectorXd u = x;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    if (uniform01(rng) < crossover_prob) u[j] = mutant[j];
  }
  return u;
}

PerUeSurrogate::PerUeSurrogate(Neighborhood neighborhood, AntennaBounds bounds,
                               std::size_t num_cells, SurrogateOptions options)
    : neighborhood_(std::move(neighborhood)),
      bounds_(bounds),
      num_cells_(num_cells),
      options_(std::move(options)) {
  if (neighborhood_.dl.size() != neighborhood_.ul.size()) {
    throw ConfigError("neighborhood DL and UL lists differ in length");
  }
  const auto init = KernelParams::isotropic(3 * neighborhood_.size, options_.init_length_scale,
                                            options_.init_signal_variance,
                                            options_.init_noise_variance);
  dl_params_.assign(neighborhood_.dl.size(), init);
  ul_params_.assign(neighborhood_.ul.size(), init);
}

Eigen::MatrixXd PerUeSurrogate::features(const std::vector<AntennaConfig>& configs,
                                         const std::vector<int>& cells) const {
  const auto k = static_cast<Eigen::Index>(cells.size());
  Eigen::MatrixXd out(static_cast<Eigen::Index>(configs.size()), 3 * k);
  for (std::size_t r = 0; r < configs.size(); ++r) {
    const auto& c = configs[r];
    const auto row = static_cast<Eigen::Index>(r);
    for (Eigen::Index j = 0; j < k; ++j) {
      const auto m = static_cast<std::size_t>(cells[static_cast<std::size_t>(j)]);
      out(row, j) = (c.downtilt(m) - bounds_.downtilt.low) / bounds_.downtilt.width();
      out(row, k + j) =
          (c.vertical_hpbw(m) - bounds_.vertical_hpbw.low) / bounds_.vertical_hpbw.width();
      out(row, 2 * k + j) =
          (c.horizontal_hpbw(m) - bounds_.horizontal_hpbw.low) / bounds_.horizontal_hpbw.width();
    }
  }
  return out;
}

Eigen::VectorXd PerUeSurrogate::predict_one(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                                            const Eigen::MatrixXd& xq, KernelParams& params,
                                            bool refit, std::size_t& fallbacks) const {
  try {
    const GpModel model = refit ? GpModel::fit(x, y, params, options_.fit)
                                : GpModel::condition(x, y, params, options_.fit.standardize);
    params = model.params();
    return model.predict_mean(xq);
  } catch (const NumericalError&) {
    ++fallbacks;
    Eigen::VectorXd out(xq.rows());
    for (Eigen::Index q = 0; q < xq.rows(); ++q) {
      Eigen::Index nearest = 0;
      (x.rowwise() - xq.row(q)).rowwise().squaredNorm().minCoeff(&nearest);
      out[q] = y[nearest];
    }
    return out;
  }
}

SurrogatePrediction PerUeSurrogate::predict(const Population& pop,
                                            const std::vector<AntennaConfig>& trials,
                                            const ObjectiveSpec& spec, long iteration) {
  const std::size_t n_ues = neighborhood_.dl.size();
  if (static_cast<std::size_t>(pop.dl_sinr.cols()) != n_ues) {
    throw ConfigError("population UE count does not match the neighborhood");
  }
  const bool refit = options_.optimize_hyperparameters &&
                     (!fitted_ || options_.refit.should_refit(iteration, pop.size()));

  SurrogatePrediction out;
  const auto t = static_cast<Eigen::Index>(trials.size());
  out.dl_sinr.resize(t, static_cast<Eigen::Index>(n_ues));
  out.ul_sinr.resize(t, static_cast<Eigen::Index>(n_ues));
  std::vector<std::size_t> fallbacks(n_ues, 0);

  parallel_for(n_ues, options_.workers, [&](std::size_t n) {
    const auto col = static_cast<Eigen::Index>(n);
    {
      const auto& cells = neighborhood_.dl[n];
      out.dl_sinr.col(col) = predict_one(features(pop.configs, cells), pop.dl_sinr.col(col),
                                         features(trials, cells), dl_params_[n], refit,
                                         fallbacks[n]);
    }
    {
      const auto& cells = neighborhood_.ul[n];
      out.ul_sinr.col(col) = predict_one(features(pop.configs, cells), pop.ul_sinr.col(col),
                                         features(trials, cells), ul_params_[n], refit,
                                         fallbacks[n]);
    }
  });
  if (refit) fitted_ = true;
  for (auto f : fallbacks) out.fallbacks += f;

  out.values.resize(trials.size());
  std::vector<double> dl(n_ues);
  std::vector<double> ul(n_ues);
  for (Eigen::Index r = 0; r < t; ++r) {
    Eigen::Map<Eigen::RowVectorXd>(dl.data(), static_cast<Eigen::Index>(n_ues)) = out.dl_sinr.row(r);
    Eigen::Map<Eigen::RowVectorXd>(ul.data(), static_cast<Eigen::Index>(n_ues)) = out.ul_sinr.row(r);
    out.values[static_cast<std::size_t>(r)] = objective(dl, ul, spec);
  }
  return out;
}

void OptimizerOptions::validate(std::size_t num_cells) const {
  de.validate();
  if (population_size < 4) throw ConfigError("population size must be >= 4");
  if (neighborhood_size < 1 || neighborhood_size > num_cells) {
    throw ConfigError("neighborhood size must lie in [1, M]");
  }
}

std::vector<AntennaConfig> initial_configs(std::size_t num_cells, const AntennaBounds& bounds,
                                           std::size_t count, std::uint64_t seed) {
  auto rng = make_rng(seed, Stream::kInit);
  std::vector<AntennaConfig> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(random_config(num_cells, bounds, rng));
  return out;
}

SampleEfficientOptimizer::SampleEfficientOptimizer(const TrueEvaluator& evaluator,
                                                   Neighborhood neighborhood,
                                                   std::size_t num_cells, OptimizerOptions options)
    : evaluator_(evaluator),
      num_cells_(num_cells),
      options_(std::move(options)),
      surrogate_(std::move(neighborhood), evaluator.spec().bounds, num_cells, options_.surrogate),
      mutation_rng_(make_rng(options_.de.seed, Stream::kMutation)),
      crossover_rng_(make_rng(options_.de.seed, Stream::kCrossover)) {
  options_.validate(num_cells_);
}

void SampleEfficientOptimizer::initialize() {
  initialize(Population::evaluate(
      initial_configs(num_cells_, evaluator_.spec().bounds, options_.population_size,
                      options_.de.seed),
      evaluator_));
}

void SampleEfficientOptimizer::initialize(Population pop) {
  if (pop.size() < 4) throw ConfigError("population size must be >= 4");
  pop_ = std::move(pop);
  iteration_ = 0;
}

IterationRecord SampleEfficientOptimizer::step() {
  if (pop_.size() == 0) throw ConfigError("optimizer not initialized");
  ++iteration_;
  const auto& bounds = evaluator_.spec().bounds;
  const auto t0 = std::chrono::steady_clock::now();

  std::vector<AntennaConfig> trials;
  trials.reserve(pop_.size());
  for (std::size_t i = 0; i < pop_.size(); ++i) {
    const auto v = mutate(pop_, i, options_.de.scale_factor, bounds, mutation_rng_);
    trials.emplace_back(crossover(pop_.configs[i].flat(), v, options_.de.crossover_prob,
                                  crossover_rng_));
  }

  const auto prediction = surrogate_.predict(pop_, trials, evaluator_.spec(), iteration_);
  if (prediction.fallbacks > 0) {
    std::cerr << "ccopt: iteration " << iteration_ << ": " << prediction.fallbacks
              << " UE model(s) fell back to nearest-neighbour prediction\n";
  }
  std::size_t chosen = 0;
  for (std::size_t i = 1; i < trials.size(); ++i) {
    if (prediction.values[i].f_total > prediction.values[chosen].f_total) chosen = i;
  }
  const auto t1 = std::chrono::steady_clock::now();

  const auto result = evaluator_.evaluate(trials[chosen]);
  const std::size_t worst = pop_.worst_index();

  IterationRecord rec;
  rec.iter = iteration_;
  rec.predicted_best_f = prediction.values[chosen].f_total;
  rec.true_f = result.value.f_total;
  rec.replaced = result.value.f_total >= pop_.objective(worst);
  if (rec.replaced) pop_.set(worst, trials[chosen], result);

  const std::size_t best = pop_.best_index();
  rec.best_f_so_far = pop_.objective(best);
  rec.best_value = pop_.values[best];
  rec.surrogate_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  cumulative_ms_ += rec.surrogate_ms;
  rec.cumulative_model_ms = cumulative_ms_;
  return rec;
}

RunResult run_sample_efficient(const TrueEvaluator& evaluator, const Neighborhood& neighborhood,
                               std::size_t num_cells, const OptimizerOptions& options,
                               long n_iter) {
  if (n_iter < 0) throw ConfigError("n_iter must be non-negative");
  SampleEfficientOptimizer opt(evaluator, neighborhood, num_cells, options);
  const std::size_t before = evaluator.evaluations();
  opt.initialize();

  RunResult result;
  result.algorithm = "proposed";
  result.trace.reserve(static_cast<std::size_t>(n_iter));
  for (long k = 0; k < n_iter; ++k) result.trace.push_back(opt.step());

  const auto& pop = opt.population();
  const std::size_t best = pop.best_index();
  result.best_config = pop.configs[best];
  result.best_value = pop.values[best];
  result.best_report = pop.reports[best];
  result.true_evaluations = evaluator.evaluations() - before;
  return result;
}

RunResult run_sample_efficient(const RadioEnvironment& env, const ObjectiveSpec& spec,
                               const OptimizerOptions& options, long n_iter) {
  options.validate(env.num_cells());
  const TrueEvaluator evaluator(env, spec);
  const auto nb = build_neighborhoods(env, AntennaConfig::uniform(env.num_cells(), options.default_setting),
                                      options.neighborhood_size, options.share_dl_neighborhood);
  return run_sample_efficient(evaluator, nb, env.num_cells(), options, n_iter);
}

}  // namespace ccopt
