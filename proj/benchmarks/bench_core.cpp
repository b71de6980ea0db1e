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

#include <benchmark/benchmark.h>

#include <random>

#include "ccopt/baselines.hpp"
#include "ccopt/gpr.hpp"
#include "ccopt/neighborhood.hpp"
#include "ccopt/optimizer.hpp"
#include "desk.hpp"

namespace {

Eigen::MatrixXd uniform_matrix(int rows, int cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = u(rng);
  return m;
}

Eigen::VectorXd smooth_targets(const Eigen::MatrixXd& x) {
  return (3.0 * x).array().sin().rowwise().sum();
}

void BM_GpCondition(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Eigen::MatrixXd x = uniform_matrix(n, 9, 1);
  const Eigen::VectorXd y = smooth_targets(x);
  const auto p = ccopt::KernelParams::isotropic(9, 0.5, 1.0, 1e-3);
  for (auto _ : state) benchmark::DoNotOptimize(ccopt::GpModel::condition(x, y, p));
  state.SetComplexityN(n);
}
BENCHMARK(BM_GpCondition)->RangeMultiplier(2)->Range(32, 512)->Complexity(benchmark::oNCubed);

void BM_GpFit(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Eigen::MatrixXd x = uniform_matrix(n, 9, 2);
  const Eigen::VectorXd y = smooth_targets(x);
  const auto p = ccopt::KernelParams::isotropic(9, 0.5, 1.0, 1e-3);
  for (auto _ : state) benchmark::DoNotOptimize(ccopt::GpModel::fit(x, y, p));
}
BENCHMARK(BM_GpFit)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_GpPredict(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Eigen::MatrixXd x = uniform_matrix(n, 9, 3);
  const auto m = ccopt::GpModel::condition(x, smooth_targets(x),
                                           ccopt::KernelParams::isotropic(9, 0.5, 1.0, 1e-3));
  const Eigen::MatrixXd q = uniform_matrix(200, 9, 4);
  for (auto _ : state) benchmark::DoNotOptimize(m.predict(q));
}
BENCHMARK(BM_GpPredict)->Arg(50)->Arg(200)->Arg(700);

void BM_Evaluate(benchmark::State& state) {
  const ccopt::RadioEnvironment env(ccopt::testing::desk_layout(), ccopt::RadioParams{});
  auto rng = ccopt::make_rng(5, ccopt::Stream::kProbe);
  const auto config = ccopt::random_config(env.num_cells(), ccopt::AntennaBounds{}, rng);
  for (auto _ : state) benchmark::DoNotOptimize(env.evaluate(config));
}
BENCHMARK(BM_Evaluate);

void BM_OptimizerStep(benchmark::State& state) {
  const ccopt::RadioEnvironment env(ccopt::testing::desk_layout(), ccopt::RadioParams{});
  const ccopt::TrueEvaluator ev(env, ccopt::ObjectiveSpec{});
  ccopt::OptimizerOptions o;
  o.population_size = static_cast<std::size_t>(state.range(0));
  o.neighborhood_size = ccopt::testing::desk_neighborhood_size();
  const auto nb = ccopt::build_neighborhoods(
      env, ccopt::AntennaConfig::uniform(env.num_cells()), o.neighborhood_size);
  ccopt::SampleEfficientOptimizer opt(ev, nb, env.num_cells(), o);
  opt.initialize();
  for (auto _ : state) benchmark::DoNotOptimize(opt.step());
}
BENCHMARK(BM_OptimizerStep)->Arg(40)->Arg(200)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
