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

#include <doctest.h>

#include <atomic>

#include "ccopt/error.hpp"
#include "ccopt/optimizer.hpp"
#include "desk.hpp"

using namespace ccopt;

namespace {

OptimizerOptions small_options(std::size_t s, std::size_t nb, std::uint64_t seed) {
  OptimizerOptions o;
  o.population_size = s;
  o.neighborhood_size = nb;
  o.de.seed = seed;
  return o;
}

SinrReport flat_report(std::size_t n, double dl, double ul) {
  SinrReport r;
  r.dl_sinr_db.assign(n, dl);
  r.ul_sinr_db.assign(n, ul);
  r.serving_cell.assign(n, 0);
  r.ul_tx_power_dbm.assign(n, 0.0);
  return r;
}

Neighborhood full_neighborhood(std::size_t m, std::size_t n) {
  Neighborhood nb;
  nb.size = m;
  std::vector<int> all(m);
  for (std::size_t i = 0; i < m; ++i) all[i] = static_cast<int>(i);
  nb.dl.assign(n, all);
  nb.ul.assign(n, all);
  return nb;
}

}  // namespace

TEST_CASE("current-to-best arithmetic") {
  const Eigen::Vector3d x(10, 10, 10), best(12, 14, 10), r1(8, 20, 10), r2(10, 16, 10);
  CHECK(de_current_to_best(x, best, r1, r2, 0.5) == Eigen::Vector3d(10, 14, 10));
  CHECK(de_current_to_best(x, best, r1, r2, 0.0) == x);
  CHECK(de_current_to_best(x, x, x, x, 0.7) == x);
}

TEST_CASE("crossover extremes and rate") {
  auto rng = make_rng(1, Stream::kCrossover);
  const Eigen::VectorXd x = Eigen::VectorXd::Zero(96);
  const Eigen::VectorXd v = Eigen::VectorXd::Ones(96);
  CHECK(crossover(x, v, 1.0, rng) == v);
  CHECK(crossover(x, v, 0.0, rng) == x);
  double taken = 0.0;
  for (int i = 0; i < 10000; ++i) taken += crossover(x, v, 0.8, rng).sum();
  CHECK(taken / (96.0 * 10000.0) == doctest::Approx(0.8).epsilon(0.025));
  CHECK(std::abs(taken / (96.0 * 10000.0) - 0.8) <= 0.02);
}

TEST_CASE("mutants are clipped into the box") {
  const std::size_t m = 4;
  const TrueEvaluator ev([](const AntennaConfig&) { return flat_report(2, 1.0, 1.0); },
                         ObjectiveSpec{});
  auto pop = Population::evaluate(initial_configs(m, AntennaBounds{}, 10, 3), ev);
  auto rng = make_rng(3, Stream::kMutation);
  for (int rep = 0; rep < 200; ++rep) {
    const auto v = mutate(pop, rep % 10, 0.99, AntennaBounds{}, rng);
    CHECK(AntennaConfig(v).within(AntennaBounds{}));
  }
  auto tiny = Population::evaluate(initial_configs(m, AntennaBounds{}, 3, 3), ev);
  CHECK_THROWS_AS(mutate(tiny, 0, 0.5, AntennaBounds{}, rng), ConfigError);
}

TEST_CASE("mutation donors exclude the target and the best") {
  // With donors drawn from {i, best} the difference term would vanish for a
  // population whose other members are all identical.
  const TrueEvaluator ev(
      [](const AntennaConfig& c) { return flat_report(1, c.downtilt(0), 0.0); }, ObjectiveSpec{});
  std::vector<AntennaConfig> configs;
  for (double t : {1.0, 20.0, 5.0, 5.0, 5.0, 5.0}) {
    Eigen::VectorXd f(3);
    f << t, 30.0, 50.0;
    configs.emplace_back(f);
  }
  const auto pop = Population::evaluate(configs, ev);
  REQUIRE(pop.best_index() == 1);
  auto rng = make_rng(1, Stream::kMutation);
  for (int rep = 0; rep < 50; ++rep) {
    const auto v = mutate(pop, 0, 0.5, AntennaBounds{}, rng);
    // x + F (best - x) + F (r1 - r2) with r1 = r2 in value.
    CHECK(v[0] == doctest::Approx(1.0 + 0.5 * 19.0));
  }
}

TEST_CASE("best and worst prefer the lowest index on ties") {
  const TrueEvaluator ev([](const AntennaConfig&) { return flat_report(2, 1.0, 1.0); },
                         ObjectiveSpec{});
  const auto pop = Population::evaluate(initial_configs(3, AntennaBounds{}, 5, 1), ev);
  CHECK(pop.best_index() == 0);
  CHECK(pop.worst_index() == 0);
}

TEST_CASE("surrogate reproduces population members") {
  const RadioEnvironment env(ccopt::testing::desk_layout(), RadioParams{});
  ObjectiveSpec spec;
  const TrueEvaluator ev(env, spec);
  const auto pop = Population::evaluate(initial_configs(env.num_cells(), spec.bounds, 25, 2), ev);
  const auto nb = build_neighborhoods(env, AntennaConfig::uniform(env.num_cells()), env.num_cells());
  SurrogateOptions so;
  so.optimize_hyperparameters = false;
  so.init_noise_variance = 1e-10;
  so.init_length_scale = 0.8;
  PerUeSurrogate sur(nb, spec.bounds, env.num_cells(), so);
  const std::vector<AntennaConfig> trials = {pop.configs[3], pop.configs[17]};
  const auto p = sur.predict(pop, trials, spec, 1);
  CHECK(p.fallbacks == 0);
  CHECK((p.dl_sinr.row(0) - pop.dl_sinr.row(3)).cwiseAbs().maxCoeff() < 1e-4);
  CHECK((p.ul_sinr.row(1) - pop.ul_sinr.row(17)).cwiseAbs().maxCoeff() < 1e-4);
  CHECK(p.values[0].f_total == doctest::Approx(pop.values[3].f_total).epsilon(1e-4));
  CHECK(std::abs(p.values[1].f_total - pop.values[17].f_total) < 1e-4);
}

TEST_CASE("identical population predicts its common value") {
  const std::size_t m = 3, n = 4;
  SinrReport common = flat_report(n, 7.5, -2.0);
  const TrueEvaluator ev([&](const AntennaConfig&) { return common; }, ObjectiveSpec{});
  const auto pop = Population::evaluate(std::vector<AntennaConfig>(8, AntennaConfig::uniform(m)), ev);
  PerUeSurrogate sur(full_neighborhood(m, n), AntennaBounds{}, m, SurrogateOptions{});
  auto rng = make_rng(4, Stream::kInit);
  std::vector<AntennaConfig> trials;
  for (int i = 0; i < 5; ++i) trials.push_back(random_config(m, AntennaBounds{}, rng));
  const auto p = sur.predict(pop, trials, ObjectiveSpec{}, 1);
  CHECK((p.dl_sinr.array() - 7.5).abs().maxCoeff() < 1e-9);
  CHECK((p.ul_sinr.array() + 2.0).abs().maxCoeff() < 1e-9);
}

TEST_CASE("full neighbourhood and one UE give one global model over 3M inputs") {
  const std::size_t m = 5;
  PerUeSurrogate sur(full_neighborhood(m, 1), AntennaBounds{}, m, SurrogateOptions{});
  const auto x = sur.features({AntennaConfig::uniform(m)}, sur.neighborhood().dl[0]);
  CHECK(x.cols() == 15);
  CHECK(sur.dl_params(0).dim() == 15);
  CHECK(x(0, 0) == doctest::Approx(12.0 / 25.0));
  CHECK(x(0, 14) == doctest::Approx(65.0 / 95.0));
}

TEST_CASE("a candidate worse than every member is rejected") {
  const std::size_t m = 3, s = 6;
  std::atomic<int> calls{0};
  const TrueEvaluator ev(
      [&](const AntennaConfig&) {
        return calls++ < static_cast<int>(s) ? flat_report(2, 10.0 + calls, 5.0)
                                             : flat_report(2, -40.0, -40.0);
      },
      ObjectiveSpec{});
  SampleEfficientOptimizer opt(ev, full_neighborhood(m, 2), m, small_options(s, m, 1));
  opt.initialize();
  const auto before = opt.population().configs;
  const auto rec = opt.step();
  CHECK_FALSE(rec.replaced);
  CHECK(opt.population().configs == before);
  CHECK(ev.evaluations() == s + 1);
}

TEST_CASE("a candidate equal to the worst replaces it") {
  const std::size_t m = 3, s = 6;
  const TrueEvaluator ev([&](const AntennaConfig&) { return flat_report(2, 3.0, 1.0); },
                         ObjectiveSpec{});
  SampleEfficientOptimizer opt(ev, full_neighborhood(m, 2), m, small_options(s, m, 1));
  opt.initialize();
  const auto before = opt.population().configs;
  const auto rec = opt.step();
  CHECK(rec.replaced);
  CHECK(rec.true_f == opt.population().objective(0));
  CHECK_FALSE(opt.population().configs[0] == before[0]);
}

TEST_CASE("algorithm invariants on the desk layout") {
  const RadioEnvironment env(ccopt::testing::desk_layout(), RadioParams{});
  ObjectiveSpec spec;
  const TrueEvaluator ev(env, spec);
  const auto nb = build_neighborhoods(env, AntennaConfig::uniform(env.num_cells()), 3);
  const std::size_t s = 12;
  SampleEfficientOptimizer opt(ev, nb, env.num_cells(), small_options(s, 3, 7));
  opt.initialize();
  double best = opt.population().objective(opt.population().best_index());
  for (int k = 0; k < 25; ++k) {
    const auto rec = opt.step();
    CHECK(rec.iter == k + 1);
    CHECK(rec.best_f_so_far >= best);
    best = rec.best_f_so_far;
    CHECK(opt.population().size() == s);
    for (const auto& c : opt.population().configs) CHECK(c.within(spec.bounds));
  }
  CHECK(ev.evaluations() == s + 25);
}

TEST_CASE("seeded runs repeat exactly; zero iterations return the initial best") {
  const RadioEnvironment env(ccopt::testing::desk_layout(), RadioParams{});
  ObjectiveSpec spec;
  const auto opts = small_options(10, 3, 11);
  const auto a = run_sample_efficient(env, spec, opts, 8);
  const auto b = run_sample_efficient(env, spec, opts, 8);
  REQUIRE(a.trace.size() == 8);
  for (std::size_t k = 0; k < 8; ++k) {
    CHECK(a.trace[k].predicted_best_f == b.trace[k].predicted_best_f);
    CHECK(a.trace[k].true_f == b.trace[k].true_f);
    CHECK(a.trace[k].best_value == b.trace[k].best_value);
  }
  CHECK(a.best_config == b.best_config);
  CHECK(a.true_evaluations == 18);

  const auto z = run_sample_efficient(env, spec, opts, 0);
  CHECK(z.trace.empty());
  CHECK(z.true_evaluations == 10);
  const TrueEvaluator ev(env, spec);
  const auto init = Population::evaluate(initial_configs(env.num_cells(), spec.bounds, 10, 11), ev);
  CHECK(z.best_config == init.configs[init.best_index()]);
}

TEST_CASE("parameter validation") {
  DeParams d;
  d.scale_factor = 1.0;
  CHECK_THROWS_AS(d.validate(), ConfigError);
  d.scale_factor = 0.7;
  d.crossover_prob = 1.2;
  CHECK_THROWS_AS(d.validate(), ConfigError);
  OptimizerOptions o;
  o.neighborhood_size = 10;
  CHECK_THROWS_AS(o.validate(9), ConfigError);
}
