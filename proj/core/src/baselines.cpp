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

#include "ccopt/baselines.hpp"

#include <chrono>
#include <cmath>
#include <algorithm>
#include <limits>
#include <numeric>
#include <numbers>
#include <random>

#include "ccopt/error.hpp"

namespace ccopt {

RunResult default_3gpp(const TrueEvaluator& evaluator, std::size_t num_cells,
                       AntennaSetting setting) {
  const std::size_t before = evaluator.evaluations();
  RunResult r;
  r.algorithm = "default_3gpp";
  r.best_config = AntennaConfig::uniform(num_cells, setting);
  const auto e = evaluator.evaluate(r.best_config);
  r.best_value = e.value;
  r.best_report = e.report;
  r.true_evaluations = evaluator.evaluations() - before;
  return r;
}

RunResult random_search(const TrueEvaluator& evaluator, std::size_t num_cells,
                        std::size_t budget, std::uint64_t seed) {
  if (budget < 1) throw ConfigError("random search budget must be >= 1");
  const std::size_t before = evaluator.evaluations();
  RunResult r;
  r.algorithm = "random_search";
  const auto configs = initial_configs(num_cells, evaluator.spec().bounds, budget, seed);
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < budget; ++k) {
    const auto e = evaluator.evaluate(configs[k]);
    IterationRecord rec;
    rec.iter = static_cast<long>(k + 1);
    rec.predicted_best_f = std::numeric_limits<double>::quiet_NaN();
    rec.true_f = e.value.f_total;
    rec.replaced = e.value.f_total > best;
    if (rec.replaced) {
      best = e.value.f_total;
      r.best_config = configs[k];
      r.best_value = e.value;
      r.best_report = e.report;
    }
    rec.best_f_so_far = best;
    rec.best_value = r.best_value;
    r.trace.push_back(rec);
  }
  r.true_evaluations = evaluator.evaluations() - before;
  return r;
}

double expected_improvement(double mean, double stddev, double incumbent) {
  const double gain = mean - incumbent;
  if (!(stddev > 0.0)) return std::max(0.0, gain);
  const double z = gain / stddev;
  const double pdf = std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
  const double cdf = 0.5 * std::erfc(-z / std::numbers::sqrt2);
  return std::max(0.0, gain * cdf + stddev * pdf);
}

void BoOptions::validate() const {
  if (n_init < 2) throw ConfigError("BO needs n_init >= 2");
  if (n_iter < 0) throw ConfigError("BO n_iter must be non-negative");
  if (restarts < 1 || local_steps < 0) throw ConfigError("BO acquisition search settings invalid");
  if (!(initial_step > 0.0)) throw ConfigError("BO initial_step must be positive");
}

namespace {

Eigen::RowVectorXd normalize(const AntennaConfig& c, const AntennaBounds& bounds) {
  const auto m = c.num_cells();
  Eigen::RowVectorXd out(c.flat().size());
  for (Eigen::Index j = 0; j < out.size(); ++j) {
    const auto& b = bounds.for_coordinate(static_cast<std::size_t>(j), m);
    out[j] = (c.flat()[j] - b.low) / b.width();
  }
  return out;
}

AntennaConfig denormalize(const Eigen::VectorXd& z, const AntennaBounds& bounds) {
  const auto m = static_cast<std::size_t>(z.size()) / 3;
  Eigen::VectorXd flat(z.size());
  for (Eigen::Index j = 0; j < z.size(); ++j) {
    const auto& b = bounds.for_coordinate(static_cast<std::size_t>(j), m);
    flat[j] = b.clamp(b.low + z[j] * b.width());
  }
  return AntennaConfig(std::move(flat));
}

Eigen::VectorXd batch_ei(const GpModel& model, const Eigen::MatrixXd& points, double incumbent) {
  const auto p = model.predict(points);
  Eigen::VectorXd ei(points.rows());
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    ei[i] = expected_improvement(p.mean[i], std::sqrt(p.variance[i]), incumbent);
  }
  return ei;
}

// Rows of x with the k largest y, best first; ties keep the earlier row.
Eigen::MatrixXd top_rows(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, Eigen::Index k) {
  std::vector<Eigen::Index> order(static_cast<std::size_t>(y.size()));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  k = std::min(k, y.size());
  std::partial_sort(order.begin(), order.begin() + k, order.end(),
                    [&](Eigen::Index a, Eigen::Index b) { return y[a] > y[b] || (y[a] == y[b] && a < b); });
  Eigen::MatrixXd out(k, x.cols());
  for (Eigen::Index i = 0; i < k; ++i) out.row(i) = x.row(order[static_cast<std::size_t>(i)]);
  return out;
}

}  // namespace

Eigen::VectorXd maximize_expected_improvement(const GpModel& model, double incumbent,
                                              const Eigen::MatrixXd& anchors,
                                              const BoOptions& options, Rng& rng) {
  const auto d = static_cast<Eigen::Index>(model.dim());
  const Eigen::Index r = options.restarts;
  const Eigen::Index a = anchors.cols() == d ? std::min<Eigen::Index>(anchors.rows(), r / 2) : 0;
  Eigen::MatrixXd pos(r, d);
  pos.topRows(a) = anchors.topRows(a);
  for (Eigen::Index i = a; i < r; ++i)
    for (Eigen::Index j = 0; j < d; ++j) pos(i, j) = uniform01(rng);
  Eigen::VectorXd val = batch_ei(model, pos, incumbent);
  Eigen::VectorXd step = Eigen::VectorXd::Constant(r, options.initial_step);

  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXd cand(r, d);
  for (int s = 0; s < options.local_steps; ++s) {
    for (Eigen::Index i = 0; i < r; ++i) {
      Eigen::RowVectorXd dir(d);
      for (Eigen::Index j = 0; j < d; ++j) dir[j] = gauss(rng);
      dir /= std::max(dir.norm(), 1e-12);
      cand.row(i) = (pos.row(i) + step[i] * dir).cwiseMax(0.0).cwiseMin(1.0);
    }
    const Eigen::VectorXd cval = batch_ei(model, cand, incumbent);
    for (Eigen::Index i = 0; i < r; ++i) {
      if (cval[i] > val[i]) {
        pos.row(i) = cand.row(i);
        val[i] = cval[i];
        step[i] = std::min(step[i] * 1.5, 0.5);
      } else {
        step[i] = std::max(step[i] * 0.6, 1e-4);
      }
    }
  }
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < r; ++i) {
    if (val[i] > val[best]) best = i;
  }
  return pos.row(best).transpose();
}

RunResult bo_ei(const TrueEvaluator& evaluator, std::size_t num_cells, const BoOptions& options) {
  options.validate();
  const auto& bounds = evaluator.spec().bounds;
  const std::size_t before = evaluator.evaluations();
  const auto d = static_cast<Eigen::Index>(3 * num_cells);

  BoState st;
  st.params = KernelParams::isotropic(static_cast<std::size_t>(d), options.init_length_scale,
                                      options.init_signal_variance, options.init_noise_variance);
  const auto total = options.n_init + static_cast<std::size_t>(options.n_iter);
  st.inputs.resize(static_cast<Eigen::Index>(total), d);
  st.objectives.resize(static_cast<Eigen::Index>(total));
  std::size_t rows = 0;
  auto append = [&](const AntennaConfig& c, const TrueEvaluator::Result& e) {
    st.inputs.row(static_cast<Eigen::Index>(rows)) = normalize(c, bounds);
    st.objectives[static_cast<Eigen::Index>(rows)] = e.value.f_total;
    st.configs.push_back(c);
    st.reports.push_back(e.report);
    st.values.push_back(e.value);
    ++rows;
  };

  for (const auto& c : initial_configs(num_cells, bounds, options.n_init, options.seed)) {
    append(c, evaluator.evaluate(c));
  }
  auto incumbent_index = [&] {
    std::size_t best = 0;
    for (std::size_t i = 1; i < rows; ++i) {
      if (st.objectives[static_cast<Eigen::Index>(i)] >
          st.objectives[static_cast<Eigen::Index>(best)])
        best = i;
    }
    return best;
  };

  RunResult r;
  r.algorithm = "bo_ei";
  auto rng = make_rng(options.seed, Stream::kBoAcquisition);
  bool fitted = false;
  double cumulative = 0.0;
  for (long k = 1; k <= options.n_iter; ++k) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto n = static_cast<Eigen::Index>(rows);
    const Eigen::MatrixXd x = st.inputs.topRows(n);
    const Eigen::VectorXd y = st.objectives.head(n);
    const bool refit = !fitted || options.refit.should_refit(k, rows);
    const GpModel model = refit ? GpModel::fit(x, y, st.params, options.fit)
                                : GpModel::condition(x, y, st.params, options.fit.standardize);
    st.params = model.params();
    fitted = true;
    const double incumbent = st.objectives[static_cast<Eigen::Index>(incumbent_index())];
    const Eigen::MatrixXd anchors = top_rows(x, y, static_cast<Eigen::Index>(options.restarts / 2));
    const Eigen::VectorXd z =
        maximize_expected_improvement(model, incumbent, anchors, options, rng);
    const double predicted = model.predict_mean(z.transpose())[0];
    const auto t1 = std::chrono::steady_clock::now();

    const AntennaConfig c = denormalize(z, bounds);
    const auto e = evaluator.evaluate(c);
    append(c, e);

    IterationRecord rec;
    rec.iter = k;
    rec.predicted_best_f = predicted;
    rec.true_f = e.value.f_total;
    rec.replaced = e.value.f_total > incumbent;
    const auto best = incumbent_index();
    rec.best_f_so_far = st.objectives[static_cast<Eigen::Index>(best)];
    rec.best_value = st.values[best];
    rec.surrogate_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    cumulative += rec.surrogate_ms;
    rec.cumulative_model_ms = cumulative;
    r.trace.push_back(rec);
  }

  const auto best = incumbent_index();
  r.best_config = st.configs[best];
  r.best_value = st.values[best];
  r.best_report = st.reports[best];
  r.true_evaluations = evaluator.evaluations() - before;
  return r;
}

}  // namespace ccopt
