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

#include "ccopt/gpr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Cholesky>
#include <ceres/gradient_problem.h>
#include <ceres/gradient_problem_solver.h>

#include "ccopt/error.hpp"

namespace ccopt {

namespace {

const double kSqrt5 = std::sqrt(5.0);

inline double matern52_from_r(double r, double sf2) {
  return sf2 * (1.0 + kSqrt5 * r + 5.0 / 3.0 * r * r) * std::exp(-kSqrt5 * r);
}

Eigen::MatrixXd scale_inputs(const Eigen::MatrixXd& x, const Eigen::VectorXd& length_scales) {
  return x * length_scales.cwiseInverse().asDiagonal();
}

Eigen::MatrixXd scaled_kernel(const Eigen::MatrixXd& as, const Eigen::MatrixXd& bs, double sf2) {
  Eigen::MatrixXd k(as.rows(), bs.rows());
  for (Eigen::Index j = 0; j < bs.rows(); ++j) {
    for (Eigen::Index i = 0; i < as.rows(); ++i) {
      const double r = (as.row(i) - bs.row(j)).norm();
      k(i, j) = matern52_from_r(r, sf2);
    }
  }
  return k;
}

Eigen::MatrixXd symmetric_kernel(const Eigen::MatrixXd& xs, double sf2) {
  const Eigen::Index s = xs.rows();
  Eigen::MatrixXd k(s, s);
  for (Eigen::Index j = 0; j < s; ++j) {
    k(j, j) = sf2;
    for (Eigen::Index i = j + 1; i < s; ++i) {
      const double v = matern52_from_r((xs.row(i) - xs.row(j)).norm(), sf2);
      k(i, j) = v;
      k(j, i) = v;
    }
  }
  return k;
}

void check_dims(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const KernelParams& params) {
  if (x.rows() == 0) throw ConfigError("GP needs at least one training row");
  if (x.rows() != y.size()) throw ConfigError("GP inputs and targets differ in length");
  params.validate(static_cast<std::size_t>(x.cols()));
}

}  // namespace

KernelParams KernelParams::isotropic(std::size_t dim, double length_scale, double signal_variance,
                                     double noise_variance) {
  KernelParams p;
  p.length_scales = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(dim), length_scale);
  p.signal_variance = signal_variance;
  p.noise_variance = noise_variance;
  return p;
}

void KernelParams::validate(std::size_t expected_dim) const {
  if (dim() != expected_dim) {
    throw ConfigError("kernel has " + std::to_string(dim()) + " length scales, inputs have " +
                      std::to_string(expected_dim) + " dimensions");
  }
  if (!(length_scales.array() > 0.0).all()) throw ConfigError("length scales must be positive");
  if (!(signal_variance > 0.0)) throw ConfigError("signal variance must be positive");
  if (!(noise_variance >= 0.0)) throw ConfigError("noise variance must be non-negative");
}

Eigen::VectorXd KernelParams::to_log() const {
  const auto d = length_scales.size();
  Eigen::VectorXd out(d + 2);
  out.head(d) = length_scales.array().log().matrix();
  out[d] = std::log(signal_variance);
  out[d + 1] = std::log(noise_variance);
  return out;
}

KernelParams KernelParams::from_log(const Eigen::VectorXd& lp) {
  const auto d = lp.size() - 2;
  KernelParams p;
  p.length_scales = lp.head(d).array().exp().matrix();
  p.signal_variance = std::exp(lp[d]);
  p.noise_variance = std::exp(lp[d + 1]);
  return p;
}

double matern52_ard(const Eigen::Ref<const Eigen::VectorXd>& a,
                    const Eigen::Ref<const Eigen::VectorXd>& b, const KernelParams& params) {
  if (a.size() != b.size() || a.size() != params.length_scales.size()) {
    throw ConfigError("matern52_ard: dimension mismatch");
  }
  const double r = ((a - b).array() / params.length_scales.array()).matrix().norm();
  return matern52_from_r(r, params.signal_variance);
}

Eigen::MatrixXd kernel_matrix(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                              const KernelParams& params) {
  if (a.cols() != b.cols() || static_cast<std::size_t>(a.cols()) != params.dim()) {
    throw ConfigError("kernel_matrix: dimension mismatch");
  }
  return scaled_kernel(scale_inputs(a, params.length_scales), scale_inputs(b, params.length_scales),
                       params.signal_variance);
}

std::optional<LogLikelihood> log_marginal_likelihood(const Eigen::MatrixXd& x,
                                                     const Eigen::VectorXd& y,
                                                     const KernelParams& params,
                                                     bool with_gradient, double jitter) {
  const Eigen::Index s = x.rows();
  const Eigen::Index d = x.cols();
  const Eigen::MatrixXd xs = scale_inputs(x, params.length_scales);
  Eigen::MatrixXd k = symmetric_kernel(xs, params.signal_variance);
  k.diagonal().array() += params.noise_variance + jitter;

  Eigen::LLT<Eigen::MatrixXd> llt(k);
  if (llt.info() != Eigen::Success) return std::nullopt;
  const Eigen::VectorXd alpha = llt.solve(y);
  const auto& l = llt.matrixLLT();
  const double log_det_half = l.diagonal().array().log().sum();
  if (!std::isfinite(log_det_half)) return std::nullopt;

  LogLikelihood out;
  out.value = -0.5 * y.dot(alpha) - log_det_half -
              0.5 * static_cast<double>(s) * std::log(2.0 * std::numbers::pi);
  if (!with_gradient) return out;

  // dL/dp = 0.5 tr((alpha alpha^T - K^-1) dK/dp)
  Eigen::MatrixXd w = llt.solve(Eigen::MatrixXd::Identity(s, s));
  w = alpha * alpha.transpose() - w;

  out.gradient = Eigen::VectorXd::Zero(d + 2);
  const double sf2 = params.signal_variance;
  double grad_sf2 = 0.0;
  Eigen::VectorXd diff(d);
  for (Eigen::Index j = 0; j < s; ++j) {
    grad_sf2 += 0.5 * w(j, j) * sf2;
    for (Eigen::Index i = j + 1; i < s; ++i) {
      diff = (xs.row(i) - xs.row(j)).transpose();
      const double r = diff.norm();
      const double e = std::exp(-kSqrt5 * r);
      // Off-diagonal pairs appear twice in the trace; the 0.5 cancels.
      grad_sf2 += w(i, j) * sf2 * (1.0 + kSqrt5 * r + 5.0 / 3.0 * r * r) * e;
      const double common = w(i, j) * sf2 * (5.0 / 3.0) * (1.0 + kSqrt5 * r) * e;
      out.gradient.head(d).array() += common * diff.array().square();
    }
  }
  out.gradient[d] = grad_sf2;
  out.gradient[d + 1] = 0.5 * params.noise_variance * w.trace();
  return out;
}

namespace {

struct LogBox {
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;
};

LogBox make_log_box(const HyperBounds& b, Eigen::Index d) {
  LogBox box{Eigen::VectorXd(d + 2), Eigen::VectorXd(d + 2)};
  box.lo.head(d).setConstant(std::log(b.min_length_scale));
  box.hi.head(d).setConstant(std::log(b.max_length_scale));
  box.lo[d] = std::log(b.min_signal_variance);
  box.hi[d] = std::log(b.max_signal_variance);
  box.lo[d + 1] = std::log(b.min_noise_variance);
  box.hi[d + 1] = std::log(b.max_noise_variance);
  return box;
}

inline double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

/// Negative log likelihood over unconstrained z, mapped into the log box via
/// p = lo + (hi - lo) * sigmoid(z).
class NegativeLogLikelihood final : public ceres::FirstOrderFunction {
 public:
  NegativeLogLikelihood(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, LogBox box,
                        double jitter)
      : x_(x), y_(y), box_(std::move(box)), jitter_(jitter) {}

  bool Evaluate(const double* z, double* cost, double* gradient) const override {
    const auto n = NumParameters();
    Eigen::VectorXd lp(n);
    Eigen::VectorXd dp(n);
    for (int i = 0; i < n; ++i) {
      const double s = sigmoid(z[i]);
      const double width = box_.hi[i] - box_.lo[i];
      lp[i] = box_.lo[i] + width * s;
      dp[i] = width * s * (1.0 - s);
    }
    const auto ll =
        log_marginal_likelihood(x_, y_, KernelParams::from_log(lp), gradient != nullptr, jitter_);
    if (!ll) return false;
    *cost = -ll->value;
    if (gradient != nullptr) {
      for (int i = 0; i < n; ++i) gradient[i] = -ll->gradient[i] * dp[i];
    }
    return true;
  }

  int NumParameters() const override { return static_cast<int>(box_.lo.size()); }

  Eigen::VectorXd to_z(const Eigen::VectorXd& lp) const {
    Eigen::VectorXd z(lp.size());
    for (Eigen::Index i = 0; i < lp.size(); ++i) {
      double t = (lp[i] - box_.lo[i]) / (box_.hi[i] - box_.lo[i]);
      t = std::clamp(t, 1e-6, 1.0 - 1e-6);
      z[i] = std::log(t / (1.0 - t));
    }
    return z;
  }

  Eigen::VectorXd to_log_params(const Eigen::VectorXd& z) const {
    Eigen::VectorXd lp(z.size());
    for (Eigen::Index i = 0; i < z.size(); ++i) {
      lp[i] = box_.lo[i] + (box_.hi[i] - box_.lo[i]) * sigmoid(z[i]);
    }
    return lp;
  }

 private:
  const Eigen::MatrixXd& x_;
  const Eigen::VectorXd& y_;
  LogBox box_;
  double jitter_;
};

struct Standardized {
  Eigen::VectorXd y;
  double mean = 0.0;
  double scale = 1.0;
};

Standardized standardize(const Eigen::VectorXd& y, bool enabled) {
  Standardized out{y, 0.0, 1.0};
  if (!enabled) return out;
  out.mean = y.mean();
  const double var = (y.array() - out.mean).square().sum() / static_cast<double>(y.size());
  const double sd = std::sqrt(var);
  out.scale = sd > 1e-12 * std::max(1.0, std::abs(out.mean)) ? sd : 1.0;
  out.y = (y.array() - out.mean) / out.scale;
  return out;
}

}  // namespace

GpModel GpModel::condition(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                           const KernelParams& params, bool standardize_targets) {
  check_dims(x, y, params);
  GpModel m;
  m.x_ = x;
  auto st = standardize(y, standardize_targets);
  m.y_ = std::move(st.y);
  m.y_mean_ = st.mean;
  m.y_scale_ = st.scale;
  m.params_ = params;

  const Eigen::Index s = x.rows();
  Eigen::MatrixXd k = symmetric_kernel(scale_inputs(x, params.length_scales), params.signal_variance);
  k.diagonal().array() += params.noise_variance;
  const double mean_diag = k.trace() / static_cast<double>(s);

  for (double factor = kJitterStart; factor <= kJitterMax * (1.0 + 1e-9); factor *= 10.0) {
    Eigen::MatrixXd kj = k;
    const double jitter = factor * mean_diag;
    kj.diagonal().array() += jitter;
    Eigen::LLT<Eigen::MatrixXd> llt(kj);
    if (llt.info() != Eigen::Success) continue;
    m.chol_ = llt.matrixL();
    m.alpha_ = llt.solve(m.y_);
    m.jitter_ = jitter;
    m.log_likelihood_ = -0.5 * m.y_.dot(m.alpha_) - m.chol_.diagonal().array().log().sum() -
                        0.5 * static_cast<double>(s) * std::log(2.0 * std::numbers::pi);
    return m;
  }
  throw NumericalError("Cholesky failed after jitter escalation to " + std::to_string(kJitterMax));
}

GpModel GpModel::fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const KernelParams& init,
                     const FitOptions& options) {
  check_dims(x, y, init);
  if (x.rows() < 2) return condition(x, y, init, options.standardize);

  const auto st = standardize(y, options.standardize);
  const Eigen::Index d = x.cols();
  const LogBox box = make_log_box(options.bounds, d);
  const double base_jitter = kJitterStart * (init.signal_variance + init.noise_variance);

  Eigen::VectorXd best_lp = init.to_log().cwiseMax(box.lo).cwiseMin(box.hi);
  double best_value = -std::numeric_limits<double>::infinity();
  if (auto ll0 = log_marginal_likelihood(x, st.y, KernelParams::from_log(best_lp), false,
                                         base_jitter)) {
    best_value = ll0->value;
  }

  for (int start = 0; start < std::max(1, options.starts); ++start) {
    Eigen::VectorXd lp0 = init.to_log();
    if (start > 0) lp0.head(d).array() += static_cast<double>(start);
    lp0 = lp0.cwiseMax(box.lo).cwiseMin(box.hi);

    auto* fn = new NegativeLogLikelihood(x, st.y, box, base_jitter);
    Eigen::VectorXd z = fn->to_z(lp0);
    ceres::GradientProblem problem(fn);  // takes ownership
    ceres::GradientProblemSolver::Options solver_options;
    solver_options.line_search_direction_type = ceres::LBFGS;
    solver_options.max_num_iterations = options.max_iterations;
    solver_options.line_search_interpolation_type = ceres::BISECTION;
    solver_options.logging_type = ceres::SILENT;
    solver_options.minimizer_progress_to_stdout = false;
    ceres::GradientProblemSolver::Summary summary;
    ceres::Solve(solver_options, problem, z.data(), &summary);
    if (!std::isfinite(summary.final_cost)) continue;

    const Eigen::VectorXd lp = fn->to_log_params(z);
    auto ll = log_marginal_likelihood(x, st.y, KernelParams::from_log(lp), false, base_jitter);
    if (ll && ll->value > best_value) {
      best_value = ll->value;
      best_lp = lp;
    }
  }
  return condition(x, y, KernelParams::from_log(best_lp), options.standardize);
}

Eigen::VectorXd GpModel::predict_mean(const Eigen::MatrixXd& test_inputs) const {
  if (static_cast<std::size_t>(test_inputs.cols()) != dim()) {
    throw ConfigError("predict: test inputs have the wrong dimension");
  }
  const Eigen::MatrixXd ks = kernel_matrix(test_inputs, x_, params_);
  return ((ks * alpha_).array() * y_scale_ + y_mean_).matrix();
}

Prediction GpModel::predict(const Eigen::MatrixXd& test_inputs) const {
  if (static_cast<std::size_t>(test_inputs.cols()) != dim()) {
    throw ConfigError("predict: test inputs have the wrong dimension");
  }
  const Eigen::MatrixXd ks = kernel_matrix(test_inputs, x_, params_);
  Prediction p;
  p.mean = ((ks * alpha_).array() * y_scale_ + y_mean_).matrix();
  const Eigen::MatrixXd v = chol_.triangularView<Eigen::Lower>().solve(ks.transpose());
  p.variance = (params_.signal_variance - v.colwise().squaredNorm().array())
                   .cwiseMax(0.0)
                   .matrix()
                   .transpose() *
               (y_scale_ * y_scale_);
  return p;
}

}  // namespace ccopt
