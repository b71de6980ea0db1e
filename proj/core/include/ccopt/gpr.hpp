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

#include <cstddef>
#include <optional>

#include <Eigen/Core>

namespace ccopt {

/// Hyperparameters of the Matern-5/2 ARD kernel plus Gaussian noise.
struct KernelParams {
  Eigen::VectorXd length_scales;  // one per input dimension
  double signal_variance = 1.0;
  double noise_variance = 1e-6;

  std::size_t dim() const noexcept { return static_cast<std::size_t>(length_scales.size()); }

  /// All-equal length scales.
  static KernelParams isotropic(std::size_t dim, double length_scale, double signal_variance,
                                double noise_variance);

  /// Throws ConfigError if any value is non-positive (noise may be zero) or
  /// the dimension differs from `expected_dim`.
  void validate(std::size_t expected_dim) const;

  /// Packs [log l_1..log l_D, log sf2, log sn2].
  Eigen::VectorXd to_log() const;
  static KernelParams from_log(const Eigen::VectorXd& log_params);
};

/// sf2 * (1 + sqrt(5) r + 5 r^2 / 3) * exp(-sqrt(5) r),
/// r^2 = sum_d ((a_d - b_d) / l_d)^2.
double matern52_ard(const Eigen::Ref<const Eigen::VectorXd>& a,
                    const Eigen::Ref<const Eigen::VectorXd>& b, const KernelParams& params);

/// Cross-covariance matrix between the rows of `a` and `b` (noise excluded).
Eigen::MatrixXd kernel_matrix(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                              const KernelParams& params);

struct LogLikelihood {
  double value = 0.0;
  /// d value / d to_log() of the parameters; empty when not requested.
  Eigen::VectorXd gradient;
};

/// Log marginal likelihood of targets `y` under a zero-mean GP with
/// covariance K(X,X) + (noise + jitter) I. Returns std::nullopt when the
/// covariance is not numerically positive definite.
std::optional<LogLikelihood> log_marginal_likelihood(const Eigen::MatrixXd& x,
                                                     const Eigen::VectorXd& y,
                                                     const KernelParams& params,
                                                     bool with_gradient, double jitter = 0.0);

/// Box on the log-hyperparameters explored by maximum likelihood.
struct HyperBounds {
  double min_length_scale = 1e-2;
  double max_length_scale = 1e3;
  double min_signal_variance = 1e-3;
  double max_signal_variance = 1e3;
  double min_noise_variance = 1e-8;
  double max_noise_variance = 1.0;
};

struct FitOptions {
  /// Number of likelihood-optimizer starts: the init point, then the init
  /// point with every log length scale shifted by +1.
  int starts = 2;
  int max_iterations = 100;
  /// Subtract the mean and divide by the standard deviation of the targets
  /// before fitting; predictions are mapped back.
  bool standardize = true;
  HyperBounds bounds;
};

struct Prediction {
  Eigen::VectorXd mean;
  Eigen::VectorXd variance;
};

/// A conditioned Gaussian-process regressor. Immutable once built.
class GpModel {
 public:
  /// Maximizes the log marginal likelihood starting from `init` (S >= 2),
  /// then conditions on the data. With S == 1 the init parameters are kept.
  static GpModel fit(const Eigen::MatrixXd& x, const Eigen::VectorXd& y, const KernelParams& init,
                     const FitOptions& options = {});

  /// Conditions on the data with fixed hyperparameters.
  static GpModel condition(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                           const KernelParams& params, bool standardize = true);

  Prediction predict(const Eigen::MatrixXd& test_inputs) const;
  Eigen::VectorXd predict_mean(const Eigen::MatrixXd& test_inputs) const;

  const KernelParams& params() const noexcept { return params_; }
  const Eigen::MatrixXd& train_inputs() const noexcept { return x_; }
  /// Training targets after standardization.
  const Eigen::VectorXd& train_targets() const noexcept { return y_; }
  double target_mean() const noexcept { return y_mean_; }
  double target_scale() const noexcept { return y_scale_; }
  /// Lower Cholesky factor of K(X,X) + (noise + jitter) I.
  const Eigen::MatrixXd& cholesky() const noexcept { return chol_; }
  /// (K + noise I)^-1 y on the standardized targets.
  const Eigen::VectorXd& alpha() const noexcept { return alpha_; }
  double jitter() const noexcept { return jitter_; }
  double log_likelihood() const noexcept { return log_likelihood_; }
  std::size_t num_train() const noexcept { return static_cast<std::size_t>(x_.rows()); }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(x_.cols()); }

 private:
  GpModel() = default;

  Eigen::MatrixXd x_;
  Eigen::VectorXd y_;
  double y_mean_ = 0.0;
  double y_scale_ = 1.0;
  KernelParams params_;
  Eigen::MatrixXd chol_;
  Eigen::VectorXd alpha_;
  double jitter_ = 0.0;
  double log_likelihood_ = 0.0;
};

/// Diagonal jitter escalation: first attempt uses kJitterStart * mean
/// diagonal, multiplied by 10 on each failure up to kJitterMax.
inline constexpr double kJitterStart = 1e-10;
inline constexpr double kJitterMax = 1e-4;

/// Hyperparameter refit schedule for surrogates that are rebuilt every
/// iteration: refit every time while the training set is small, otherwise
/// every `period` iterations with the previous hyperparameters reused in
/// between.
struct RefitPolicy {
  std::size_t refit_every_iteration_up_to = 50;
  int period = 10;

  bool should_refit(long iteration, std::size_t training_rows) const {
    return training_rows <= refit_every_iteration_up_to || period <= 1 || iteration % period == 0;
  }
};

}  // namespace ccopt
