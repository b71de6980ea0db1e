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

#include <span>
#include <vector>

#include "ccopt/antenna.hpp"
#include "ccopt/radio.hpp"

namespace ccopt {

/// Linear SINR floor applied before the inner logarithm of the rate metric.
inline constexpr double kSinrFloorLinear = 1e-6;

/// Weights and threshold of the scalarized uplink/downlink objective.
struct ObjectiveSpec {
  double alpha = 0.0;    // uplink weight
  double beta_dl = 0.5;  // rate vs. outage weight, downlink
  double beta_ul = 0.5;
  double threshold_db = 0.0;
  AntennaBounds bounds;

  void validate() const;
};

struct ObjectiveValue {
  double f_total = 0.0;
  double r_dl = 0.0;
  double r_ul = 0.0;
  double zeta_dl = 0.0;
  double zeta_ul = 0.0;

  friend bool operator==(const ObjectiveValue&, const ObjectiveValue&) = default;
};

/// Fraction of entries strictly below `threshold_db`.
double outage_probability(std::span<const double> sinr_db, double threshold_db);

/// Mean over UEs of ln(ln(1 + max(sinr, floor))), sinr converted from dB.
double avg_sum_log_rate(std::span<const double> sinr_db);

/// beta * R - (1 - beta) * zeta for one link direction.
double link_utility(double beta, double r, double zeta);

ObjectiveValue objective(std::span<const double> dl_sinr_db, std::span<const double> ul_sinr_db,
                         const ObjectiveSpec& spec);
ObjectiveValue objective(const SinrReport& report, const ObjectiveSpec& spec);

/// Linear-interpolation quantile between order statistics, p in [0, 1].
double quantile(std::span<const double> values, double p);

}  // namespace ccopt
