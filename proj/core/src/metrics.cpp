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

#include "ccopt/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "ccopt/error.hpp"

namespace ccopt {

void ObjectiveSpec::validate() const {
  auto fraction = [](double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) throw ConfigError(std::string(name) + " must lie in [0, 1]");
  };
  fraction(alpha, "alpha");
  fraction(beta_dl, "beta_dl");
  fraction(beta_ul, "beta_ul");
  if (!std::isfinite(threshold_db)) throw ConfigError("threshold_db must be finite");
  bounds.validate();
}

double outage_probability(std::span<const double> sinr_db, double threshold_db) {
  if (sinr_db.empty()) throw ConfigError("outage_probability: empty SINR vector");
  std::size_t below = 0;
  for (double s : sinr_db) {
    if (s < threshold_db) ++below;
  }
  return static_cast<double>(below) / static_cast<double>(sinr_db.size());
}

double avg_sum_log_rate(std::span<const double> sinr_db) {
  if (sinr_db.empty()) throw ConfigError("avg_sum_log_rate: empty SINR vector");
  double sum = 0.0;
  for (double s : sinr_db) {
    const double lin = std::max(std::pow(10.0, s / 10.0), kSinrFloorLinear);
    sum += std::log(std::log1p(lin));
  }
  return sum / static_cast<double>(sinr_db.size());
}

double link_utility(double beta, double r, double zeta) { return beta * r - (1.0 - beta) * zeta; }

ObjectiveValue objective(std::span<const double> dl_sinr_db, std::span<const double> ul_sinr_db,
                         const ObjectiveSpec& spec) {
  if (dl_sinr_db.size() != ul_sinr_db.size()) {
    throw ConfigError("objective: DL and UL SINR vectors differ in length");
  }
  ObjectiveValue v;
  v.r_dl = avg_sum_log_rate(dl_sinr_db);
  v.r_ul = avg_sum_log_rate(ul_sinr_db);
  v.zeta_dl = outage_probability(dl_sinr_db, spec.threshold_db);
  v.zeta_ul = outage_probability(ul_sinr_db, spec.threshold_db);
  v.f_total = (1.0 - spec.alpha) * link_utility(spec.beta_dl, v.r_dl, v.zeta_dl) +
              spec.alpha * link_utility(spec.beta_ul, v.r_ul, v.zeta_ul);
  return v;
}

ObjectiveValue objective(const SinrReport& report, const ObjectiveSpec& spec) {
  return objective(report.dl_sinr_db, report.ul_sinr_db, spec);
}

double quantile(std::span<const double> values, double p) {
  if (values.empty()) throw ConfigError("quantile of an empty vector");
  if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("quantile level must lie in [0, 1]");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double h = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace ccopt
