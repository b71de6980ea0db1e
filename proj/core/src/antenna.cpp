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

#include "ccopt/antenna.hpp"

#include <algorithm>
#include <cmath>

#include "ccopt/error.hpp"

namespace ccopt {

const ParamBounds& AntennaBounds::for_coordinate(std::size_t j, std::size_t num_cells) const {
  if (j < num_cells) return downtilt;
  if (j < 2 * num_cells) return vertical_hpbw;
  return horizontal_hpbw;
}

void AntennaBounds::validate() const {
  for (const auto* b : {&downtilt, &vertical_hpbw, &horizontal_hpbw}) {
    if (!(b->low < b->high)) throw ConfigError("antenna bounds require low < high");
  }
}

AntennaConfig::AntennaConfig(Eigen::VectorXd flat) : flat_(std::move(flat)) {
  if (flat_.size() == 0 || flat_.size() % 3 != 0) {
    throw ConfigError("antenna config length must be a positive multiple of 3");
  }
}

AntennaConfig AntennaConfig::uniform(std::size_t num_cells, AntennaSetting s) {
  const auto m = static_cast<Eigen::Index>(num_cells);
  Eigen::VectorXd flat(3 * m);
  flat.segment(0, m).setConstant(s.downtilt);
  flat.segment(m, m).setConstant(s.vertical_hpbw);
  flat.segment(2 * m, m).setConstant(s.horizontal_hpbw);
  return AntennaConfig(std::move(flat));
}

bool AntennaConfig::within(const AntennaBounds& bounds) const {
  for (Eigen::Index j = 0; j < flat_.size(); ++j) {
    const auto& b = bounds.for_coordinate(static_cast<std::size_t>(j), num_cells());
    if (flat_[j] < b.low || flat_[j] > b.high) return false;
  }
  return true;
}

AntennaConfig AntennaConfig::clipped(const AntennaBounds& bounds) const {
  Eigen::VectorXd out = flat_;
  for (Eigen::Index j = 0; j < out.size(); ++j) {
    out[j] = bounds.for_coordinate(static_cast<std::size_t>(j), num_cells()).clamp(out[j]);
  }
  return AntennaConfig(std::move(out));
}

AntennaConfig random_config(std::size_t num_cells, const AntennaBounds& bounds, Rng& rng) {
  Eigen::VectorXd flat(static_cast<Eigen::Index>(3 * num_cells));
  for (Eigen::Index j = 0; j < flat.size(); ++j) {
    const auto& b = bounds.for_coordinate(static_cast<std::size_t>(j), num_cells);
    flat[j] = uniform(rng, b.low, b.high);
  }
  return AntennaConfig(std::move(flat));
}

double wrap_degrees(double deg) {
  double w = std::fmod(deg + 180.0, 360.0);
  if (w < 0.0) w += 360.0;
  return w - 180.0;
}

double vertical_attenuation_db(double elevation_deg, double downtilt_deg, double vertical_hpbw_deg,
                               const PatternParams& params) {
  const double vbw = std::max(vertical_hpbw_deg, params.min_vertical_hpbw_deg);
  const double v = (elevation_deg - downtilt_deg) / vbw;
  return -std::min(12.0 * v * v, params.max_attenuation_db);
}

double pattern_attenuation_db(double azimuth_offset_deg, double elevation_deg, double downtilt_deg,
                              double vertical_hpbw_deg, double horizontal_hpbw_deg,
                              const PatternParams& params) {
  const double vbw = std::max(vertical_hpbw_deg, params.min_vertical_hpbw_deg);
  const double hbw = std::max(horizontal_hpbw_deg, params.min_horizontal_hpbw_deg);
  const double h = wrap_degrees(azimuth_offset_deg) / hbw;
  const double v = (elevation_deg - downtilt_deg) / vbw;
  return -std::min(12.0 * h * h + 12.0 * v * v, params.max_attenuation_db);
}

}  // namespace ccopt
