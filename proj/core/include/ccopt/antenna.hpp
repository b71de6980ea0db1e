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

#include <Eigen/Core>

#include "ccopt/random.hpp"

namespace ccopt {

/// Closed search interval for one antenna parameter, in degrees.
struct ParamBounds {
  double low = 0.0;
  double high = 1.0;

  double clamp(double v) const { return v < low ? low : (v > high ? high : v); }
  double width() const { return high - low; }
  friend bool operator==(const ParamBounds&, const ParamBounds&) = default;
};

/// Box constraints applied identically to every cell.
struct AntennaBounds {
  ParamBounds downtilt{0.0, 25.0};
  ParamBounds vertical_hpbw{0.0, 65.0};
  ParamBounds horizontal_hpbw{5.0, 100.0};

  /// Bounds of coordinate j of a flattened 3M vector.
  const ParamBounds& for_coordinate(std::size_t j, std::size_t num_cells) const;

  /// Throws ConfigError unless low < high for every parameter.
  void validate() const;

  friend bool operator==(const AntennaBounds&, const AntennaBounds&) = default;
};

/// Default uniform setting used for neighborhood discovery and as the
/// fixed-default baseline.
struct AntennaSetting {
  double downtilt = 12.0;
  double vertical_hpbw = 10.0;
  double horizontal_hpbw = 70.0;
};

/// One candidate solution: per-cell downtilt, vertical and horizontal
/// half-power beamwidth, stored flat as [tilt_0..tilt_{M-1}, vbw_0.., hbw_0..].
class AntennaConfig {
 public:
  AntennaConfig() = default;
  explicit AntennaConfig(Eigen::VectorXd flat);

  static AntennaConfig uniform(std::size_t num_cells, AntennaSetting setting = {});

  std::size_t num_cells() const noexcept { return static_cast<std::size_t>(flat_.size()) / 3; }
  double downtilt(std::size_t m) const { return flat_[static_cast<Eigen::Index>(m)]; }
  double vertical_hpbw(std::size_t m) const {
    return flat_[static_cast<Eigen::Index>(num_cells() + m)];
  }
  double horizontal_hpbw(std::size_t m) const {
    return flat_[static_cast<Eigen::Index>(2 * num_cells() + m)];
  }

  const Eigen::VectorXd& flat() const noexcept { return flat_; }

  bool within(const AntennaBounds& bounds) const;
  AntennaConfig clipped(const AntennaBounds& bounds) const;

  friend bool operator==(const AntennaConfig& a, const AntennaConfig& b) {
    return a.flat_.size() == b.flat_.size() && a.flat_ == b.flat_;
  }

 private:
  Eigen::VectorXd flat_;
};

/// Uniform draw inside the box, coordinate by coordinate in flat order.
AntennaConfig random_config(std::size_t num_cells, const AntennaBounds& bounds, Rng& rng);

/// Parabolic element pattern:
///   A = -min(12 (az/hbw)^2 + 12 ((el - tilt)/vbw)^2, max_attenuation)
/// with az the horizontal offset from boresight and el the elevation below
/// the horizon, both in degrees. The vertical beamwidth is floored at
/// `min_vertical_hpbw` to keep the pattern finite at the 0 degree bound.
struct PatternParams {
  double max_attenuation_db = 30.0;
  double min_vertical_hpbw_deg = 1.0;
  double min_horizontal_hpbw_deg = 1.0;
};

double pattern_attenuation_db(double azimuth_offset_deg, double elevation_deg, double downtilt_deg,
                              double vertical_hpbw_deg, double horizontal_hpbw_deg,
                              const PatternParams& params = {});

/// Variant without the horizontal term, for omnidirectional small cells.
double vertical_attenuation_db(double elevation_deg, double downtilt_deg, double vertical_hpbw_deg,
                               const PatternParams& params = {});

/// Wraps an angle difference into [-180, 180).
double wrap_degrees(double deg);

}  // namespace ccopt
