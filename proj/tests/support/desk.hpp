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

#include <cmath>
#include <numbers>
#include <vector>

#include "ccopt/netgen.hpp"
#include "ccopt/radio.hpp"

namespace ccopt::testing {

// Small HetNet used by the slower tests: two three-sector macro sites and
// three small cells (M = 9), twenty UEs.
inline HexLayoutParams desk_params() {
  HexLayoutParams p;
  p.n_macro_sites = 2;
  p.inter_site_distance_m = 500.0;
  p.n_small_cells = 3;
  p.n_ues = 20;
  p.seed = 7;
  return p;
}

inline NetworkLayout desk_layout() { return generate_hex_layout(desk_params()); }

// ceil(M / 3)
inline std::size_t desk_neighborhood_size() { return 3; }

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

// Radio parameters with every random effect removed, for hand oracles.
inline RadioParams deterministic_radio() {
  RadioParams p;
  p.shadowing_sigma_los_db = 0.0;
  p.shadowing_sigma_nlos_db = 0.0;
  p.rayleigh_fading = false;
  p.fading_samples = 1;
  return p;
}

// Least-squares fit of log(y - c) = log(a) + b log(k) after subtracting the
// value at the first point; returns b.
inline double power_law_exponent(const std::vector<double>& k, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < k.size(); ++i) {
    if (!(y[i] > 0.0) || !(k[i] > 0.0)) continue;
    const double lx = std::log(k[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace ccopt::testing
