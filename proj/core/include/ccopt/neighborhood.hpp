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

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "ccopt/antenna.hpp"
#include "ccopt/radio.hpp"

namespace ccopt {

/// Per-UE cell subsets used as surrogate inputs. Each list holds `size`
/// distinct cell ids ordered by descending received power under the
/// configuration used to build it (ties: lower id first).
struct Neighborhood {
  std::size_t size = 0;
  std::vector<std::vector<int>> dl;
  std::vector<std::vector<int>> ul;
};

/// Indices of the k largest entries of `column`, descending, ties by index.
std::vector<int> top_k_indices(const Eigen::Ref<const Eigen::VectorXd>& column, std::size_t k);

/// Downlink lists rank cells by DL RSRP; uplink lists rank cells by the
/// power each cell receives from the UE. With `share_dl` the UL lists copy
/// the DL ones.
Neighborhood build_neighborhoods(const RadioEnvironment& env, const AntennaConfig& default_config,
                                 std::size_t size, bool share_dl = false);

struct CaptureReport {
  std::size_t interferers_checked = 0;  // ceil(gamma * size), capped at M - 1
  std::vector<double> per_ue;           // fraction of probes fully captured
  double mean = 0.0;
};

/// Probes `n_probe_configs` uniformly random configurations. For each UE a
/// probe counts as captured when its strongest ceil(gamma * size) downlink
/// interferers (serving cell excluded) all belong to its DL neighborhood.
CaptureReport validate_neighborhoods(const RadioEnvironment& env, const Neighborhood& neighborhood,
                                     double gamma, int n_probe_configs,
                                     const AntennaBounds& bounds, std::uint64_t seed);

}  // namespace ccopt
