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

#include "ccopt/neighborhood.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "ccopt/error.hpp"
#include "ccopt/random.hpp"

namespace ccopt {

std::vector<int> top_k_indices(const Eigen::Ref<const Eigen::VectorXd>& column, std::size_t k) {
  std::vector<int> idx(static_cast<std::size_t>(column.size()));
  std::iota(idx.begin(), idx.end(), 0);
  k = std::min(k, idx.size());
  std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k), idx.end(),
                    [&](int a, int b) {
                      if (column[a] != column[b]) return column[a] > column[b];
                      return a < b;
                    });
  idx.resize(k);
  return idx;
}

Neighborhood build_neighborhoods(const RadioEnvironment& env, const AntennaConfig& default_config,
                                 std::size_t size, bool share_dl) {
  if (size == 0) throw ConfigError("neighborhood size must be >= 1");
  if (size > env.num_cells()) {
    throw ConfigError("neighborhood size " + std::to_string(size) + " exceeds cell count " +
                      std::to_string(env.num_cells()));
  }
  Neighborhood nb;
  nb.size = size;
  const Eigen::MatrixXd rsrp = env.downlink_rsrp(default_config);
  for (Eigen::Index n = 0; n < rsrp.cols(); ++n) nb.dl.push_back(top_k_indices(rsrp.col(n), size));
  if (share_dl) {
    nb.ul = nb.dl;
    return nb;
  }
  const Eigen::MatrixXd ul_rx = env.uplink_rx_power(default_config);
  for (Eigen::Index n = 0; n < ul_rx.cols(); ++n) nb.ul.push_back(top_k_indices(ul_rx.col(n), size));
  return nb;
}

CaptureReport validate_neighborhoods(const RadioEnvironment& env, const Neighborhood& nb,
                                     double gamma, int n_probe_configs,
                                     const AntennaBounds& bounds, std::uint64_t seed) {
  if (!(gamma >= 0.6 && gamma <= 1.0)) throw ConfigError("gamma must lie in [0.6, 1]");
  if (n_probe_configs < 1) throw ConfigError("need at least one probe configuration");
  const std::size_t M = env.num_cells();
  const std::size_t N = env.num_ues();
  if (nb.dl.size() != N) throw ConfigError("neighborhood does not match the layout's UE count");

  CaptureReport report;
  report.interferers_checked = std::min(
      static_cast<std::size_t>(std::ceil(gamma * static_cast<double>(nb.size) - 1e-12)), M - 1);
  report.per_ue.assign(N, 0.0);

  auto rng = make_rng(seed, Stream::kProbe);
  for (int probe = 0; probe < n_probe_configs; ++probe) {
    const AntennaConfig config = random_config(M, bounds, rng);
    Eigen::MatrixXd rsrp = env.downlink_rsrp(config);
    const auto serving = associate(rsrp);
    for (std::size_t n = 0; n < N; ++n) {
      Eigen::VectorXd col = rsrp.col(static_cast<Eigen::Index>(n));
      col[serving[n]] = -std::numeric_limits<double>::infinity();
      const auto strongest = top_k_indices(col, report.interferers_checked);
      const auto& members = nb.dl[n];
      const bool captured = std::all_of(strongest.begin(), strongest.end(), [&](int c) {
        return std::find(members.begin(), members.end(), c) != members.end();
      });
      if (captured) report.per_ue[n] += 1.0;
    }
  }
  for (auto& r : report.per_ue) r /= n_probe_configs;
  report.mean = std::accumulate(report.per_ue.begin(), report.per_ue.end(), 0.0) /
                static_cast<double>(N);
  return report;
}

}  // namespace ccopt
