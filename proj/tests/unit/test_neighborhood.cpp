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

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ccopt/error.hpp"
#include "ccopt/neighborhood.hpp"
#include "desk.hpp"

using namespace ccopt;

TEST_CASE("top-k ordering with ties to the lower index") {
  Eigen::VectorXd v(3);
  v << 20.0, -50.0, -10.0;
  CHECK(top_k_indices(v, 2) == std::vector<int>{0, 2});
  Eigen::VectorXd t(4);
  t << 1.0, 3.0, 3.0, 2.0;
  CHECK(top_k_indices(t, 3) == std::vector<int>{1, 2, 3});
}

TEST_CASE("full neighbourhoods hold every cell in RSRP order") {
  const RadioEnvironment env(ccopt::testing::desk_layout(), RadioParams{});
  const auto c = AntennaConfig::uniform(env.num_cells());
  const auto nb = build_neighborhoods(env, c, env.num_cells());
  const Eigen::MatrixXd rsrp = env.downlink_rsrp(c);
  for (std::size_t n = 0; n < env.num_ues(); ++n) {
    const auto& l = nb.dl[n];
    REQUIRE(l.size() == env.num_cells());
    for (std::size_t i = 1; i < l.size(); ++i) {
      CHECK(rsrp(l[i - 1], static_cast<Eigen::Index>(n)) >= rsrp(l[i], static_cast<Eigen::Index>(n)));
    }
  }
  for (double g : {0.6, 0.8, 1.0}) {
    const auto r = validate_neighborhoods(env, nb, g, 20, AntennaBounds{}, 1);
    CHECK(r.mean == 1.0);
  }
}

TEST_CASE("uplink lists rank by received uplink power; sharing copies the downlink") {
  const RadioEnvironment env(ccopt::testing::desk_layout(), RadioParams{});
  const auto c = AntennaConfig::uniform(env.num_cells());
  const auto nb = build_neighborhoods(env, c, 4);
  const Eigen::MatrixXd rx = env.uplink_rx_power(c);
  for (std::size_t n = 0; n < env.num_ues(); ++n) {
    CHECK(nb.ul[n] == top_k_indices(rx.col(static_cast<Eigen::Index>(n)), 4));
  }
  const auto shared = build_neighborhoods(env, c, 4, true);
  CHECK(shared.ul == shared.dl);
}

TEST_CASE("neighbourhood size is checked") {
  const RadioEnvironment env(ccopt::testing::desk_layout(), RadioParams{});
  const auto c = AntennaConfig::uniform(env.num_cells());
  CHECK_THROWS_AS(build_neighborhoods(env, c, env.num_cells() + 1), ConfigError);
  CHECK_THROWS_AS(build_neighborhoods(env, c, 0), ConfigError);
  const auto nb = build_neighborhoods(env, c, 3);
  CHECK_THROWS_AS(validate_neighborhoods(env, nb, 0.5, 10, AntennaBounds{}, 1), ConfigError);
}

TEST_CASE("capture rate matches a brute-force ranking") {
  const RadioEnvironment env(ccopt::testing::desk_layout(), RadioParams{});
  const auto nb = build_neighborhoods(env, AntennaConfig::uniform(env.num_cells()), 4);
  const int probes = 30;
  const auto r = validate_neighborhoods(env, nb, 0.6, probes, AntennaBounds{}, 5);
  CHECK(r.interferers_checked == 3);

  std::vector<double> expected(env.num_ues(), 0.0);
  auto rng = make_rng(5, Stream::kProbe);
  for (int p = 0; p < probes; ++p) {
    const auto cfg = random_config(env.num_cells(), AntennaBounds{}, rng);
    const Eigen::MatrixXd rsrp = env.downlink_rsrp(cfg);
    for (std::size_t n = 0; n < env.num_ues(); ++n) {
      std::vector<int> order(env.num_cells());
      std::iota(order.begin(), order.end(), 0);
      const auto col = rsrp.col(static_cast<Eigen::Index>(n));
      std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return col[a] > col[b]; });
      // order[0] serves; the next three interfere.
      bool all = true;
      for (int k = 1; k <= 3; ++k) {
        all = all && std::count(nb.dl[n].begin(), nb.dl[n].end(), order[k]) == 1;
      }
      expected[n] += all ? 1.0 / probes : 0.0;
    }
  }
  for (std::size_t n = 0; n < env.num_ues(); ++n) CHECK(r.per_ue[n] == doctest::Approx(expected[n]));
}

TEST_CASE("capture is monotone in gamma") {
  const RadioEnvironment env(ccopt::testing::desk_layout(), RadioParams{});
  const auto nb = build_neighborhoods(env, AntennaConfig::uniform(env.num_cells()), 5);
  const auto lo = validate_neighborhoods(env, nb, 0.6, 40, AntennaBounds{}, 2);
  const auto hi = validate_neighborhoods(env, nb, 1.0, 40, AntennaBounds{}, 2);
  for (std::size_t n = 0; n < env.num_ues(); ++n) CHECK(hi.per_ue[n] <= lo.per_ue[n]);
}
