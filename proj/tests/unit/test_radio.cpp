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

#include "ccopt/error.hpp"
#include "ccopt/parallel.hpp"
#include "ccopt/radio.hpp"
#include "desk.hpp"

using namespace ccopt;
using ccopt::testing::db_to_linear;
using ccopt::testing::linear_to_db;

namespace {

NetworkLayout hand_layout() {
  std::vector<CellSite> cells = {
      {0, {0.0, 0.0}, 25.0, 0.0, CellClass::kMacroSector, 43.0},
      {1, {0.0, 0.0}, 25.0, 120.0, CellClass::kMacroSector, 43.0},
      {2, {200.0, 0.0}, 10.0, 0.0, CellClass::kSmallCell, 30.0},
  };
  std::vector<UserEquipment> ues = {
      {0, {100.0, 0.0}, 1.5}, {1, {-50.0, 80.0}, 1.5}, {2, {150.0, 30.0}, 1.5}, {3, {250.0, -20.0}, 1.5}};
  return NetworkLayout(cells, ues, 11, Region{{0.0, 0.0}, 500.0});
}

// Tabulated losses; geometry angles computed from the layout.
LinkBudget hand_budget(const NetworkLayout& l) {
  LinkBudget b;
  b.path_loss_db.resize(3, 4);
  b.path_loss_db << 100.0, 104.0, 112.0, 121.0,  //
      100.0, 104.0, 112.0, 121.0,                //
      95.0, 118.0, 88.0, 92.0;
  b.shadowing_db = Eigen::MatrixXd::Zero(3, 4);
  b.shadowing_db(2, 1) = 3.0;
  b.bearing_deg.resize(3, 4);
  b.elevation_deg.resize(3, 4);
  for (int m = 0; m < 3; ++m) {
    for (int n = 0; n < 4; ++n) {
      const auto& c = l.cells()[m];
      const auto& u = l.ues()[n];
      const double dx = u.position.x - c.position.x;
      const double dy = u.position.y - c.position.y;
      b.bearing_deg(m, n) = std::atan2(dy, dx) * 180.0 / M_PI;
      b.elevation_deg(m, n) = std::atan2(c.height_m - u.height_m, std::hypot(dx, dy)) * 180.0 / M_PI;
    }
  }
  b.fading = {Eigen::MatrixXd::Ones(3, 4)};
  return b;
}

// Spreadsheet-style recomputation written independently of the library.
struct Oracle {
  Eigen::MatrixXd rsrp;
  std::vector<int> serving;
  std::vector<double> dl, ul, pt;
};

Oracle oracle(const NetworkLayout& l, const LinkBudget& b, const AntennaConfig& c) {
  const int M = 3, N = 4;
  Oracle o;
  o.rsrp.resize(M, N);
  for (int m = 0; m < M; ++m) {
    const auto& cell = l.cells()[m];
    for (int n = 0; n < N; ++n) {
      const double vbw = std::max(c.vertical_hpbw(m), 1.0);
      const double v = 12.0 * std::pow((b.elevation_deg(m, n) - c.downtilt(m)) / vbw, 2);
      double gain;
      if (cell.cell_class == CellClass::kSmallCell) {
        gain = 5.0 - std::min(v, 30.0);
      } else {
        double az = std::fmod(b.bearing_deg(m, n) - cell.azimuth_deg + 540.0, 360.0) - 180.0;
        const double h = 12.0 * std::pow(az / std::max(c.horizontal_hpbw(m), 1.0), 2);
        gain = 8.0 - std::min(h + v, 30.0);
      }
      o.rsrp(m, n) = cell.tx_power_dbm + gain - b.path_loss_db(m, n) - b.shadowing_db(m, n);
    }
  }
  for (int n = 0; n < N; ++n) {
    int s = 0;
    for (int m = 1; m < M; ++m) if (o.rsrp(m, n) > o.rsrp(s, n)) s = m;
    o.serving.push_back(s);
  }
  const double dl_noise = db_to_linear(-174.0 + 70.0 + 9.0);
  const double ul_noise = db_to_linear(-174.0 + 70.0 + 5.0);
  for (int n = 0; n < N; ++n) {
    const int s = o.serving[n];
    double interf = 0.0;
    for (int m = 0; m < M; ++m) if (m != s) interf += db_to_linear(o.rsrp(m, n));
    o.dl.push_back(linear_to_db(db_to_linear(o.rsrp(s, n)) / (interf + dl_noise)));
    const double loss = l.cells()[s].tx_power_dbm - o.rsrp(s, n);
    o.pt.push_back(std::min(23.0, 10.0 * std::log10(52.0) - 90.0 + 0.9 * loss));
  }
  // One interferer per other cell: its lowest-index served UE.
  for (int n = 0; n < N; ++n) {
    const int s = o.serving[n];
    auto rx = [&](int cell, int ue) {
      return o.pt[ue] + o.rsrp(cell, ue) - l.cells()[cell].tx_power_dbm;
    };
    double interf = 0.0;
    for (int m = 0; m < M; ++m) {
      if (m == s) continue;
      for (int k = 0; k < N; ++k) {
        if (o.serving[k] == m) {
          interf += db_to_linear(rx(s, k));
          break;
        }
      }
    }
    o.ul.push_back(linear_to_db(db_to_linear(rx(s, n)) / (interf + ul_noise)));
  }
  return o;
}

}  // namespace

TEST_CASE("noise power over 10 MHz") {
  CHECK(noise_power_dbm(10e6, 9.0) == doctest::Approx(-95.0).epsilon(1e-12));
  CHECK(noise_power_dbm(10e6, 5.0) == doctest::Approx(-99.0).epsilon(1e-12));
}

TEST_CASE("fractional uplink power control") {
  CHECK(ul_tx_power(100.0, 50, -90.0, 0.9, 23.0) == doctest::Approx(16.9897).epsilon(1e-6));
  CHECK(ul_tx_power(120.0, 50, -90.0, 0.9, 23.0) == 23.0);
  CHECK(ul_tx_power(0.0, 1, -90.0, 0.9, 23.0) == doctest::Approx(-90.0));
  for (double l = 0.0; l <= 200.0; l += 0.5) {
    const double p = ul_tx_power(l, 52, -90.0, 0.9, 23.0);
    const double uncapped = 10.0 * std::log10(52.0) - 90.0 + 0.9 * l;
    CHECK(p <= 23.0);
    CHECK((p == 23.0) == (uncapped >= 23.0));
  }
}

TEST_CASE("UMa path loss") {
  CHECK(free_space_path_loss_db(100.0, 2.0) == doctest::Approx(32.45 + 20 * std::log10(2.0) + 40.0));
  // Close in, the LOS line lies under free space and the floor applies.
  CHECK(uma_path_loss_db(100.0, 100.0, 1.5, 2.0, true) == free_space_path_loss_db(100.0, 2.0));
  CHECK(uma_path_loss_db(1000.0, 1000.0, 1.5, 2.0, true) ==
        doctest::Approx(28.0 + 66.0 + 20.0 * std::log10(2.0)));
  CHECK(uma_path_loss_db(1000.0, 1000.0, 1.5, 2.0, false) ==
        doctest::Approx(13.54 + 3 * 39.08 + 20.0 * std::log10(2.0)));
  for (double d = 20.0; d < 3000.0; d *= 1.3) {
    CHECK(uma_path_loss_db(d, d, 1.5, 2.0, false) >= uma_path_loss_db(d, d, 1.5, 2.0, true));
  }
  CHECK(uma_los_probability(10.0, 1.5) == 1.0);
  CHECK(uma_los_probability(1000.0, 1.5) == doctest::Approx(0.018 + std::exp(-1000.0 / 63.0) * 0.982));
}

TEST_CASE("hand layout matches the spreadsheet oracle") {
  const auto l = hand_layout();
  const auto b = hand_budget(l);
  const RadioEnvironment env(l, RadioParams{}, b);
  std::vector<AntennaConfig> configs = {AntennaConfig::uniform(3)};
  Eigen::VectorXd flat(9);
  flat << 4.0, 20.0, 0.0, 30.0, 6.0, 0.0, 100.0, 15.0, 5.0;
  configs.emplace_back(flat);
  flat << 25.0, 1.0, 10.0, 65.0, 40.0, 12.0, 5.0, 50.0, 80.0;
  configs.emplace_back(flat);
  for (const auto& c : configs) {
    const auto o = oracle(l, b, c);
    const auto r = env.evaluate(c);
    const Eigen::MatrixXd rsrp = env.downlink_rsrp(c);
    CHECK((rsrp - o.rsrp).cwiseAbs().maxCoeff() < 1e-9);
    CHECK(r.serving_cell == o.serving);
    for (int n = 0; n < 4; ++n) {
      CHECK(std::abs(r.dl_sinr_db[n] - o.dl[n]) < 1e-9);
      CHECK(std::abs(r.ul_sinr_db[n] - o.ul[n]) < 1e-9);
      CHECK(std::abs(r.ul_tx_power_dbm[n] - o.pt[n]) < 1e-9);
    }
  }
}

TEST_CASE("a single cell sees no interference") {
  std::vector<CellSite> cells = {{0, {0.0, 0.0}, 25.0, 0.0, CellClass::kMacroSector, 43.0}};
  std::vector<UserEquipment> ues = {{0, {150.0, 10.0}, 1.5}};
  const NetworkLayout l(cells, ues, 1, Region{{0.0, 0.0}, 300.0});
  const RadioEnvironment env(l, ccopt::testing::deterministic_radio());
  const auto c = AntennaConfig::uniform(1);
  const auto r = env.evaluate(c);
  const double rsrp = env.downlink_rsrp(c)(0, 0);
  CHECK(r.dl_sinr_db[0] == doctest::Approx(rsrp - env.dl_noise_dbm()).epsilon(1e-12));
  const double ul_rx = env.uplink_rx_power(c)(0, 0);
  CHECK(r.ul_sinr_db[0] == doctest::Approx(ul_rx - env.ul_noise_dbm()).epsilon(1e-12));
}

TEST_CASE("more gain towards a lone UE never lowers its SINR") {
  std::vector<CellSite> cells = {{0, {0.0, 0.0}, 25.0, 0.0, CellClass::kMacroSector, 43.0}};
  std::vector<UserEquipment> ues = {{0, {120.0, 0.0}, 1.5}};
  const NetworkLayout l(cells, ues, 1, Region{{0.0, 0.0}, 300.0});
  const RadioEnvironment env(l, ccopt::testing::deterministic_radio());
  const double elevation = env.link_budget().elevation_deg(0, 0);
  double prev_gain = -1e9, prev_sinr = -1e9;
  // Tilts approaching the UE's elevation raise the gain monotonically.
  for (double tilt = 0.0; tilt <= elevation; tilt += 0.5) {
    Eigen::VectorXd flat(3);
    flat << tilt, 6.0, 70.0;
    const AntennaConfig c(flat);
    const double g = env.antenna_gain(c, 0, 0);
    const double s = env.evaluate(c).dl_sinr_db[0];
    CHECK(g >= prev_gain);
    CHECK(s >= prev_sinr);
    prev_gain = g;
    prev_sinr = s;
  }
}

TEST_CASE("two equal cells give a UE less than 0 dB") {
  std::vector<CellSite> cells = {{0, {-100.0, 0.0}, 10.0, 0.0, CellClass::kSmallCell, 30.0},
                                 {1, {100.0, 0.0}, 10.0, 0.0, CellClass::kSmallCell, 30.0}};
  std::vector<UserEquipment> ues = {{0, {0.0, 0.0}, 1.5}};
  const NetworkLayout l(cells, ues, 1, Region{{0.0, 0.0}, 300.0});
  LinkBudget b;
  b.path_loss_db = Eigen::MatrixXd::Constant(2, 1, 90.0);
  b.shadowing_db = Eigen::MatrixXd::Zero(2, 1);
  b.bearing_deg = Eigen::MatrixXd::Zero(2, 1);
  b.elevation_deg = Eigen::MatrixXd::Constant(2, 1, 5.0);
  b.fading = {Eigen::MatrixXd::Ones(2, 1)};
  const RadioEnvironment env(l, RadioParams{}, b);
  const auto c = AntennaConfig::uniform(2);
  const Eigen::MatrixXd rsrp = env.downlink_rsrp(c);
  CHECK(rsrp(0, 0) == rsrp(1, 0));
  const auto r = env.evaluate(c);
  CHECK(r.serving_cell[0] == 0);  // tie goes to the lower id
  const double p = db_to_linear(rsrp(0, 0));
  CHECK(r.dl_sinr_db[0] < 0.0);
  CHECK(r.dl_sinr_db[0] == doctest::Approx(linear_to_db(p / (p + db_to_linear(env.dl_noise_dbm())))));

  LinkBudget b2 = b;
  b2.path_loss_db(1, 0) += 10.0;
  const RadioEnvironment env2(l, RadioParams{}, b2);
  CHECK(env2.downlink_rsrp(c)(1, 0) == doctest::Approx(rsrp(1, 0) - 10.0).epsilon(1e-14));
}

TEST_CASE("association breaks ties by lowest id") {
  Eigen::MatrixXd rsrp(3, 3);
  rsrp << -80, -70, -60,  //
      -80, -75, -60,      //
      -90, -70, -59;
  CHECK(associate(rsrp) == std::vector<int>{0, 0, 2});
}

TEST_CASE("frozen randomness and co-sited sectors") {
  const auto l = ccopt::testing::desk_layout();
  const RadioEnvironment a(l, RadioParams{});
  const RadioEnvironment b(l, RadioParams{});
  const auto& la = a.link_budget();
  CHECK(la.path_loss_db == b.link_budget().path_loss_db);
  CHECK(la.shadowing_db == b.link_budget().shadowing_db);
  for (std::size_t f = 0; f < la.fading.size(); ++f) CHECK(la.fading[f] == b.link_budget().fading[f]);
  // Sectors 0..2 share a site.
  CHECK(la.path_loss_db.row(0) == la.path_loss_db.row(1));
  CHECK(la.shadowing_db.row(0) == la.shadowing_db.row(2));
  const auto c = AntennaConfig::uniform(l.num_cells());
  CHECK(a.evaluate(c) == a.evaluate(c));
  CHECK(a.evaluate(c) == b.evaluate(c));
}

TEST_CASE("fading powers have unit mean") {
  RadioParams p;
  p.fading_samples = 200;
  const RadioEnvironment env(ccopt::testing::desk_layout(), p);
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& h : env.link_budget().fading) {
    sum += h.sum();
    count += static_cast<std::size_t>(h.size());
  }
  CHECK(sum / static_cast<double>(count) == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("concurrent evaluations agree with serial ones") {
  const RadioEnvironment env(ccopt::testing::desk_layout(), RadioParams{});
  std::vector<AntennaConfig> configs;
  auto rng = make_rng(3, Stream::kInit);
  for (int i = 0; i < 32; ++i) configs.push_back(random_config(env.num_cells(), AntennaBounds{}, rng));
  std::vector<SinrReport> parallel(configs.size());
  parallel_for(configs.size(), 4, [&](std::size_t i) { parallel[i] = env.evaluate(configs[i]); });
  for (std::size_t i = 0; i < configs.size(); ++i) CHECK(parallel[i] == env.evaluate(configs[i]));
}

TEST_CASE("configuration size must match the layout") {
  const RadioEnvironment env(ccopt::testing::desk_layout(), RadioParams{});
  CHECK_THROWS_AS(env.evaluate(AntennaConfig::uniform(2)), ConfigError);
  RadioParams bad;
  bad.fading_samples = 0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}
