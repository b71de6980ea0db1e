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

#include "ccopt/radio.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "ccopt/error.hpp"
#include "ccopt/random.hpp"

namespace ccopt {

namespace {

constexpr double kThermalNoiseDbmPerHz = -174.0;

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

constexpr double rad2deg(double r) { return r * 180.0 / std::numbers::pi; }

}  // namespace

void RadioParams::validate() const {
  if (!(carrier_ghz > 0.0)) throw ConfigError("radio.carrier_ghz must be positive");
  if (!(bandwidth_hz > 0.0)) throw ConfigError("radio.bandwidth_hz must be positive");
  if (n_rb < 1) throw ConfigError("radio.n_rb must be >= 1");
  if (!(pathloss_compensation >= 0.0 && pathloss_compensation <= 1.0)) {
    throw ConfigError("radio.pathloss_compensation must lie in [0, 1]");
  }
  if (fading_samples < 1) throw ConfigError("radio.fading_samples must be >= 1");
  if (!(min_distance_2d_m > 0.0)) throw ConfigError("radio.min_distance_2d_m must be positive");
  if (shadowing_sigma_los_db < 0.0 || shadowing_sigma_nlos_db < 0.0) {
    throw ConfigError("radio shadowing sigmas must be non-negative");
  }
  if (!(pattern.max_attenuation_db >= 0.0)) throw ConfigError("pattern.max_attenuation_db < 0");
  if (!(pattern.min_vertical_hpbw_deg > 0.0) || !(pattern.min_horizontal_hpbw_deg > 0.0)) {
    throw ConfigError("pattern beamwidth floors must be positive");
  }
}

double noise_power_dbm(double bandwidth_hz, double noise_figure_db) {
  return kThermalNoiseDbmPerHz + 10.0 * std::log10(bandwidth_hz) + noise_figure_db;
}

double ul_tx_power(double pathloss_db, int n_rb, double p0_dbm, double phi, double p_max_dbm) {
  return std::min(p_max_dbm, 10.0 * std::log10(static_cast<double>(n_rb)) + p0_dbm + phi * pathloss_db);
}

double free_space_path_loss_db(double d3d, double fc_ghz) {
  return 32.45 + 20.0 * std::log10(fc_ghz) + 20.0 * std::log10(d3d);
}

double uma_los_probability(double d2d, double /*ue_height_m*/) {
  // The height-dependent correction term vanishes for UEs at or below 13 m.
  if (d2d <= 18.0) return 1.0;
  return 18.0 / d2d + std::exp(-d2d / 63.0) * (1.0 - 18.0 / d2d);
}

double uma_path_loss_db(double /*d2d*/, double d3d, double ue_height_m, double fc_ghz, bool los) {
  const double pl_los = 28.0 + 22.0 * std::log10(d3d) + 20.0 * std::log10(fc_ghz);
  double pl = pl_los;
  if (!los) {
    const double pl_nlos =
        13.54 + 39.08 * std::log10(d3d) + 20.0 * std::log10(fc_ghz) - 0.6 * (ue_height_m - 1.5);
    pl = std::max(pl_los, pl_nlos);
  }
  return std::max(pl, free_space_path_loss_db(d3d, fc_ghz));
}

LinkBudget build_link_budget(const NetworkLayout& layout, const RadioParams& params) {
  params.validate();
  const auto M = static_cast<Eigen::Index>(layout.num_cells());
  const auto N = static_cast<Eigen::Index>(layout.num_ues());

  LinkBudget lb;
  lb.path_loss_db.resize(M, N);
  lb.shadowing_db.resize(M, N);
  lb.bearing_deg.resize(M, N);
  lb.elevation_deg.resize(M, N);

  auto los_rng = make_rng(layout.rng_seed(), Stream::kLosState);
  auto shadow_rng = make_rng(layout.rng_seed(), Stream::kShadowing);
  std::normal_distribution<double> std_normal(0.0, 1.0);

  for (Eigen::Index m = 0; m < M; ++m) {
    const auto& cell = layout.cells()[static_cast<std::size_t>(m)];
    // Co-sited sectors reuse the large-scale draw of the first sector.
    Eigen::Index twin = -1;
    for (Eigen::Index k = 0; k < m; ++k) {
      if (layout.cells()[static_cast<std::size_t>(k)].position == cell.position &&
          layout.cells()[static_cast<std::size_t>(k)].height_m == cell.height_m) {
        twin = k;
        break;
      }
    }
    for (Eigen::Index n = 0; n < N; ++n) {
      const auto& ue = layout.ues()[static_cast<std::size_t>(n)];
      const double dx = ue.position.x - cell.position.x;
      const double dy = ue.position.y - cell.position.y;
      const double d2d = std::max(std::hypot(dx, dy), params.min_distance_2d_m);
      const double dh = cell.height_m - ue.height_m;
      const double d3d = std::hypot(d2d, dh);

      lb.bearing_deg(m, n) = rad2deg(std::atan2(dy, dx));
      lb.elevation_deg(m, n) = rad2deg(std::atan2(dh, d2d));

      // Draws happen for every pair so the streams stay aligned whether or not
      // a pair has a co-sited twin.
      const double u_los = uniform01(los_rng);
      const double z = std_normal(shadow_rng);
      if (twin >= 0) {
        lb.path_loss_db(m, n) = lb.path_loss_db(twin, n);
        lb.shadowing_db(m, n) = lb.shadowing_db(twin, n);
        continue;
      }
      const bool los = u_los < uma_los_probability(d2d, ue.height_m);
      lb.path_loss_db(m, n) = uma_path_loss_db(d2d, d3d, ue.height_m, params.carrier_ghz, los);
      lb.shadowing_db(m, n) =
          z * (los ? params.shadowing_sigma_los_db : params.shadowing_sigma_nlos_db);
    }
  }

  auto fade_rng = make_rng(layout.rng_seed(), Stream::kFading);
  std::exponential_distribution<double> rayleigh_power(1.0);
  lb.fading.reserve(static_cast<std::size_t>(params.fading_samples));
  for (int f = 0; f < params.fading_samples; ++f) {
    Eigen::MatrixXd h(M, N);
    if (params.rayleigh_fading) {
      for (Eigen::Index m = 0; m < M; ++m)
        for (Eigen::Index n = 0; n < N; ++n) h(m, n) = rayleigh_power(fade_rng);
    } else {
      h.setOnes();
    }
    lb.fading.push_back(std::move(h));
  }
  return lb;
}

RadioEnvironment::RadioEnvironment(NetworkLayout layout, RadioParams params)
    : layout_(std::move(layout)), params_(params), budget_(build_link_budget(layout_, params_)) {}

RadioEnvironment::RadioEnvironment(NetworkLayout layout, RadioParams params, LinkBudget budget)
    : layout_(std::move(layout)), params_(params), budget_(std::move(budget)) {
  params_.validate();
  const auto M = static_cast<Eigen::Index>(layout_.num_cells());
  const auto N = static_cast<Eigen::Index>(layout_.num_ues());
  auto check = [&](const Eigen::MatrixXd& mat, const char* name) {
    if (mat.rows() != M || mat.cols() != N) {
      throw ConfigError(std::string("link budget matrix '") + name + "' must be M x N");
    }
  };
  check(budget_.path_loss_db, "path_loss_db");
  check(budget_.shadowing_db, "shadowing_db");
  check(budget_.bearing_deg, "bearing_deg");
  check(budget_.elevation_deg, "elevation_deg");
  if (budget_.fading.empty()) throw ConfigError("link budget needs at least one fading sample");
  for (const auto& h : budget_.fading) check(h, "fading");
}

void RadioEnvironment::check_config(const AntennaConfig& config) const {
  if (config.num_cells() != layout_.num_cells()) {
    throw ConfigError("antenna config has " + std::to_string(config.num_cells()) +
                      " cells, layout has " + std::to_string(layout_.num_cells()));
  }
}

double RadioEnvironment::antenna_gain(const AntennaConfig& config, std::size_t m,
                                      std::size_t n) const {
  const auto& cell = layout_.cells()[m];
  const auto mi = static_cast<Eigen::Index>(m);
  const auto ni = static_cast<Eigen::Index>(n);
  const double elevation = budget_.elevation_deg(mi, ni);
  if (cell.cell_class == CellClass::kSmallCell) {
    return params_.small_max_gain_dbi +
           vertical_attenuation_db(elevation, config.downtilt(m), config.vertical_hpbw(m),
                                   params_.pattern);
  }
  const double az_offset = budget_.bearing_deg(mi, ni) - cell.azimuth_deg;
  return params_.macro_max_gain_dbi +
         pattern_attenuation_db(az_offset, elevation, config.downtilt(m), config.vertical_hpbw(m),
                                config.horizontal_hpbw(m), params_.pattern);
}

Eigen::MatrixXd RadioEnvironment::antenna_gain_matrix(const AntennaConfig& config) const {
  check_config(config);
  const auto M = layout_.num_cells();
  const auto N = layout_.num_ues();
  Eigen::MatrixXd g(static_cast<Eigen::Index>(M), static_cast<Eigen::Index>(N));
  for (std::size_t m = 0; m < M; ++m)
    for (std::size_t n = 0; n < N; ++n)
      g(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n)) = antenna_gain(config, m, n);
  return g;
}

Eigen::MatrixXd RadioEnvironment::downlink_rsrp(const AntennaConfig& config) const {
  Eigen::MatrixXd rsrp = antenna_gain_matrix(config) - budget_.path_loss_db - budget_.shadowing_db;
  for (std::size_t m = 0; m < layout_.num_cells(); ++m) {
    rsrp.row(static_cast<Eigen::Index>(m)).array() += layout_.cells()[m].tx_power_dbm;
  }
  return rsrp;
}

std::vector<int> associate(const Eigen::MatrixXd& rsrp) {
  std::vector<int> serving(static_cast<std::size_t>(rsrp.cols()));
  for (Eigen::Index n = 0; n < rsrp.cols(); ++n) {
    Eigen::Index best = 0;
    for (Eigen::Index m = 1; m < rsrp.rows(); ++m) {
      if (rsrp(m, n) > rsrp(best, n)) best = m;
    }
    serving[static_cast<std::size_t>(n)] = static_cast<int>(best);
  }
  return serving;
}

namespace {

/// Coupling loss seen by UE n towards its serving cell and the resulting
/// uplink transmit power.
std::vector<double> uplink_powers(const NetworkLayout& layout, const RadioParams& params,
                                  const Eigen::MatrixXd& rsrp, const std::vector<int>& serving) {
  std::vector<double> pt(serving.size());
  for (std::size_t n = 0; n < serving.size(); ++n) {
    const int c = serving[n];
    const double coupling_loss =
        layout.cells()[static_cast<std::size_t>(c)].tx_power_dbm - rsrp(c, static_cast<Eigen::Index>(n));
    pt[n] = ul_tx_power(coupling_loss, params.n_rb, params.p0_dbm, params.pathloss_compensation,
                        params.ue_max_power_dbm);
  }
  return pt;
}

}  // namespace

Eigen::MatrixXd RadioEnvironment::uplink_rx_power(const AntennaConfig& config) const {
  const Eigen::MatrixXd rsrp = downlink_rsrp(config);
  const auto serving = associate(rsrp);
  const auto pt = uplink_powers(layout_, params_, rsrp, serving);
  Eigen::MatrixXd rx(rsrp.rows(), rsrp.cols());
  for (Eigen::Index m = 0; m < rsrp.rows(); ++m) {
    const double ptx = layout_.cells()[static_cast<std::size_t>(m)].tx_power_dbm;
    for (Eigen::Index n = 0; n < rsrp.cols(); ++n) {
      // rsrp - tx_power is the reciprocal coupling gain of the pair.
      rx(m, n) = pt[static_cast<std::size_t>(n)] + rsrp(m, n) - ptx;
    }
  }
  return rx;
}

SinrReport RadioEnvironment::evaluate(const AntennaConfig& config) const {
  const Eigen::MatrixXd rsrp = downlink_rsrp(config);
  const auto M = rsrp.rows();
  const auto N = rsrp.cols();
  const auto serving = associate(rsrp);
  const auto pt = uplink_powers(layout_, params_, rsrp, serving);

  // Linear received powers: downlink pilot power and uplink power per pair.
  Eigen::MatrixXd dl_lin(M, N);
  Eigen::MatrixXd ul_lin(M, N);
  for (Eigen::Index m = 0; m < M; ++m) {
    const double ptx = layout_.cells()[static_cast<std::size_t>(m)].tx_power_dbm;
    for (Eigen::Index n = 0; n < N; ++n) {
      dl_lin(m, n) = db_to_linear(rsrp(m, n));
      ul_lin(m, n) = db_to_linear(pt[static_cast<std::size_t>(n)] + rsrp(m, n) - ptx);
    }
  }

  std::vector<std::vector<Eigen::Index>> served(static_cast<std::size_t>(M));
  for (Eigen::Index n = 0; n < N; ++n) served[static_cast<std::size_t>(serving[static_cast<std::size_t>(n)])].push_back(n);

  const double dl_noise = db_to_linear(dl_noise_dbm());
  const double ul_noise = db_to_linear(ul_noise_dbm());
  const auto F = budget_.fading.size();

  std::vector<double> dl_acc(static_cast<std::size_t>(N), 0.0);
  std::vector<double> ul_acc(static_cast<std::size_t>(N), 0.0);
  std::vector<Eigen::Index> active(static_cast<std::size_t>(M));

  for (std::size_t f = 0; f < F; ++f) {
    const Eigen::MatrixXd& h = budget_.fading[f];
    for (Eigen::Index m = 0; m < M; ++m) {
      const auto& list = served[static_cast<std::size_t>(m)];
      active[static_cast<std::size_t>(m)] = list.empty() ? -1 : list[f % list.size()];
    }
    for (Eigen::Index n = 0; n < N; ++n) {
      const int c = serving[static_cast<std::size_t>(n)];

      double dl_interference = 0.0;
      for (Eigen::Index m = 0; m < M; ++m) {
        if (m != c) dl_interference += dl_lin(m, n) * h(m, n);
      }
      dl_acc[static_cast<std::size_t>(n)] += dl_lin(c, n) * h(c, n) / (dl_interference + dl_noise);

      double ul_interference = 0.0;
      for (Eigen::Index m = 0; m < M; ++m) {
        const Eigen::Index k = active[static_cast<std::size_t>(m)];
        if (m == c || k < 0) continue;
        ul_interference += ul_lin(c, k) * h(c, k);
      }
      ul_acc[static_cast<std::size_t>(n)] += ul_lin(c, n) * h(c, n) / (ul_interference + ul_noise);
    }
  }

  SinrReport report;
  report.dl_sinr_db.resize(static_cast<std::size_t>(N));
  report.ul_sinr_db.resize(static_cast<std::size_t>(N));
  report.serving_cell = serving;
  report.ul_tx_power_dbm = pt;
  for (std::size_t n = 0; n < static_cast<std::size_t>(N); ++n) {
    report.dl_sinr_db[n] = linear_to_db(dl_acc[n] / static_cast<double>(F));
    report.ul_sinr_db[n] = linear_to_db(ul_acc[n] / static_cast<double>(F));
  }
  return report;
}

}  // namespace ccopt
