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
#include <vector>

#include <Eigen/Core>

#include "ccopt/antenna.hpp"
#include "ccopt/netgen.hpp"

namespace ccopt {

struct RadioParams {
  double carrier_ghz = 2.0;
  double bandwidth_hz = 10e6;
  int n_rb = 52;  // 10 MHz at 15 kHz subcarrier spacing, full allocation
  double ue_noise_figure_db = 9.0;
  double bs_noise_figure_db = 5.0;

  // Fractional uplink power control.
  double p0_dbm = -90.0;
  double pathloss_compensation = 0.9;
  double ue_max_power_dbm = 23.0;

  double macro_max_gain_dbi = 8.0;
  double small_max_gain_dbi = 5.0;
  PatternParams pattern;

  double shadowing_sigma_los_db = 4.0;
  double shadowing_sigma_nlos_db = 6.0;
  double min_distance_2d_m = 10.0;

  int fading_samples = 10;
  bool rayleigh_fading = true;

  /// Throws ConfigError on out-of-range values.
  void validate() const;
};

/// Thermal noise power over `bandwidth_hz` plus the noise figure.
double noise_power_dbm(double bandwidth_hz, double noise_figure_db);

/// min(p_max, 10 log10(n_rb) + p0 + phi * pathloss).
double ul_tx_power(double pathloss_db, int n_rb, double p0_dbm, double phi, double p_max_dbm);

/// Free-space path loss at `carrier_ghz`, distance in meters.
double free_space_path_loss_db(double distance_3d_m, double carrier_ghz);

/// Urban-macro log-distance path loss (LOS or NLOS), floored at free space.
double uma_path_loss_db(double distance_2d_m, double distance_3d_m, double ue_height_m,
                        double carrier_ghz, bool los);

/// Distance-dependent LOS probability of the urban-macro scenario.
double uma_los_probability(double distance_2d_m, double ue_height_m);

/// Frozen large- and small-scale channel state for every (cell, UE) pair.
/// Matrices are M x N; `fading` holds one M x N matrix of linear power gains
/// per averaging sample.
struct LinkBudget {
  Eigen::MatrixXd path_loss_db;
  Eigen::MatrixXd shadowing_db;
  Eigen::MatrixXd bearing_deg;    // direction from cell to UE, CCW from +x
  Eigen::MatrixXd elevation_deg;  // angle below the horizon seen from the cell
  std::vector<Eigen::MatrixXd> fading;
};

/// Draws LOS state, shadowing and fading from the layout seed. Sectors that
/// share a site position share LOS state and shadowing towards each UE.
LinkBudget build_link_budget(const NetworkLayout& layout, const RadioParams& params);

struct SinrReport {
  std::vector<double> dl_sinr_db;
  std::vector<double> ul_sinr_db;
  std::vector<int> serving_cell;
  std::vector<double> ul_tx_power_dbm;

  std::size_t num_ues() const noexcept { return dl_sinr_db.size(); }
  friend bool operator==(const SinrReport&, const SinrReport&) = default;
};

/// The network simulator: maps an AntennaConfig to per-UE SINR. Immutable
/// after construction; every const member is safe to call concurrently.
class RadioEnvironment {
 public:
  explicit RadioEnvironment(NetworkLayout layout, RadioParams params = {});
  RadioEnvironment(NetworkLayout layout, RadioParams params, LinkBudget budget);

  const NetworkLayout& layout() const noexcept { return layout_; }
  const RadioParams& params() const noexcept { return params_; }
  const LinkBudget& link_budget() const noexcept { return budget_; }
  std::size_t num_cells() const noexcept { return layout_.num_cells(); }
  std::size_t num_ues() const noexcept { return layout_.num_ues(); }

  /// Antenna gain (dBi) of cell m towards UE n under `config`.
  double antenna_gain(const AntennaConfig& config, std::size_t m, std::size_t n) const;
  Eigen::MatrixXd antenna_gain_matrix(const AntennaConfig& config) const;

  /// tx_power + gain - path_loss - shadowing, M x N, dBm.
  Eigen::MatrixXd downlink_rsrp(const AntennaConfig& config) const;

  /// Uplink power of UE n received at every cell, M x N, dBm, with each UE
  /// transmitting at its power-controlled level towards its serving cell.
  Eigen::MatrixXd uplink_rx_power(const AntennaConfig& config) const;

  SinrReport evaluate(const AntennaConfig& config) const;

  double dl_noise_dbm() const { return noise_power_dbm(params_.bandwidth_hz, params_.ue_noise_figure_db); }
  double ul_noise_dbm() const { return noise_power_dbm(params_.bandwidth_hz, params_.bs_noise_figure_db); }

 private:
  void check_config(const AntennaConfig& config) const;

  NetworkLayout layout_;
  RadioParams params_;
  LinkBudget budget_;
};

/// argmax over column n of `rsrp`, lowest index on ties.
std::vector<int> associate(const Eigen::MatrixXd& rsrp);

}  // namespace ccopt
