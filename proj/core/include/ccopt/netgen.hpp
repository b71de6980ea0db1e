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
#include <filesystem>
#include <string>
#include <vector>

namespace ccopt {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

double distance(Point2 a, Point2 b);

enum class CellClass { kMacroSector, kSmallCell };

std::string to_string(CellClass c);
CellClass cell_class_from_string(const std::string& s);

struct CellSite {
  int id = 0;
  Point2 position;
  double height_m = 25.0;
  double azimuth_deg = 0.0;  // [0, 360)
  CellClass cell_class = CellClass::kMacroSector;
  double tx_power_dbm = 43.0;

  friend bool operator==(const CellSite&, const CellSite&) = default;
};

struct UserEquipment {
  int id = 0;
  Point2 position;
  double height_m = 1.5;

  friend bool operator==(const UserEquipment&, const UserEquipment&) = default;
};

/// Disk-shaped deployment region.
struct Region {
  Point2 center;
  double radius_m = 0.0;

  bool contains(Point2 p) const;
  friend bool operator==(const Region&, const Region&) = default;
};

/// Immutable cell/UE geometry. Cell and UE ids are dense: cells()[i].id == i.
class NetworkLayout {
 public:
  NetworkLayout(std::vector<CellSite> cells, std::vector<UserEquipment> ues,
                std::uint64_t rng_seed, Region region);

  const std::vector<CellSite>& cells() const noexcept { return cells_; }
  const std::vector<UserEquipment>& ues() const noexcept { return ues_; }
  std::uint64_t rng_seed() const noexcept { return rng_seed_; }
  const Region& region() const noexcept { return region_; }

  std::size_t num_cells() const noexcept { return cells_.size(); }
  std::size_t num_ues() const noexcept { return ues_.size(); }

  friend bool operator==(const NetworkLayout&, const NetworkLayout&) = default;

 private:
  std::vector<CellSite> cells_;
  std::vector<UserEquipment> ues_;
  std::uint64_t rng_seed_;
  Region region_;
};

/// Defaults for the two cell classes.
struct SiteDefaults {
  double macro_height_m = 25.0;
  double small_height_m = 10.0;
  double macro_tx_power_dbm = 43.0;
  double small_tx_power_dbm = 30.0;
  double ue_height_m = 1.5;
};

struct HexLayoutParams {
  int n_macro_sites = 7;
  double inter_site_distance_m = 500.0;
  int n_small_cells = 11;
  int n_ues = 62;
  double min_small_macro_distance_m = 10.0;
  std::uint64_t seed = 1;
  SiteDefaults defaults;
};

/// Attempts per small cell before rejection sampling gives up.
inline constexpr int kMaxPlacementAttempts = 10000;

/// Macro sites on a hexagonal grid (spiral order from the centre), each
/// expanded into three sectors at 0/120/240 degrees, followed by small cells
/// drawn uniformly in the region at least `min_small_macro_distance_m` from
/// every macro site, followed by UEs drawn uniformly in the region.
///
/// The region is a disk centred on the macro-site centroid with radius
/// 1.5 * ISD * max(1, number of hex rings).
NetworkLayout generate_hex_layout(const HexLayoutParams& params);

/// Hex-grid site positions in spiral order; exposed for tests.
std::vector<Point2> hex_site_positions(int n_sites, double inter_site_distance_m);

NetworkLayout load_layout(const std::filesystem::path& path);
void save_layout(const NetworkLayout& layout, const std::filesystem::path& path);

NetworkLayout layout_from_json_text(const std::string& text);
std::string layout_to_json_text(const NetworkLayout& layout);

}  // namespace ccopt
