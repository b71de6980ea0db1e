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

#include "ccopt/netgen.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "ccopt/error.hpp"
#include "ccopt/random.hpp"

namespace ccopt {

double distance(Point2 a, Point2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

std::string to_string(CellClass c) {
  return c == CellClass::kMacroSector ? "macro-sector" : "small-cell";
}

CellClass cell_class_from_string(const std::string& s) {
  if (s == "macro-sector") return CellClass::kMacroSector;
  if (s == "small-cell") return CellClass::kSmallCell;
  throw SchemaError("class", "unknown cell class '" + s + "'");
}

bool Region::contains(Point2 p) const {
  // Small slack for points generated exactly on the rim.
  return distance(p, center) <= radius_m * (1.0 + 1e-12) + 1e-9;
}

NetworkLayout::NetworkLayout(std::vector<CellSite> cells, std::vector<UserEquipment> ues,
                             std::uint64_t rng_seed, Region region)
    : cells_(std::move(cells)), ues_(std::move(ues)), rng_seed_(rng_seed), region_(region) {
  if (cells_.empty()) throw SchemaError("cells", "layout needs at least one cell");
  if (ues_.empty()) throw SchemaError("ues", "layout needs at least one UE");
  if (!(region_.radius_m > 0.0)) throw SchemaError("region.radius", "must be positive");

  for (std::size_t i = 0; i < cells_.size(); ++i) {
    const auto& c = cells_[i];
    const std::string where = "cells[" + std::to_string(i) + "]";
    if (c.id != static_cast<int>(i)) {
      throw SchemaError(where + ".id", "cell ids must be unique and dense 0..M-1 in order, got " +
                                           std::to_string(c.id));
    }
    if (!(c.height_m > 0.0)) throw SchemaError(where + ".height", "must be positive");
    if (!(c.azimuth_deg >= 0.0 && c.azimuth_deg < 360.0)) {
      throw SchemaError(where + ".azimuth", "must lie in [0, 360)");
    }
    if (!std::isfinite(c.tx_power_dbm)) throw SchemaError(where + ".tx_power", "must be finite");
  }
  for (std::size_t i = 0; i < ues_.size(); ++i) {
    const auto& u = ues_[i];
    const std::string where = "ues[" + std::to_string(i) + "]";
    if (u.id != static_cast<int>(i)) {
      throw SchemaError(where + ".id", "UE ids must be unique and dense 0..N-1 in order, got " +
                                           std::to_string(u.id));
    }
    if (!(u.height_m > 0.0)) throw SchemaError(where + ".height", "must be positive");
    if (!region_.contains(u.position)) throw SchemaError(where + ".position", "outside region");
  }
}

namespace {

int hex_rings_for(int n_sites) {
  int rings = 0;
  while (1 + 3 * rings * (rings + 1) < n_sites) ++rings;
  return rings;
}

Point2 uniform_in_disk(Rng& rng, const Region& region) {
  const double r = region.radius_m * std::sqrt(uniform01(rng));
  const double t = 2.0 * std::numbers::pi * uniform01(rng);
  return {region.center.x + r * std::cos(t), region.center.y + r * std::sin(t)};
}

}  // namespace

std::vector<Point2> hex_site_positions(int n_sites, double isd) {
  std::vector<Point2> out;
  if (n_sites <= 0) return out;
  out.reserve(static_cast<std::size_t>(n_sites));
  out.push_back({0.0, 0.0});
  for (int ring = 1; static_cast<int>(out.size()) < n_sites; ++ring) {
    auto corner = [&](int j) {
      const double a = (30.0 + 60.0 * (j % 6)) * std::numbers::pi / 180.0;
      return Point2{ring * isd * std::cos(a), ring * isd * std::sin(a)};
    };
    for (int j = 0; j < 6; ++j) {
      const Point2 a = corner(j);
      const Point2 b = corner(j + 1);
      for (int s = 0; s < ring; ++s) {
        if (static_cast<int>(out.size()) == n_sites) return out;
        const double t = static_cast<double>(s) / ring;
        out.push_back({a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)});
      }
    }
  }
  return out;
}

NetworkLayout generate_hex_layout(const HexLayoutParams& p) {
  if (p.n_macro_sites < 0 || p.n_small_cells < 0 || p.n_ues < 0) {
    throw ConfigError("layout counts must be non-negative");
  }
  if (!(p.inter_site_distance_m > 0.0)) throw ConfigError("inter_site_distance must be positive");
  if (!(p.min_small_macro_distance_m >= 0.0)) {
    throw ConfigError("min_small_macro_distance must be non-negative");
  }
  if (p.n_macro_sites + p.n_small_cells == 0) throw ConfigError("layout has no cells");
  if (p.n_ues == 0) throw ConfigError("layout has no UEs");

  const auto sites = hex_site_positions(p.n_macro_sites, p.inter_site_distance_m);
  Point2 centroid;
  for (const auto& s : sites) {
    centroid.x += s.x / static_cast<double>(sites.size());
    centroid.y += s.y / static_cast<double>(sites.size());
  }
  const int rings = std::max(1, hex_rings_for(p.n_macro_sites));
  const Region region{centroid, 1.5 * p.inter_site_distance_m * rings};

  std::vector<CellSite> cells;
  cells.reserve(sites.size() * 3 + static_cast<std::size_t>(p.n_small_cells));
  for (const auto& s : sites) {
    for (double az : {0.0, 120.0, 240.0}) {
      cells.push_back(CellSite{static_cast<int>(cells.size()), s, p.defaults.macro_height_m, az,
                               CellClass::kMacroSector, p.defaults.macro_tx_power_dbm});
    }
  }

  auto small_rng = make_rng(p.seed, Stream::kLayoutSmall);
  for (int k = 0; k < p.n_small_cells; ++k) {
    bool placed = false;
    for (int attempt = 0; attempt < kMaxPlacementAttempts; ++attempt) {
      const Point2 cand = uniform_in_disk(small_rng, region);
      bool ok = true;
      for (const auto& s : sites) {
        if (distance(cand, s) < p.min_small_macro_distance_m) {
          ok = false;
          break;
        }
      }
      if (ok) {
        cells.push_back(CellSite{static_cast<int>(cells.size()), cand, p.defaults.small_height_m,
                                 0.0, CellClass::kSmallCell, p.defaults.small_tx_power_dbm});
        placed = true;
        break;
      }
    }
    if (!placed) {
      throw PlacementInfeasible("could not place small cell " + std::to_string(k) + " after " +
                                std::to_string(kMaxPlacementAttempts) + " attempts");
    }
  }

  auto ue_rng = make_rng(p.seed, Stream::kLayoutUe);
  std::vector<UserEquipment> ues;
  ues.reserve(static_cast<std::size_t>(p.n_ues));
  for (int n = 0; n < p.n_ues; ++n) {
    ues.push_back(UserEquipment{n, uniform_in_disk(ue_rng, region), p.defaults.ue_height_m});
  }
  return NetworkLayout(std::move(cells), std::move(ues), p.seed, region);
}

}  // namespace ccopt
