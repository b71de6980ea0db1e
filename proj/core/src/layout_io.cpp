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

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ccopt/error.hpp"
#include "ccopt/netgen.hpp"

namespace ccopt {

namespace {

using nlohmann::json;

const json& require(const json& obj, const std::string& key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw SchemaError(where.empty() ? key : where + "." + key, "missing field");
  }
  return obj.at(key);
}

double number(const json& obj, const std::string& key, const std::string& where) {
  const auto& v = require(obj, key, where);
  if (!v.is_number()) throw SchemaError(where + "." + key, "expected a number");
  return v.get<double>();
}

double number_or(const json& obj, const std::string& key, const std::string& where,
                 double fallback) {
  return obj.contains(key) ? number(obj, key, where) : fallback;
}

int integer(const json& obj, const std::string& key, const std::string& where) {
  const auto& v = require(obj, key, where);
  if (!v.is_number_integer()) throw SchemaError(where + "." + key, "expected an integer");
  return v.get<int>();
}

}  // namespace

NetworkLayout layout_from_json_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("layout parse error: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("layout file must contain a JSON object");

  const auto& seed_v = require(doc, "rng_seed", "");
  if (!seed_v.is_number_unsigned() && !seed_v.is_number_integer()) {
    throw SchemaError("rng_seed", "expected a non-negative integer");
  }
  const auto seed = seed_v.get<std::uint64_t>();

  const auto& region_v = require(doc, "region", "");
  const auto& center = require(region_v, "center", "region");
  if (!center.is_array() || center.size() != 2) {
    throw SchemaError("region.center", "expected [x, y]");
  }
  const Region region{{center[0].get<double>(), center[1].get<double>()},
                      number(region_v, "radius", "region")};

  const auto& cells_v = require(doc, "cells", "");
  if (!cells_v.is_array()) throw SchemaError("cells", "expected an array");
  std::vector<CellSite> cells;
  for (std::size_t i = 0; i < cells_v.size(); ++i) {
    const auto& c = cells_v[i];
    const std::string where = "cells[" + std::to_string(i) + "]";
    const auto& cls_v = require(c, "class", where);
    if (!cls_v.is_string()) throw SchemaError(where + ".class", "expected a string");
    CellClass cls;
    try {
      cls = cell_class_from_string(cls_v.get<std::string>());
    } catch (const SchemaError& e) {
      throw SchemaError(where + ".class", e.what());
    }
    const SiteDefaults d;
    const bool macro = cls == CellClass::kMacroSector;
    cells.push_back(CellSite{
        integer(c, "id", where),
        {number(c, "x", where), number(c, "y", where)},
        number_or(c, "height", where, macro ? d.macro_height_m : d.small_height_m),
        number_or(c, "azimuth", where, 0.0),
        cls,
        number_or(c, "tx_power", where, macro ? d.macro_tx_power_dbm : d.small_tx_power_dbm)});
  }

  const auto& ues_v = require(doc, "ues", "");
  if (!ues_v.is_array()) throw SchemaError("ues", "expected an array");
  std::vector<UserEquipment> ues;
  for (std::size_t i = 0; i < ues_v.size(); ++i) {
    const auto& u = ues_v[i];
    const std::string where = "ues[" + std::to_string(i) + "]";
    ues.push_back(UserEquipment{integer(u, "id", where),
                                {number(u, "x", where), number(u, "y", where)},
                                number_or(u, "height", where, SiteDefaults{}.ue_height_m)});
  }
  return NetworkLayout(std::move(cells), std::move(ues), seed, region);
}

std::string layout_to_json_text(const NetworkLayout& layout) {
  json doc;
  doc["rng_seed"] = layout.rng_seed();
  doc["region"] = {{"center", {layout.region().center.x, layout.region().center.y}},
                   {"radius", layout.region().radius_m}};
  json cells = json::array();
  for (const auto& c : layout.cells()) {
    cells.push_back({{"id", c.id},
                     {"x", c.position.x},
                     {"y", c.position.y},
                     {"height", c.height_m},
                     {"azimuth", c.azimuth_deg},
                     {"class", to_string(c.cell_class)},
                     {"tx_power", c.tx_power_dbm}});
  }
  json ues = json::array();
  for (const auto& u : layout.ues()) {
    ues.push_back({{"id", u.id}, {"x", u.position.x}, {"y", u.position.y}, {"height", u.height_m}});
  }
  doc["cells"] = std::move(cells);
  doc["ues"] = std::move(ues);
  return doc.dump(2) + "\n";
}

NetworkLayout load_layout(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open layout file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return layout_from_json_text(ss.str());
}

void save_layout(const NetworkLayout& layout, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write layout file " + path.string());
  out << layout_to_json_text(layout);
}

}  // namespace ccopt
