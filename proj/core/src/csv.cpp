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

#include "ccopt/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ccopt/error.hpp"

namespace ccopt {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

namespace {

double parse_double(const std::string& s) {
  if (s == "nan") return std::nan("");
  if (s == "inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ParseError("not a number: '" + s + "'");
  }
  if (used != s.size()) throw ParseError("not a number: '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

}  // namespace

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw SchemaError(name, "missing CSV column '" + name + "'");
}

void write_csv(const std::filesystem::path& path, const CsvTable& table) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  auto line = [&](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out << ',';
      out << fields[i];
    }
    out << '\n';
  };
  line(table.header);
  for (const auto& r : table.rows) {
    if (r.size() != table.header.size()) throw Error("CSV row width mismatch in " + path.string());
    line(r);
  }
  if (!out) throw Error("write failed for " + path.string());
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  CsvTable t;
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path.string() + ": empty file, header expected");
  t.header = split(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto fields = split(line);
    if (fields.size() != t.header.size()) {
      throw ParseError(path.string() + ": row width does not match header");
    }
    t.rows.push_back(std::move(fields));
  }
  return t;
}

CsvTable trace_table(const std::vector<IterationRecord>& trace, bool cumulative, bool timing) {
  CsvTable t;
  t.header = {"iter",  "predicted_best_F", "true_F_u_best", "best_F_so_far", "zeta_dl",
              "zeta_ul", "r_dl",           "r_ul",          "surrogate_ms",  "replaced"};
  if (cumulative) t.header.emplace_back("cumulative_model_ms");
  for (const auto& r : trace) {
    std::vector<std::string> row = {std::to_string(r.iter),
                                    format_double(r.predicted_best_f),
                                    format_double(r.true_f),
                                    format_double(r.best_f_so_far),
                                    format_double(r.best_value.zeta_dl),
                                    format_double(r.best_value.zeta_ul),
                                    format_double(r.best_value.r_dl),
                                    format_double(r.best_value.r_ul),
                                    format_double(timing ? r.surrogate_ms : 0.0),
                                    r.replaced ? "1" : "0"};
    if (cumulative) row.push_back(format_double(timing ? r.cumulative_model_ms : 0.0));
    t.rows.push_back(std::move(row));
  }
  return t;
}

CsvTable sinr_table(const SinrReport& report) {
  CsvTable t;
  t.header = {"ue", "serving_cell", "dl_sinr_db", "ul_sinr_db", "ul_tx_power_dbm"};
  for (std::size_t n = 0; n < report.num_ues(); ++n) {
    t.rows.push_back({std::to_string(n), std::to_string(report.serving_cell[n]),
                      format_double(report.dl_sinr_db[n]), format_double(report.ul_sinr_db[n]),
                      format_double(report.ul_tx_power_dbm[n])});
  }
  return t;
}

SinrReport sinr_from_table(const CsvTable& table) {
  const auto cs = table.column("serving_cell");
  const auto cd = table.column("dl_sinr_db");
  const auto cu = table.column("ul_sinr_db");
  const auto cp = table.column("ul_tx_power_dbm");
  SinrReport r;
  for (const auto& row : table.rows) {
    r.serving_cell.push_back(static_cast<int>(parse_double(row[cs])));
    r.dl_sinr_db.push_back(parse_double(row[cd]));
    r.ul_sinr_db.push_back(parse_double(row[cu]));
    r.ul_tx_power_dbm.push_back(parse_double(row[cp]));
  }
  return r;
}

CsvTable config_table(const AntennaConfig& config) {
  CsvTable t;
  t.header = {"cell", "downtilt_deg", "vertical_hpbw_deg", "horizontal_hpbw_deg"};
  for (std::size_t m = 0; m < config.num_cells(); ++m) {
    t.rows.push_back({std::to_string(m), format_double(config.downtilt(m)),
                      format_double(config.vertical_hpbw(m)),
                      format_double(config.horizontal_hpbw(m))});
  }
  return t;
}

AntennaConfig config_from_table(const CsvTable& table) {
  const auto ct = table.column("downtilt_deg");
  const auto cv = table.column("vertical_hpbw_deg");
  const auto ch = table.column("horizontal_hpbw_deg");
  const auto m = table.rows.size();
  Eigen::VectorXd flat(static_cast<Eigen::Index>(3 * m));
  for (std::size_t i = 0; i < m; ++i) {
    flat[static_cast<Eigen::Index>(i)] = parse_double(table.rows[i][ct]);
    flat[static_cast<Eigen::Index>(m + i)] = parse_double(table.rows[i][cv]);
    flat[static_cast<Eigen::Index>(2 * m + i)] = parse_double(table.rows[i][ch]);
  }
  return AntennaConfig(std::move(flat));
}

}  // namespace ccopt
