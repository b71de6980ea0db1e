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

#include "ccopt/summary.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include <json.hpp>

#include "ccopt/error.hpp"
#include "ccopt/metrics.hpp"

namespace ccopt {

namespace fs = std::filesystem;
using json = nlohmann::json;

std::optional<long> iterations_to_fraction(const std::vector<double>& best_so_far,
                                           double fraction) {
  if (best_so_far.empty()) return std::nullopt;
  const double first = best_so_far.front();
  const double target = first + fraction * (best_so_far.back() - first);
  for (std::size_t i = 0; i < best_so_far.size(); ++i) {
    if (best_so_far[i] >= target) return static_cast<long>(i + 1);
  }
  return static_cast<long>(best_so_far.size());
}

CsvTable Summary::table() const {
  CsvTable t;
  t.header = {"algorithm", "runs",    "dl_median_sinr_db", "dl_p10_sinr_db", "ul_median_sinr_db",
              "ul_p10_sinr_db", "zeta_dl", "zeta_ul", "r_dl", "r_ul", "F", "iters_to_95pct"};
  for (const auto& r : rows) {
    t.rows.push_back({r.algorithm, std::to_string(r.runs), format_double(r.dl_median_db),
                      format_double(r.dl_p10_db), format_double(r.ul_median_db),
                      format_double(r.ul_p10_db), format_double(r.zeta_dl),
                      format_double(r.zeta_ul), format_double(r.r_dl), format_double(r.r_ul),
                      format_double(r.f_total), format_double(r.iterations_to_95)});
  }
  return t;
}

namespace {

CsvTable cdf_rows(const std::string& algorithm, std::vector<double> values, CsvTable t) {
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    t.rows.push_back({algorithm, format_double(values[i]),
                      format_double(static_cast<double>(i + 1) / n)});
  }
  return t;
}

void histogram_rows(const std::string& algorithm, const std::string& name, const ParamBounds& b,
                    const std::vector<double>& values, CsvTable& t) {
  std::vector<std::size_t> counts(kHistogramBins, 0);
  for (double v : values) {
    auto k = static_cast<long>(std::floor((v - b.low) / b.width() * kHistogramBins));
    k = std::clamp<long>(k, 0, kHistogramBins - 1);
    ++counts[static_cast<std::size_t>(k)];
  }
  for (int k = 0; k < kHistogramBins; ++k) {
    const double lo = b.low + b.width() * k / kHistogramBins;
    const double hi = b.low + b.width() * (k + 1) / kHistogramBins;
    t.rows.push_back({algorithm, name, format_double(lo), format_double(hi),
                      std::to_string(counts[static_cast<std::size_t>(k)])});
  }
}

ParamBounds bounds_from(const json& j) {
  return {j.at(0).get<double>(), j.at(1).get<double>()};
}

struct Accumulator {
  std::size_t runs = 0;
  std::vector<double> dl, ul, tilt, vbw, hbw;
  double zeta_dl = 0, zeta_ul = 0, r_dl = 0, r_ul = 0, f = 0, iters = 0;
  std::size_t traced = 0;
};

}  // namespace

Summary summarize(const fs::path& dir) {
  const fs::path manifest_path = dir / "run.json";
  std::ifstream in(manifest_path, std::ios::binary);
  if (!in) throw Error("missing run files in " + dir.string() + ": run.json");
  json manifest;
  try {
    manifest = json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError("run.json: " + std::string(e.what()));
  }

  std::vector<std::string> missing;
  for (const auto& r : manifest.at("runs")) {
    for (const char* key : {"sinr", "config", "trace"}) {
      if (r.contains(key) && r[key].is_string() && !fs::exists(dir / r[key].get<std::string>())) {
        missing.push_back(r[key].get<std::string>());
      }
    }
  }
  if (!missing.empty()) {
    std::string list;
    for (const auto& f : missing) list += (list.empty() ? "" : ", ") + f;
    throw Error("missing run files in " + dir.string() + ": " + list);
  }
  if (manifest.at("runs").empty()) throw Error("no completed runs in " + dir.string());

  const auto& obj = manifest.at("objective");
  ObjectiveSpec spec;
  spec.alpha = obj.at("alpha").get<double>();
  spec.beta_dl = obj.at("beta_dl").get<double>();
  spec.beta_ul = obj.at("beta_ul").get<double>();
  spec.bounds.downtilt = bounds_from(obj.at("bounds").at("downtilt"));
  spec.bounds.vertical_hpbw = bounds_from(obj.at("bounds").at("vertical_hpbw"));
  spec.bounds.horizontal_hpbw = bounds_from(obj.at("bounds").at("horizontal_hpbw"));

  std::map<std::string, Accumulator> acc;
  for (const auto& r : manifest.at("runs")) {
    auto& a = acc[r.at("algorithm").get<std::string>()];
    spec.threshold_db = r.at("threshold_db").get<double>();
    const SinrReport report = sinr_from_table(read_csv(dir / r.at("sinr").get<std::string>()));
    const ObjectiveValue v = objective(report, spec);
    ++a.runs;
    a.dl.insert(a.dl.end(), report.dl_sinr_db.begin(), report.dl_sinr_db.end());
    a.ul.insert(a.ul.end(), report.ul_sinr_db.begin(), report.ul_sinr_db.end());
    a.zeta_dl += v.zeta_dl;
    a.zeta_ul += v.zeta_ul;
    a.r_dl += v.r_dl;
    a.r_ul += v.r_ul;
    a.f += v.f_total;

    const AntennaConfig c = config_from_table(read_csv(dir / r.at("config").get<std::string>()));
    for (std::size_t m = 0; m < c.num_cells(); ++m) {
      a.tilt.push_back(c.downtilt(m));
      a.vbw.push_back(c.vertical_hpbw(m));
      a.hbw.push_back(c.horizontal_hpbw(m));
    }

    if (r.contains("trace") && r["trace"].is_string()) {
      const CsvTable t = read_csv(dir / r["trace"].get<std::string>());
      const auto col = t.column("best_F_so_far");
      std::vector<double> best;
      for (const auto& row : t.rows) best.push_back(std::stod(row[col]));
      if (const auto k = iterations_to_fraction(best)) {
        a.iters += static_cast<double>(*k);
        ++a.traced;
      }
    }
  }

  Summary s;
  s.dl_cdf.header = {"algorithm", "sinr_db", "cdf"};
  s.ul_cdf.header = s.dl_cdf.header;
  s.histogram.header = {"algorithm", "parameter", "bin_low", "bin_high", "count"};
  for (const auto& name : manifest.at("algorithms")) {
    const auto alg = name.get<std::string>();
    const auto it = acc.find(alg);
    if (it == acc.end()) continue;
    const auto& a = it->second;
    const double n = static_cast<double>(a.runs);
    SummaryRow row;
    row.algorithm = alg;
    row.runs = a.runs;
    row.dl_median_db = quantile(a.dl, 0.5);
    row.dl_p10_db = quantile(a.dl, 0.1);
    row.ul_median_db = quantile(a.ul, 0.5);
    row.ul_p10_db = quantile(a.ul, 0.1);
    row.zeta_dl = a.zeta_dl / n;
    row.zeta_ul = a.zeta_ul / n;
    row.r_dl = a.r_dl / n;
    row.r_ul = a.r_ul / n;
    row.f_total = a.f / n;
    row.iterations_to_95 = a.traced ? a.iters / static_cast<double>(a.traced)
                                    : std::numeric_limits<double>::quiet_NaN();
    s.rows.push_back(row);
    s.dl_cdf = cdf_rows(alg, a.dl, std::move(s.dl_cdf));
    s.ul_cdf = cdf_rows(alg, a.ul, std::move(s.ul_cdf));
    histogram_rows(alg, "downtilt_deg", spec.bounds.downtilt, a.tilt, s.histogram);
    histogram_rows(alg, "vertical_hpbw_deg", spec.bounds.vertical_hpbw, a.vbw, s.histogram);
    histogram_rows(alg, "horizontal_hpbw_deg", spec.bounds.horizontal_hpbw, a.hbw, s.histogram);
  }
  return s;
}

void write_summary(const Summary& summary, const fs::path& dir) {
  write_csv(dir / "summary.csv", summary.table());
  write_csv(dir / "cdf_dl.csv", summary.dl_cdf);
  write_csv(dir / "cdf_ul.csv", summary.ul_cdf);
  write_csv(dir / "histogram.csv", summary.histogram);
}

}  // namespace ccopt
