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

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "ccopt/csv.hpp"

namespace ccopt {

/// First iteration whose best-so-far value closes 95% (by default) of the
/// gap between the first and the last trace value; nullopt for an empty
/// trace.
std::optional<long> iterations_to_fraction(const std::vector<double>& best_so_far,
                                           double fraction = 0.95);

struct SummaryRow {
  std::string algorithm;
  std::size_t runs = 0;
  double dl_median_db = 0.0;  // over the pooled UEs of all runs
  double dl_p10_db = 0.0;
  double ul_median_db = 0.0;
  double ul_p10_db = 0.0;
  double zeta_dl = 0.0;  // mean over runs
  double zeta_ul = 0.0;
  double r_dl = 0.0;
  double r_ul = 0.0;
  double f_total = 0.0;
  double iterations_to_95 = 0.0;  // mean over runs; NaN without traces
};

struct Summary {
  std::vector<SummaryRow> rows;  // in the manifest's algorithm order
  CsvTable dl_cdf;               // algorithm, sinr_db, cdf
  CsvTable ul_cdf;
  CsvTable histogram;  // algorithm, parameter, bin_low, bin_high, count

  CsvTable table() const;
};

inline constexpr int kHistogramBins = 10;

/// Recomputes every aggregate from run.json and the per-run files. Throws
/// Error listing every missing or unreadable file.
Summary summarize(const std::filesystem::path& dir);

/// Writes summary.csv, cdf_dl.csv, cdf_ul.csv and histogram.csv.
void write_summary(const Summary& summary, const std::filesystem::path& dir);

}  // namespace ccopt
