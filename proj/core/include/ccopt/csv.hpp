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
#include <string>
#include <vector>

#include "ccopt/optimizer.hpp"

namespace ccopt {

/// Shortest "%.9g" rendering; "nan", "inf" and "-inf" for non-finite values.
std::string format_double(double v);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Index of a header column; throws SchemaError when absent.
  std::size_t column(const std::string& name) const;
};

/// Writes a comma-separated table with a header row and '\n' line endings.
/// Fields must not contain commas or newlines.
void write_csv(const std::filesystem::path& path, const CsvTable& table);
CsvTable read_csv(const std::filesystem::path& path);

/// Iteration trace columns. With `cumulative` the table gains the
/// cumulative_model_ms column; without `timing` both time columns hold 0.
CsvTable trace_table(const std::vector<IterationRecord>& trace, bool cumulative, bool timing);

/// Per-UE serving cell, DL/UL SINR and UL transmit power.
CsvTable sinr_table(const SinrReport& report);
SinrReport sinr_from_table(const CsvTable& table);

/// Per-cell downtilt and beamwidths.
CsvTable config_table(const AntennaConfig& config);
AntennaConfig config_from_table(const CsvTable& table);

}  // namespace ccopt
