// Copyright 2026 The qrepsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QREPSIM_REPORT_H_
#define QREPSIM_REPORT_H_

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "qrepsim/sim.h"

namespace qrepsim {

inline constexpr char kCsvHeader[] =
    "window,queries_issued,queries_succeeded,success_rate,total_replicas,"
    "mean_hops,up_nodes";

// Header line plus one line per row. Rates use fixed six decimals and the
// output does not depend on the process locale.
std::string FormatCsv(std::span<const MetricsRow> rows);

// Throws IoError when the file cannot be written.
void EmitCsv(std::span<const MetricsRow> rows,
             const std::filesystem::path& path);

// Companion gnuplot script plotting success rate and replica count.
std::string GnuplotScript(const std::string& csv_name);

// One simulate output: resolved config plus metrics.
struct RunRecord {
  std::filesystem::path dir;
  ExperimentConfig config;
  double final_success_rate = 0.0;
};

// Reads config.ini and metrics.csv from a run directory. Throws IoError.
RunRecord LoadRun(const std::filesystem::path& dir);

// Expands each argument to the run directories under it: the directory
// itself if it holds metrics.csv, else its immediate subdirectories that do.
std::vector<std::filesystem::path> ExpandRunDirs(
    std::span<const std::filesystem::path> dirs);

struct ComparisonRow {
  int ttl = 0;
  std::string strategy;
  std::size_t runs = 0;
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation; 0 for a single run
  bool winner = false;
};

// Groups runs by (ttl, strategy) and summarizes the final-window success
// rate. Requires at least two runs whose configs differ only in strategy,
// ttl and seed; throws ConfigError otherwise.
std::vector<ComparisonRow> CompareRuns(std::span<const RunRecord> runs);

std::string FormatComparison(std::span<const ComparisonRow> rows);

// CompareRuns over directories, writing the table to `report`.
std::vector<ComparisonRow> CompareRunDirs(
    std::span<const std::filesystem::path> dirs,
    const std::filesystem::path& report);

}  // namespace qrepsim

#endif  // QREPSIM_REPORT_H_
