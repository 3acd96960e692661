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

#include "qrepsim/report.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "qrepsim/config.h"

namespace qrepsim {
namespace {

std::string Fixed6(double value) {
  char buf[64];
  auto result = std::to_chars(buf, buf + sizeof(buf), value,
                              std::chars_format::fixed, 6);
  return std::string(buf, result.ptr);
}

void WriteFile(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("failed writing " + path.string());
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

// success_rate of the last data line in a metrics CSV.
double FinalSuccessRate(const std::string& csv,
                        const std::filesystem::path& path) {
  std::istringstream in(csv);
  std::string line;
  std::string last;
  bool header = true;
  while (std::getline(in, line)) {
    if (header) {
      if (line != kCsvHeader) {
        throw IoError("unexpected CSV header in " + path.string());
      }
      header = false;
      continue;
    }
    if (!line.empty()) last = line;
  }
  if (last.empty()) throw IoError("no metrics rows in " + path.string());
  std::vector<std::string> fields;
  std::istringstream row(last);
  for (std::string field; std::getline(row, field, ',');) {
    fields.push_back(field);
  }
  if (fields.size() != 7) throw IoError("malformed row in " + path.string());
  double rate = 0.0;
  const std::string& f = fields[3];
  auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), rate);
  if (ec != std::errc() || ptr != f.data() + f.size()) {
    throw IoError("bad success_rate in " + path.string());
  }
  return rate;
}

}  // namespace

std::string FormatCsv(std::span<const MetricsRow> rows) {
  std::string out = kCsvHeader;
  out += '\n';
  for (const MetricsRow& r : rows) {
    out += std::to_string(r.window_index) + ',' +
           std::to_string(r.queries_issued) + ',' +
           std::to_string(r.queries_succeeded) + ',' +
           Fixed6(r.success_rate) + ',' + std::to_string(r.total_replicas) +
           ',' + Fixed6(r.mean_hops_on_success) + ',' +
           std::to_string(r.up_node_count) + '\n';
  }
  return out;
}

void EmitCsv(std::span<const MetricsRow> rows,
             const std::filesystem::path& path) {
  WriteFile(path, FormatCsv(rows));
}

std::string GnuplotScript(const std::string& csv_name) {
  return "set datafile separator ','\n"
         "set key autotitle columnhead\n"
         "set xlabel 'window'\n"
         "set ylabel 'success rate'\n"
         "set y2label 'replicas'\n"
         "set ytics nomirror\n"
         "set y2tics\n"
         "plot '" + csv_name + "' using 1:4 with linespoints axes x1y1, \\\n"
         "     '" + csv_name + "' using 1:5 with linespoints axes x1y2\n";
}

RunRecord LoadRun(const std::filesystem::path& dir) {
  RunRecord record;
  record.dir = dir;
  record.config = ParseConfigFile(dir / "config.ini");
  const auto csv_path = dir / "metrics.csv";
  record.final_success_rate = FinalSuccessRate(ReadFile(csv_path), csv_path);
  return record;
}

std::vector<std::filesystem::path> ExpandRunDirs(
    std::span<const std::filesystem::path> dirs) {
  namespace fs = std::filesystem;
  std::vector<fs::path> out;
  for (const fs::path& dir : dirs) {
    if (!fs::is_directory(dir)) {
      throw IoError("run directory not found: " + dir.string());
    }
    if (fs::exists(dir / "metrics.csv")) {
      out.push_back(dir);
      continue;
    }
    std::vector<fs::path> children;
    for (const auto& entry : fs::directory_iterator(dir)) {
      if (entry.is_directory() && fs::exists(entry.path() / "metrics.csv")) {
        children.push_back(entry.path());
      }
    }
    if (children.empty()) {
      throw IoError("no metrics.csv under " + dir.string());
    }
    std::sort(children.begin(), children.end());
    out.insert(out.end(), children.begin(), children.end());
  }
  return out;
}

std::vector<ComparisonRow> CompareRuns(std::span<const RunRecord> runs) {
  if (runs.size() < 2) {
    throw ConfigError("compare needs at least two runs, got " +
                      std::to_string(runs.size()));
  }
  auto comparable = [](const ExperimentConfig& c) {
    auto values = ConfigValues(c);
    values.erase("sim.strategy");
    values.erase("sim.ttl");
    values.erase("sim.seed");
    return values;
  };
  const auto reference = comparable(runs.front().config);
  for (const RunRecord& run : runs.subspan(1)) {
    auto values = comparable(run.config);
    std::string differing;
    for (const auto& [key, value] : reference) {
      if (values.at(key) != value) {
        differing += (differing.empty() ? "" : ", ") + key;
      }
    }
    if (!differing.empty()) {
      throw ConfigError("incompatible runs " + runs.front().dir.string() +
                        " and " + run.dir.string() + " differ in: " +
                        differing);
    }
  }

  std::map<std::pair<int, std::string>, std::vector<double>> groups;
  for (const RunRecord& run : runs) {
    groups[{run.config.sim.ttl, std::string(ToString(run.config.sim.strategy))}]
        .push_back(run.final_success_rate);
  }
  std::vector<ComparisonRow> rows;
  for (const auto& [key, rates] : groups) {
    ComparisonRow row;
    row.ttl = key.first;
    row.strategy = key.second;
    row.runs = rates.size();
    double sum = 0.0;
    for (double r : rates) sum += r;
    row.mean = sum / static_cast<double>(rates.size());
    if (rates.size() > 1) {
      double sq = 0.0;
      for (double r : rates) sq += (r - row.mean) * (r - row.mean);
      row.stddev = std::sqrt(sq / static_cast<double>(rates.size() - 1));
    }
    rows.push_back(row);
  }
  // Winner: highest mean per ttl; the first strategy name wins ties.
  for (std::size_t i = 0; i < rows.size();) {
    std::size_t j = i;
    std::size_t best = i;
    while (j < rows.size() && rows[j].ttl == rows[i].ttl) {
      if (rows[j].mean > rows[best].mean) best = j;
      ++j;
    }
    rows[best].winner = true;
    i = j;
  }
  return rows;
}

std::string FormatComparison(std::span<const ComparisonRow> rows) {
  std::string out = "ttl,strategy,runs,mean_success_rate,stddev,winner\n";
  for (const ComparisonRow& r : rows) {
    out += std::to_string(r.ttl) + ',' + r.strategy + ',' +
           std::to_string(r.runs) + ',' + Fixed6(r.mean) + ',' +
           Fixed6(r.stddev) + ',' + (r.winner ? "*" : "") + '\n';
  }
  return out;
}

std::vector<ComparisonRow> CompareRunDirs(
    std::span<const std::filesystem::path> dirs,
    const std::filesystem::path& report) {
  std::vector<RunRecord> runs;
  for (const auto& dir : ExpandRunDirs(dirs)) runs.push_back(LoadRun(dir));
  auto rows = CompareRuns(runs);
  WriteFile(report, FormatComparison(rows));
  return rows;
}

}  // namespace qrepsim
