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

// Command-line front end: `simulate` runs experiments, `compare` summarizes
// several run directories.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qrepsim/config.h"
#include "qrepsim/report.h"
#include "qrepsim/sim.h"

namespace fs = std::filesystem;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

struct SimulateArgs {
  std::string config;
  std::optional<std::string> strategy;
  std::optional<int> ttl;
  std::optional<int> walkers;
  std::optional<std::size_t> nodes;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> settings;
  int repeat = 1;
  std::uint64_t seed_stride = 1;
  int jobs = 1;
  std::string out = "out";
  bool gnuplot = false;
};

struct CompareArgs {
  std::vector<std::string> runs;
  std::string out = "comparison.csv";
};

void WriteText(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out || !(out << text)) {
    throw qrepsim::IoError("cannot write " + path.string());
  }
}

struct RunJob {
  qrepsim::ExperimentConfig config;
  fs::path dir;
};

std::string ExecuteRun(const RunJob& job, bool gnuplot) {
  auto rows = qrepsim::RunSimulation(job.config);
  qrepsim::EmitCsv(rows, job.dir / "metrics.csv");
  WriteText(job.dir / "config.ini", qrepsim::ToIni(job.config));
  if (gnuplot) {
    WriteText(job.dir / "plot.gp", qrepsim::GnuplotScript("metrics.csv"));
  }
  const auto& last = rows.back();
  return job.dir.string() + ": windows=" + std::to_string(rows.size()) +
         " final_success_rate=" + std::to_string(last.success_rate) +
         " total_replicas=" + std::to_string(last.total_replicas);
}

int Simulate(const SimulateArgs& args) {
  if (args.repeat < 1) throw qrepsim::ConfigError("--repeat must be >= 1");
  if (args.jobs < 1) throw qrepsim::ConfigError("--jobs must be >= 1");
  qrepsim::ConfigOverrides overrides;
  for (const std::string& setting : args.settings) {
    auto eq = setting.find('=');
    if (eq == std::string::npos) {
      throw qrepsim::ConfigError("--set expects section.key=value, got '" +
                                 setting + "'");
    }
    overrides[setting.substr(0, eq)] = setting.substr(eq + 1);
  }
  if (args.strategy) overrides["sim.strategy"] = *args.strategy;
  if (args.ttl) overrides["sim.ttl"] = std::to_string(*args.ttl);
  if (args.walkers) overrides["sim.walkers_k"] = std::to_string(*args.walkers);
  if (args.nodes) overrides["sim.node_count"] = std::to_string(*args.nodes);
  if (args.seed) overrides["sim.seed"] = std::to_string(*args.seed);
  const auto base = qrepsim::ParseConfigFile(args.config, overrides);

  std::vector<RunJob> jobs;
  for (int i = 0; i < args.repeat; ++i) {
    RunJob job{base, fs::path(args.out)};
    job.config.sim.seed = base.sim.seed + args.seed_stride *
                                              static_cast<std::uint64_t>(i);
    if (args.repeat > 1) {
      job.dir /= "seed_" + std::to_string(job.config.sim.seed);
    }
    std::error_code ec;
    fs::create_directories(job.dir, ec);
    if (ec) {
      throw qrepsim::IoError("cannot create " + job.dir.string() + ": " +
                             ec.message());
    }
    jobs.push_back(std::move(job));
  }

  // Runs share nothing, so they may execute concurrently; output order
  // follows the seed order regardless.
  for (std::size_t begin = 0; begin < jobs.size();
       begin += static_cast<std::size_t>(args.jobs)) {
    std::vector<std::future<std::string>> batch;
    for (std::size_t i = begin;
         i < jobs.size() && i < begin + static_cast<std::size_t>(args.jobs);
         ++i) {
      batch.push_back(std::async(std::launch::async, ExecuteRun,
                                 std::cref(jobs[i]), args.gnuplot));
    }
    for (auto& f : batch) std::cout << f.get() << '\n';
  }
  return 0;
}

int Compare(const CompareArgs& args) {
  std::vector<fs::path> dirs(args.runs.begin(), args.runs.end());
  auto rows = qrepsim::CompareRunDirs(dirs, args.out);
  std::cout << qrepsim::FormatComparison(rows);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete-event simulator for replication in unstructured "
               "P2P overlays"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Run one or more simulations");
  simulate->add_option("--config", sim.config, "INI config file")->required();
  simulate->add_option("--strategy", sim.strategy,
                       "none, owner, path, random or qrep");
  simulate->add_option("--ttl", sim.ttl, "Query hop budget");
  simulate->add_option("--walkers", sim.walkers, "Random walkers per query");
  simulate->add_option("--nodes", sim.nodes, "Overlay size");
  simulate->add_option("--seed", sim.seed, "Base seed");
  simulate->add_option("--set", sim.settings,
                       "Override any config key, as section.key=value");
  simulate->add_option("--repeat", sim.repeat, "Number of seeds to run");
  simulate->add_option("--seed-stride", sim.seed_stride,
                       "Seed increment between repeats");
  simulate->add_option("--jobs", sim.jobs, "Runs to execute concurrently");
  simulate->add_option("--out", sim.out, "Output directory");
  simulate->add_flag("--gnuplot", sim.gnuplot,
                     "Also write a gnuplot script next to each CSV");

  CompareArgs cmp;
  auto* compare = app.add_subcommand("compare", "Summarize run directories");
  compare->add_option("--runs", cmp.runs, "Run directories")->required();
  compare->add_option("--out", cmp.out, "Report file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*simulate) return Simulate(sim);
    return Compare(cmp);
  } catch (const qrepsim::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const qrepsim::IoError& e) {
    std::cerr << "I/O error: " << e.what() << '\n';
    return kExitIo;
  } catch (const qrepsim::PlacementError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
}
