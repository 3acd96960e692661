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

#include "qrepsim/config.h"

#include <filesystem>
#include <fstream>

#include "doctest.h"

namespace qrepsim {
namespace {

TEST_CASE("empty text yields the defaults") {
  ExperimentConfig config = ParseConfigText("");
  CHECK(config.sim.ttl == 6);
  CHECK(config.sim.walkers_k == 6);
  CHECK(config.sim.queries_per_node == 100);
  CHECK(config.sim.mean_query_interval_s == 20.0);
  CHECK(config.sim.churn_every_queries == 50000);
  CHECK(config.sim.strategy == StrategyKind::kQRep);
  CHECK(config.qrep.p_th == 5.0);
  CHECK(config.qrep.update_every == 50);
  CHECK(ToIni(config) == ToIni(ExperimentConfig{}));
}

TEST_CASE("values, comments and whitespace") {
  ExperimentConfig config = ParseConfigText(
      "# experiment\n"
      "[sim]\n"
      "  ttl = 3 \n"
      "strategy=path\n"
      "query_popularity = zipf(1.2)\n"
      "; another comment\n"
      "\n"
      "[topology]\n"
      "bandwidth_classes = 10, 20, 30\n"
      "bandwidth_weights = 0.5,0.25,0.25\n"
      "repair_components = false\n"
      "[qrep]\n"
      "eta = 0.25\n"
      "requester_copy = true\n");
  CHECK(config.sim.ttl == 3);
  CHECK(config.sim.strategy == StrategyKind::kPath);
  CHECK(config.sim.query_popularity == QueryPopularity::kZipf);
  CHECK(config.sim.zipf_theta == 1.2);
  CHECK(config.topology.attributes.bandwidth_classes ==
        std::vector<double>{10, 20, 30});
  CHECK(config.topology.attributes.bandwidth_weights ==
        std::vector<double>{0.5, 0.25, 0.25});
  CHECK_FALSE(config.topology.graph.repair_components);
  CHECK(config.qrep.eta == 0.25);
  CHECK(config.qrep.requester_copy);
}

TEST_CASE("overrides beat file values") {
  ExperimentConfig config =
      ParseConfigText("[sim]\nttl = 8\n", {{"sim.ttl", "4"}});
  CHECK(config.sim.ttl == 4);
  CHECK_THROWS_AS(ParseConfigText("", {{"ttl", "4"}}), ConfigError);
  CHECK_THROWS_AS(ParseConfigText("", {{"sim.bogus", "4"}}), ConfigError);
}

TEST_CASE("weights must sum to one with w2 strictly smallest") {
  CHECK_THROWS_AS(ParseConfigText("[qrep]\nw1=0.5\nw2=0.5\nw3=0.0\n"),
                  ConfigError);
  CHECK_THROWS_AS(ParseConfigText("[qrep]\nw1=0.3\nw2=0.3\nw3=0.4\n"),
                  ConfigError);
  CHECK_THROWS_AS(ParseConfigText("[qrep]\nw1=0.5\nw2=0.2\nw3=0.4\n"),
                  ConfigError);
  CHECK_NOTHROW(ParseConfigText("[qrep]\nw1=0.45\nw2=0.1\nw3=0.45\n"));
}

TEST_CASE("unknown keys list the valid ones") {
  try {
    ParseConfigText("[sim]\nttll = 3\n");
    FAIL("expected a ConfigError");
  } catch (const ConfigError& e) {
    const std::string message = e.what();
    CHECK(message.find("ttll") != std::string::npos);
    CHECK(message.find("walkers_k") != std::string::npos);
  }
  CHECK_THROWS_AS(ParseConfigText("[network]\nx = 1\n"), ConfigError);
  CHECK_THROWS_AS(ParseConfigText("ttl = 3\n"), ConfigError);
  CHECK_THROWS_AS(ParseConfigText("[sim\n"), ConfigError);
  CHECK_THROWS_AS(ParseConfigText("[sim]\nttl\n"), ConfigError);
}

TEST_CASE("malformed and out-of-range values are rejected") {
  CHECK_THROWS_AS(ParseConfigText("[sim]\nttl = three\n"), ConfigError);
  CHECK_THROWS_AS(ParseConfigText("[sim]\nttl = 3.5\n"), ConfigError);
  CHECK_THROWS_AS(ParseConfigText("[sim]\nttl = 0\n"), ConfigError);
  CHECK_THROWS_AS(ParseConfigText("[sim]\nnode_count = -5\n"), ConfigError);
  CHECK_THROWS_AS(ParseConfigText("[sim]\ninitial_up_fraction = 1.5\n"),
                  ConfigError);
  CHECK_THROWS_AS(ParseConfigText("[sim]\nstrategy = flood\n"), ConfigError);
  CHECK_THROWS_AS(ParseConfigText("[sim]\nquery_popularity = pareto\n"),
                  ConfigError);
  CHECK_THROWS_AS(ParseConfigText("[qrep]\neta = 1\n"), ConfigError);
  CHECK_THROWS_AS(ParseConfigText("[qrep]\nreward_floor = maybe\n"),
                  ConfigError);
  CHECK_THROWS_AS(ParseConfigText("[topology]\nstorage_min = 0\n"),
                  ConfigError);
  CHECK_THROWS_AS(ParseConfigText("[topology]\nbandwidth_classes = 1,x\n"),
                  ConfigError);
  CHECK_THROWS_AS(ParseConfigText("[topology]\nedge_probability = 2\n"),
                  ConfigError);
}

TEST_CASE("canonical dump round-trips") {
  ExperimentConfig config;
  config.sim.ttl = 2;
  config.sim.seed = 123456789012345ULL;
  config.sim.query_popularity = QueryPopularity::kZipf;
  config.sim.zipf_theta = 0.95;
  config.qrep.alpha = 0.1234567890123;
  config.qrep.delta = 37.5;
  config.topology.attributes.bandwidth_classes = {1.5, 3.25};
  const std::string ini = ToIni(config);
  ExperimentConfig parsed = ParseConfigText(ini);
  CHECK(ToIni(parsed) == ini);
  CHECK(ConfigValues(parsed) == ConfigValues(config));
  CHECK(parsed.qrep.alpha == config.qrep.alpha);
}

TEST_CASE("every documented key is accepted") {
  for (const char* section : {"sim", "topology", "qrep"}) {
    auto keys = ValidKeys(section);
    CHECK_FALSE(keys.empty());
    auto values = ConfigValues(ExperimentConfig{});
    for (const std::string& key : keys) {
      CAPTURE(key);
      const std::string dotted = std::string(section) + "." + key;
      REQUIRE(values.contains(dotted));
      CHECK_NOTHROW(ParseConfigText("", {{dotted, values.at(dotted)}}));
    }
  }
  for (const char* key :
       {"eta", "alpha", "w1", "w2", "w3", "b_min", "s_min", "d_min", "p_th",
        "delta", "update_every", "hello_ttl", "hello_walkers",
        "reservation_timeout", "reward_floor", "rereplicate_on_threshold"}) {
    auto keys = ValidKeys("qrep");
    CHECK(std::find(keys.begin(), keys.end(), key) != keys.end());
  }
}

TEST_CASE("config files are read from disk") {
  const auto dir = std::filesystem::temp_directory_path() / "qrepsim_config_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "run.ini";
  {
    std::ofstream out(path);
    out << "[sim]\nwalkers_k = 2\n";
  }
  CHECK(ParseConfigFile(path).sim.walkers_k == 2);
  CHECK(ParseConfigFile(path, {{"sim.walkers_k", "3"}}).sim.walkers_k == 3);
  CHECK_THROWS_AS(ParseConfigFile(dir / "missing.ini"), IoError);
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace qrepsim
