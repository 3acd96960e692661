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

#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>
#include <type_traits>

namespace qrepsim {
namespace {

struct KeySpec {
  std::string section;
  std::string name;
  std::function<void(ExperimentConfig&, std::string_view)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

std::string_view Trim(std::string_view s) {
  const char* ws = " \t\r\n";
  auto begin = s.find_first_not_of(ws);
  if (begin == std::string_view::npos) return {};
  auto end = s.find_last_not_of(ws);
  return s.substr(begin, end - begin + 1);
}

[[noreturn]] void BadValue(const std::string& key, std::string_view value,
                           const char* expected) {
  throw ConfigError("invalid value '" + std::string(value) + "' for " + key +
                    " (expected " + expected + ")");
}

template <typename T>
T ParseNumber(const std::string& key, std::string_view text) {
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(),
                                   value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    if constexpr (std::is_floating_point_v<T>) {
      BadValue(key, text, "a number");
    } else {
      BadValue(key, text, "an integer");
    }
  }
  return value;
}

bool ParseBool(const std::string& key, std::string_view text) {
  if (text == "true" || text == "1" || text == "yes" || text == "on") {
    return true;
  }
  if (text == "false" || text == "0" || text == "no" || text == "off") {
    return false;
  }
  BadValue(key, text, "true or false");
}

std::string FormatNumber(double value) {
  char buf[64];
  auto result = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, result.ptr);
}

template <typename T>
std::string Format(const T& value) {
  if constexpr (std::is_same_v<T, bool>) {
    return value ? "true" : "false";
  } else if constexpr (std::is_floating_point_v<T>) {
    return FormatNumber(value);
  } else {
    return std::to_string(value);
  }
}

std::vector<double> ParseList(const std::string& key, std::string_view text) {
  std::vector<double> out;
  while (!text.empty()) {
    auto comma = text.find(',');
    out.push_back(ParseNumber<double>(key, Trim(text.substr(0, comma))));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  if (out.empty()) BadValue(key, text, "a comma-separated list");
  return out;
}

std::string FormatList(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ',';
    out += FormatNumber(values[i]);
  }
  return out;
}

// Scalar key bound to a field through `access`, a generic lambda returning a
// reference to that field for both const and mutable configs.
template <typename Access>
KeySpec Scalar(std::string section, std::string name, Access access) {
  std::string full = section + "." + name;
  return {std::move(section), name,
          [access, full](ExperimentConfig& c, std::string_view v) {
            auto& field = access(c);
            using T = std::remove_reference_t<decltype(field)>;
            if constexpr (std::is_same_v<T, bool>) {
              field = ParseBool(full, v);
            } else {
              field = ParseNumber<T>(full, v);
            }
          },
          [access](const ExperimentConfig& c) {
            return Format(access(c));
          }};
}

#define QREPSIM_FIELD(expr) [](auto& c) -> auto& { return c.expr; }

const std::vector<KeySpec>& Keys() {
  static const std::vector<KeySpec> keys = [] {
    std::vector<KeySpec> k;
    k.push_back(Scalar("sim", "node_count", QREPSIM_FIELD(sim.node_count)));
    k.push_back(Scalar("sim", "queries_per_node",
                       QREPSIM_FIELD(sim.queries_per_node)));
    k.push_back(Scalar("sim", "mean_query_interval_s",
                       QREPSIM_FIELD(sim.mean_query_interval_s)));
    k.push_back(
        Scalar("sim", "start_spread_s", QREPSIM_FIELD(sim.start_spread_s)));
    k.push_back(Scalar("sim", "initial_up_fraction",
                       QREPSIM_FIELD(sim.initial_up_fraction)));
    k.push_back(Scalar("sim", "churn_every_queries",
                       QREPSIM_FIELD(sim.churn_every_queries)));
    k.push_back(Scalar("sim", "churn_flip_fraction",
                       QREPSIM_FIELD(sim.churn_flip_fraction)));
    k.push_back(Scalar("sim", "ttl", QREPSIM_FIELD(sim.ttl)));
    k.push_back(Scalar("sim", "walkers_k", QREPSIM_FIELD(sim.walkers_k)));
    k.push_back({"sim", "strategy",
                 [](ExperimentConfig& c, std::string_view v) {
                   c.sim.strategy = ParseStrategyKind(v);
                 },
                 [](const ExperimentConfig& c) {
                   return std::string(ToString(c.sim.strategy));
                 }});
    k.push_back(Scalar("sim", "object_count", QREPSIM_FIELD(sim.object_count)));
    k.push_back(Scalar("sim", "object_size", QREPSIM_FIELD(sim.object_size)));
    k.push_back(
        {"sim", "query_popularity",
         [](ExperimentConfig& c, std::string_view v) {
           if (v == "uniform") {
             c.sim.query_popularity = QueryPopularity::kUniform;
           } else if (v == "zipf") {
             c.sim.query_popularity = QueryPopularity::kZipf;
           } else if (v.starts_with("zipf(") && v.ends_with(")")) {
             c.sim.query_popularity = QueryPopularity::kZipf;
             c.sim.zipf_theta = ParseNumber<double>(
                 "sim.query_popularity", Trim(v.substr(5, v.size() - 6)));
           } else {
             BadValue("sim.query_popularity", v, "uniform, zipf or zipf(THETA)");
           }
         },
         [](const ExperimentConfig& c) {
           return std::string(c.sim.query_popularity == QueryPopularity::kZipf
                                  ? "zipf"
                                  : "uniform");
         }});
    k.push_back(Scalar("sim", "zipf_theta", QREPSIM_FIELD(sim.zipf_theta)));
    k.push_back(Scalar("sim", "seed", QREPSIM_FIELD(sim.seed)));
    k.push_back(Scalar("sim", "metrics_window_queries",
                       QREPSIM_FIELD(sim.metrics_window_queries)));
    k.push_back(Scalar("sim", "count_down_origin_as_failure",
                       QREPSIM_FIELD(sim.count_down_origin_as_failure)));

    k.push_back(Scalar("topology", "avg_degree",
                       QREPSIM_FIELD(topology.graph.avg_degree)));
    k.push_back(Scalar("topology", "edge_probability",
                       QREPSIM_FIELD(topology.graph.edge_probability)));
    k.push_back(Scalar("topology", "max_retries",
                       QREPSIM_FIELD(topology.graph.max_retries)));
    k.push_back(Scalar("topology", "repair_components",
                       QREPSIM_FIELD(topology.graph.repair_components)));
    k.push_back({"topology", "bandwidth_classes",
                 [](ExperimentConfig& c, std::string_view v) {
                   c.topology.attributes.bandwidth_classes =
                       ParseList("topology.bandwidth_classes", v);
                 },
                 [](const ExperimentConfig& c) {
                   return FormatList(c.topology.attributes.bandwidth_classes);
                 }});
    k.push_back({"topology", "bandwidth_weights",
                 [](ExperimentConfig& c, std::string_view v) {
                   c.topology.attributes.bandwidth_weights =
                       ParseList("topology.bandwidth_weights", v);
                 },
                 [](const ExperimentConfig& c) {
                   return FormatList(c.topology.attributes.bandwidth_weights);
                 }});
    k.push_back(Scalar("topology", "storage_min",
                       QREPSIM_FIELD(topology.attributes.storage_min)));
    k.push_back(Scalar("topology", "storage_max",
                       QREPSIM_FIELD(topology.attributes.storage_max)));
    k.push_back(Scalar("topology", "allow_weak_nodes",
                       QREPSIM_FIELD(topology.attributes.allow_weak_nodes)));
    k.push_back(Scalar("topology", "bandwidth_floor",
                       QREPSIM_FIELD(topology.attributes.bandwidth_floor)));
    k.push_back(Scalar("topology", "storage_floor",
                       QREPSIM_FIELD(topology.attributes.storage_floor)));

    k.push_back(Scalar("qrep", "eta", QREPSIM_FIELD(qrep.eta)));
    k.push_back(Scalar("qrep", "alpha", QREPSIM_FIELD(qrep.alpha)));
    k.push_back(Scalar("qrep", "w1", QREPSIM_FIELD(qrep.w1)));
    k.push_back(Scalar("qrep", "w2", QREPSIM_FIELD(qrep.w2)));
    k.push_back(Scalar("qrep", "w3", QREPSIM_FIELD(qrep.w3)));
    k.push_back(Scalar("qrep", "b_min", QREPSIM_FIELD(qrep.b_min)));
    k.push_back(Scalar("qrep", "s_min", QREPSIM_FIELD(qrep.s_min)));
    k.push_back(Scalar("qrep", "d_min", QREPSIM_FIELD(qrep.d_min)));
    k.push_back(Scalar("qrep", "p_th", QREPSIM_FIELD(qrep.p_th)));
    k.push_back(Scalar("qrep", "delta", QREPSIM_FIELD(qrep.delta)));
    k.push_back(Scalar("qrep", "update_every", QREPSIM_FIELD(qrep.update_every)));
    k.push_back(Scalar("qrep", "hello_ttl", QREPSIM_FIELD(qrep.hello_ttl)));
    k.push_back(
        Scalar("qrep", "hello_walkers", QREPSIM_FIELD(qrep.hello_walkers)));
    k.push_back(
        Scalar("qrep", "hello_refresh", QREPSIM_FIELD(qrep.hello_refresh)));
    k.push_back({"qrep", "reservation_timeout",
                 [](ExperimentConfig& c, std::string_view v) {
                   c.qrep.reservation_timeout =
                       ParseNumber<double>("qrep.reservation_timeout", v);
                 },
                 [](const ExperimentConfig& c) {
                   return FormatNumber(c.qrep.ReservationTimeout());
                 }});
    k.push_back(
        Scalar("qrep", "reward_floor", QREPSIM_FIELD(qrep.reward_floor)));
    k.push_back(Scalar("qrep", "rereplicate_on_threshold",
                       QREPSIM_FIELD(qrep.rereplicate_on_threshold)));
    k.push_back(
        Scalar("qrep", "requester_copy", QREPSIM_FIELD(qrep.requester_copy)));
    return k;
  }();
  return keys;
}

#undef QREPSIM_FIELD

const KeySpec* FindKey(std::string_view section, std::string_view name) {
  for (const KeySpec& k : Keys()) {
    if (k.section == section && k.name == name) return &k;
  }
  return nullptr;
}

std::string JoinKeys(std::string_view section) {
  std::string out;
  for (const std::string& name : ValidKeys(section)) {
    if (!out.empty()) out += ", ";
    out += name;
  }
  return out;
}

void Assign(ExperimentConfig& config, std::string_view section,
            std::string_view name, std::string_view value, int line) {
  if (section != "sim" && section != "qrep" && section != "topology") {
    throw ConfigError("unknown section [" + std::string(section) +
                      "]; valid sections: sim, qrep, topology");
  }
  const KeySpec* key = FindKey(section, name);
  if (key == nullptr) {
    std::string where = line > 0 ? " (line " + std::to_string(line) + ")" : "";
    throw ConfigError("unknown key '" + std::string(name) + "' in [" +
                      std::string(section) + "]" + where +
                      "; valid keys: " + JoinKeys(section));
  }
  key->set(config, value);
}

void ValidateTopology(const TopologyParams& graph) {
  if (graph.edge_probability < 0.0 || graph.edge_probability > 1.0) {
    throw ConfigError("topology.edge_probability must lie in [0, 1]");
  }
  if (graph.edge_probability == 0.0 && !(graph.avg_degree > 0.0)) {
    throw ConfigError("topology.avg_degree must be > 0");
  }
  if (graph.max_retries < 1) {
    throw ConfigError("topology.max_retries must be >= 1");
  }
}

}  // namespace

std::vector<std::string> ValidKeys(std::string_view section) {
  std::vector<std::string> out;
  for (const KeySpec& k : Keys()) {
    if (k.section == section) out.push_back(k.name);
  }
  return out;
}

ExperimentConfig ParseConfigText(std::string_view text,
                                 const ConfigOverrides& overrides) {
  ExperimentConfig config;
  std::string section;
  int line_number = 0;
  while (!text.empty()) {
    auto newline = text.find('\n');
    std::string_view line = Trim(text.substr(0, newline));
    text.remove_prefix(newline == std::string_view::npos ? text.size()
                                                         : newline + 1);
    ++line_number;
    if (line.empty() || line.front() == '#' || line.front() == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError("malformed section header on line " +
                          std::to_string(line_number));
      }
      section = std::string(Trim(line.substr(1, line.size() - 2)));
      if (section != "sim" && section != "qrep" && section != "topology") {
        throw ConfigError("unknown section [" + section +
                          "]; valid sections: sim, qrep, topology");
      }
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("expected key = value on line " +
                        std::to_string(line_number));
    }
    if (section.empty()) {
      throw ConfigError("key outside of any section on line " +
                        std::to_string(line_number));
    }
    Assign(config, section, Trim(line.substr(0, eq)),
           Trim(line.substr(eq + 1)), line_number);
  }
  for (const auto& [dotted, value] : overrides) {
    auto dot = dotted.find('.');
    if (dot == std::string::npos) {
      throw ConfigError("override '" + dotted + "' must be section.key");
    }
    Assign(config, std::string_view(dotted).substr(0, dot),
           std::string_view(dotted).substr(dot + 1), Trim(value), 0);
  }
  ValidateTopology(config.topology.graph);
  config.Validate();
  return config;
}

ExperimentConfig ParseConfigFile(const std::filesystem::path& path,
                                 const ConfigOverrides& overrides) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseConfigText(buffer.str(), overrides);
}

std::map<std::string, std::string> ConfigValues(
    const ExperimentConfig& config) {
  std::map<std::string, std::string> out;
  for (const KeySpec& k : Keys()) out[k.section + "." + k.name] = k.get(config);
  return out;
}

std::string ToIni(const ExperimentConfig& config) {
  std::string out;
  for (const char* section : {"sim", "topology", "qrep"}) {
    if (!out.empty()) out += '\n';
    out += "[" + std::string(section) + "]\n";
    for (const KeySpec& k : Keys()) {
      if (k.section == section) out += k.name + " = " + k.get(config) + "\n";
    }
  }
  return out;
}

}  // namespace qrepsim
