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

#include "qrepsim/network.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>
#include <utility>

#include "qrepsim/random.h"

namespace qrepsim {
namespace {

std::string FormatDouble(double value) {
  char buf[64];
  auto result = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, result.ptr);
}

}  // namespace

bool NodeState::IsReserved(ObjectId object, SimTime now) const {
  auto it = replication_list.find(object);
  return it != replication_list.end() && it->second.expires_at > now;
}

void AttributeProfile::Validate() const {
  if (bandwidth_classes.empty()) {
    throw ConfigError("bandwidth_classes must list at least one value");
  }
  if (bandwidth_classes.size() != bandwidth_weights.size()) {
    throw ConfigError(
        "bandwidth_classes and bandwidth_weights must have equal length");
  }
  double weight_sum = 0.0;
  for (std::size_t i = 0; i < bandwidth_classes.size(); ++i) {
    if (!(bandwidth_classes[i] > 0.0)) {
      throw ConfigError("bandwidth class values must be > 0");
    }
    if (bandwidth_weights[i] < 0.0) {
      throw ConfigError("bandwidth weights must be >= 0");
    }
    weight_sum += bandwidth_weights[i];
  }
  if (!(weight_sum > 0.0)) {
    throw ConfigError("bandwidth weights must not all be zero");
  }
  if (storage_min <= 0 || storage_max < storage_min) {
    throw ConfigError("storage range must satisfy 0 < storage_min <= "
                      "storage_max");
  }
  if (!allow_weak_nodes) {
    for (std::size_t i = 0; i < bandwidth_classes.size(); ++i) {
      if (bandwidth_weights[i] > 0.0 &&
          bandwidth_classes[i] < bandwidth_floor) {
        throw ConfigError("bandwidth class " +
                          FormatDouble(bandwidth_classes[i]) +
                          " is below the floor and weak nodes are disabled");
      }
    }
    if (storage_min < storage_floor) {
      throw ConfigError(
          "storage_min is below the floor and weak nodes are disabled");
    }
  }
}

std::vector<NodeAttributes> SampleNodeAttributes(const AttributeProfile& profile,
                                                 std::size_t node_count,
                                                 std::uint64_t seed) {
  profile.Validate();
  Rng rng(seed);
  std::discrete_distribution<std::size_t> bandwidth_class(
      profile.bandwidth_weights.begin(), profile.bandwidth_weights.end());
  std::uniform_int_distribution<std::int64_t> storage(profile.storage_min,
                                                      profile.storage_max);
  std::vector<NodeAttributes> out;
  out.reserve(node_count);
  for (std::size_t i = 0; i < node_count; ++i) {
    NodeAttributes attrs;
    attrs.bandwidth = profile.bandwidth_classes[bandwidth_class(rng)];
    attrs.storage_capacity = storage(rng);
    out.push_back(attrs);
  }
  return out;
}

std::vector<bool> ChooseInitialUp(std::size_t node_count, double up_fraction,
                                  std::uint64_t seed) {
  if (up_fraction < 0.0 || up_fraction > 1.0) {
    throw ConfigError("initial up fraction must lie in [0, 1]");
  }
  auto up_count = static_cast<std::size_t>(
      std::llround(up_fraction * static_cast<double>(node_count)));
  std::vector<NodeId> ids(node_count);
  std::iota(ids.begin(), ids.end(), NodeId{0});
  Rng rng(seed);
  SampleWithoutReplacement(ids, up_count, rng);
  std::vector<bool> up(node_count, false);
  for (NodeId id : ids) up[id] = true;
  return up;
}

std::vector<ObjectSpec> MakeCatalog(std::size_t object_count,
                                    std::int64_t object_size) {
  if (object_size <= 0) throw ConfigError("object_size must be > 0");
  std::vector<ObjectSpec> catalog(object_count);
  for (std::size_t i = 0; i < object_count; ++i) {
    catalog[i] = {static_cast<ObjectId>(i), object_size};
  }
  return catalog;
}

Network::Network(Overlay overlay, std::span<const NodeAttributes> attributes,
                 std::vector<bool> up, std::vector<ObjectSpec> catalog)
    : overlay_(std::move(overlay)), catalog_(std::move(catalog)) {
  const std::size_t n = overlay_.node_count;
  if (attributes.size() != n || up.size() != n) {
    throw ConfigError("attribute and status vectors must match node count");
  }
  for (std::size_t i = 0; i < catalog_.size(); ++i) {
    if (catalog_[i].id != i) {
      throw ConfigError("catalog ids must be dense and ordered");
    }
  }
  nodes_.resize(n);
  for (NodeId id = 0; id < n; ++id) {
    NodeState& node = nodes_[id];
    node.id = id;
    node.up = up[id];
    node.bandwidth = attributes[id].bandwidth;
    node.storage_capacity = attributes[id].storage_capacity;
    node.storage_available = attributes[id].storage_capacity;
    node.degree = overlay_.degree(id);
  }
  dirty_flag_.assign(n, false);
}

NodeState& Network::mutable_node(NodeId id) {
  MarkDirty(id);
  return nodes_[id];
}

std::int64_t Network::ObjectSize(ObjectId object) const {
  return catalog_.at(object).size;
}

void Network::SetUp(NodeId id, bool up) { mutable_node(id).up = up; }

std::size_t Network::UpCount() const {
  return static_cast<std::size_t>(
      std::count_if(nodes_.begin(), nodes_.end(),
                    [](const NodeState& n) { return n.up; }));
}

std::vector<NodeId> Network::UpNodes() const {
  std::vector<NodeId> out;
  for (const auto& n : nodes_) {
    if (n.up) out.push_back(n.id);
  }
  return out;
}

std::vector<NodeId> Network::DownNodes() const {
  std::vector<NodeId> out;
  for (const auto& n : nodes_) {
    if (!n.up) out.push_back(n.id);
  }
  return out;
}

bool Network::Insert(NodeId id, ObjectId object, SimTime now,
                     bool is_original) {
  const std::int64_t size = ObjectSize(object);
  const NodeState& view = nodes_[id];
  if (view.Holds(object) || view.storage_available < size) return false;
  NodeState& node = mutable_node(id);
  node.store[object] = {object, size, now, is_original};
  PopularityEntry entry;
  entry.object_id = object;
  entry.rank = static_cast<int>(node.popularity.size()) + 1;
  node.popularity[object] = entry;
  node.replication_list.erase(object);
  node.storage_available -= size;
  return true;
}

void Network::Remove(NodeId id, ObjectId object) {
  NodeState& node = mutable_node(id);
  auto it = node.store.find(object);
  if (it == node.store.end()) return;
  node.storage_available += it->second.size;
  node.store.erase(it);
  node.popularity.erase(object);
}

std::vector<NodeId> Network::TakeDirty() {
  for (NodeId id : dirty_) dirty_flag_[id] = false;
  return std::exchange(dirty_, {});
}

void Network::MarkDirty(NodeId id) {
  if (!dirty_flag_[id]) {
    dirty_flag_[id] = true;
    dirty_.push_back(id);
  }
}

std::map<ObjectId, NodeId> PlaceInitialObjects(
    Network& network, std::span<const ObjectSpec> catalog, std::uint64_t seed) {
  if (catalog.empty()) throw PlacementError("object catalog is empty");
  Rng rng(seed);
  std::map<ObjectId, NodeId> placement;
  std::vector<NodeId> hosts;
  for (const ObjectSpec& object : catalog) {
    hosts.clear();
    for (const NodeState& node : network.nodes()) {
      if (node.up && node.storage_available >= object.size &&
          !node.Holds(object.id)) {
        hosts.push_back(node.id);
      }
    }
    if (hosts.empty()) {
      throw PlacementError("no up node has room for object " +
                           std::to_string(object.id) + " (size " +
                           std::to_string(object.size) + ")");
    }
    NodeId host = hosts[UniformIndex(rng, hosts.size())];
    network.Insert(host, object.id, 0, /*is_original=*/true);
    placement[object.id] = host;
  }
  return placement;
}

std::string SerializeNetwork(const Network& network) {
  std::ostringstream out;
  const Overlay& overlay = network.overlay();
  out << "overlay nodes=" << overlay.node_count << " edges="
      << overlay.edge_count() << " seed=" << overlay.seed << '\n';
  for (const NodeState& node : network.nodes()) {
    out << "node " << node.id << " up=" << (node.up ? 1 : 0)
        << " bw=" << FormatDouble(node.bandwidth)
        << " cap=" << node.storage_capacity
        << " avail=" << node.storage_available << " deg=" << node.degree
        << " adj=";
    bool first = true;
    for (NodeId v : overlay.neighbors(node.id)) {
      out << (first ? "" : ",") << v;
      first = false;
    }
    out << " store=";
    first = true;
    for (const auto& [id, object] : node.store) {
      out << (first ? "" : ",") << id << ':' << object.size << ':'
          << object.inserted_at << ':' << (object.is_original ? 'o' : 'r');
      first = false;
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace qrepsim
