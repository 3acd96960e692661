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

#ifndef QREPSIM_NETWORK_H_
#define QREPSIM_NETWORK_H_

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "qrepsim/topology.h"
#include "qrepsim/types.h"

namespace qrepsim {

// An original or a replica held in a node's shared store.
struct StoredObject {
  ObjectId object_id = 0;
  std::int64_t size = 1;
  SimTime inserted_at = 0;
  bool is_original = false;
};

// Row of a node's popularity table. `window_requests` is R_q for the current
// refresh window.
struct PopularityEntry {
  ObjectId object_id = 0;
  double popularity = 0.0;
  int rank = 1;
  bool replicated = false;
  std::uint64_t window_requests = 0;
};

struct QTableEntry {
  NodeId peer = 0;
  double q_value = 0.0;
};

// Replication-list row: `source` holds (target, object) until `expires_at`.
struct Reservation {
  NodeId source = 0;
  SimTime expires_at = 0;
};

struct NodeState {
  NodeId id = 0;
  bool up = true;
  double bandwidth = 0.0;
  std::int64_t storage_capacity = 0;
  std::int64_t storage_available = 0;
  std::size_t degree = 0;

  std::map<ObjectId, StoredObject> store;
  std::map<ObjectId, PopularityEntry> popularity;
  std::map<NodeId, QTableEntry> q_table;
  std::map<ObjectId, Reservation> replication_list;

  // N_q for the current refresh window; reset on every popularity refresh.
  std::uint64_t window_requests = 0;
  std::uint64_t total_requests = 0;
  // Time of the last Hello sweep, or -1 if the Q-table was never built.
  SimTime q_table_built_at = -1;

  bool Holds(ObjectId object) const { return store.contains(object); }
  // True when an unexpired reservation for `object` exists at `now`.
  bool IsReserved(ObjectId object, SimTime now) const;
};

struct NodeAttributes {
  double bandwidth = 0.0;
  std::int64_t storage_capacity = 0;

  bool operator==(const NodeAttributes&) const = default;
};

// Per-node attribute distribution. Bandwidth is drawn from discrete classes
// with the given weights; storage capacity uniformly from the closed integer
// range [storage_min, storage_max].
struct AttributeProfile {
  std::vector<double> bandwidth_classes = {56.0, 1000.0};
  std::vector<double> bandwidth_weights = {0.2, 0.8};
  std::int64_t storage_min = 20;
  std::int64_t storage_max = 100;
  // When false, support below the floors is a configuration error.
  bool allow_weak_nodes = true;
  double bandwidth_floor = 0.0;
  std::int64_t storage_floor = 0;

  // Throws ConfigError on nonpositive support or mismatched weights.
  void Validate() const;
};

std::vector<NodeAttributes> SampleNodeAttributes(const AttributeProfile& profile,
                                                 std::size_t node_count,
                                                 std::uint64_t seed);

// Exactly round(fraction * n) nodes up, chosen uniformly.
std::vector<bool> ChooseInitialUp(std::size_t node_count, double up_fraction,
                                  std::uint64_t seed);

struct ObjectSpec {
  ObjectId id = 0;
  std::int64_t size = 1;
};

std::vector<ObjectSpec> MakeCatalog(std::size_t object_count,
                                    std::int64_t object_size);

// Overlay plus per-node mutable state. Every mutation through this class
// keeps the storage accounting balanced and records the touched node as
// dirty, so invariant checks can be limited to what an event changed.
class Network {
 public:
  Network(Overlay overlay, std::span<const NodeAttributes> attributes,
          std::vector<bool> up, std::vector<ObjectSpec> catalog);

  const Overlay& overlay() const { return overlay_; }
  std::size_t size() const { return nodes_.size(); }
  std::span<const NodeId> neighbors(NodeId node) const {
    return overlay_.neighbors(node);
  }

  const NodeState& node(NodeId id) const { return nodes_[id]; }
  // Mutable access marks the node dirty.
  NodeState& mutable_node(NodeId id);
  std::span<const NodeState> nodes() const { return nodes_; }

  const std::vector<ObjectSpec>& catalog() const { return catalog_; }
  std::int64_t ObjectSize(ObjectId object) const;

  bool IsUp(NodeId id) const { return nodes_[id].up; }
  void SetUp(NodeId id, bool up);
  std::size_t UpCount() const;
  std::vector<NodeId> UpNodes() const;
  std::vector<NodeId> DownNodes() const;

  // Inserts an object with a fresh popularity entry, clears any reservation
  // for it on that node and debits storage. Returns false (and changes
  // nothing) if already held or space is short.
  bool Insert(NodeId id, ObjectId object, SimTime now, bool is_original);
  // Removes the object and its popularity entry, crediting storage.
  void Remove(NodeId id, ObjectId object);

  std::vector<NodeId> TakeDirty();

 private:
  Overlay overlay_;
  std::vector<NodeState> nodes_;
  std::vector<ObjectSpec> catalog_;
  std::vector<bool> dirty_flag_;
  std::vector<NodeId> dirty_;

  void MarkDirty(NodeId id);
};

// Assigns each catalog object to a uniformly chosen up node with room, as an
// original. Throws PlacementError if some object fits nowhere.
std::map<ObjectId, NodeId> PlaceInitialObjects(
    Network& network, std::span<const ObjectSpec> catalog, std::uint64_t seed);

// Stable text form: one line per node in id order with attributes, sorted
// adjacency and sorted store contents. Used for golden and determinism tests.
std::string SerializeNetwork(const Network& network);

}  // namespace qrepsim

#endif  // QREPSIM_NETWORK_H_
