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

#include "qrepsim/invariants.h"

#include <cmath>
#include <utility>

namespace qrepsim {
namespace {

constexpr std::size_t kMaxSamples = 32;

std::string At(NodeId id, SimTime now) {
  return "node " + std::to_string(id) + " @" + std::to_string(now) + "ms: ";
}

}  // namespace

void InvariantChecker::Fail(std::string message) {
  ++violation_count_;
  if (samples_.size() < kMaxSamples) samples_.push_back(std::move(message));
}

void InvariantChecker::CheckNode(const Network& network, NodeId id,
                                 SimTime now) {
  ++checks_;
  const NodeState& node = network.node(id);
  const Overlay& overlay = network.overlay();
  if (node.degree != overlay.degree(id)) {
    Fail(At(id, now) + "degree differs from adjacency size");
  }
  for (NodeId v : overlay.neighbors(id)) {
    if (v == id || !overlay.HasEdge(v, id)) {
      Fail(At(id, now) + "asymmetric or self edge to " + std::to_string(v));
    }
  }

  std::int64_t used = 0;
  for (const auto& [object, stored] : node.store) {
    used += stored.size;
    if (stored.object_id != object) {
      Fail(At(id, now) + "store key mismatch for object " +
           std::to_string(object));
    }
    if (stored.size <= 0 || stored.inserted_at < 0) {
      Fail(At(id, now) + "bad size or insertion time");
    }
    if (!node.popularity.contains(object)) {
      Fail(At(id, now) + "stored object lacks popularity row");
    }
  }
  if (used + node.storage_available != node.storage_capacity) {
    Fail(At(id, now) + "storage accounting unbalanced");
  }
  if (node.storage_available < 0 ||
      node.storage_available > node.storage_capacity) {
    Fail(At(id, now) + "available storage out of range");
  }

  for (const auto& [object, row] : node.popularity) {
    if (!node.store.contains(object)) {
      Fail(At(id, now) + "popularity row without stored object");
    }
    if (!(row.popularity >= 0.0) || !std::isfinite(row.popularity)) {
      Fail(At(id, now) + "negative or non-finite popularity");
    }
  }

  for (const auto& [peer, entry] : node.q_table) {
    if (peer == id) Fail(At(id, now) + "Q-table lists the node itself");
    if (!(entry.q_value >= 0.0) || !std::isfinite(entry.q_value)) {
      Fail(At(id, now) + "negative or non-finite Q-value for peer " +
           std::to_string(peer));
    }
  }

  if (shadow_reservations_.size() < network.size()) {
    shadow_reservations_.resize(network.size());
  }
  auto& shadow = shadow_reservations_[id];
  for (const auto& [object, reservation] : node.replication_list) {
    if (node.store.contains(object)) {
      Fail(At(id, now) + "reserved object already stored");
    }
    if (reservation.source == id) {
      Fail(At(id, now) + "node holds a reservation on itself");
    }
    auto previous = shadow.find(object);
    if (previous != shadow.end() &&
        previous->second.source != reservation.source &&
        previous->second.expires_at > now) {
      Fail(At(id, now) + "live reservation for object " +
           std::to_string(object) + " taken over by another source");
    }
  }
  shadow = node.replication_list;
}

void InvariantChecker::CheckNodes(const Network& network,
                                  std::span<const NodeId> ids, SimTime now) {
  for (NodeId id : ids) CheckNode(network, id, now);
}

void InvariantChecker::CheckAll(const Network& network, SimTime now) {
  for (NodeId id = 0; id < network.size(); ++id) CheckNode(network, id, now);
}

void InvariantChecker::CheckUpCountPreserved(std::size_t before,
                                             std::size_t after, SimTime now) {
  ++checks_;
  if (before != after) {
    Fail("churn @" + std::to_string(now) + "ms changed up count from " +
         std::to_string(before) + " to " + std::to_string(after));
  }
}

}  // namespace qrepsim
