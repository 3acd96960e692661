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

#ifndef QREPSIM_SEARCH_H_
#define QREPSIM_SEARCH_H_

#include <cstddef>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "qrepsim/network.h"
#include "qrepsim/random.h"
#include "qrepsim/types.h"

namespace qrepsim {

enum class MessageKind { kQuery, kHello };

struct WalkMessage {
  MessageId id = 0;
  MessageKind kind = MessageKind::kQuery;
  NodeId origin = 0;
  ObjectId target = 0;
  int ttl_remaining = 0;
  // Node the message arrived from; nullopt at the origin.
  std::optional<NodeId> previous_hop;
};

// Simulator-wide source of unique message ids.
class MessageIdSource {
 public:
  MessageId Next() { return next_++; }

 private:
  MessageId next_ = 1;
};

// The per-node record "message id -> neighbors this node already forwarded
// that message to". Conceptually each node keeps its own slice; one object
// holds all slices for the messages of a single search.
class ForwardingMemo {
 public:
  bool Contains(NodeId node, MessageId message, NodeId neighbor) const;
  void Record(NodeId node, MessageId message, NodeId neighbor);
  std::size_t ForwardCount(NodeId node, MessageId message) const;

 private:
  std::map<std::pair<NodeId, MessageId>, std::vector<NodeId>> sent_;
};

// Picks the next hop for `msg` at `node`: uniform among up neighbors this
// node has not yet forwarded the message to. The sender is avoided while any
// other neighbor is eligible. Records the choice in the memo and decrements
// the TTL. Returns nullopt (walker halts) when the TTL is spent or nothing
// is eligible.
std::optional<NodeId> ForwardWalker(const Network& network, NodeId node,
                                    WalkMessage& msg, ForwardingMemo& memo,
                                    Rng& rng);

struct QueryOutcome {
  ObjectId key = 0;
  NodeId origin = 0;
  bool success = false;
  std::optional<NodeId> provider;
  // Origin first, provider last; empty on failure.
  std::vector<NodeId> path;
  int hops_used = 0;
  // Distinct nodes reached by any walker, origin included.
  std::size_t probes = 0;
  // The same nodes, in first-visit order.
  std::vector<NodeId> visited;
  bool origin_down = false;
};

// k-random-walk lookup. Walkers leave on distinct random up neighbors and
// advance one hop per step in walker-index order; the first to reach a node
// holding `key` wins and all others stop at that instant.
QueryOutcome StartQuery(const Network& network, NodeId origin, ObjectId key,
                        int walkers, int ttl, MessageId message, Rng& rng);

struct HelloResponse {
  NodeId peer = 0;
  double bandwidth = 0.0;
  std::int64_t storage_available = 0;

  bool operator==(const HelloResponse&) const = default;
};

// Hello discovery using the same walk rule for the full TTL. Each distinct up
// node reached (origin excluded) answers once; result is sorted by peer id.
std::vector<HelloResponse> HelloSweep(const Network& network, NodeId origin,
                                      int walkers, int ttl, MessageId message,
                                      Rng& rng);

}  // namespace qrepsim

#endif  // QREPSIM_SEARCH_H_
