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

#include "qrepsim/search.h"

#include <algorithm>
#include <stdexcept>

namespace qrepsim {
namespace {

struct Walker {
  NodeId at = 0;
  WalkMessage msg;
  std::vector<NodeId> path;
  bool active = true;
};

// Advances all walkers in lockstep. `on_arrival(walker, hop)` is called each
// time a walker enters a node; returning true ends the whole walk.
template <typename OnArrival>
void RunWalkers(const Network& network, NodeId origin, MessageKind kind,
                ObjectId target, int walkers, int ttl, MessageId message,
                Rng& rng, OnArrival&& on_arrival) {
  if (walkers < 1 || ttl < 1) {
    throw std::invalid_argument("walk needs walkers >= 1 and ttl >= 1");
  }
  ForwardingMemo memo;
  std::vector<Walker> pack(static_cast<std::size_t>(walkers));
  for (Walker& w : pack) {
    w.at = origin;
    w.msg = {message, kind, origin, target, ttl, std::nullopt};
    w.path.push_back(origin);
  }
  for (int hop = 1; hop <= ttl; ++hop) {
    bool any_active = false;
    for (Walker& w : pack) {
      if (!w.active) continue;
      auto next = ForwardWalker(network, w.at, w.msg, memo, rng);
      if (!next) {
        w.active = false;
        continue;
      }
      any_active = true;
      w.at = *next;
      w.path.push_back(*next);
      if (on_arrival(w, hop)) return;
    }
    if (!any_active) return;
  }
}

}  // namespace

bool ForwardingMemo::Contains(NodeId node, MessageId message,
                              NodeId neighbor) const {
  auto it = sent_.find({node, message});
  if (it == sent_.end()) return false;
  return std::find(it->second.begin(), it->second.end(), neighbor) !=
         it->second.end();
}

void ForwardingMemo::Record(NodeId node, MessageId message, NodeId neighbor) {
  sent_[{node, message}].push_back(neighbor);
}

std::size_t ForwardingMemo::ForwardCount(NodeId node,
                                         MessageId message) const {
  auto it = sent_.find({node, message});
  return it == sent_.end() ? 0 : it->second.size();
}

std::optional<NodeId> ForwardWalker(const Network& network, NodeId node,
                                    WalkMessage& msg, ForwardingMemo& memo,
                                    Rng& rng) {
  if (msg.ttl_remaining <= 0) return std::nullopt;
  std::vector<NodeId> eligible;
  bool sender_eligible = false;
  for (NodeId v : network.neighbors(node)) {
    if (!network.IsUp(v) || memo.Contains(node, msg.id, v)) continue;
    if (msg.previous_hop && *msg.previous_hop == v) {
      sender_eligible = true;
      continue;
    }
    eligible.push_back(v);
  }
  if (eligible.empty()) {
    if (!sender_eligible) return std::nullopt;
    eligible.push_back(*msg.previous_hop);
  }
  NodeId next = eligible[UniformIndex(rng, eligible.size())];
  memo.Record(node, msg.id, next);
  msg.previous_hop = node;
  --msg.ttl_remaining;
  return next;
}

QueryOutcome StartQuery(const Network& network, NodeId origin, ObjectId key,
                        int walkers, int ttl, MessageId message, Rng& rng) {
  QueryOutcome outcome;
  outcome.key = key;
  outcome.origin = origin;
  if (!network.IsUp(origin)) {
    outcome.origin_down = true;
    return outcome;
  }
  std::vector<bool> seen(network.size(), false);
  seen[origin] = true;
  outcome.visited.push_back(origin);
  if (network.node(origin).Holds(key)) {
    outcome.success = true;
    outcome.provider = origin;
    outcome.path = {origin};
    outcome.probes = 1;
    return outcome;
  }
  RunWalkers(network, origin, MessageKind::kQuery, key, walkers, ttl, message,
             rng, [&](const Walker& w, int hop) {
               if (!seen[w.at]) {
                 seen[w.at] = true;
                 outcome.visited.push_back(w.at);
               }
               if (!network.node(w.at).Holds(key)) return false;
               outcome.success = true;
               outcome.provider = w.at;
               outcome.path = w.path;
               outcome.hops_used = hop;
               return true;
             });
  outcome.probes = outcome.visited.size();
  return outcome;
}

std::vector<HelloResponse> HelloSweep(const Network& network, NodeId origin,
                                      int walkers, int ttl, MessageId message,
                                      Rng& rng) {
  std::vector<HelloResponse> responses;
  if (!network.IsUp(origin)) return responses;
  std::vector<NodeId> reached;
  RunWalkers(network, origin, MessageKind::kHello, 0, walkers, ttl, message,
             rng, [&](const Walker& w, int) {
               if (w.at != origin) reached.push_back(w.at);
               return false;
             });
  std::sort(reached.begin(), reached.end());
  reached.erase(std::unique(reached.begin(), reached.end()), reached.end());
  responses.reserve(reached.size());
  for (NodeId peer : reached) {
    const NodeState& node = network.node(peer);
    responses.push_back({peer, node.bandwidth, node.storage_available});
  }
  return responses;
}

}  // namespace qrepsim
