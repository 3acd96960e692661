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

#include "qrepsim/qrep.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <tuple>

namespace qrepsim {
namespace {

void RequireOpenUnit(double value, const char* name) {
  if (!(value > 0.0 && value < 1.0)) {
    throw ConfigError(std::string("qrep.") + name +
                      " must lie strictly between 0 and 1, got " +
                      std::to_string(value));
  }
}

void RequirePositive(double value, const char* name) {
  if (!(value > 0.0)) {
    throw ConfigError(std::string("qrep.") + name + " must be > 0, got " +
                      std::to_string(value));
  }
}

double Bracket(double value, bool floor) {
  return floor ? std::floor(value) : value;
}

}  // namespace

void QRepParams::Validate() const {
  RequireOpenUnit(eta, "eta");
  RequireOpenUnit(alpha, "alpha");
  RequirePositive(w1, "w1");
  RequirePositive(w2, "w2");
  RequirePositive(w3, "w3");
  if (std::abs(w1 + w2 + w3 - 1.0) > 1e-9) {
    throw ConfigError("qrep weights must satisfy w1 + w2 + w3 = 1 (within "
                      "1e-9), got sum " +
                      std::to_string(w1 + w2 + w3));
  }
  if (!(w2 < w1 && w2 < w3)) {
    throw ConfigError(
        "qrep.w2 (bandwidth weight) must be strictly smaller than w1 and w3");
  }
  RequirePositive(b_min, "b_min");
  RequirePositive(s_min, "s_min");
  RequirePositive(d_min, "d_min");
  if (p_th < 0.0) throw ConfigError("qrep.p_th must be >= 0");
  RequirePositive(delta, "delta");
  if (update_every < 1) throw ConfigError("qrep.update_every must be >= 1");
  if (hello_ttl < 1) throw ConfigError("qrep.hello_ttl must be >= 1");
  if (hello_walkers < 1) throw ConfigError("qrep.hello_walkers must be >= 1");
  if (hello_refresh < 0.0) throw ConfigError("qrep.hello_refresh must be >= 0");
  if (reservation_timeout == 0.0) {
    throw ConfigError("qrep.reservation_timeout must be > 0");
  }
}

double NextPopularity(double popularity, std::uint64_t object_requests,
                      std::uint64_t node_requests, double eta) {
  if (node_requests == 0) return popularity;
  const double share = static_cast<double>(object_requests) /
                       static_cast<double>(node_requests);
  return popularity + eta * (share * 100.0);
}

RequestRecord RecordRequest(NodeState& node, ObjectId object,
                            const QRepParams& params) {
  RequestRecord record;
  ++node.window_requests;
  ++node.total_requests;
  if (auto it = node.popularity.find(object); it != node.popularity.end()) {
    ++it->second.window_requests;
    record.held = true;
  }
  if (node.window_requests >=
      static_cast<std::uint64_t>(params.update_every)) {
    UpdatePopularities(node, params);
    record.refreshed = true;
  }
  return record;
}

void UpdatePopularities(NodeState& node, const QRepParams& params) {
  if (node.window_requests == 0) return;
  std::vector<PopularityEntry*> order;
  order.reserve(node.popularity.size());
  for (auto& [id, entry] : node.popularity) {
    entry.popularity = NextPopularity(entry.popularity, entry.window_requests,
                                      node.window_requests, params.eta);
    entry.window_requests = 0;
    order.push_back(&entry);
  }
  std::stable_sort(order.begin(), order.end(),
                   [](const PopularityEntry* a, const PopularityEntry* b) {
                     return a->popularity > b->popularity;
                   });
  for (std::size_t i = 0; i < order.size(); ++i) {
    order[i]->rank = static_cast<int>(i) + 1;
  }
  node.window_requests = 0;
}

std::vector<ObjectId> ScanForReplication(const NodeState& node,
                                         const QRepParams& params) {
  std::vector<ObjectId> out;
  for (const auto& [id, entry] : node.popularity) {
    if (entry.popularity < params.p_th) continue;
    if (entry.replicated && !params.rereplicate_on_threshold) continue;
    out.push_back(id);
  }
  return out;
}

double InitialQValue(double bandwidth, double storage_available,
                     const QRepParams& params) {
  return (bandwidth / params.b_min + storage_available / params.s_min) * 100.0;
}

void MergeHelloResponses(NodeState& node,
                         std::span<const HelloResponse> responses,
                         const QRepParams& params) {
  for (const HelloResponse& r : responses) {
    if (r.peer == node.id || node.q_table.contains(r.peer)) continue;
    node.q_table[r.peer] = {
        r.peer, InitialQValue(r.bandwidth,
                              static_cast<double>(r.storage_available),
                              params)};
  }
}

void BuildQTable(Network& network, NodeId node, SimTime now,
                 const QRepParams& params, MessageIdSource& ids, Rng& rng) {
  auto responses = HelloSweep(network, node, params.hello_walkers,
                              params.hello_ttl, ids.Next(), rng);
  NodeState& state = network.mutable_node(node);
  MergeHelloResponses(state, responses, params);
  state.q_table_built_at = now;
}

double AverageQ(const NodeState& node) {
  if (node.q_table.empty()) return 0.0;
  double sum = 0.0;
  for (const auto& [peer, entry] : node.q_table) sum += entry.q_value;
  return sum / static_cast<double>(node.q_table.size());
}

SiteSelection SelectTargetSites(Network& network, NodeId source,
                                ObjectId object, SimTime now,
                                const QRepParams& params) {
  const NodeState& src = network.node(source);
  if (src.q_table.empty()) {
    throw SelectionError("node " + std::to_string(source) +
                         " has an empty Q-table");
  }
  const double average = AverageQ(src);
  const SimTime expires = now + SecondsToSimTime(params.ReservationTimeout());
  SiteSelection selection;
  for (const auto& [peer, entry] : src.q_table) {
    if (entry.q_value < average) continue;
    const NodeState& candidate = network.node(peer);
    if (!candidate.up) {
      selection.down.push_back(peer);
    } else if (candidate.Holds(object)) {
      selection.holders.push_back(peer);
    } else if (candidate.IsReserved(object, now)) {
      selection.reserved_elsewhere.push_back(peer);
    } else {
      network.mutable_node(peer).replication_list[object] = {source, expires};
      selection.targets.push_back(peer);
    }
  }
  return selection;
}

ReplicationResult ReplicateObject(Network& network, NodeId source,
                                  ObjectId object,
                                  std::span<const NodeId> targets,
                                  SimTime now) {
  ReplicationResult result;
  for (NodeId target : targets) {
    if (!network.IsUp(target)) {
      auto& list = network.mutable_node(target).replication_list;
      if (auto it = list.find(object);
          it != list.end() && it->second.source == source) {
        list.erase(it);
      }
      result.down.push_back(target);
      continue;
    }
    if (!PlaceReplica(network, target, object, now)) {
      network.mutable_node(target).replication_list.erase(object);
      result.no_space.push_back(target);
      continue;
    }
    const NodeState& host = network.node(target);
    result.placed.push_back(target);
    result.signals.push_back(
        {target, host.degree, host.bandwidth, host.storage_available});
  }
  if (!result.placed.empty()) {
    auto& rows = network.mutable_node(source).popularity;
    if (auto it = rows.find(object); it != rows.end()) {
      it->second.replicated = true;
    }
  }
  return result;
}

double ComputeReward(double degree, double bandwidth, double storage_available,
                     const QRepParams& params) {
  const bool fl = params.reward_floor;
  const double sum = Bracket(degree / (params.d_min * params.w1), fl) +
                     Bracket(bandwidth / (params.b_min * params.w2), fl) +
                     Bracket(storage_available / (params.s_min * params.w3), fl);
  return Bracket(sum * 100.0, fl);
}

double UpdateQ(double q, PeerOutcome outcome, double reward, double alpha) {
  switch (outcome) {
    case PeerOutcome::kPlaced:
      return q + alpha * (reward - q);
    case PeerOutcome::kHoldsCopy:
      return q;
    case PeerOutcome::kDown:
      return q * (1.0 - alpha);
  }
  return q;
}

void ApplyFeedback(NodeState& source, const SiteSelection& selection,
                   const ReplicationResult& result, const QRepParams& params) {
  auto update = [&](NodeId peer, PeerOutcome outcome, double reward) {
    auto it = source.q_table.find(peer);
    if (it == source.q_table.end()) return;
    it->second.q_value =
        UpdateQ(it->second.q_value, outcome, reward, params.alpha);
  };
  for (const ReinforcementSignal& s : result.signals) {
    update(s.from_peer, PeerOutcome::kPlaced,
           ComputeReward(static_cast<double>(s.degree), s.bandwidth,
                         static_cast<double>(s.storage_available), params));
  }
  for (NodeId peer : selection.down) update(peer, PeerOutcome::kDown, 0.0);
  for (NodeId peer : result.down) update(peer, PeerOutcome::kDown, 0.0);
  for (NodeId peer : selection.holders) {
    update(peer, PeerOutcome::kHoldsCopy, 0.0);
  }
}

std::optional<std::vector<ObjectId>> EvictForSpace(Network& network,
                                                   NodeId node,
                                                   std::int64_t needed) {
  const NodeState& view = network.node(node);
  if (view.storage_available >= needed) return std::vector<ObjectId>{};
  if (needed > view.storage_capacity) return std::nullopt;

  struct Candidate {
    double popularity;
    SimTime inserted_at;
    ObjectId id;
    std::int64_t size;
  };
  std::vector<Candidate> candidates;
  std::int64_t reclaimable = view.storage_available;
  for (const auto& [id, object] : view.store) {
    if (object.is_original) continue;
    auto row = view.popularity.find(id);
    double popularity = row == view.popularity.end() ? 0.0
                                                     : row->second.popularity;
    candidates.push_back({popularity, object.inserted_at, id, object.size});
    reclaimable += object.size;
  }
  if (reclaimable < needed) return std::nullopt;
  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate& a, const Candidate& b) {
              return std::tie(a.popularity, a.inserted_at, a.id) <
                     std::tie(b.popularity, b.inserted_at, b.id);
            });
  std::vector<ObjectId> evicted;
  for (const Candidate& c : candidates) {
    if (network.node(node).storage_available >= needed) break;
    network.Remove(node, c.id);
    evicted.push_back(c.id);
  }
  return evicted;
}

bool PlaceReplica(Network& network, NodeId node, ObjectId object,
                  SimTime now) {
  const NodeState& view = network.node(node);
  if (!view.up || view.Holds(object)) return false;
  if (!EvictForSpace(network, node, network.ObjectSize(object))) return false;
  return network.Insert(node, object, now, /*is_original=*/false);
}

ScanStats RunReplicationScan(Network& network, SimTime now,
                             const QRepParams& params, MessageIdSource& ids,
                             Rng& rng) {
  ScanStats stats;
  const SimTime refresh = SecondsToSimTime(params.hello_refresh);
  for (NodeId source = 0; source < network.size(); ++source) {
    if (!network.IsUp(source)) continue;
    auto objects = ScanForReplication(network.node(source), params);
    if (objects.empty()) continue;
    const NodeState& src = network.node(source);
    const bool stale = src.q_table_built_at < 0 ||
                       (refresh > 0 && now - src.q_table_built_at >= refresh);
    if (stale) BuildQTable(network, source, now, params, ids, rng);
    if (network.node(source).q_table.empty()) continue;
    for (ObjectId object : objects) {
      SiteSelection selection =
          SelectTargetSites(network, source, object, now, params);
      ReplicationResult result = ReplicateObject(network, source, object,
                                                 selection.targets, now);
      ApplyFeedback(network.mutable_node(source), selection, result, params);
      ++stats.rounds;
      stats.placements += result.placed.size();
    }
  }
  return stats;
}

}  // namespace qrepsim
