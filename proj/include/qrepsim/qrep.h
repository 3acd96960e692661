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

#ifndef QREPSIM_QREP_H_
#define QREPSIM_QREP_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "qrepsim/network.h"
#include "qrepsim/random.h"
#include "qrepsim/search.h"
#include "qrepsim/types.h"

namespace qrepsim {

// Q-replication tuning. Key names match the [qrep] config section.
struct QRepParams {
  double eta = 0.5;    // popularity learning constant, (0, 1)
  double alpha = 0.5;  // Q-learning rate, (0, 1)
  double w1 = 0.4;     // degree weight
  double w2 = 0.2;     // bandwidth weight; strictly the smallest
  double w3 = 0.4;     // storage weight
  double b_min = 56.0;
  double s_min = 10.0;
  double d_min = 2.0;
  double p_th = 5.0;
  double delta = 1000.0;  // scan period, simulated seconds
  int update_every = 50;  // requests per popularity refresh
  int hello_ttl = 2;
  int hello_walkers = 6;
  double hello_refresh = 5000.0;  // seconds between Q-table sweeps; 0 = once
  // Seconds a replication-list row stays live; negative means one delta.
  double reservation_timeout = -1.0;
  bool reward_floor = false;
  bool rereplicate_on_threshold = false;
  bool requester_copy = false;

  double ReservationTimeout() const {
    return reservation_timeout < 0.0 ? delta : reservation_timeout;
  }

  // Throws ConfigError naming the violated constraint.
  void Validate() const;
};

// --- Popularity accounting -------------------------------------------------

// P_f + eta * (R_q / N_q) * 100; unchanged when N_q == 0.
double NextPopularity(double popularity, std::uint64_t object_requests,
                      std::uint64_t node_requests, double eta);

struct RequestRecord {
  bool held = false;
  bool refreshed = false;
};

// Counts one incoming request at `node`. Refreshes popularities once
// `update_every` requests have accumulated in the window.
RequestRecord RecordRequest(NodeState& node, ObjectId object,
                            const QRepParams& params);

// Applies NextPopularity to every row, re-derives ranks (1 = most popular,
// ties by object id) and resets the window counters. No-op if N_q == 0.
void UpdatePopularities(NodeState& node, const QRepParams& params);

// Objects whose popularity reached p_th and that still need replication.
std::vector<ObjectId> ScanForReplication(const NodeState& node,
                                         const QRepParams& params);

// --- Q-table ---------------------------------------------------------------

// (bw / b_min + s_avbl / s_min) * 100.
double InitialQValue(double bandwidth, double storage_available,
                     const QRepParams& params);

// Adds responders not yet in the table with their initial Q-value. Known
// peers keep their learned value.
void MergeHelloResponses(NodeState& node,
                         std::span<const HelloResponse> responses,
                         const QRepParams& params);

// Hello sweep from `node` followed by MergeHelloResponses.
void BuildQTable(Network& network, NodeId node, SimTime now,
                 const QRepParams& params, MessageIdSource& ids, Rng& rng);

double AverageQ(const NodeState& node);

struct SiteSelection {
  // Reserved targets, in peer-id order.
  std::vector<NodeId> targets;
  std::vector<NodeId> down;
  std::vector<NodeId> holders;
  std::vector<NodeId> reserved_elsewhere;
};

// Picks Q-table entries with q >= AvgQ, probes each, excludes down nodes,
// holders and nodes with a live reservation for the object, and reserves the
// object on the survivors. Throws SelectionError on an empty Q-table.
SiteSelection SelectTargetSites(Network& network, NodeId source,
                                ObjectId object, SimTime now,
                                const QRepParams& params);

// --- Transfer and feedback ---------------------------------------------------

struct ReinforcementSignal {
  NodeId from_peer = 0;
  std::size_t degree = 0;
  double bandwidth = 0.0;
  std::int64_t storage_available = 0;
};

struct ReplicationResult {
  std::vector<NodeId> placed;
  std::vector<ReinforcementSignal> signals;
  std::vector<NodeId> down;
  // Up targets that could not free enough space.
  std::vector<NodeId> no_space;
};

// Copies `object` to each target (evicting as needed), releasing every
// reservation. Marks the source's row replicated if anything was placed.
ReplicationResult ReplicateObject(Network& network, NodeId source,
                                  ObjectId object,
                                  std::span<const NodeId> targets,
                                  SimTime now);

// (d_d/(d_min*w1) + b_w/(b_min*w2) + s_avbl/(s_min*w3)) * 100. With
// reward_floor every bracket is floored.
double ComputeReward(double degree, double bandwidth, double storage_available,
                     const QRepParams& params);

enum class PeerOutcome { kPlaced, kHoldsCopy, kDown };

double UpdateQ(double q, PeerOutcome outcome, double reward, double alpha);

// Applies UpdateQ to the source's Q-table for every peer that took part in
// one replication round. Peers that did not take part are left alone.
void ApplyFeedback(NodeState& source, const SiteSelection& selection,
                   const ReplicationResult& result, const QRepParams& params);

// --- Replacement -------------------------------------------------------------

// Frees `needed` units on `node` by evicting replicas (never originals),
// lowest popularity first and, among equals, the earliest inserted. Returns
// the evicted ids (empty if space already sufficed), or nullopt if even
// evicting every replica would not free enough, in which case nothing is
// removed.
std::optional<std::vector<ObjectId>> EvictForSpace(Network& network,
                                                   NodeId node,
                                                   std::int64_t needed);

// Eviction plus insertion of a replica. False if the node is down, already
// holds the object, or cannot make room.
bool PlaceReplica(Network& network, NodeId node, ObjectId object, SimTime now);

// --- Periodic driver ---------------------------------------------------------

struct ScanStats {
  std::size_t rounds = 0;
  std::size_t placements = 0;
};

// One delta-period pass over every up node: refresh Q-tables when due and run
// a replication round for each object over threshold.
ScanStats RunReplicationScan(Network& network, SimTime now,
                             const QRepParams& params, MessageIdSource& ids,
                             Rng& rng);

}  // namespace qrepsim

#endif  // QREPSIM_QREP_H_
