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

#ifndef QREPSIM_SIM_H_
#define QREPSIM_SIM_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <queue>
#include <span>
#include <vector>

#include "qrepsim/network.h"
#include "qrepsim/qrep.h"
#include "qrepsim/random.h"
#include "qrepsim/search.h"
#include "qrepsim/strategy.h"
#include "qrepsim/topology.h"

namespace qrepsim {

enum class QueryPopularity { kUniform, kZipf };

struct SimConfig {
  std::size_t node_count = 1000;
  int queries_per_node = 100;
  double mean_query_interval_s = 20.0;
  // Each node starts querying at a uniform offset in [0, start_spread_s).
  double start_spread_s = 2000.0;
  double initial_up_fraction = 0.8;
  // Churn fires after every this many issued queries; 0 disables churn.
  std::uint64_t churn_every_queries = 50000;
  double churn_flip_fraction = 0.5;
  int ttl = 6;
  int walkers_k = 6;
  StrategyKind strategy = StrategyKind::kQRep;
  std::size_t object_count = 100;
  std::int64_t object_size = 1;
  QueryPopularity query_popularity = QueryPopularity::kUniform;
  double zipf_theta = 0.8;
  std::uint64_t seed = 1;
  std::uint64_t metrics_window_queries = 10000;
  bool count_down_origin_as_failure = false;

  void Validate() const;
};

struct TopologyConfig {
  TopologyParams graph;
  AttributeProfile attributes;
};

struct ExperimentConfig {
  SimConfig sim;
  TopologyConfig topology;
  QRepParams qrep;

  void Validate() const;
};

// Draws object ids by rank: id 0 is the most popular under Zipf.
class ObjectSampler {
 public:
  ObjectSampler(std::size_t object_count, QueryPopularity popularity,
                double theta);
  ObjectId Sample(Rng& rng) const;
  double Probability(ObjectId object) const;

 private:
  std::vector<double> cdf_;
};

struct QueryEvent {
  SimTime time = 0;
  NodeId origin = 0;
  ObjectId object = 0;

  bool operator==(const QueryEvent&) const = default;
};

// Every node's query stream, merged and sorted by (time, origin). Each node
// issues `queries_per_node` queries: the first at a uniform start offset,
// the rest after exponential gaps. Per-node times strictly increase.
std::vector<QueryEvent> ScheduleWorkload(const SimConfig& config,
                                         std::size_t node_count,
                                         std::uint64_t seed);

struct ChurnResult {
  std::vector<NodeId> went_up;
  std::vector<NodeId> went_down;
};

// ceil(flip_fraction * |down|) random down nodes come up and the same number
// of previously up nodes go down. Stores and Q-tables survive.
ChurnResult ApplyChurn(Network& network, double flip_fraction, Rng& rng);

struct MetricsRow {
  std::size_t window_index = 0;
  std::uint64_t queries_issued = 0;
  std::uint64_t queries_succeeded = 0;
  double success_rate = 0.0;
  std::uint64_t total_replicas = 0;
  std::map<ObjectId, std::uint64_t> replicas_per_object;
  double mean_hops_on_success = 0.0;
  std::size_t up_node_count = 0;

  bool operator==(const MetricsRow&) const = default;
};

struct WindowStats {
  std::uint64_t issued = 0;
  std::uint64_t succeeded = 0;
  std::uint64_t hops_on_success = 0;
};

// Replicas are counted over all stores, up or down; originals are excluded.
MetricsRow CollectMetrics(const Network& network, const WindowStats& window,
                          std::size_t window_index);

enum class EventKind { kQuery, kQueryDropped, kScan, kChurn };

struct EventRecord {
  EventKind kind = EventKind::kQuery;
  SimTime time = 0;
  std::size_t up_before = 0;
  std::size_t up_after = 0;
};

struct RunTotals {
  std::uint64_t events = 0;
  std::uint64_t queries_issued = 0;
  std::uint64_t queries_dropped = 0;
  std::uint64_t churn_events = 0;
  std::uint64_t scans = 0;
  std::uint64_t placements = 0;
};

// Called after every processed event with the nodes it touched.
using EventHook = std::function<void(const Network&, const EventRecord&,
                                     std::span<const NodeId> touched)>;

// One deterministic run. Construction builds the overlay, attributes, up set
// and initial placement; Run() drains the event queue.
class Simulation {
 public:
  explicit Simulation(const ExperimentConfig& config);

  void set_event_hook(EventHook hook) { hook_ = std::move(hook); }
  std::vector<MetricsRow> Run();

  const Network& network() const { return network_; }
  const RunTotals& totals() const { return totals_; }

 private:
  struct Event {
    SimTime time;
    std::uint64_t seq;
    EventKind kind;
    std::size_t index;
  };
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      return a.time != b.time ? a.time > b.time : a.seq > b.seq;
    }
  };

  void Push(SimTime time, EventKind kind, std::size_t index);
  void HandleQuery(const QueryEvent& query, SimTime now);
  void CloseWindow();
  void Notify(const EventRecord& record);

  ExperimentConfig config_;
  Network network_;
  std::unique_ptr<ReplicationStrategy> strategy_;
  std::vector<QueryEvent> workload_;
  std::priority_queue<Event, std::vector<Event>, Later> queue_;
  std::uint64_t next_seq_ = 0;
  std::size_t pending_queries_ = 0;
  Rng runtime_rng_;
  Rng churn_rng_;
  MessageIdSource ids_;
  WindowStats window_;
  std::vector<MetricsRow> rows_;
  RunTotals totals_;
  EventHook hook_;
};

std::vector<MetricsRow> RunSimulation(const ExperimentConfig& config);

}  // namespace qrepsim

#endif  // QREPSIM_SIM_H_
