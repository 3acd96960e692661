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

#include "qrepsim/sim.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace qrepsim {
namespace {

Network BuildNetwork(const ExperimentConfig& config) {
  config.Validate();
  const SimConfig& sim = config.sim;
  Overlay overlay =
      GenerateTopology(sim.node_count, config.topology.graph,
                       DeriveSeed(sim.seed, SeedStream::kTopology));
  auto attributes =
      SampleNodeAttributes(config.topology.attributes, sim.node_count,
                           DeriveSeed(sim.seed, SeedStream::kAttributes));
  auto up = ChooseInitialUp(sim.node_count, sim.initial_up_fraction,
                            DeriveSeed(sim.seed, SeedStream::kInitialUp));
  auto catalog = MakeCatalog(sim.object_count, sim.object_size);
  Network network(std::move(overlay), attributes, std::move(up), catalog);
  PlaceInitialObjects(network, catalog,
                      DeriveSeed(sim.seed, SeedStream::kPlacement));
  network.TakeDirty();
  return network;
}

void RequireFraction(double value, const char* name) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw ConfigError(std::string("sim.") + name + " must lie in [0, 1]");
  }
}

}  // namespace

void SimConfig::Validate() const {
  if (node_count < 1) throw ConfigError("sim.node_count must be >= 1");
  if (queries_per_node < 1) {
    throw ConfigError("sim.queries_per_node must be >= 1");
  }
  if (!(mean_query_interval_s > 0.0)) {
    throw ConfigError("sim.mean_query_interval_s must be > 0");
  }
  if (start_spread_s < 0.0) throw ConfigError("sim.start_spread_s must be >= 0");
  RequireFraction(initial_up_fraction, "initial_up_fraction");
  RequireFraction(churn_flip_fraction, "churn_flip_fraction");
  if (ttl < 1) throw ConfigError("sim.ttl must be >= 1");
  if (walkers_k < 1) throw ConfigError("sim.walkers_k must be >= 1");
  if (object_count < 1) throw ConfigError("sim.object_count must be >= 1");
  if (object_size < 1) throw ConfigError("sim.object_size must be >= 1");
  if (zipf_theta < 0.0) throw ConfigError("sim.zipf_theta must be >= 0");
  if (metrics_window_queries < 1) {
    throw ConfigError("sim.metrics_window_queries must be >= 1");
  }
}

void ExperimentConfig::Validate() const {
  sim.Validate();
  topology.attributes.Validate();
  qrep.Validate();
}

ObjectSampler::ObjectSampler(std::size_t object_count,
                             QueryPopularity popularity, double theta) {
  cdf_.resize(object_count);
  double total = 0.0;
  for (std::size_t i = 0; i < object_count; ++i) {
    double weight = popularity == QueryPopularity::kZipf
                        ? 1.0 / std::pow(static_cast<double>(i + 1), theta)
                        : 1.0;
    total += weight;
    cdf_[i] = total;
  }
  for (double& c : cdf_) c /= total;
  if (!cdf_.empty()) cdf_.back() = 1.0;
}

ObjectId ObjectSampler::Sample(Rng& rng) const {
  double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  if (it == cdf_.end()) --it;
  return static_cast<ObjectId>(it - cdf_.begin());
}

double ObjectSampler::Probability(ObjectId object) const {
  return object == 0 ? cdf_[0] : cdf_[object] - cdf_[object - 1];
}

std::vector<QueryEvent> ScheduleWorkload(const SimConfig& config,
                                         std::size_t node_count,
                                         std::uint64_t seed) {
  Rng rng(seed);
  ObjectSampler sampler(config.object_count, config.query_popularity,
                        config.zipf_theta);
  std::exponential_distribution<double> gap(1.0 / config.mean_query_interval_s);
  std::uniform_real_distribution<double> offset(0.0, config.start_spread_s);
  std::vector<QueryEvent> events;
  events.reserve(node_count * static_cast<std::size_t>(config.queries_per_node));
  for (NodeId node = 0; node < node_count; ++node) {
    SimTime t = SecondsToSimTime(config.start_spread_s > 0.0 ? offset(rng)
                                                             : 0.0);
    for (int q = 0; q < config.queries_per_node; ++q) {
      if (q > 0) t += std::max<SimTime>(1, SecondsToSimTime(gap(rng)));
      events.push_back({t, node, sampler.Sample(rng)});
    }
  }
  std::stable_sort(events.begin(), events.end(),
                   [](const QueryEvent& a, const QueryEvent& b) {
                     return a.time != b.time ? a.time < b.time
                                             : a.origin < b.origin;
                   });
  return events;
}

ChurnResult ApplyChurn(Network& network, double flip_fraction, Rng& rng) {
  ChurnResult result;
  std::vector<NodeId> down = network.DownNodes();
  std::vector<NodeId> up = network.UpNodes();
  auto flips = static_cast<std::size_t>(
      std::ceil(flip_fraction * static_cast<double>(down.size()) - 1e-9));
  flips = std::min({flips, down.size(), up.size()});
  if (flips == 0) return result;
  SampleWithoutReplacement(down, flips, rng);
  SampleWithoutReplacement(up, flips, rng);
  std::sort(down.begin(), down.end());
  std::sort(up.begin(), up.end());
  for (NodeId id : down) network.SetUp(id, true);
  for (NodeId id : up) network.SetUp(id, false);
  result.went_up = std::move(down);
  result.went_down = std::move(up);
  return result;
}

MetricsRow CollectMetrics(const Network& network, const WindowStats& window,
                          std::size_t window_index) {
  MetricsRow row;
  row.window_index = window_index;
  row.queries_issued = window.issued;
  row.queries_succeeded = window.succeeded;
  row.success_rate = window.issued == 0
                         ? 0.0
                         : static_cast<double>(window.succeeded) /
                               static_cast<double>(window.issued);
  row.mean_hops_on_success =
      window.succeeded == 0 ? 0.0
                            : static_cast<double>(window.hops_on_success) /
                                  static_cast<double>(window.succeeded);
  for (const NodeState& node : network.nodes()) {
    if (node.up) ++row.up_node_count;
    for (const auto& [id, object] : node.store) {
      if (object.is_original) continue;
      ++row.replicas_per_object[id];
      ++row.total_replicas;
    }
  }
  return row;
}

Simulation::Simulation(const ExperimentConfig& config)
    : config_(config),
      network_(BuildNetwork(config)),
      strategy_(MakeStrategy(config.sim.strategy, config.qrep)),
      workload_(ScheduleWorkload(config.sim, config.sim.node_count,
                                 DeriveSeed(config.sim.seed,
                                            SeedStream::kWorkload))),
      runtime_rng_(MakeRng(config.sim.seed, SeedStream::kRuntime)),
      churn_rng_(MakeRng(config.sim.seed, SeedStream::kChurn)) {
  for (std::size_t i = 0; i < workload_.size(); ++i) {
    Push(workload_[i].time, EventKind::kQuery, i);
  }
  pending_queries_ = workload_.size();
  if (SimTime period = strategy_->scan_period(); period > 0) {
    Push(period, EventKind::kScan, 0);
  }
}

void Simulation::Push(SimTime time, EventKind kind, std::size_t index) {
  queue_.push({time, next_seq_++, kind, index});
}

void Simulation::Notify(const EventRecord& record) {
  auto touched = network_.TakeDirty();
  if (hook_) hook_(network_, record, touched);
}

void Simulation::CloseWindow() {
  rows_.push_back(CollectMetrics(network_, window_, rows_.size()));
  window_ = {};
}

void Simulation::HandleQuery(const QueryEvent& query, SimTime now) {
  const SimConfig& sim = config_.sim;
  const std::size_t up_now = network_.UpCount();
  if (!network_.IsUp(query.origin)) {
    ++totals_.queries_dropped;
    if (!sim.count_down_origin_as_failure) {
      Notify({EventKind::kQueryDropped, now, up_now, up_now});
      return;
    }
    ++window_.issued;
  } else {
    QueryOutcome outcome =
        StartQuery(network_, query.origin, query.object, sim.walkers_k, sim.ttl,
                   ids_.Next(), runtime_rng_);
    for (NodeId v : outcome.visited) {
      if (v == query.origin) continue;
      RecordRequest(network_.mutable_node(v), query.object, config_.qrep);
    }
    StrategyContext ctx{network_, now, runtime_rng_, ids_};
    totals_.placements += strategy_->OnQueryOutcome(ctx, outcome).size();
    ++window_.issued;
    if (outcome.success) {
      ++window_.succeeded;
      window_.hops_on_success += static_cast<std::uint64_t>(outcome.hops_used);
    }
  }
  ++totals_.queries_issued;
  Notify({EventKind::kQuery, now, up_now, up_now});

  if (sim.churn_every_queries > 0 &&
      totals_.queries_issued % sim.churn_every_queries == 0) {
    const std::size_t before = network_.UpCount();
    ApplyChurn(network_, sim.churn_flip_fraction, churn_rng_);
    ++totals_.churn_events;
    Notify({EventKind::kChurn, now, before, network_.UpCount()});
  }
  if (window_.issued >= sim.metrics_window_queries) CloseWindow();
}

std::vector<MetricsRow> Simulation::Run() {
  while (!queue_.empty()) {
    Event event = queue_.top();
    queue_.pop();
    ++totals_.events;
    switch (event.kind) {
      case EventKind::kQuery:
        --pending_queries_;
        HandleQuery(workload_[event.index], event.time);
        break;
      case EventKind::kScan: {
        StrategyContext ctx{network_, event.time, runtime_rng_, ids_};
        totals_.placements += strategy_->OnPeriodicScan(ctx).placements;
        ++totals_.scans;
        const std::size_t up_now = network_.UpCount();
        Notify({EventKind::kScan, event.time, up_now, up_now});
        if (pending_queries_ > 0) {
          Push(event.time + strategy_->scan_period(), EventKind::kScan, 0);
        }
        break;
      }
      case EventKind::kQueryDropped:
      case EventKind::kChurn:
        break;
    }
  }
  if (window_.issued > 0 || rows_.empty()) CloseWindow();
  return rows_;
}

std::vector<MetricsRow> RunSimulation(const ExperimentConfig& config) {
  Simulation simulation(config);
  return simulation.Run();
}

}  // namespace qrepsim
