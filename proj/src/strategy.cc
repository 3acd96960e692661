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

#include "qrepsim/strategy.h"

#include <algorithm>
#include <array>
#include <utility>

namespace qrepsim {
namespace {

constexpr std::array<std::pair<StrategyKind, std::string_view>, 5> kNames = {{
    {StrategyKind::kNone, "none"},
    {StrategyKind::kOwner, "owner"},
    {StrategyKind::kPath, "path"},
    {StrategyKind::kRandom, "random"},
    {StrategyKind::kQRep, "qrep"},
}};

bool Replicable(const QueryOutcome& outcome) {
  return outcome.success && outcome.provider.has_value() &&
         !outcome.path.empty();
}

class NoReplication final : public ReplicationStrategy {
 public:
  StrategyKind kind() const override { return StrategyKind::kNone; }
  std::vector<Placement> OnQueryOutcome(StrategyContext&,
                                        const QueryOutcome&) override {
    return {};
  }
};

class OwnerReplication final : public ReplicationStrategy {
 public:
  StrategyKind kind() const override { return StrategyKind::kOwner; }
  std::vector<Placement> OnQueryOutcome(StrategyContext& ctx,
                                        const QueryOutcome& outcome) override {
    return OwnerReplicate(ctx.network, outcome, ctx.now);
  }
};

class PathReplication final : public ReplicationStrategy {
 public:
  StrategyKind kind() const override { return StrategyKind::kPath; }
  std::vector<Placement> OnQueryOutcome(StrategyContext& ctx,
                                        const QueryOutcome& outcome) override {
    return PathReplicate(ctx.network, outcome, ctx.now);
  }
};

class RandomReplication final : public ReplicationStrategy {
 public:
  StrategyKind kind() const override { return StrategyKind::kRandom; }
  std::vector<Placement> OnQueryOutcome(StrategyContext& ctx,
                                        const QueryOutcome& outcome) override {
    return RandomReplicate(ctx.network, outcome, ctx.now, ctx.rng);
  }
};

class QReplication final : public ReplicationStrategy {
 public:
  explicit QReplication(const QRepParams& params) : params_(params) {}

  StrategyKind kind() const override { return StrategyKind::kQRep; }

  // Q-replication is proactive; the requester keeps a copy only when asked.
  std::vector<Placement> OnQueryOutcome(StrategyContext& ctx,
                                        const QueryOutcome& outcome) override {
    if (!params_.requester_copy) return {};
    return OwnerReplicate(ctx.network, outcome, ctx.now);
  }

  SimTime scan_period() const override {
    return SecondsToSimTime(params_.delta);
  }

  ScanStats OnPeriodicScan(StrategyContext& ctx) override {
    return RunReplicationScan(ctx.network, ctx.now, params_, ctx.ids, ctx.rng);
  }

 private:
  QRepParams params_;
};

}  // namespace

std::string_view ToString(StrategyKind kind) {
  for (const auto& [k, name] : kNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

StrategyKind ParseStrategyKind(std::string_view name) {
  for (const auto& [k, n] : kNames) {
    if (n == name) return k;
  }
  throw ConfigError("unknown strategy '" + std::string(name) +
                    "'; valid: none, owner, path, random, qrep");
}

std::vector<Placement> OwnerReplicate(Network& network,
                                      const QueryOutcome& outcome,
                                      SimTime now) {
  if (!Replicable(outcome)) return {};
  if (!PlaceReplica(network, outcome.origin, outcome.key, now)) return {};
  return {{outcome.origin, outcome.key}};
}

std::vector<Placement> PathReplicate(Network& network,
                                     const QueryOutcome& outcome,
                                     SimTime now) {
  if (!Replicable(outcome)) return {};
  std::vector<Placement> placed;
  // Walk back from the node next to the provider towards the requester.
  for (auto it = outcome.path.rbegin() + 1; it != outcome.path.rend(); ++it) {
    if (PlaceReplica(network, *it, outcome.key, now)) {
      placed.push_back({*it, outcome.key});
    }
  }
  return placed;
}

std::vector<Placement> RandomReplicate(Network& network,
                                       const QueryOutcome& outcome,
                                       SimTime now, Rng& rng) {
  if (!Replicable(outcome)) return {};
  const std::size_t wanted = outcome.path.size() - 1;
  if (wanted == 0) return {};
  const std::int64_t size = network.ObjectSize(outcome.key);
  std::vector<NodeId> eligible;
  for (NodeId v : outcome.visited) {
    const NodeState& node = network.node(v);
    if (!node.up || node.Holds(outcome.key)) continue;
    std::int64_t evictable = node.storage_available;
    for (const auto& [id, object] : node.store) {
      if (!object.is_original) evictable += object.size;
    }
    if (evictable >= size) eligible.push_back(v);
  }
  SampleWithoutReplacement(eligible, wanted, rng);
  std::vector<Placement> placed;
  for (NodeId v : eligible) {
    if (PlaceReplica(network, v, outcome.key, now)) {
      placed.push_back({v, outcome.key});
    }
  }
  return placed;
}

std::unique_ptr<ReplicationStrategy> MakeStrategy(StrategyKind kind,
                                                  const QRepParams& params) {
  switch (kind) {
    case StrategyKind::kNone:
      return std::make_unique<NoReplication>();
    case StrategyKind::kOwner:
      return std::make_unique<OwnerReplication>();
    case StrategyKind::kPath:
      return std::make_unique<PathReplication>();
    case StrategyKind::kRandom:
      return std::make_unique<RandomReplication>();
    case StrategyKind::kQRep:
      return std::make_unique<QReplication>(params);
  }
  throw ConfigError("unhandled strategy kind");
}

}  // namespace qrepsim
