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

#ifndef QREPSIM_STRATEGY_H_
#define QREPSIM_STRATEGY_H_

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "qrepsim/network.h"
#include "qrepsim/qrep.h"
#include "qrepsim/random.h"
#include "qrepsim/search.h"

namespace qrepsim {

enum class StrategyKind { kNone, kOwner, kPath, kRandom, kQRep };

std::string_view ToString(StrategyKind kind);
// Throws ConfigError listing the valid names.
StrategyKind ParseStrategyKind(std::string_view name);

struct Placement {
  NodeId node = 0;
  ObjectId object = 0;

  bool operator==(const Placement&) const = default;
};

// Replica at the requester only.
std::vector<Placement> OwnerReplicate(Network& network,
                                      const QueryOutcome& outcome,
                                      SimTime now);

// Replicas on every path node from the requester up to, but excluding, the
// provider. Holders and nodes that cannot make room are skipped.
std::vector<Placement> PathReplicate(Network& network,
                                     const QueryOutcome& outcome, SimTime now);

// As many replicas as PathReplicate would attempt (|path| - 1), placed on
// distinct uniformly chosen nodes among those the query visited.
std::vector<Placement> RandomReplicate(Network& network,
                                       const QueryOutcome& outcome,
                                       SimTime now, Rng& rng);

struct StrategyContext {
  Network& network;
  SimTime now;
  Rng& rng;
  MessageIdSource& ids;
};

class ReplicationStrategy {
 public:
  virtual ~ReplicationStrategy() = default;

  virtual StrategyKind kind() const = 0;

  // Called after every issued query.
  virtual std::vector<Placement> OnQueryOutcome(StrategyContext& ctx,
                                                const QueryOutcome& outcome) = 0;

  // Period between OnPeriodicScan calls; 0 disables scanning.
  virtual SimTime scan_period() const { return 0; }
  virtual ScanStats OnPeriodicScan(StrategyContext&) { return {}; }
};

std::unique_ptr<ReplicationStrategy> MakeStrategy(StrategyKind kind,
                                                  const QRepParams& params);

}  // namespace qrepsim

#endif  // QREPSIM_STRATEGY_H_
