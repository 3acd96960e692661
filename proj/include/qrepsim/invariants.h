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

#ifndef QREPSIM_INVARIANTS_H_
#define QREPSIM_INVARIANTS_H_

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "qrepsim/network.h"

namespace qrepsim {

// Accumulates violations of the network-state invariants:
//  - degree matches adjacency, adjacency symmetric
//  - sum of stored sizes + available storage == capacity, 0 <= avail <= cap
//  - popularity rows exactly mirror the store; P_f >= 0
//  - Q-values finite and >= 0; no self entry
//  - replication list never names a stored object and is never held by the
//    target itself; a live reservation is never taken over by a different
//    source (checked against a shadow copy from the previous check)
class InvariantChecker {
 public:
  void CheckNode(const Network& network, NodeId id, SimTime now);
  void CheckNodes(const Network& network, std::span<const NodeId> ids,
                  SimTime now);
  void CheckAll(const Network& network, SimTime now);
  void CheckUpCountPreserved(std::size_t before, std::size_t after,
                             SimTime now);

  bool ok() const { return violation_count_ == 0; }
  std::size_t violation_count() const { return violation_count_; }
  std::size_t checks() const { return checks_; }
  // First few violation messages, for diagnostics.
  const std::vector<std::string>& samples() const { return samples_; }

 private:
  void Fail(std::string message);

  std::size_t checks_ = 0;
  std::size_t violation_count_ = 0;
  std::vector<std::string> samples_;
  std::vector<std::map<ObjectId, Reservation>> shadow_reservations_;
};

}  // namespace qrepsim

#endif  // QREPSIM_INVARIANTS_H_
