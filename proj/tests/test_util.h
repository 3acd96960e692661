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

#ifndef QREPSIM_TESTS_TEST_UTIL_H_
#define QREPSIM_TESTS_TEST_UTIL_H_

#include <utility>
#include <vector>

#include "qrepsim/network.h"
#include "qrepsim/random.h"
#include "qrepsim/topology.h"

namespace qrepsim::testing {

using Edges = std::vector<std::pair<NodeId, NodeId>>;

// Small hand-built network: every node up with the given attributes and a
// catalog of unit-size objects.
inline Network MakeNetwork(std::size_t n, const Edges& edges,
                           std::size_t objects = 4, double bandwidth = 100.0,
                           std::int64_t capacity = 50) {
  std::vector<NodeAttributes> attrs(n, NodeAttributes{bandwidth, capacity});
  return Network(Overlay::FromEdges(n, edges), attrs,
                 std::vector<bool>(n, true), MakeCatalog(objects, 1));
}

inline Rng TestRng(std::uint64_t seed) {
  return MakeRng(seed, SeedStream::kRuntime);
}

inline Edges LineEdges(std::size_t n) {
  Edges edges;
  for (NodeId i = 0; i + 1 < n; ++i) edges.push_back({i, i + 1});
  return edges;
}

inline Edges StarEdges(std::size_t leaves) {
  Edges edges;
  for (NodeId i = 1; i <= leaves; ++i) edges.push_back({0, i});
  return edges;
}

inline std::int64_t StoredUnits(const NodeState& node) {
  std::int64_t used = 0;
  for (const auto& [id, object] : node.store) used += object.size;
  return used;
}

}  // namespace qrepsim::testing

#endif  // QREPSIM_TESTS_TEST_UTIL_H_
