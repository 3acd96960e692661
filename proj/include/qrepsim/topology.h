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

#ifndef QREPSIM_TOPOLOGY_H_
#define QREPSIM_TOPOLOGY_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "qrepsim/types.h"

namespace qrepsim {

// Static undirected overlay. Neighbor lists are sorted and free of
// duplicates and self-loops.
struct Overlay {
  std::size_t node_count = 0;
  std::vector<std::vector<NodeId>> adjacency;
  std::uint64_t seed = 0;

  std::span<const NodeId> neighbors(NodeId node) const {
    return adjacency[node];
  }
  std::size_t degree(NodeId node) const { return adjacency[node].size(); }
  std::size_t edge_count() const;
  double mean_degree() const;
  bool HasEdge(NodeId a, NodeId b) const;

  // Builds an overlay from an edge list; duplicate edges are merged.
  // Throws ConfigError on self-loops or out-of-range endpoints.
  static Overlay FromEdges(std::size_t node_count,
                           std::span<const std::pair<NodeId, NodeId>> edges);
};

struct TopologyParams {
  // Expected mean degree; converted to p = avg_degree / (n - 1).
  double avg_degree = 6.0;
  // When > 0, used directly as the G(n, p) edge probability.
  double edge_probability = 0.0;
  // Regeneration attempts with derived seeds before giving up (or repairing).
  int max_retries = 16;
  // After all retries fail, bridge the remaining components of the first
  // attempt to its largest component instead of failing.
  bool repair_components = true;
};

double EdgeProbability(std::size_t node_count, const TopologyParams& params);

// Connected Erdős–Rényi G(n, p) graph. Deterministic in (n, params, seed).
// Throws ConfigError when the density is invalid or no connected graph was
// produced and repair is disabled.
Overlay GenerateTopology(std::size_t node_count, const TopologyParams& params,
                         std::uint64_t seed);

// Connected components, each sorted, ordered by smallest member.
std::vector<std::vector<NodeId>> ConnectedComponents(const Overlay& overlay);

bool IsConnected(const Overlay& overlay);

// Adjacency symmetry, no self-loops, sorted unique neighbor lists.
bool IsWellFormed(const Overlay& overlay);

}  // namespace qrepsim

#endif  // QREPSIM_TOPOLOGY_H_
