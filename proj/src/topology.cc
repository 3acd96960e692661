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

#include "qrepsim/topology.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "qrepsim/random.h"

namespace qrepsim {
namespace {

void SortAdjacency(Overlay& overlay) {
  for (auto& list : overlay.adjacency) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }
}

void AddEdge(Overlay& overlay, NodeId a, NodeId b) {
  overlay.adjacency[a].push_back(b);
  overlay.adjacency[b].push_back(a);
}

// Batagelj–Brandes geometric skipping over the lower triangle; O(n + m).
Overlay SampleGnp(std::size_t n, double p, std::uint64_t seed) {
  Overlay overlay;
  overlay.node_count = n;
  overlay.adjacency.resize(n);
  overlay.seed = seed;
  if (p >= 1.0) {
    for (std::size_t v = 1; v < n; ++v) {
      for (std::size_t w = 0; w < v; ++w) {
        AddEdge(overlay, static_cast<NodeId>(v), static_cast<NodeId>(w));
      }
    }
    SortAdjacency(overlay);
    return overlay;
  }
  Rng rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double log_q = std::log1p(-p);
  std::int64_t v = 1;
  std::int64_t w = -1;
  const auto size = static_cast<std::int64_t>(n);
  while (v < size) {
    double r = unit(rng);
    w += 1 + static_cast<std::int64_t>(std::floor(std::log1p(-r) / log_q));
    while (w >= v && v < size) {
      w -= v;
      ++v;
    }
    if (v < size) {
      AddEdge(overlay, static_cast<NodeId>(v), static_cast<NodeId>(w));
    }
  }
  SortAdjacency(overlay);
  return overlay;
}

// Links every non-largest component to a random member of the largest one.
void BridgeComponents(Overlay& overlay, Rng& rng) {
  auto components = ConnectedComponents(overlay);
  if (components.size() <= 1) return;
  std::size_t largest = 0;
  for (std::size_t i = 1; i < components.size(); ++i) {
    if (components[i].size() > components[largest].size()) largest = i;
  }
  const auto& hub = components[largest];
  for (std::size_t i = 0; i < components.size(); ++i) {
    if (i == largest) continue;
    const auto& part = components[i];
    AddEdge(overlay, part[UniformIndex(rng, part.size())],
            hub[UniformIndex(rng, hub.size())]);
  }
  SortAdjacency(overlay);
}

}  // namespace

std::size_t Overlay::edge_count() const {
  std::size_t total = 0;
  for (const auto& list : adjacency) total += list.size();
  return total / 2;
}

double Overlay::mean_degree() const {
  if (node_count == 0) return 0.0;
  return 2.0 * static_cast<double>(edge_count()) /
         static_cast<double>(node_count);
}

bool Overlay::HasEdge(NodeId a, NodeId b) const {
  const auto& list = adjacency[a];
  return std::binary_search(list.begin(), list.end(), b);
}

Overlay Overlay::FromEdges(std::size_t node_count,
                           std::span<const std::pair<NodeId, NodeId>> edges) {
  Overlay overlay;
  overlay.node_count = node_count;
  overlay.adjacency.resize(node_count);
  for (const auto& [a, b] : edges) {
    if (a >= node_count || b >= node_count) {
      throw ConfigError("edge endpoint out of range");
    }
    if (a == b) throw ConfigError("self-loop on node " + std::to_string(a));
    AddEdge(overlay, a, b);
  }
  SortAdjacency(overlay);
  return overlay;
}

double EdgeProbability(std::size_t node_count, const TopologyParams& params) {
  if (params.edge_probability > 0.0) return params.edge_probability;
  if (node_count < 2) return 0.0;
  return params.avg_degree / static_cast<double>(node_count - 1);
}

Overlay GenerateTopology(std::size_t node_count, const TopologyParams& params,
                         std::uint64_t seed) {
  if (node_count < 2) {
    throw ConfigError("topology needs at least 2 nodes, got " +
                      std::to_string(node_count));
  }
  const double p = EdgeProbability(node_count, params);
  if (!(p > 0.0) || p > 1.0) {
    throw ConfigError("edge probability must lie in (0, 1], got " +
                      std::to_string(p));
  }
  const double expected_degree = p * static_cast<double>(node_count - 1);
  const double required =
      std::min(2.0, static_cast<double>(node_count - 1)) - 1e-9;
  if (expected_degree < required) {
    throw ConfigError("expected mean degree " +
                      std::to_string(expected_degree) +
                      " is below 2; raise topology.avg_degree");
  }
  if (params.max_retries < 1) {
    throw ConfigError("topology.max_retries must be >= 1");
  }

  Overlay first;
  for (int attempt = 0; attempt < params.max_retries; ++attempt) {
    Overlay candidate = SampleGnp(
        node_count, p, DeriveSeed(seed, static_cast<std::uint64_t>(attempt)));
    candidate.seed = seed;
    if (IsConnected(candidate)) return candidate;
    if (attempt == 0) first = std::move(candidate);
  }
  if (!params.repair_components) {
    throw ConfigError("no connected graph after " +
                      std::to_string(params.max_retries) +
                      " attempts; raise topology.avg_degree or enable "
                      "topology.repair_components");
  }
  Rng rng(DeriveSeed(seed, static_cast<std::uint64_t>(params.max_retries)));
  BridgeComponents(first, rng);
  return first;
}

std::vector<std::vector<NodeId>> ConnectedComponents(const Overlay& overlay) {
  std::vector<std::vector<NodeId>> components;
  std::vector<bool> seen(overlay.node_count, false);
  std::vector<NodeId> frontier;
  for (NodeId start = 0; start < overlay.node_count; ++start) {
    if (seen[start]) continue;
    std::vector<NodeId> members;
    seen[start] = true;
    frontier.assign(1, start);
    while (!frontier.empty()) {
      NodeId u = frontier.back();
      frontier.pop_back();
      members.push_back(u);
      for (NodeId v : overlay.adjacency[u]) {
        if (!seen[v]) {
          seen[v] = true;
          frontier.push_back(v);
        }
      }
    }
    std::sort(members.begin(), members.end());
    components.push_back(std::move(members));
  }
  return components;
}

bool IsConnected(const Overlay& overlay) {
  if (overlay.node_count == 0) return true;
  return ConnectedComponents(overlay).size() == 1;
}

bool IsWellFormed(const Overlay& overlay) {
  if (overlay.adjacency.size() != overlay.node_count) return false;
  for (NodeId u = 0; u < overlay.node_count; ++u) {
    const auto& list = overlay.adjacency[u];
    if (!std::is_sorted(list.begin(), list.end())) return false;
    if (std::adjacent_find(list.begin(), list.end()) != list.end()) {
      return false;
    }
    for (NodeId v : list) {
      if (v == u || v >= overlay.node_count) return false;
      if (!overlay.HasEdge(v, u)) return false;
    }
  }
  return true;
}

}  // namespace qrepsim
