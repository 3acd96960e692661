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

#include <cmath>
#include <numeric>

#include "doctest.h"
#include "test_util.h"

namespace qrepsim {
namespace {

using doctest::Approx;
using testing::MakeNetwork;
using testing::StarEdges;
using testing::StoredUnits;

QRepParams Defaults() { return QRepParams{}; }

TEST_CASE("default parameters validate") {
  CHECK_NOTHROW(Defaults().Validate());
  CHECK(Defaults().ReservationTimeout() == Defaults().delta);
}

TEST_CASE("parameter constraints are enforced") {
  auto rejects = [](auto mutate) {
    QRepParams p;
    mutate(p);
    CHECK_THROWS_AS(p.Validate(), ConfigError);
  };
  rejects([](QRepParams& p) { p.eta = 0.0; });
  rejects([](QRepParams& p) { p.eta = 1.0; });
  rejects([](QRepParams& p) { p.alpha = 1.5; });
  rejects([](QRepParams& p) { p.w1 = 0.5; p.w2 = 0.5; p.w3 = 0.0; });
  rejects([](QRepParams& p) { p.w1 = 0.3; p.w2 = 0.4; p.w3 = 0.3; });
  rejects([](QRepParams& p) { p.w1 = 0.4; p.w2 = 0.2; p.w3 = 0.5; });
  rejects([](QRepParams& p) { p.b_min = 0.0; });
  rejects([](QRepParams& p) { p.s_min = -1.0; });
  rejects([](QRepParams& p) { p.d_min = 0.0; });
  rejects([](QRepParams& p) { p.update_every = 0; });
  rejects([](QRepParams& p) { p.hello_ttl = 0; });
}

TEST_CASE("popularity update examples") {
  CHECK(NextPopularity(0.0, 5, 50, 0.5) == Approx(5.0));
  CHECK(NextPopularity(5.0, 50, 50, 0.5) == Approx(55.0));
  CHECK(NextPopularity(3.25, 0, 50, 0.5) == 3.25);
  CHECK(NextPopularity(3.25, 0, 0, 0.5) == 3.25);
}

TEST_CASE("requests are counted per node and per held object") {
  Network network = MakeNetwork(2, {{0, 1}});
  network.Insert(0, 1, 0, true);
  QRepParams params;
  NodeState& node = network.mutable_node(0);
  RequestRecord held = RecordRequest(node, 1, params);
  CHECK(held.held);
  CHECK_FALSE(held.refreshed);
  CHECK(node.popularity.at(1).window_requests == 1);
  CHECK(node.window_requests == 1);
  RequestRecord absent = RecordRequest(node, 3, params);
  CHECK_FALSE(absent.held);
  CHECK(node.window_requests == 2);
  CHECK(node.popularity.at(1).window_requests == 1);
  CHECK(node.total_requests == 2);
}

TEST_CASE("fifty requests trigger one refresh") {
  Network network = MakeNetwork(2, {{0, 1}});
  network.Insert(0, 1, 0, true);
  network.Insert(0, 2, 0, true);
  QRepParams params;
  NodeState& node = network.mutable_node(0);
  int refreshes = 0;
  // 5 requests for object 1, 10 for object 2, 35 for something absent.
  for (int i = 0; i < 50; ++i) {
    ObjectId obj = i < 5 ? 1 : (i < 15 ? 2 : 3);
    refreshes += RecordRequest(node, obj, params).refreshed ? 1 : 0;
  }
  CHECK(refreshes == 1);
  CHECK(node.popularity.at(1).popularity == Approx(0.5 * 5.0 / 50.0 * 100.0));
  CHECK(node.popularity.at(2).popularity == Approx(0.5 * 10.0 / 50.0 * 100.0));
  CHECK(node.popularity.at(2).rank == 1);
  CHECK(node.popularity.at(1).rank == 2);
  CHECK(node.window_requests == 0);
  CHECK(node.popularity.at(1).window_requests == 0);
}

TEST_CASE("refresh with no requests is a no-op") {
  Network network = MakeNetwork(2, {{0, 1}});
  network.Insert(0, 1, 0, true);
  NodeState& node = network.mutable_node(0);
  node.popularity.at(1).popularity = 7.0;
  UpdatePopularities(node, Defaults());
  CHECK(node.popularity.at(1).popularity == 7.0);
}

TEST_CASE("ranks break popularity ties by object id") {
  Network network = MakeNetwork(2, {{0, 1}});
  for (ObjectId obj : {3u, 1u, 2u}) network.Insert(0, obj, 0, true);
  NodeState& node = network.mutable_node(0);
  node.popularity.at(1).window_requests = 2;
  node.popularity.at(2).window_requests = 4;
  node.popularity.at(3).window_requests = 2;
  node.window_requests = 8;
  UpdatePopularities(node, Defaults());
  CHECK(node.popularity.at(2).rank == 1);
  CHECK(node.popularity.at(1).rank == 2);
  CHECK(node.popularity.at(3).rank == 3);
}

TEST_CASE("popularity never decreases under refresh") {
  Rng rng = testing::TestRng(4);
  double p = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const std::uint64_t n = 1 + UniformIndex(rng, 100);
    const std::uint64_t r = UniformIndex(rng, n + 1);
    const double next = NextPopularity(p, r, n, 0.3);
    CHECK(next >= p);
    CHECK(next == Approx(p + 0.3 * (static_cast<double>(r) /
                                     static_cast<double>(n)) * 100.0));
    p = next;
  }
}

TEST_CASE("threshold scan selects at and above p_th once") {
  Network network = MakeNetwork(2, {{0, 1}});
  for (ObjectId obj : {0u, 1u, 2u}) network.Insert(0, obj, 0, true);
  NodeState& node = network.mutable_node(0);
  node.popularity.at(0).popularity = 5.0;
  node.popularity.at(1).popularity = 4.999;
  node.popularity.at(2).popularity = 9.0;
  node.popularity.at(2).replicated = true;
  QRepParams params;
  CHECK(ScanForReplication(node, params) == std::vector<ObjectId>{0});
  params.rereplicate_on_threshold = true;
  CHECK(ScanForReplication(node, params) == std::vector<ObjectId>{0, 2});
}

TEST_CASE("initial q-value examples") {
  QRepParams p;
  CHECK(InitialQValue(p.b_min, p.s_min, p) == Approx(200.0));
  CHECK(InitialQValue(2 * p.b_min, 3 * p.s_min, p) == Approx(500.0));
  CHECK(InitialQValue(112.0, 0.0, p) == Approx(112.0 / p.b_min * 100.0));
}

TEST_CASE("hello merge adds newcomers and keeps learned values") {
  Network network = MakeNetwork(3, StarEdges(2));
  QRepParams p;
  NodeState& node = network.mutable_node(0);
  std::vector<HelloResponse> responses = {
      {1, p.b_min, static_cast<std::int64_t>(p.s_min)},
      {2, 2 * p.b_min, static_cast<std::int64_t>(2 * p.s_min)}};
  MergeHelloResponses(node, responses, p);
  CHECK(node.q_table.at(1).q_value == Approx(200.0));
  CHECK(node.q_table.at(2).q_value == Approx(400.0));
  node.q_table.at(1).q_value = 777.0;
  MergeHelloResponses(node, responses, p);
  CHECK(node.q_table.at(1).q_value == 777.0);
  MergeHelloResponses(node, {}, p);
  CHECK(node.q_table.size() == 2);
}

TEST_CASE("q-table build over a star with all leaves down is empty") {
  Network network = MakeNetwork(4, StarEdges(3));
  for (NodeId leaf = 1; leaf <= 3; ++leaf) network.SetUp(leaf, false);
  MessageIdSource ids;
  Rng rng = testing::TestRng(1);
  BuildQTable(network, 0, 10, Defaults(), ids, rng);
  CHECK(network.node(0).q_table.empty());
  CHECK(network.node(0).q_table_built_at == 10);
}

// Star: center 0 with leaves 1..n, each leaf's q set explicitly.
Network StarWithQ(const std::vector<double>& qs) {
  Network network = MakeNetwork(qs.size() + 1, StarEdges(qs.size()));
  NodeState& center = network.mutable_node(0);
  for (NodeId i = 0; i < qs.size(); ++i) center.q_table[i + 1] = {i + 1, qs[i]};
  return network;
}

TEST_CASE("selection keeps entries at or above the mean") {
  Network network = StarWithQ({100.0, 200.0, 300.0});
  CHECK(AverageQ(network.node(0)) == Approx(200.0));
  SiteSelection sel = SelectTargetSites(network, 0, 0, 0, Defaults());
  CHECK(sel.targets == std::vector<NodeId>{2, 3});
  CHECK(network.node(2).IsReserved(0, 0));
  CHECK(network.node(3).IsReserved(0, 0));
  CHECK_FALSE(network.node(1).IsReserved(0, 0));
}

TEST_CASE("single entry is its own mean") {
  Network network = StarWithQ({50.0});
  CHECK(SelectTargetSites(network, 0, 0, 0, Defaults()).targets ==
        std::vector<NodeId>{1});
}

TEST_CASE("holders, down nodes and reserved nodes are left out") {
  Network network = StarWithQ({300.0, 300.0, 300.0, 300.0});
  network.Insert(1, 0, 0, false);
  network.SetUp(2, false);
  network.mutable_node(3).replication_list[0] = {9, 500};
  SiteSelection sel = SelectTargetSites(network, 0, 0, 0, Defaults());
  CHECK(sel.targets == std::vector<NodeId>{4});
  CHECK(sel.holders == std::vector<NodeId>{1});
  CHECK(sel.down == std::vector<NodeId>{2});
  CHECK(sel.reserved_elsewhere == std::vector<NodeId>{3});
  // The existing reservation is not taken over.
  CHECK(network.node(3).replication_list.at(0).source == 9);
}

TEST_CASE("every candidate already holding yields no targets") {
  Network network = StarWithQ({10.0, 10.0});
  network.Insert(1, 0, 0, false);
  network.Insert(2, 0, 0, false);
  SiteSelection sel = SelectTargetSites(network, 0, 0, 0, Defaults());
  CHECK(sel.targets.empty());
  CHECK(sel.holders.size() == 2);
}

TEST_CASE("empty q-table is a selection error") {
  Network network = MakeNetwork(2, {{0, 1}});
  CHECK_THROWS_AS(SelectTargetSites(network, 0, 0, 0, Defaults()),
                  SelectionError);
}

TEST_CASE("expired reservations do not block selection") {
  Network network = StarWithQ({1.0});
  network.mutable_node(1).replication_list[0] = {9, 100};
  SiteSelection sel = SelectTargetSites(network, 0, 0, 100, Defaults());
  CHECK(sel.targets == std::vector<NodeId>{1});
  CHECK(network.node(1).replication_list.at(0).source == 0);
}

TEST_CASE("selection equals the brute-force mean filter") {
  Rng rng = testing::TestRng(2024);
  for (int snapshot = 0; snapshot < 100; ++snapshot) {
    const std::size_t n = 1 + UniformIndex(rng, 12);
    std::vector<double> qs(n);
    for (double& q : qs) q = static_cast<double>(UniformIndex(rng, 5)) * 50.0;
    Network network = StarWithQ(qs);
    const double mean = std::accumulate(qs.begin(), qs.end(), 0.0) /
                        static_cast<double>(n);
    std::vector<NodeId> expected;
    for (NodeId i = 0; i < n; ++i)
      if (qs[i] >= mean) expected.push_back(i + 1);
    CAPTURE(snapshot);
    CHECK(SelectTargetSites(network, 0, 0, 0, Defaults()).targets == expected);
  }
}

TEST_CASE("replicating to two free targets yields two signals") {
  Network network = StarWithQ({1.0, 1.0});
  network.Insert(0, 0, 0, true);
  SiteSelection sel = SelectTargetSites(network, 0, 0, 5, Defaults());
  ReplicationResult result = ReplicateObject(network, 0, 0, sel.targets, 5);
  CHECK(result.placed == std::vector<NodeId>{1, 2});
  REQUIRE(result.signals.size() == 2);
  CHECK(result.signals[0].from_peer == 1);
  CHECK(result.signals[0].degree == 1);
  CHECK(result.signals[0].storage_available == 49);
  CHECK(network.node(1).Holds(0));
  CHECK(network.node(1).replication_list.empty());
  CHECK(network.node(0).popularity.at(0).replicated);
  CHECK(network.node(1).store.at(0).inserted_at == 5);
  CHECK(network.node(1).popularity.at(0).popularity == 0.0);
}

TEST_CASE("target that went down before transfer sends nothing") {
  Network network = StarWithQ({1.0, 1.0});
  network.Insert(0, 0, 0, true);
  SiteSelection sel = SelectTargetSites(network, 0, 0, 0, Defaults());
  network.SetUp(2, false);
  ReplicationResult result = ReplicateObject(network, 0, 0, sel.targets, 0);
  CHECK(result.placed == std::vector<NodeId>{1});
  CHECK(result.down == std::vector<NodeId>{2});
  CHECK(result.signals.size() == 1);
  CHECK(network.node(2).replication_list.empty());
}

TEST_CASE("full target evicts before accepting") {
  Network network = MakeNetwork(2, {{0, 1}}, 4, 100.0, 1);
  network.Insert(0, 0, 0, true);
  network.Insert(1, 3, 0, false);
  network.mutable_node(0).q_table[1] = {1, 1.0};
  SiteSelection sel = SelectTargetSites(network, 0, 0, 0, Defaults());
  ReplicationResult result = ReplicateObject(network, 0, 0, sel.targets, 1);
  CHECK(result.placed == std::vector<NodeId>{1});
  CHECK(network.node(1).Holds(0));
  CHECK_FALSE(network.node(1).Holds(3));
  CHECK(network.node(1).storage_available == 0);
}

TEST_CASE("target full of originals cannot take a replica") {
  Network network = MakeNetwork(2, {{0, 1}}, 4, 100.0, 1);
  network.Insert(0, 0, 0, true);
  network.Insert(1, 3, 0, true);
  network.mutable_node(0).q_table[1] = {1, 1.0};
  SiteSelection sel = SelectTargetSites(network, 0, 0, 0, Defaults());
  ReplicationResult result = ReplicateObject(network, 0, 0, sel.targets, 1);
  CHECK(result.placed.empty());
  CHECK(result.no_space == std::vector<NodeId>{1});
  CHECK_FALSE(network.node(0).popularity.at(0).replicated);
  CHECK(network.node(1).replication_list.empty());
}

TEST_CASE("reward examples") {
  QRepParams p;
  CHECK(ComputeReward(p.d_min, p.b_min, p.s_min, p) == Approx(1000.0));
  CHECK(ComputeReward(p.d_min, p.b_min, 0.0, p) ==
        Approx((p.d_min / (p.d_min * p.w1) + 1.0 / p.w2) * 100.0));
  const double base = ComputeReward(3.0, 100.0, 20.0, p);
  const double more_bw = ComputeReward(3.0, 200.0, 20.0, p);
  const double more_dd = ComputeReward(6.0, 100.0, 20.0, p);
  CHECK(more_bw - base > more_dd - base);
}

TEST_CASE("floored reward floors each bracket") {
  QRepParams p;
  p.reward_floor = true;
  // 3/0.8 = 3.75, 100/11.2 = 8.93, 25/4 = 6.25 -> 3 + 8 + 6.
  CHECK(ComputeReward(3.0, 100.0, 25.0, p) == Approx(1700.0));
}

TEST_CASE("q update examples") {
  CHECK(UpdateQ(200.0, PeerOutcome::kPlaced, 1000.0, 0.5) == Approx(600.0));
  CHECK(UpdateQ(200.0, PeerOutcome::kDown, 1000.0, 0.5) == Approx(100.0));
  CHECK(UpdateQ(200.0, PeerOutcome::kHoldsCopy, 1000.0, 0.5) == 200.0);
  CHECK(UpdateQ(321.5, PeerOutcome::kPlaced, 321.5, 0.3) == 321.5);
}

TEST_CASE("repeated punishment decays geometrically") {
  double q = 640.0;
  for (int k = 1; k <= 10; ++k) {
    q = UpdateQ(q, PeerOutcome::kDown, 0.0, 0.5);
    CHECK(q == Approx(640.0 * std::pow(0.5, k)).epsilon(1e-12));
    CHECK(q >= 0.0);
  }
}

TEST_CASE("feedback touches participants only") {
  Network network = StarWithQ({100.0, 300.0, 300.0, 300.0, 300.0});
  network.Insert(0, 0, 0, true);
  network.Insert(3, 0, 0, false);  // holder
  network.SetUp(4, false);         // down at selection
  QRepParams p;
  SiteSelection sel = SelectTargetSites(network, 0, 0, 0, p);
  REQUIRE(sel.targets == std::vector<NodeId>{2, 5});
  network.SetUp(5, false);  // down at transfer
  ReplicationResult result = ReplicateObject(network, 0, 0, sel.targets, 0);
  NodeState& source = network.mutable_node(0);
  ApplyFeedback(source, sel, result, p);

  const NodeState& n2 = network.node(2);
  const double rho = ComputeReward(static_cast<double>(n2.degree),
                                   n2.bandwidth,
                                   static_cast<double>(n2.storage_available), p);
  CHECK(source.q_table.at(1).q_value == 100.0);
  CHECK(source.q_table.at(2).q_value == Approx(300.0 + 0.5 * (rho - 300.0)));
  CHECK(source.q_table.at(3).q_value == 300.0);
  CHECK(source.q_table.at(4).q_value == Approx(150.0));
  CHECK(source.q_table.at(5).q_value == Approx(150.0));
}

TEST_CASE("eviction prefers low popularity") {
  Network network = MakeNetwork(1, {}, 4, 100.0, 2);
  network.Insert(0, 0, 100, false);
  network.Insert(0, 1, 0, false);
  network.mutable_node(0).popularity.at(0).popularity = 1.0;
  network.mutable_node(0).popularity.at(1).popularity = 9.0;
  auto removed = EvictForSpace(network, 0, 1);
  REQUIRE(removed.has_value());
  CHECK(*removed == std::vector<ObjectId>{0});
  CHECK_FALSE(network.node(0).popularity.contains(0));
}

TEST_CASE("eviction ties go to the oldest replica") {
  Network network = MakeNetwork(1, {}, 4, 100.0, 2);
  network.Insert(0, 0, 500, false);
  network.Insert(0, 1, 10, false);
  auto removed = EvictForSpace(network, 0, 1);
  REQUIRE(removed.has_value());
  CHECK(*removed == std::vector<ObjectId>{1});
}

TEST_CASE("eviction with free space removes nothing") {
  Network network = MakeNetwork(1, {}, 4, 100.0, 3);
  network.Insert(0, 0, 0, false);
  auto removed = EvictForSpace(network, 0, 2);
  REQUIRE(removed.has_value());
  CHECK(removed->empty());
  CHECK(network.node(0).Holds(0));
}

TEST_CASE("eviction never touches originals and is all-or-nothing") {
  Network network = MakeNetwork(1, {}, 4, 100.0, 3);
  network.Insert(0, 0, 0, true);
  network.Insert(0, 1, 0, true);
  network.Insert(0, 2, 0, false);
  CHECK_FALSE(EvictForSpace(network, 0, 2).has_value());
  CHECK(network.node(0).store.size() == 3);
  auto removed = EvictForSpace(network, 0, 1);
  REQUIRE(removed.has_value());
  CHECK(*removed == std::vector<ObjectId>{2});
}

TEST_CASE("replicate and evict cycles keep storage balanced") {
  Network network = MakeNetwork(5, StarEdges(4), 30, 100.0, 6);
  QRepParams p;
  Rng rng = testing::TestRng(31);
  for (int step = 0; step < 400; ++step) {
    const NodeId node = static_cast<NodeId>(UniformIndex(rng, 5));
    const ObjectId obj = static_cast<ObjectId>(UniformIndex(rng, 30));
    PlaceReplica(network, node, obj, step);
    if (network.node(node).popularity.contains(obj))
      network.mutable_node(node).popularity.at(obj).popularity =
          static_cast<double>(UniformIndex(rng, 10));
    for (const NodeState& n : network.nodes()) {
      CHECK(StoredUnits(n) + n.storage_available == n.storage_capacity);
      CHECK(n.storage_available >= 0);
      CHECK(n.popularity.size() == n.store.size());
    }
  }
}

TEST_CASE("periodic scan replicates popular objects to good peers") {
  Network network = MakeNetwork(6, StarEdges(5));
  network.Insert(0, 0, 0, true);
  network.mutable_node(0).popularity.at(0).popularity = 10.0;
  QRepParams p;
  p.hello_walkers = 5;
  p.hello_ttl = 1;
  MessageIdSource ids;
  Rng rng = testing::TestRng(8);
  ScanStats stats = RunReplicationScan(network, 1000, p, ids, rng);
  CHECK(stats.rounds == 1);
  CHECK(stats.placements == 5);  // equal q-values: every leaf qualifies
  for (NodeId leaf = 1; leaf <= 5; ++leaf) CHECK(network.node(leaf).Holds(0));
  // A second scan finds the object already marked replicated.
  stats = RunReplicationScan(network, 2000, p, ids, rng);
  CHECK(stats.placements == 0);
}

}  // namespace
}  // namespace qrepsim
