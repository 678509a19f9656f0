#include "comp_dof/assignment.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace comp_dof;

namespace {

ChannelTopology shifted(int K, int L) { return build_topology(Connectivity::LocalShifted, K, L); }

MessageAssignment with_sets(int K, std::vector<std::pair<int, IndexSet>> sets) {
  auto a = MessageAssignment::empty(K);
  for (auto& [i, s] : sets) a = a.with_transmit_set(i, s);
  return a;
}

}  // namespace

TEST(Assignment, RejectsOutOfRangeTransmitters) {
  EXPECT_THROW(MessageAssignment(3, {{1}, {4}, {}}), Error);
  EXPECT_THROW(MessageAssignment(3, {{1}, {2}}), Error);
  EXPECT_EQ(MessageAssignment(2, {{2, 1, 2}, {}}).transmit_set(1), (IndexSet{1, 2}));
}

TEST(Spiral, WrapsAround) {
  const auto a = spiral_assign(5, 2);
  EXPECT_EQ(a.transmit_set(1), (IndexSet{1, 2}));
  EXPECT_EQ(a.transmit_set(5), (IndexSet{1, 5}));
  const auto id = spiral_assign(4, 1);
  for (int i = 1; i <= 4; ++i) EXPECT_EQ(id.transmit_set(i), (IndexSet{i}));
  const auto all = spiral_assign(3, 3);
  for (int i = 1; i <= 3; ++i) EXPECT_EQ(all.transmit_set(i), (IndexSet{1, 2, 3}));
  EXPECT_THROW(spiral_assign(3, 4), Error);
  EXPECT_THROW(spiral_assign(3, 0), Error);
}

TEST(SchemeAssign, SevenUsersThreeTransmitters) {
  const auto a = scheme_assign(7, 3, 1);
  EXPECT_EQ(a.transmit_set(1), (IndexSet{1, 2, 3}));
  EXPECT_EQ(a.transmit_set(3), (IndexSet{3}));
  EXPECT_TRUE(a.transmit_set(4).empty());
  EXPECT_EQ(a.transmit_set(5), (IndexSet{4}));
  EXPECT_EQ(a.transmit_set(7), (IndexSet{4, 5, 6}));
}

TEST(SchemeAssign, TwoInterferers) {
  const auto a = scheme_assign(6, 2, 2);
  EXPECT_EQ(a.transmit_set(1), (IndexSet{1, 2}));
  EXPECT_EQ(a.transmit_set(2), (IndexSet{2}));
  EXPECT_TRUE(a.transmit_set(3).empty());
  EXPECT_TRUE(a.transmit_set(4).empty());
  EXPECT_EQ(a.transmit_set(5), (IndexSet{3}));
  EXPECT_EQ(a.transmit_set(6), (IndexSet{3, 4}));
}

TEST(SchemeAssign, SingleTransmitterWyner) {
  const auto a = scheme_assign(3, 1, 1);
  EXPECT_EQ(a.transmit_set(1), (IndexSet{1}));
  EXPECT_TRUE(a.transmit_set(2).empty());
  EXPECT_EQ(a.transmit_set(3), (IndexSet{2}));
}

TEST(SchemeAssign, PartialClusterIsEmptyAndShiftMovesClusters) {
  const auto a = scheme_assign(9, 3, 1);
  EXPECT_EQ(a.transmit_set(7), (IndexSet{4, 5, 6}));
  EXPECT_TRUE(a.transmit_set(8).empty());
  EXPECT_TRUE(a.transmit_set(9).empty());
  const auto b = scheme_assign(9, 3, 1, 2);
  EXPECT_TRUE(b.transmit_set(1).empty());
  EXPECT_EQ(b.transmit_set(3), (IndexSet{3, 4, 5}));
  EXPECT_EQ(b.transmit_set(9), (IndexSet{6, 7, 8}));
  EXPECT_THROW(scheme_assign(4, 2, 1), Error);
}

TEST(CarriedMessages, MatchesDefinition) {
  // Transmitters 1 and 2 carry messages 1, 2 and 3 only.
  const auto fig = with_sets(5, {{1, {1}}, {2, {1, 2}}, {3, {2, 3}}, {4, {3, 4}}, {5, {4, 5}}});
  EXPECT_EQ(carried_messages(fig, {1, 2}), (IndexSet{1, 2, 3}));
  EXPECT_EQ(carried_messages(spiral_assign(5, 2), {1, 2, 3}), (IndexSet{1, 2, 3, 5}));
  EXPECT_TRUE(carried_messages(spiral_assign(5, 2), {}).empty());
}

TEST(CarriedMessages, MonotoneInS) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = oracle::random_assignment(7, 3, rng);
    const std::uint32_t big = std::uniform_int_distribution<std::uint32_t>(0, 127)(rng);
    const std::uint32_t small = big & std::uniform_int_distribution<std::uint32_t>(0, 127)(rng);
    IndexSet S, Sp;
    for (int tx = 1; tx <= 7; ++tx) {
      if (small >> (tx - 1) & 1u) S.push_back(tx);
      if (big >> (tx - 1) & 1u) Sp.push_back(tx);
    }
    const auto C = carried_messages(a, S), Cp = carried_messages(a, Sp);
    EXPECT_TRUE(std::includes(Cp.begin(), Cp.end(), C.begin(), C.end()));
  }
}

TEST(CooperationOrder, MaximumSetSize) {
  EXPECT_EQ(cooperation_order(spiral_assign(5, 2)), 2);
  EXPECT_EQ(cooperation_order(scheme_assign(7, 3, 1)), 3);
  EXPECT_EQ(cooperation_order(MessageAssignment::empty(4)), 0);
}

TEST(LocalRadius, RawIndexDistance) {
  EXPECT_EQ(local_radius(scheme_assign(7, 3, 1)), 3);
  EXPECT_EQ(local_radius(spiral_assign(4, 1)), 0);
  EXPECT_EQ(local_radius(spiral_assign(5, 2)), 4);
}

TEST(MessageGraph, ComponentAwayFromMarks) {
  const auto a = with_sets(5, {{3, {4, 5}}});
  const auto g = build_message_graph(a, shifted(5, 1), 3);
  EXPECT_EQ(g.edges, (std::vector<std::pair<int, int>>{{4, 5}}));
  EXPECT_EQ(g.marked, (IndexSet{2, 3}));
  const auto dist = g.distances_from_marks();
  EXPECT_EQ(dist[4], -1);
  EXPECT_EQ(dist[5], -1);
}

TEST(MessageGraph, EmptySetKeepsMarks) {
  const auto g = build_message_graph(MessageAssignment::empty(5), shifted(5, 2), 4);
  EXPECT_TRUE(g.edges.empty());
  EXPECT_EQ(g.marked, (IndexSet{2, 3, 4}));
}

TEST(MessageGraph, DistantMembersShareNoEdge) {
  const auto a = with_sets(5, {{3, {2, 4}}});
  const auto g = build_message_graph(a, shifted(5, 1), 3);
  EXPECT_TRUE(g.edges.empty());
  EXPECT_TRUE(contains(g.marked, 2));
}

TEST(MessageGraph, RejectsFullyConnected) {
  EXPECT_THROW(build_message_graph(spiral_assign(4, 2), build_topology(Connectivity::FullyConnected, 4), 1), Error);
}

TEST(Reduce, DropsUnreachableComponent) {
  const auto a = with_sets(5, {{3, {4, 5}}});
  const auto r = reduce_assignment(a, shifted(5, 1), 2);
  EXPECT_TRUE(r.assignment.transmit_set(3).empty());
  EXPECT_TRUE(r.violations.empty());
}

TEST(Reduce, SchemeIsAlreadyIrreducible) {
  const auto a = scheme_assign(7, 3, 1);
  EXPECT_EQ(reduce_assignment(a, shifted(7, 1), 3).assignment, a);
  const auto id = spiral_assign(6, 1);
  EXPECT_EQ(reduce_assignment(id, shifted(6, 2), 1).assignment, id);
}

TEST(Reduce, FullyConnectedIsNoOp) {
  const auto a = spiral_assign(6, 2);
  EXPECT_EQ(reduce_assignment(a, build_topology(Connectivity::FullyConnected, 6), 2).assignment, a);
  EXPECT_THROW(reduce_assignment(a, shifted(6, 1), 1), Error);
}

TEST(Reduce, PropertiesOnRandomAssignments) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 400; ++trial) {
    const int K = 3 + trial % 8;
    const int L = 1 + trial % 3 % std::max(1, K - 1);
    const int M = 1 + trial % 3;
    const auto topology = shifted(K, std::min(L, K - 1));
    const auto a = oracle::random_assignment(K, M, rng);
    const auto r = reduce_assignment(a, topology, M);
    EXPECT_TRUE(r.violations.empty());
    EXPECT_EQ(reduce_assignment(r.assignment, topology, M).assignment, r.assignment);
    for (int i = 1; i <= K; ++i) {
      const auto& before = a.transmit_set(i);
      const auto& after = r.assignment.transmit_set(i);
      EXPECT_TRUE(std::includes(before.begin(), before.end(), after.begin(), after.end()));
      const auto dist = build_message_graph(r.assignment, topology, i).distances_from_marks();
      for (int k : after) {
        EXPECT_GE(dist[k], 0);
        EXPECT_LE(dist[k], M - 1);
      }
      const auto envelope = irreducible_envelope(i, K, M, topology.interferers());
      for (int k : after) EXPECT_TRUE(contains(envelope, k)) << "message " << i << " tx " << k;
    }
  }
}
