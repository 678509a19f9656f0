#pragma once

#include "comp_dof/channel.hpp"
#include "comp_dof/common.hpp"

#include <utility>
#include <vector>

namespace comp_dof {

/// Transmit sets T_1..T_K: T_i lists the transmitters that know message i.
/// An empty set means the message is not transmitted.
class MessageAssignment {
 public:
  MessageAssignment() = default;
  /// Every set is normalized; every index must lie in [1, K].
  MessageAssignment(int K, std::vector<IndexSet> sets);

  static MessageAssignment empty(int K);

  int users() const noexcept { return K_; }
  const IndexSet& transmit_set(int message) const;
  const std::vector<IndexSet>& sets() const noexcept { return sets_; }

  MessageAssignment with_transmit_set(int message, IndexSet set) const;

  bool operator==(const MessageAssignment&) const = default;

 private:
  int K_ = 0;
  std::vector<IndexSet> sets_;
};

MessageAssignment spiral_assign(int K, int M);

/// Cluster assignment of the zero-forcing scheme, with cluster boundaries
/// starting at user `shift` + 1. Users outside complete clusters get empty sets.
MessageAssignment scheme_assign(int K, int M, int L, int shift = 0);

/// C_S: messages carried by at least one transmitter in S.
IndexSet carried_messages(const MessageAssignment& assignment, const IndexSet& transmitters);

/// max_i |T_i|.
int cooperation_order(const MessageAssignment& assignment);

/// max_i max_{t in T_i} |t - i| measured on raw indices.
int local_radius(const MessageAssignment& assignment);

/// G_{W_i,T_i}: vertices [1..K], edges between members of T_i at distance <= L,
/// marked vertices are the transmitters heard by rx i.
struct MessageGraph {
  int message = 0;
  int users = 0;
  std::vector<std::pair<int, int>> edges;  // x < y, lexicographic
  IndexSet marked;

  /// Unweighted BFS distance from the nearest marked vertex, -1 if unreachable.
  std::vector<int> distances_from_marks() const;
};

MessageGraph build_message_graph(const MessageAssignment& assignment,
                                 const ChannelTopology& topology, int message);

struct EnvelopeViolation {
  int message = 0;
  int transmitter = 0;
};

struct ReductionResult {
  MessageAssignment assignment;
  /// Members of reduced sets outside {i-ML, ..., i+(M-1)L}; empty unless a bug.
  std::vector<EnvelopeViolation> violations;
};

/// Drops every k in T_i whose vertex in G_{W_i,T_i} shares no component with a
/// marked vertex. FullyConnected input is returned unchanged.
ReductionResult reduce_assignment(const MessageAssignment& assignment,
                                  const ChannelTopology& topology, int M);

/// {i-ML, ..., i+(M-1)L} clipped to [1, K].
IndexSet irreducible_envelope(int message, int K, int M, int L);

}  // namespace comp_dof
