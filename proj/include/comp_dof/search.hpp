#pragma once

#include "comp_dof/assignment.hpp"
#include "comp_dof/channel.hpp"
#include "comp_dof/common.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace comp_dof {

enum class FeasibilityReason {
  EmptyTransmitSet,
  OwnReceiverUnreachable,
  /// No beam over T_i nulls every other active receiver while reaching rx i.
  CannotCancel,
  /// More active receivers than contributing transmitters.
  TooManyReceivers,
};

std::string to_string(FeasibilityReason reason);

struct FeasibilityViolation {
  int message = 0;
  /// |V_{T_i}|: active receivers (own included) reached by T_i.
  int reached_active = 0;
  int transmit_set_size = 0;
  FeasibilityReason reason = FeasibilityReason::CannotCancel;
};

struct FeasibilityReport {
  bool feasible = true;
  std::vector<FeasibilityViolation> violations;
};

/// Zero-forcing feasibility on generic channels: every active user i needs a
/// beam over T_i that is nonzero at rx i and vanishes at every other active
/// receiver. Decided exactly through structural (matching) rank.
FeasibilityReport zf_feasible(const ChannelTopology& topology, const MessageAssignment& assignment,
                              const IndexSet& active);

/// Transmitters of T_i whose coefficient is not forced to zero by cancelling
/// at the other active receivers.
IndexSet contributing_transmitters(const ChannelTopology& topology, const IndexSet& transmit_set,
                                   int message, const IndexSet& active);

/// Active receivers (own included) reached by any transmitter in `transmitters`.
IndexSet reached_active_receivers(const ChannelTopology& topology, const IndexSet& transmitters,
                                  const IndexSet& active);

struct SearchLimits {
  int max_users = 12;
  int max_cooperation = 3;
  /// Restrict T_i to {i-ML, ..., i+(M-1)L}.
  bool restrict_to_envelope = true;
  /// Start from the window-cap upper bound instead of K.
  bool use_window_cap = true;
};

struct SearchResult {
  int value = 0;
  MessageAssignment witness;
  IndexSet active;
  std::uint64_t nodes_explored = 0;
};

/// Exhaustive maximum number of simultaneously active users under zero forcing
/// with cooperation order M. Ties resolve to the lexicographically smallest
/// active set; each T_i is the smallest feasible set (by size, then lex order).
SearchResult max_zf_dof(const ChannelTopology& topology, int M, const SearchLimits& limits = {});

/// Same maximum for a fixed assignment.
SearchResult max_zf_active(const ChannelTopology& topology, const MessageAssignment& assignment,
                           int max_users = 16);

/// Every run of 2M+L consecutive users holds at most 2M active users.
bool window_cap_check(const IndexSet& active, int K, int M, int L);
bool window_cap_check(const SearchResult& result, int M, int L);

/// Largest active count compatible with the window cap at K users.
int window_cap_upper_bound(int K, int M, int L);

/// Worker threads for internally parallel searches; honours COMP_DOF_THREADS.
unsigned worker_count();

}  // namespace comp_dof
