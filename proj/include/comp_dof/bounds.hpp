#pragma once

#include "comp_dof/assignment.hpp"
#include "comp_dof/channel.hpp"
#include "comp_dof/common.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace comp_dof {

/// Counters of the three-transmitter construction; x3 = 2*x1 + 1 + x2 = K - (x1 + x2).
struct M3Counters {
  int x1 = 0;
  int x2 = 0;
  int x3 = 0;
};

/// A transmitter set S together with the messages C_S it carries.
struct WitnessRecord {
  IndexSet S;
  IndexSet carried;
  std::optional<M3Counters> m3;
};

enum class BoundMethod { SubsetExact, SubsetGreedy, ClosedForm, Pairwise };

struct DofBound {
  Rational value;
  std::optional<WitnessRecord> witness;
  BoundMethod method = BoundMethod::SubsetExact;
};

std::string to_string(BoundMethod method);

enum class SubsetMode { Exact, Greedy };

inline constexpr int kMaxExactSubsetUsers = 24;

/// min over S of max(|C_S|, K - |S|). Exact mode enumerates subsets (K <= 24);
/// greedy mode grows S by least marginal |C_S| and never undershoots exact.
DofBound subset_bound(const MessageAssignment& assignment, SubsetMode mode);

/// max(|C_S|, K - |S|) for the witness's S.
int witness_value(const WitnessRecord& witness, int K);

/// Builds S with |S| = (K-1)/M and |C_S| <= (M-1)|S| + 1 for any assignment of
/// cooperation order <= M (M >= 2). Throws Infeasible when preconditions fail.
WitnessRecord greedy_witness(const MessageAssignment& assignment, int M);

/// Two-stage construction for cooperation order <= 3; requires (K+1)/4 to be an
/// even positive integer. Returns |S| = x1 + x2 with |C_S| <= x3 = 5(K+1)/8.
WitnessRecord m3_witness(const MessageAssignment& assignment);

enum class ChannelClass { Full, Local };
enum class CooperationClass { General, Local };
enum class TauQuantity { Dof, ZeroForcing };
enum class TauRelation { Exact, UpperBound, LowerBound };

struct TauSetting {
  ChannelClass channel = ChannelClass::Full;
  int M = 1;
  int L = 0;
  CooperationClass cooperation = CooperationClass::General;
  TauQuantity quantity = TauQuantity::Dof;
};

struct TauValue {
  Rational value;
  TauRelation relation = TauRelation::Exact;
};

std::string to_string(TauRelation relation);

/// Asymptotic per-user DoF from the closed-form results (table lookup).
TauValue closed_form_tau(const TauSetting& setting);

/// Edges {i, s}, i < s, with d_i + d_s <= 1 implied by T_i = {j} and s in R_j.
std::vector<std::pair<int, int>> pairwise_constraints(const ChannelTopology& topology,
                                                      const MessageAssignment& assignment);

inline constexpr int kMaxPairwiseUsers = 30;

/// Optimum of max sum d subject to the pairwise constraints, 0 <= d <= 1 and
/// d = 0 for empty transmit sets: (K' + max_I (|I| - |N(I)|)) / 2 over independent I.
DofBound no_coop_bound(const ChannelTopology& topology, const MessageAssignment& assignment);

}  // namespace comp_dof
