#pragma once

#include "comp_dof/assignment.hpp"
#include "comp_dof/channel.hpp"
#include "comp_dof/common.hpp"

#include <map>
#include <vector>

namespace comp_dof {

/// One block of 2M+L consecutive users. Indices are absolute.
struct Cluster {
  int offset = 0;  // users offset+1 .. offset+2M+L
  IndexSet S1;
  IndexSet S2;
  IndexSet inactive_rx;
  IndexSet silent_tx;
};

struct SchemePlan {
  int K = 0;
  int M = 0;
  int L = 0;
  int shift = 0;
  std::vector<Cluster> clusters;
  MessageAssignment assignment;
  /// Receivers each active message is nulled at, in solve order.
  std::map<int, std::vector<int>> cancel_sets;

  IndexSet active_users() const;
  ChannelTopology topology() const;
};

/// Tiles clusters starting after `shift` users. Throws IaRegime when 2M < L
/// (zero forcing is worse than 1/2 there) and TooFewUsers when K < 2M+L.
SchemePlan plan_clusters(int K, int M, int L, int shift = 0);

struct MessageBeam {
  int base = 0;
  std::map<int, double> coefficients;  // tx -> c_{tx,i}
};

/// X_j = sum over messages i with j in T_i of c_{j,i} s_i.
struct BeamDesign {
  int K = 0;
  std::map<int, MessageBeam> beams;

  double coefficient(int tx, int message) const;
  /// sum_j H[rx][j] c_{j,message}.
  double effective_gain(const ChannelRealization& realization, int rx, int message) const;
  /// sum_i c_{tx,i}^2.
  double transmit_energy(int tx) const;
};

inline constexpr double kSingularDivisor = 1e-12;

/// Successive design: base coefficient 1, then one new coefficient per
/// receiver of C_i. Throws SingularChannel on a divisor below 1e-12.
BeamDesign design_beams(const ChannelRealization& realization, const SchemePlan& plan);

/// Null-space design for any feasible (assignment, active) pair: c_i is the
/// projection of rx i's channel row onto the null space of the other active
/// receivers' rows, scaled so its largest entry is 1.
BeamDesign design_nullspace_beams(const ChannelRealization& realization,
                                  const MessageAssignment& assignment, const IndexSet& active);

struct ReceiverInterference {
  int rx = 0;
  double absolute = 0.0;
  /// absolute / sum of |H[rx][j] c_{j,i}| over the same terms.
  double relative = 0.0;
  double own_gain = 0.0;
};

struct InterferenceReport {
  double max_residual = 0.0;
  double max_relative_residual = 0.0;
  double min_own_gain = 0.0;
  std::vector<ReceiverInterference> per_rx;
  /// S1 messages unseen at S2 receivers and vice versa; last-L silence.
  bool structural_silence = true;
};

InterferenceReport verify_zero_interference(const ChannelRealization& realization,
                                            const IndexSet& active, const BeamDesign& beams);

InterferenceReport verify_zero_interference(const ChannelRealization& realization,
                                            const SchemePlan& plan, const BeamDesign& beams);

/// Combinatorial cross-set and cross-cluster silence of a plan.
bool structural_silence(const SchemePlan& plan);

/// Session t uses the cluster tiling shifted by t mod (2M+L) users.
std::vector<SchemePlan> reuse_schedule(int K, int M, int L, int sessions);
std::vector<SchemePlan> reuse_schedule(int K, int M, int L);

struct PlanDof {
  std::vector<Rational> per_user;
  /// Users covered by a complete cluster in every session.
  std::vector<bool> interior;
  Rational interior_average;
  Rational overall_average;
};

PlanDof plan_dof(const std::vector<SchemePlan>& plans);

}  // namespace comp_dof
