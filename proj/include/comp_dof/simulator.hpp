#pragma once

#include "comp_dof/channel.hpp"
#include "comp_dof/common.hpp"
#include "comp_dof/zf_scheme.hpp"

#include <cstdint>
#include <map>
#include <vector>

namespace comp_dof {

struct SimulationConfig {
  /// Linear transmit powers, strictly increasing, each >= 1.
  std::vector<double> power_sweep;
  int trials = 1;
  std::uint64_t seed = 0;
};

/// `first`..`last` in dB with the given step, as linear powers.
std::vector<double> power_sweep_db(double first, double last, double step);

struct RateSamples {
  std::vector<double> powers;
  /// rates[user - 1][point]: log2(1 + SINR), averaged over trials.
  std::vector<std::vector<double>> rates;
  /// Least-squares slope per user; empty when the sweep is too short to fit.
  std::vector<double> slopes;
};

/// Analytic SINR with unit noise. Every message with a beam is transmitted.
/// Transmitter j carrying n_j streams gives each at most P/n_j, so stream i
/// gets P_i = min_j P / (n_j c_{j,i}^2) over its transmitters. Users outside
/// `active` get rate 0.
RateSamples simulate_rates(const ChannelRealization& realization, const IndexSet& active,
                           const BeamDesign& beams, const SimulationConfig& config);

RateSamples simulate_rates(const ChannelRealization& realization, const SchemePlan& plan,
                           const BeamDesign& beams, const SimulationConfig& config);

/// Averages over `config.trials` realizations drawn with seeds seed, seed+1, ...
RateSamples simulate_plan(const SchemePlan& plan, const SimulationConfig& config);

/// Slope of rate against log2 P over the top half of the sweep. Needs at
/// least 3 points spanning 30 dB.
std::vector<double> estimate_dof_slope(const RateSamples& samples);

/// X_target = (Y_via - H[via][known] X_known) / H[via][target].
struct ReconstructionStep {
  int target = 0;
  int via = 0;
  int known = 0;
};

struct ReconstructionPlan {
  int K = 0;
  int M = 0;
  IndexSet used_rx;
  IndexSet given_tx;
  std::vector<ReconstructionStep> steps;
  /// Reconstruction error of X_target as a linear combination of Z_rx.
  std::map<int, std::map<int, double>> noise_coefficients;
};

/// Requires a Wyner channel (L = 1) with K a multiple of 2M+1.
ReconstructionPlan plan_wyner_reconstruction(const ChannelRealization& realization, int M);

struct ReconstructionResult {
  std::map<int, double> estimates;
  std::map<int, double> residuals;
};

/// Runs the plan in exact rational arithmetic on Y = H X + Z built from the
/// given X and Z (each of length K), so residuals carry no rounding from X.
ReconstructionResult wyner_reconstruct(const ChannelRealization& realization, int M,
                                       const std::vector<double>& x, const std::vector<double>& z);

ReconstructionResult wyner_reconstruct(const ChannelRealization& realization, const ReconstructionPlan& plan,
                                       const std::vector<double>& x, const std::vector<double>& z);

}  // namespace comp_dof
