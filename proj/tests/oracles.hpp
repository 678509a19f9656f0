// Independent reference computations used to cross-check the library.
#pragma once

#include "comp_dof/assignment.hpp"
#include "comp_dof/channel.hpp"
#include "comp_dof/zf_scheme.hpp"

#include <Eigen/Dense>

#include <map>
#include <random>
#include <vector>

namespace oracle {

using comp_dof::ChannelRealization;
using comp_dof::ChannelTopology;
using comp_dof::IndexSet;
using comp_dof::MessageAssignment;

// min over all 2^K transmitter subsets of max(|C_S|, K - |S|), by plain enumeration.
int subset_bound(const MessageAssignment& a);

// n - nu(double cover)/2 for the pairwise-constraint graph; returned doubled to stay integral.
int twice_pairwise_lp(int n, const std::vector<std::pair<int, int>>& edges);

// Beam for `message` from one dense solve of the cancellation system at `cancel`.
std::map<int, double> dense_beam(const ChannelRealization& h, const IndexSet& transmit_set, int base,
                                 const std::vector<int>& cancel);

// Numerical zero-forcing feasibility on a concrete channel (SVD null space).
bool numeric_message_feasible(const ChannelRealization& h, const IndexSet& transmit_set, int message,
                              const IndexSet& active);
bool numeric_feasible(const ChannelRealization& h, const MessageAssignment& a, const IndexSet& active);

// Maximum active users over all active sets and all transmit sets of size <= M
// inside [1, K], decided numerically on `h`.
int numeric_max_zf(const ChannelRealization& h, int M);

// Wyner channel reconstruction: rows of the inverse of the local block system.
// Result maps a recovered transmitter to its noise coefficients {rx -> coefficient}.
std::map<int, std::map<int, double>> dense_reconstruction_noise(const ChannelRealization& h, int M);

MessageAssignment random_assignment(int K, int M, std::mt19937_64& rng, bool allow_empty = true);

// Random assignment with every T_i inside [i - radius, i + radius].
MessageAssignment random_local_assignment(int K, int M, int radius, std::mt19937_64& rng);

}  // namespace oracle
