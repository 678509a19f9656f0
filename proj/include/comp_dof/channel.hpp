#pragma once

#include "comp_dof/common.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace comp_dof {

enum class Connectivity {
  FullyConnected,
  /// rx i hears tx j iff j in [i - ceil(L/2), i + floor(L/2)].
  LocalOriginal,
  /// rx i hears tx j iff j in [i - L, i]; tx j reaches rx j..j+L.
  LocalShifted,
};

/// Connectivity pattern of a K-user interference channel. Indices are 1-based.
class ChannelTopology {
 public:
  ChannelTopology() = default;

  Connectivity kind() const noexcept { return kind_; }
  int users() const noexcept { return K_; }
  /// Number of interferers per receiver; 0 for FullyConnected.
  int interferers() const noexcept { return L_; }

  bool is_local() const noexcept { return kind_ != Connectivity::FullyConnected; }

  /// True when tx `tx` reaches rx `rx`; false for out-of-range indices.
  bool connected(int rx, int tx) const noexcept;

  bool operator==(const ChannelTopology&) const = default;

 private:
  friend ChannelTopology build_topology(Connectivity, int, int);
  Connectivity kind_ = Connectivity::FullyConnected;
  int K_ = 1;
  int L_ = 0;
};

/// Validates and builds a topology. FullyConnected ignores L.
ChannelTopology build_topology(Connectivity kind, int K, int L = 0);

/// Receivers reached by transmitter `tx`, ascending.
IndexSet connected_receivers(const ChannelTopology& topology, int tx);

/// Transmitters heard by receiver `rx`, ascending.
IndexSet connected_transmitters(const ChannelTopology& topology, int rx);

struct ShiftedEquivalent {
  ChannelTopology topology;
  /// Silenced leading transmitters / deactivated trailing receivers.
  int dropped = 0;
};

/// Silences the first floor(L/2) transmitters and the last floor(L/2)
/// receivers of a LocalOriginal channel. Shifted tx t corresponds to
/// original tx t + dropped; receivers keep their labels.
ShiftedEquivalent equivalent_shift(const ChannelTopology& topology);

/// Sampled coefficients H[rx][tx] (stored 0-based, row-major).
class ChannelRealization {
 public:
  ChannelRealization(ChannelTopology topology, std::vector<double> coefficients,
                     std::uint64_t seed);

  const ChannelTopology& topology() const noexcept { return topology_; }
  std::uint64_t seed() const noexcept { return seed_; }
  int users() const noexcept { return topology_.users(); }

  /// 1-based access H_{rx,tx}.
  double h(int rx, int tx) const { return coefficients_[index(rx, tx)]; }
  const std::vector<double>& coefficients() const noexcept { return coefficients_; }

  ChannelRealization with_coefficient(int rx, int tx, double value) const;

 private:
  std::size_t index(int rx, int tx) const;
  ChannelTopology topology_;
  std::vector<double> coefficients_;
  std::uint64_t seed_;
};

/// Magnitude floor applied to every nonzero coefficient.
inline constexpr double kGenericFloor = 1e-3;

/// Draws i.i.d. standard normal coefficients on connected pairs, redrawing any
/// value with magnitude below kGenericFloor. Deterministic per (topology, seed).
ChannelRealization realize(const ChannelTopology& topology, std::uint64_t seed);

std::string to_string(Connectivity kind);
Connectivity connectivity_from_string(const std::string& name);

}  // namespace comp_dof
