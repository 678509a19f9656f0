#include "comp_dof/channel.hpp"

#include <cmath>
#include <random>
#include <utility>

namespace comp_dof {

bool ChannelTopology::connected(int rx, int tx) const noexcept {
  if (rx < 1 || rx > K_ || tx < 1 || tx > K_) return false;
  switch (kind_) {
    case Connectivity::FullyConnected:
      return true;
    case Connectivity::LocalOriginal:
      return tx >= rx - (L_ + 1) / 2 && tx <= rx + L_ / 2;
    case Connectivity::LocalShifted:
      return tx >= rx - L_ && tx <= rx;
  }
  return false;
}

ChannelTopology build_topology(Connectivity kind, int K, int L) {
  if (K < 1) throw Error(ErrorCode::InvalidK, "K must be >= 1, got " + std::to_string(K));
  ChannelTopology t;
  t.kind_ = kind;
  t.K_ = K;
  if (kind == Connectivity::FullyConnected) {
    t.L_ = 0;
    return t;
  }
  if (L < 0 || L >= K) {
    throw Error(ErrorCode::InvalidL,
                "L must satisfy 0 <= L < K, got L=" + std::to_string(L) + " K=" + std::to_string(K));
  }
  t.L_ = L;
  return t;
}

IndexSet connected_receivers(const ChannelTopology& topology, int tx) {
  const int K = topology.users();
  if (tx < 1 || tx > K) throw Error(ErrorCode::IndexOutOfRange, "tx " + std::to_string(tx));
  IndexSet out;
  for (int rx = 1; rx <= K; ++rx)
    if (topology.connected(rx, tx)) out.push_back(rx);
  return out;
}

IndexSet connected_transmitters(const ChannelTopology& topology, int rx) {
  const int K = topology.users();
  if (rx < 1 || rx > K) throw Error(ErrorCode::IndexOutOfRange, "rx " + std::to_string(rx));
  IndexSet out;
  for (int tx = 1; tx <= K; ++tx)
    if (topology.connected(rx, tx)) out.push_back(tx);
  return out;
}

ShiftedEquivalent equivalent_shift(const ChannelTopology& topology) {
  if (topology.kind() != Connectivity::LocalOriginal)
    throw Error(ErrorCode::UnsupportedTopology, "equivalent_shift expects a LocalOriginal topology");
  const int x = topology.interferers() / 2;
  const int K = topology.users() - x;
  if (K < 1 || topology.interferers() >= K)
    throw Error(ErrorCode::TooFewUsers, "not enough users left after dropping " + std::to_string(x));
  return {build_topology(Connectivity::LocalShifted, K, topology.interferers()), x};
}

ChannelRealization::ChannelRealization(ChannelTopology topology, std::vector<double> coefficients,
                                       std::uint64_t seed)
    : topology_(std::move(topology)), coefficients_(std::move(coefficients)), seed_(seed) {
  const auto K = static_cast<std::size_t>(topology_.users());
  if (coefficients_.size() != K * K)
    throw Error(ErrorCode::InvalidArgument, "coefficient array must be K*K");
}

std::size_t ChannelRealization::index(int rx, int tx) const {
  const int K = topology_.users();
  if (rx < 1 || rx > K || tx < 1 || tx > K)
    throw Error(ErrorCode::IndexOutOfRange,
                "H[" + std::to_string(rx) + "][" + std::to_string(tx) + "]");
  return static_cast<std::size_t>(rx - 1) * static_cast<std::size_t>(K) +
         static_cast<std::size_t>(tx - 1);
}

ChannelRealization ChannelRealization::with_coefficient(int rx, int tx, double value) const {
  auto copy = coefficients_;
  copy[index(rx, tx)] = value;
  return ChannelRealization(topology_, std::move(copy), seed_);
}

ChannelRealization realize(const ChannelTopology& topology, std::uint64_t seed) {
  const int K = topology.users();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> h(static_cast<std::size_t>(K) * static_cast<std::size_t>(K), 0.0);
  for (int rx = 1; rx <= K; ++rx) {
    for (int tx = 1; tx <= K; ++tx) {
      if (!topology.connected(rx, tx)) continue;
      double v = normal(rng);
      while (std::abs(v) < kGenericFloor) v = normal(rng);
      h[static_cast<std::size_t>(rx - 1) * K + (tx - 1)] = v;
    }
  }
  return ChannelRealization(topology, std::move(h), seed);
}

std::string to_string(Connectivity kind) {
  switch (kind) {
    case Connectivity::FullyConnected: return "full";
    case Connectivity::LocalOriginal: return "local_original";
    case Connectivity::LocalShifted: return "local_shifted";
  }
  return "full";
}

Connectivity connectivity_from_string(const std::string& name) {
  if (name == "full") return Connectivity::FullyConnected;
  if (name == "local_original") return Connectivity::LocalOriginal;
  if (name == "local_shifted") return Connectivity::LocalShifted;
  throw Error(ErrorCode::SchemaViolation, "unknown topology kind '" + name + "'");
}

}  // namespace comp_dof
