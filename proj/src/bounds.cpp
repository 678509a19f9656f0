#include "comp_dof/bounds.hpp"

#include <boost/dynamic_bitset.hpp>

#include <algorithm>
#include <bit>
#include <cstdint>
#include <stdexcept>

namespace comp_dof {

std::string to_string(BoundMethod method) {
  switch (method) {
    case BoundMethod::SubsetExact: return "subset_exact";
    case BoundMethod::SubsetGreedy: return "subset_greedy";
    case BoundMethod::ClosedForm: return "closed_form";
    case BoundMethod::Pairwise: return "pairwise";
  }
  return "unknown";
}

std::string to_string(TauRelation relation) {
  switch (relation) {
    case TauRelation::Exact: return "exact";
    case TauRelation::UpperBound: return "upper bound";
    case TauRelation::LowerBound: return "lower bound";
  }
  return "unknown";
}

namespace {

using Bits = boost::dynamic_bitset<>;

// Row j-1: messages carried by transmitter j.
std::vector<Bits> carried_by_transmitter(const MessageAssignment& a) {
  const int K = a.users();
  std::vector<Bits> out(static_cast<std::size_t>(K), Bits(static_cast<std::size_t>(K)));
  for (int i = 1; i <= K; ++i)
    for (int tx : a.transmit_set(i)) out[tx - 1].set(static_cast<std::size_t>(i - 1));
  return out;
}

IndexSet to_index_set(const Bits& b) {
  IndexSet out;
  for (auto p = b.find_first(); p != Bits::npos; p = b.find_next(p)) out.push_back(static_cast<int>(p) + 1);
  return out;
}

IndexSet to_index_set(std::uint32_t mask) {
  IndexSet out;
  for (int p = 0; mask != 0; ++p, mask >>= 1)
    if (mask & 1u) out.push_back(p + 1);
  return out;
}

class ExactSubsetSearch {
 public:
  explicit ExactSubsetSearch(const MessageAssignment& a) : K_(a.users()), carried_(a.users(), 0) {
    for (int i = 1; i <= K_; ++i)
      for (int tx : a.transmit_set(i)) carried_[tx - 1] |= (1u << (i - 1));
  }

  DofBound run() {
    int best_value = K_;
    std::uint32_t best_S = 0;
    for (int size = K_; size >= 1; --size) {
      if (K_ - size >= best_value) break;
      limit_ = best_value;
      floor_ = K_ - size;
      found_ = false;
      done_ = false;
      dfs(0, size, 0u, 0u);
      if (!found_) continue;
      const int value = std::max(std::popcount(found_C_), K_ - size);
      if (value < best_value) {
        best_value = value;
        best_S = found_S_;
      }
    }
    WitnessRecord w;
    w.S = to_index_set(best_S);
    std::uint32_t C = 0;
    for (int tx : w.S) C |= carried_[tx - 1];
    w.carried = to_index_set(C);
    return {Rational(best_value), w, BoundMethod::SubsetExact};
  }

 private:
  // Lexicographic DFS over subsets of fixed size; records the first subset that
  // strictly lowers |C_S| below limit_.
  void dfs(int next, int remaining, std::uint32_t S, std::uint32_t C) {
    if (done_ || std::popcount(C) >= limit_) return;
    if (remaining == 0) {
      limit_ = std::popcount(C);
      found_ = true;
      found_S_ = S;
      found_C_ = C;
      // Below K - |S| the value cannot drop further for this size.
      done_ = limit_ <= floor_;
      return;
    }
    for (int tx = next; tx <= K_ - remaining; ++tx)
      dfs(tx + 1, remaining - 1, S | (1u << tx), C | carried_[tx]);
  }

  int K_;
  std::vector<std::uint32_t> carried_;
  int limit_ = 0;
  int floor_ = 0;
  bool found_ = false;
  bool done_ = false;
  std::uint32_t found_S_ = 0;
  std::uint32_t found_C_ = 0;
};

DofBound greedy_subset(const MessageAssignment& a) {
  const int K = a.users();
  const auto carried = carried_by_transmitter(a);
  Bits S(static_cast<std::size_t>(K)), C(static_cast<std::size_t>(K));
  int best_value = K;
  Bits best_S = S;
  for (int size = 1; size <= K; ++size) {
    int pick = -1;
    std::size_t pick_count = 0;
    for (int tx = 0; tx < K; ++tx) {
      if (S.test(static_cast<std::size_t>(tx))) continue;
      const auto count = (C | carried[tx]).count();
      if (pick < 0 || count < pick_count) {
        pick = tx;
        pick_count = count;
      }
    }
    S.set(static_cast<std::size_t>(pick));
    C |= carried[pick];
    const int value = std::max(static_cast<int>(C.count()), K - size);
    if (value < best_value) {
      best_value = value;
      best_S = S;
    }
  }
  WitnessRecord w;
  w.S = to_index_set(best_S);
  w.carried = carried_messages(a, w.S);
  return {Rational(best_value), w, BoundMethod::SubsetGreedy};
}

// Adds the transmitter outside S that brings the fewest new messages into C,
// smallest index first on ties.
void extend_least_marginal(const std::vector<Bits>& carried, Bits& S, Bits& C) {
  int pick = -1;
  std::size_t pick_count = 0;
  for (std::size_t tx = 0; tx < carried.size(); ++tx) {
    if (S.test(tx)) continue;
    const auto count = (C | carried[tx]).count();
    if (pick < 0 || count < pick_count) {
      pick = static_cast<int>(tx);
      pick_count = count;
    }
  }
  if (pick < 0) throw std::logic_error("no transmitter left to extend the witness");
  S.set(static_cast<std::size_t>(pick));
  C |= carried[static_cast<std::size_t>(pick)];
}

// Pigeonhole seed followed by extensions with |C| <= (M-1)|S| + 1 after each step.
void grow_order_m(const std::vector<Bits>& carried, int K, int M, int target, Bits& S, Bits& C) {
  if (target <= 0) return;
  extend_least_marginal(carried, S, C);
  if (static_cast<int>(C.count()) > M)
    throw std::logic_error("pigeonhole seed exceeds M messages");
  for (int n = 1; n < target; ++n) {
    const long long cA = static_cast<long long>(C.count());
    const long long budget = static_cast<long long>(M - 1) * (n + 1) + 1;
    if (K > budget) {
      const long long lhs = static_cast<long long>(M) * (K - cA);
      const long long rhs = static_cast<long long>(K - n) * (budget + 1 - cA);
      if (!(lhs < rhs)) throw std::logic_error("extension certificate violated");
    }
    extend_least_marginal(carried, S, C);
    if (static_cast<long long>(C.count()) > budget)
      throw std::logic_error("witness extension exceeded its message budget");
  }
}

}  // namespace

DofBound subset_bound(const MessageAssignment& assignment, SubsetMode mode) {
  if (mode == SubsetMode::Greedy) return greedy_subset(assignment);
  if (assignment.users() > kMaxExactSubsetUsers)
    throw Error(ErrorCode::TooLargeForExact,
                "exact subset search supports K <= " + std::to_string(kMaxExactSubsetUsers));
  return ExactSubsetSearch(assignment).run();
}

int witness_value(const WitnessRecord& witness, int K) {
  return std::max(static_cast<int>(witness.carried.size()), K - static_cast<int>(witness.S.size()));
}

WitnessRecord greedy_witness(const MessageAssignment& assignment, int M) {
  const int K = assignment.users();
  if (M < 2) throw Error(ErrorCode::Infeasible, "the witness construction needs M >= 2");
  if (cooperation_order(assignment) > M)
    throw Error(ErrorCode::Infeasible, "assignment exceeds cooperation order " + std::to_string(M));
  if ((K - 1) % M != 0)
    throw Error(ErrorCode::Infeasible, "(K-1)/M must be an integer; pad K first");
  const auto carried = carried_by_transmitter(assignment);
  Bits S(static_cast<std::size_t>(K)), C(static_cast<std::size_t>(K));
  grow_order_m(carried, K, M, (K - 1) / M, S, C);
  return {to_index_set(S), to_index_set(C), std::nullopt};
}

WitnessRecord m3_witness(const MessageAssignment& assignment) {
  const int K = assignment.users();
  if (cooperation_order(assignment) > 3)
    throw Error(ErrorCode::Infeasible, "assignment exceeds cooperation order 3");
  if ((K + 1) % 8 != 0)
    throw Error(ErrorCode::InvalidK, "(K+1)/4 must be an even positive integer, got K=" + std::to_string(K));
  const int x1 = (K + 1) / 4;
  const int x2 = (K - 7) / 8;
  const int x3 = 2 * x1 + 1 + x2;
  if (x3 != K - (x1 + x2)) throw std::logic_error("x3 identity failed");

  const auto carried = carried_by_transmitter(assignment);
  Bits S(static_cast<std::size_t>(K)), C(static_cast<std::size_t>(K));
  grow_order_m(carried, K, 3, x1, S, C);
  if (static_cast<int>(C.count()) > 2 * x1 + 1) throw std::logic_error("first stage over budget");

  for (int n = x1; n < x1 + x2; ++n) {
    const long long cA = static_cast<long long>(C.count());
    const long long x = n + x1 + 1;
    if (K > x + 1) {
      const long long lhs = 3LL * (K - cA);
      const long long rhs = static_cast<long long>(K - n) * (n + x1 + 3 - cA);
      if (!(lhs < rhs)) throw std::logic_error("second-stage extension certificate violated");
    }
    extend_least_marginal(carried, S, C);
    if (static_cast<long long>(C.count()) > n + x1 + 2)
      throw std::logic_error("second-stage extension exceeded its message budget");
  }
  if (static_cast<int>(C.count()) > x3) throw std::logic_error("final witness exceeds x3");
  return {to_index_set(S), to_index_set(C), M3Counters{x1, x2, x3}};
}

TauValue closed_form_tau(const TauSetting& s) {
  if (s.M < 1) throw Error(ErrorCode::UnknownSetting, "M must be >= 1");
  const auto M = static_cast<std::int64_t>(s.M);
  if (s.channel == ChannelClass::Full) {
    if (s.quantity == TauQuantity::ZeroForcing)
      throw Error(ErrorCode::UnknownSetting, "zero-forcing DoF is tabulated for local channels only");
    if (s.cooperation == CooperationClass::Local || M <= 2) return {Rational(1, 2), TauRelation::Exact};
    if (M == 3) return {Rational(5, 8), TauRelation::UpperBound};
    return {Rational(M - 1, M), TauRelation::UpperBound};
  }
  if (s.L < 1) throw Error(ErrorCode::UnknownSetting, "local channels need L >= 1");
  const auto L = static_cast<std::int64_t>(s.L);
  const Rational zf(2 * M, 2 * M + L);
  if (s.quantity == TauQuantity::ZeroForcing) return {zf, TauRelation::Exact};
  // Local cooperation loses nothing on locally connected channels.
  if (L == 1) return {zf, TauRelation::Exact};
  if (M == 1) return {Rational(1, 2), TauRelation::Exact};
  return {std::max(Rational(1, 2), zf), TauRelation::LowerBound};
}

std::vector<std::pair<int, int>> pairwise_constraints(const ChannelTopology& topology,
                                                      const MessageAssignment& assignment) {
  if (topology.users() != assignment.users())
    throw Error(ErrorCode::InvalidArgument, "assignment and topology disagree on K");
  if (cooperation_order(assignment) > 1)
    throw Error(ErrorCode::CooperationNotOne, "pairwise constraints need single-transmitter sets");
  std::vector<std::pair<int, int>> edges;
  for (int i = 1; i <= assignment.users(); ++i) {
    const auto& t = assignment.transmit_set(i);
    if (t.empty()) continue;
    for (int s : connected_receivers(topology, t.front())) {
      if (s == i || assignment.transmit_set(s).empty()) continue;
      edges.emplace_back(std::min(i, s), std::max(i, s));
    }
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

namespace {

// Maximizes |I| - |N(I)| over independent sets I by branch and bound.
class SurplusSearch {
 public:
  SurplusSearch(int n, const std::vector<std::pair<int, int>>& edges) : adj_(static_cast<std::size_t>(n)) {
    for (auto [a, b] : edges) {
      adj_[a].push_back(b);
      adj_[b].push_back(a);
    }
  }

  int run() {
    state_.assign(adj_.size(), kFree);
    best_ = 0;
    dfs(0, 0);
    return best_;
  }

 private:
  enum : char { kFree, kIn, kNeighbor };

  void dfs(std::size_t v, int score) {
    while (v < adj_.size() && state_[v] == kNeighbor) ++v;
    if (v == adj_.size()) {
      best_ = std::max(best_, score);
      return;
    }
    int optimistic = score;
    for (std::size_t u = v; u < adj_.size(); ++u)
      if (state_[u] == kFree) ++optimistic;
    if (optimistic <= best_) return;

    std::vector<int> newly;
    for (int w : adj_[v])
      if (state_[w] == kFree) newly.push_back(w);
    state_[v] = kIn;
    for (int w : newly) state_[w] = kNeighbor;
    dfs(v + 1, score + 1 - static_cast<int>(newly.size()));
    for (int w : newly) state_[w] = kFree;
    state_[v] = kFree;

    dfs(v + 1, score);
  }

  std::vector<std::vector<int>> adj_;
  std::vector<char> state_;
  int best_ = 0;
};

}  // namespace

DofBound no_coop_bound(const ChannelTopology& topology, const MessageAssignment& assignment) {
  const auto edges = pairwise_constraints(topology, assignment);
  std::vector<int> vertex_of(static_cast<std::size_t>(assignment.users()) + 1, -1);
  int n = 0;
  for (int i = 1; i <= assignment.users(); ++i)
    if (!assignment.transmit_set(i).empty()) vertex_of[i] = n++;
  if (n > kMaxPairwiseUsers)
    throw Error(ErrorCode::TooLargeForExact,
                "pairwise bound supports at most " + std::to_string(kMaxPairwiseUsers) + " transmitting users");
  std::vector<std::pair<int, int>> local;
  local.reserve(edges.size());
  for (auto [a, b] : edges) local.emplace_back(vertex_of[a], vertex_of[b]);
  const int surplus = SurplusSearch(n, local).run();
  return {Rational(n + surplus, 2), std::nullopt, BoundMethod::Pairwise};
}

}  // namespace comp_dof
