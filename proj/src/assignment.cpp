#include "comp_dof/assignment.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>

namespace comp_dof {

MessageAssignment::MessageAssignment(int K, std::vector<IndexSet> sets) : K_(K) {
  if (K < 1) throw Error(ErrorCode::InvalidK, "K must be >= 1");
  if (static_cast<int>(sets.size()) != K)
    throw Error(ErrorCode::InvalidArgument,
                "expected " + std::to_string(K) + " transmit sets, got " + std::to_string(sets.size()));
  sets_.reserve(sets.size());
  for (auto& s : sets) {
    auto n = normalized(std::move(s));
    if (!n.empty() && (n.front() < 1 || n.back() > K))
      throw Error(ErrorCode::IndexOutOfRange, "transmit set element outside [1, K]");
    sets_.push_back(std::move(n));
  }
}

MessageAssignment MessageAssignment::empty(int K) {
  return MessageAssignment(K, std::vector<IndexSet>(static_cast<std::size_t>(K)));
}

const IndexSet& MessageAssignment::transmit_set(int message) const {
  if (message < 1 || message > K_)
    throw Error(ErrorCode::IndexOutOfRange, "message " + std::to_string(message));
  return sets_[static_cast<std::size_t>(message - 1)];
}

MessageAssignment MessageAssignment::with_transmit_set(int message, IndexSet set) const {
  auto sets = sets_;
  if (message < 1 || message > K_)
    throw Error(ErrorCode::IndexOutOfRange, "message " + std::to_string(message));
  sets[static_cast<std::size_t>(message - 1)] = std::move(set);
  return MessageAssignment(K_, std::move(sets));
}

MessageAssignment spiral_assign(int K, int M) {
  if (K < 1) throw Error(ErrorCode::InvalidK, "K must be >= 1");
  if (M < 1 || M > K) throw Error(ErrorCode::InvalidM, "spiral needs 1 <= M <= K");
  std::vector<IndexSet> sets(static_cast<std::size_t>(K));
  for (int i = 1; i <= K; ++i)
    for (int k = 0; k < M; ++k) sets[i - 1].push_back((i - 1 + k) % K + 1);
  return MessageAssignment(K, std::move(sets));
}

MessageAssignment scheme_assign(int K, int M, int L, int shift) {
  if (M < 1) throw Error(ErrorCode::InvalidM, "M must be >= 1");
  if (L < 1) throw Error(ErrorCode::InvalidL, "L must be >= 1");
  const int width = 2 * M + L;
  if (K < width)
    throw Error(ErrorCode::TooFewUsers,
                "K=" + std::to_string(K) + " < 2M+L=" + std::to_string(width));
  if (shift < 0) throw Error(ErrorCode::InvalidArgument, "shift must be >= 0");
  std::vector<IndexSet> sets(static_cast<std::size_t>(K));
  for (int c = shift; c + width <= K; c += width) {
    for (int p = 1; p <= M; ++p)
      for (int t = p; t <= M; ++t) sets[c + p - 1].push_back(c + t);
    for (int p = L + M + 1; p <= L + 2 * M; ++p)
      for (int t = M + 1; t <= p - L; ++t) sets[c + p - 1].push_back(c + t);
  }
  return MessageAssignment(K, std::move(sets));
}

IndexSet carried_messages(const MessageAssignment& assignment, const IndexSet& transmitters) {
  IndexSet out;
  for (int i = 1; i <= assignment.users(); ++i) {
    const auto& t = assignment.transmit_set(i);
    const bool hit = std::any_of(t.begin(), t.end(),
                                 [&](int tx) { return contains(transmitters, tx); });
    if (hit) out.push_back(i);
  }
  return out;
}

int cooperation_order(const MessageAssignment& assignment) {
  std::size_t m = 0;
  for (const auto& s : assignment.sets()) m = std::max(m, s.size());
  return static_cast<int>(m);
}

int local_radius(const MessageAssignment& assignment) {
  int r = 0;
  for (int i = 1; i <= assignment.users(); ++i)
    for (int t : assignment.transmit_set(i)) r = std::max(r, std::abs(t - i));
  return r;
}

namespace {

// Message graphs are defined for the shifted local model; LocalOriginal with
// L <= 1 has identical connectivity.
void require_graph_topology(const ChannelTopology& topology) {
  if (topology.kind() == Connectivity::LocalShifted) return;
  if (topology.kind() == Connectivity::LocalOriginal && topology.interferers() <= 1) return;
  throw Error(ErrorCode::UnsupportedTopology,
              "message graphs require the shifted locally connected model, got " +
                  to_string(topology.kind()));
}

}  // namespace

std::vector<int> MessageGraph::distances_from_marks() const {
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(users) + 1);
  for (auto [x, y] : edges) {
    adj[x].push_back(y);
    adj[y].push_back(x);
  }
  std::vector<int> dist(static_cast<std::size_t>(users) + 1, -1);
  std::deque<int> queue;
  for (int m : marked) {
    dist[m] = 0;
    queue.push_back(m);
  }
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    for (int w : adj[v]) {
      if (dist[w] >= 0) continue;
      dist[w] = dist[v] + 1;
      queue.push_back(w);
    }
  }
  return dist;
}

MessageGraph build_message_graph(const MessageAssignment& assignment,
                                 const ChannelTopology& topology, int message) {
  require_graph_topology(topology);
  if (assignment.users() != topology.users())
    throw Error(ErrorCode::InvalidArgument, "assignment and topology disagree on K");
  MessageGraph g;
  g.message = message;
  g.users = topology.users();
  const auto& t = assignment.transmit_set(message);
  const int L = topology.interferers();
  for (std::size_t a = 0; a < t.size(); ++a)
    for (std::size_t b = a + 1; b < t.size(); ++b)
      if (t[b] - t[a] <= L) g.edges.emplace_back(t[a], t[b]);
  g.marked = connected_transmitters(topology, message);
  return g;
}

IndexSet irreducible_envelope(int message, int K, int M, int L) {
  return clipped_range(message - M * L, message + (M - 1) * L, K);
}

ReductionResult reduce_assignment(const MessageAssignment& assignment,
                                  const ChannelTopology& topology, int M) {
  if (cooperation_order(assignment) > M)
    throw Error(ErrorCode::InvalidM, "assignment exceeds cooperation order " + std::to_string(M));
  if (topology.kind() == Connectivity::FullyConnected) return {assignment, {}};
  require_graph_topology(topology);

  const int K = assignment.users();
  std::vector<IndexSet> sets;
  sets.reserve(static_cast<std::size_t>(K));
  for (int i = 1; i <= K; ++i) {
    const auto dist = build_message_graph(assignment, topology, i).distances_from_marks();
    IndexSet kept;
    for (int k : assignment.transmit_set(i))
      if (dist[k] >= 0) kept.push_back(k);
    sets.push_back(std::move(kept));
  }
  ReductionResult result{MessageAssignment(K, std::move(sets)), {}};
  for (int i = 1; i <= K; ++i) {
    const auto envelope = irreducible_envelope(i, K, M, topology.interferers());
    for (int k : result.assignment.transmit_set(i))
      if (!contains(envelope, k)) result.violations.push_back({i, k});
  }
  return result;
}

}  // namespace comp_dof
