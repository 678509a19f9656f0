#include "comp_dof/search.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cstdlib>
#include <limits>
#include <thread>
#include <unordered_map>

namespace comp_dof {

std::string to_string(FeasibilityReason reason) {
  switch (reason) {
    case FeasibilityReason::EmptyTransmitSet: return "empty_transmit_set";
    case FeasibilityReason::OwnReceiverUnreachable: return "own_receiver_unreachable";
    case FeasibilityReason::CannotCancel: return "cannot_cancel";
    case FeasibilityReason::TooManyReceivers: return "too_many_receivers";
  }
  return "unknown";
}

unsigned worker_count() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("COMP_DOF_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v >= 1) n = std::min(n, static_cast<unsigned>(v));
  }
  return n;
}

namespace {

using Mask = std::uint64_t;

constexpr Mask bit(int index) { return Mask{1} << (index - 1); }

// Maximum bipartite matching between rows (receivers) and transmitter columns;
// equals the generic rank of the corresponding channel submatrix.
class Matcher {
 public:
  explicit Matcher(int columns) : owner_(static_cast<std::size_t>(columns) + 1, -1) {}

  // Tries to match a new row; keeps the matching on success.
  bool add(Mask row) {
    rows_.push_back(row);
    seen_ = 0;
    if (augment(static_cast<int>(rows_.size()) - 1)) return true;
    rows_.pop_back();
    return false;
  }

 private:
  bool augment(int r) {
    for (Mask m = rows_[static_cast<std::size_t>(r)] & ~seen_; m != 0; m &= m - 1) {
      const int c = std::countr_zero(m) + 1;
      seen_ |= bit(c);
      if (owner_[c] < 0 || augment(owner_[c])) {
        owner_[c] = r;
        return true;
      }
    }
    return false;
  }

  std::vector<Mask> rows_;
  std::vector<int> owner_;
  Mask seen_ = 0;
};

// Column masks over transmitters: row r lists the members of T connected to rx r.
struct LocalSystem {
  std::vector<Mask> cancel_rows;
  Mask own_row = 0;
};

LocalSystem build_system(const ChannelTopology& topology, Mask transmit, int message, Mask active) {
  LocalSystem s;
  const int K = topology.users();
  for (int r = 1; r <= K; ++r) {
    Mask row = 0;
    for (Mask m = transmit; m != 0; m &= m - 1) {
      const int tx = std::countr_zero(m) + 1;
      if (topology.connected(r, tx)) row |= bit(tx);
    }
    if (r == message)
      s.own_row = row;
    else if ((active & bit(r)) && row != 0)
      s.cancel_rows.push_back(row);
  }
  return s;
}

// True when `extra` increases the generic rank of the cancellation rows, i.e.
// some beam over T nulls all cancel rows while `extra` stays nonzero.
bool rank_increases(int K, const std::vector<Mask>& rows, Mask extra) {
  if (extra == 0) return false;
  Matcher matcher(K);
  for (Mask row : rows) matcher.add(row);
  return matcher.add(extra);
}

bool message_feasible(const ChannelTopology& topology, Mask transmit, int message, Mask active) {
  const auto s = build_system(topology, transmit, message, active);
  return rank_increases(topology.users(), s.cancel_rows, s.own_row);
}

Mask to_mask(const IndexSet& s) {
  Mask m = 0;
  for (int v : s) m |= bit(v);
  return m;
}

IndexSet to_index_set(Mask m) {
  IndexSet out;
  for (; m != 0; m &= m - 1) out.push_back(std::countr_zero(m) + 1);
  return out;
}

void require_search_topology(const ChannelTopology& topology) {
  if (topology.kind() == Connectivity::LocalShifted) return;
  if (topology.kind() == Connectivity::LocalOriginal && topology.interferers() <= 1) return;
  throw Error(ErrorCode::UnsupportedTopology,
              "zero-forcing search expects the shifted locally connected model, got " +
                  to_string(topology.kind()));
}

constexpr int kMaskUsers = 64;

void require_mask_size(int K) {
  if (K > kMaskUsers)
    throw Error(ErrorCode::LimitExceeded, "feasibility checks support K <= " + std::to_string(kMaskUsers));
}

}  // namespace

IndexSet reached_active_receivers(const ChannelTopology& topology, const IndexSet& transmitters,
                                  const IndexSet& active) {
  IndexSet out;
  for (int r : active) {
    const bool hit = std::any_of(transmitters.begin(), transmitters.end(),
                                 [&](int tx) { return topology.connected(r, tx); });
    if (hit) out.push_back(r);
  }
  return out;
}

IndexSet contributing_transmitters(const ChannelTopology& topology, const IndexSet& transmit_set,
                                   int message, const IndexSet& active) {
  const int K = topology.users();
  require_mask_size(K);
  const auto s = build_system(topology, to_mask(transmit_set), message, to_mask(active));
  IndexSet out;
  for (int tx : transmit_set)
    if (rank_increases(K, s.cancel_rows, bit(tx))) out.push_back(tx);
  return out;
}

FeasibilityReport zf_feasible(const ChannelTopology& topology, const MessageAssignment& assignment,
                              const IndexSet& active_in) {
  if (topology.users() != assignment.users())
    throw Error(ErrorCode::InvalidArgument, "assignment and topology disagree on K");
  const int K = topology.users();
  require_mask_size(K);
  const auto active = normalized(active_in);
  if (!active.empty() && (active.front() < 1 || active.back() > K))
    throw Error(ErrorCode::IndexOutOfRange, "active user outside [1, K]");
  const Mask active_mask = to_mask(active);

  FeasibilityReport report;
  for (int i : active) {
    const auto& t = assignment.transmit_set(i);
    FeasibilityViolation v;
    v.message = i;
    v.transmit_set_size = static_cast<int>(t.size());
    v.reached_active = static_cast<int>(reached_active_receivers(topology, t, active).size());
    const auto s = build_system(topology, to_mask(t), i, active_mask);
    if (t.empty()) {
      v.reason = FeasibilityReason::EmptyTransmitSet;
    } else if (s.own_row == 0) {
      v.reason = FeasibilityReason::OwnReceiverUnreachable;
    } else if (!rank_increases(K, s.cancel_rows, s.own_row)) {
      v.reason = FeasibilityReason::CannotCancel;
    } else {
      const auto effective = contributing_transmitters(topology, t, i, active);
      const auto reached = reached_active_receivers(topology, effective, active);
      if (reached.size() <= effective.size()) continue;
      v.reason = FeasibilityReason::TooManyReceivers;
    }
    report.violations.push_back(v);
  }
  report.feasible = report.violations.empty();
  return report;
}

int window_cap_upper_bound(int K, int M, int L) {
  const int w = 2 * M + L;
  return 2 * M * (K / w) + std::min(2 * M, K % w);
}

bool window_cap_check(const IndexSet& active, int K, int M, int L) {
  const int w = 2 * M + L;
  for (int start = 1; start + w - 1 <= K; ++start) {
    const auto lo = std::lower_bound(active.begin(), active.end(), start);
    const auto hi = std::upper_bound(active.begin(), active.end(), start + w - 1);
    if (hi - lo > 2 * M) return false;
  }
  return true;
}

bool window_cap_check(const SearchResult& result, int M, int L) {
  return window_cap_check(result.active, result.witness.users(), M, L);
}

namespace {

// Candidate transmit sets for one message: nonempty subsets of the allowed
// transmitters up to size M, by size then lexicographically.
std::vector<Mask> candidate_sets(const IndexSet& allowed, int M) {
  std::vector<Mask> out;
  const int n = static_cast<int>(allowed.size());
  for (int size = 1; size <= std::min(M, n); ++size) {
    std::vector<int> idx(static_cast<std::size_t>(size));
    for (int k = 0; k < size; ++k) idx[k] = k;
    while (true) {
      Mask m = 0;
      for (int k : idx) m |= bit(allowed[k]);
      out.push_back(m);
      int k = size - 1;
      while (k >= 0 && idx[k] == n - size + k) --k;
      if (k < 0) break;
      ++idx[k];
      for (int j = k + 1; j < size; ++j) idx[j] = idx[j - 1] + 1;
    }
  }
  return out;
}

// Active sets of a given size in lexicographic order of their sorted members.
std::vector<Mask> combinations(int K, int size) {
  std::vector<Mask> out;
  if (size == 0) {
    out.push_back(0);
    return out;
  }
  std::vector<int> idx(static_cast<std::size_t>(size));
  for (int k = 0; k < size; ++k) idx[k] = k + 1;
  while (true) {
    Mask m = 0;
    for (int v : idx) m |= bit(v);
    out.push_back(m);
    int k = size - 1;
    while (k >= 0 && idx[k] == K - size + k + 1) --k;
    if (k < 0) break;
    ++idx[k];
    for (int j = k + 1; j < size; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

class ActiveSetSolver {
 public:
  ActiveSetSolver(const ChannelTopology& topology, const std::vector<std::vector<Mask>>& candidates,
                  const std::vector<Mask>& relevant)
      : topology_(topology), candidates_(candidates), relevant_(relevant),
        memo_(candidates.size()) {}

  // Fills `chosen` with a feasible transmit set per active message.
  bool solve(Mask active, std::vector<Mask>& chosen) {
    chosen.assign(candidates_.size(), 0);
    for (Mask m = active; m != 0; m &= m - 1) {
      const int i = std::countr_zero(m) + 1;
      const int pick = first_feasible(i, active);
      if (pick < 0) return false;
      chosen[i - 1] = candidates_[i - 1][pick];
    }
    return true;
  }

  std::uint64_t checks() const { return checks_; }

 private:
  int first_feasible(int i, Mask active) {
    const Mask key = active & relevant_[i - 1];
    auto& memo = memo_[i - 1];
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    int found = -1;
    const auto& cands = candidates_[i - 1];
    for (std::size_t k = 0; k < cands.size(); ++k) {
      ++checks_;
      if (message_feasible(topology_, cands[k], i, active)) {
        found = static_cast<int>(k);
        break;
      }
    }
    memo.emplace(key, found);
    return found;
  }

  const ChannelTopology& topology_;
  const std::vector<std::vector<Mask>>& candidates_;
  const std::vector<Mask>& relevant_;
  std::vector<std::unordered_map<Mask, int>> memo_;
  std::uint64_t checks_ = 0;
};

struct LevelOutcome {
  std::size_t index = std::numeric_limits<std::size_t>::max();
  std::vector<Mask> chosen;
  std::uint64_t nodes = 0;
};

// Scans one size level, possibly in parallel, and keeps the smallest feasible index.
LevelOutcome scan_level(const ChannelTopology& topology, const std::vector<std::vector<Mask>>& candidates,
                        const std::vector<Mask>& relevant, const std::vector<Mask>& level) {
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(worker_count(), std::max<std::size_t>(1, level.size() / 64)));
  std::vector<LevelOutcome> parts(workers);
  std::atomic<std::size_t> best{std::numeric_limits<std::size_t>::max()};
  auto work = [&](unsigned w) {
    ActiveSetSolver solver(topology, candidates, relevant);
    std::vector<Mask> chosen;
    auto& part = parts[w];
    for (std::size_t k = w; k < level.size(); k += workers) {
      if (k > best.load()) break;
      ++part.nodes;
      if (solver.solve(level[k], chosen)) {
        part.index = k;
        part.chosen = chosen;
        std::size_t cur = best.load();
        while (k < cur && !best.compare_exchange_weak(cur, k)) {
        }
        break;
      }
    }
    part.nodes += solver.checks();
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> threads;
    for (unsigned w = 0; w < workers; ++w) threads.emplace_back(work, w);
    for (auto& t : threads) t.join();
  }
  LevelOutcome out;
  for (auto& p : parts) {
    out.nodes += p.nodes;
    if (p.index < out.index) {
      out.index = p.index;
      out.chosen = std::move(p.chosen);
    }
  }
  return out;
}

SearchResult assemble(int K, Mask active, const std::vector<Mask>& chosen, std::uint64_t nodes) {
  std::vector<IndexSet> sets(static_cast<std::size_t>(K));
  for (int i = 1; i <= K; ++i)
    if (active & bit(i)) sets[i - 1] = to_index_set(chosen[i - 1]);
  SearchResult r;
  r.active = to_index_set(active);
  r.value = static_cast<int>(r.active.size());
  r.witness = MessageAssignment(K, std::move(sets));
  r.nodes_explored = nodes;
  return r;
}

SearchResult search_levels(const ChannelTopology& topology, int upper,
                           const std::vector<std::vector<Mask>>& candidates) {
  const int K = topology.users();
  // Receivers that some candidate of message i can reach: the only ones whose
  // activity affects that message's feasibility.
  std::vector<Mask> relevant(static_cast<std::size_t>(K), 0);
  for (int i = 1; i <= K; ++i)
    for (Mask c : candidates[i - 1])
      for (int r = 1; r <= K; ++r)
        for (Mask m = c; m != 0; m &= m - 1)
          if (topology.connected(r, std::countr_zero(m) + 1)) relevant[i - 1] |= bit(r);

  std::uint64_t nodes = 0;
  for (int size = std::min(upper, K); size >= 0; --size) {
    const auto level = combinations(K, size);
    auto outcome = scan_level(topology, candidates, relevant, level);
    nodes += outcome.nodes;
    if (outcome.index < level.size()) return assemble(K, level[outcome.index], outcome.chosen, nodes);
  }
  return assemble(K, 0, std::vector<Mask>(static_cast<std::size_t>(K), 0), nodes);
}

}  // namespace

SearchResult max_zf_dof(const ChannelTopology& topology, int M, const SearchLimits& limits) {
  require_search_topology(topology);
  const int K = topology.users();
  const int L = topology.interferers();
  if (M < 1) throw Error(ErrorCode::InvalidM, "M must be >= 1");
  if (K > limits.max_users || K > kMaskUsers)
    throw Error(ErrorCode::LimitExceeded,
                "K=" + std::to_string(K) + " exceeds the exhaustive limit " + std::to_string(limits.max_users));
  if (M > limits.max_cooperation)
    throw Error(ErrorCode::LimitExceeded,
                "M=" + std::to_string(M) + " exceeds the exhaustive limit " + std::to_string(limits.max_cooperation));

  std::vector<std::vector<Mask>> candidates;
  candidates.reserve(static_cast<std::size_t>(K));
  for (int i = 1; i <= K; ++i) {
    const IndexSet allowed = limits.restrict_to_envelope ? irreducible_envelope(i, K, M, L) : clipped_range(1, K, K);
    candidates.push_back(candidate_sets(allowed, M));
  }
  const int upper = (limits.use_window_cap && L >= 1) ? window_cap_upper_bound(K, M, L) : K;
  return search_levels(topology, upper, candidates);
}

SearchResult max_zf_active(const ChannelTopology& topology, const MessageAssignment& assignment,
                           int max_users) {
  if (topology.users() != assignment.users())
    throw Error(ErrorCode::InvalidArgument, "assignment and topology disagree on K");
  const int K = topology.users();
  if (K > max_users || K > kMaskUsers)
    throw Error(ErrorCode::LimitExceeded, "K=" + std::to_string(K) + " exceeds the exhaustive limit");
  std::vector<std::vector<Mask>> candidates(static_cast<std::size_t>(K));
  for (int i = 1; i <= K; ++i)
    if (!assignment.transmit_set(i).empty()) candidates[i - 1].push_back(to_mask(assignment.transmit_set(i)));
  auto result = search_levels(topology, K, candidates);
  // The witness must be the given assignment, not its restriction to active users.
  result.witness = assignment;
  return result;
}

}  // namespace comp_dof
