#include "oracles.hpp"

#include <algorithm>
#include <bit>
#include <functional>
#include <numeric>

namespace oracle {

int subset_bound(const MessageAssignment& a) {
  const int K = a.users();
  int best = K;
  for (std::uint32_t S = 0; S < (1u << K); ++S) {
    int size = 0;
    std::vector<bool> carried(static_cast<std::size_t>(K) + 1, false);
    for (int tx = 1; tx <= K; ++tx) {
      if (!(S >> (tx - 1) & 1u)) continue;
      ++size;
      for (int i = 1; i <= K; ++i) {
        const auto& t = a.transmit_set(i);
        if (std::find(t.begin(), t.end(), tx) != t.end()) carried[i] = true;
      }
    }
    const int c = static_cast<int>(std::count(carried.begin(), carried.end(), true));
    best = std::min(best, std::max(c, K - size));
  }
  return best;
}

int twice_pairwise_lp(int n, const std::vector<std::pair<int, int>>& edges) {
  // Bipartite double cover: left copy u, right copy v, edges both ways.
  std::vector<std::vector<int>> adj(static_cast<std::size_t>(n));
  for (auto [u, v] : edges) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  std::vector<int> match_right(static_cast<std::size_t>(n), -1);
  int matching = 0;
  for (int u = 0; u < n; ++u) {
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    std::function<bool(int)> augment = [&](int x) {
      for (int y : adj[x]) {
        if (seen[y]) continue;
        seen[y] = true;
        if (match_right[y] < 0 || augment(match_right[y])) {
          match_right[y] = x;
          return true;
        }
      }
      return false;
    };
    if (augment(u)) ++matching;
  }
  return 2 * n - matching;
}

std::map<int, double> dense_beam(const ChannelRealization& h, const IndexSet& transmit_set, int base,
                                 const std::vector<int>& cancel) {
  std::vector<int> unknown;
  for (int tx : transmit_set)
    if (tx != base) unknown.push_back(tx);
  const auto n = static_cast<Eigen::Index>(unknown.size());
  std::map<int, double> out{{base, 1.0}};
  if (n == 0) return out;
  Eigen::MatrixXd A(static_cast<Eigen::Index>(cancel.size()), n);
  Eigen::VectorXd b(static_cast<Eigen::Index>(cancel.size()));
  for (std::size_t r = 0; r < cancel.size(); ++r) {
    for (Eigen::Index k = 0; k < n; ++k) A(static_cast<Eigen::Index>(r), k) = h.h(cancel[r], unknown[k]);
    b(static_cast<Eigen::Index>(r)) = -h.h(cancel[r], base);
  }
  const Eigen::VectorXd c = A.fullPivLu().solve(b);
  for (Eigen::Index k = 0; k < n; ++k) out[unknown[k]] = c(k);
  return out;
}

bool numeric_message_feasible(const ChannelRealization& h, const IndexSet& transmit_set, int message,
                              const IndexSet& active) {
  if (transmit_set.empty()) return false;
  const auto n = static_cast<Eigen::Index>(transmit_set.size());
  Eigen::RowVectorXd own(n);
  for (Eigen::Index k = 0; k < n; ++k) own(k) = h.h(message, transmit_set[k]);
  std::vector<int> rows;
  for (int r : active)
    if (r != message) rows.push_back(r);
  if (rows.empty()) return own.norm() > 0.0;
  Eigen::MatrixXd A(static_cast<Eigen::Index>(rows.size()), n);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (Eigen::Index k = 0; k < n; ++k) A(static_cast<Eigen::Index>(r), k) = h.h(rows[r], transmit_set[k]);
  Eigen::MatrixXd stacked(A.rows() + 1, n);
  stacked << A, own;
  const auto rank = [](const Eigen::MatrixXd& m) {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(m);
    lu.setThreshold(1e-9);
    return lu.rank();
  };
  return rank(stacked) == rank(A) + 1;
}

bool numeric_feasible(const ChannelRealization& h, const MessageAssignment& a, const IndexSet& active) {
  return std::all_of(active.begin(), active.end(),
                     [&](int i) { return numeric_message_feasible(h, a.transmit_set(i), i, active); });
}

int numeric_max_zf(const ChannelRealization& h, int M) {
  const int K = h.users();
  std::vector<IndexSet> subsets;
  for (std::uint32_t m = 1; m < (1u << K); ++m) {
    if (std::popcount(m) > M) continue;
    IndexSet s;
    for (int tx = 1; tx <= K; ++tx)
      if (m >> (tx - 1) & 1u) s.push_back(tx);
    subsets.push_back(s);
  }
  int best = 0;
  for (std::uint32_t act = 0; act < (1u << K); ++act) {
    const int size = std::popcount(act);
    if (size <= best) continue;
    IndexSet active;
    for (int u = 1; u <= K; ++u)
      if (act >> (u - 1) & 1u) active.push_back(u);
    const bool ok = std::all_of(active.begin(), active.end(), [&](int i) {
      return std::any_of(subsets.begin(), subsets.end(),
                         [&](const IndexSet& t) { return numeric_message_feasible(h, t, i, active); });
    });
    if (ok) best = size;
  }
  return best;
}

std::map<int, std::map<int, double>> dense_reconstruction_noise(const ChannelRealization& h, int M) {
  const int K = h.users();
  const int block = 2 * M + 1;
  std::map<int, std::map<int, double>> out;
  const auto solve = [&](const std::vector<int>& unknown, const std::vector<int>& eqs) {
    // Equation for rx k: H[k][k-1] X_{k-1} + H[k][k] X_k + Z_k; X_s is known.
    const auto n = static_cast<Eigen::Index>(unknown.size());
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index r = 0; r < n; ++r)
      for (Eigen::Index c = 0; c < n; ++c) A(r, c) = h.h(eqs[r], unknown[c]);
    const Eigen::MatrixXd inv = A.inverse();
    for (Eigen::Index r = 0; r < n; ++r)
      for (Eigen::Index c = 0; c < n; ++c) out[unknown[r]][eqs[c]] = inv(r, c);
  };
  for (int s = block; s <= K; s += block) {
    std::vector<int> unknown, eqs;
    for (int j = s - M; j <= s - 1; ++j) unknown.push_back(j);
    for (int k = s - M + 1; k <= s; ++k) eqs.push_back(k);
    solve(unknown, eqs);
    if (s < K) {
      unknown.clear();
      eqs.clear();
      for (int j = s + 1; j <= s + M; ++j) {
        unknown.push_back(j);
        eqs.push_back(j);
      }
      solve(unknown, eqs);
    }
  }
  return out;
}

MessageAssignment random_assignment(int K, int M, std::mt19937_64& rng, bool allow_empty) {
  std::vector<IndexSet> sets(static_cast<std::size_t>(K));
  std::uniform_int_distribution<int> size_dist(allow_empty ? 0 : 1, M);
  for (auto& s : sets) {
    std::vector<int> pool(static_cast<std::size_t>(K));
    std::iota(pool.begin(), pool.end(), 1);
    std::shuffle(pool.begin(), pool.end(), rng);
    s.assign(pool.begin(), pool.begin() + size_dist(rng));
  }
  return MessageAssignment(K, std::move(sets));
}

MessageAssignment random_local_assignment(int K, int M, int radius, std::mt19937_64& rng) {
  std::vector<IndexSet> sets(static_cast<std::size_t>(K));
  std::uniform_int_distribution<int> size_dist(0, M);
  for (int i = 1; i <= K; ++i) {
    std::vector<int> pool;
    for (int t = std::max(1, i - radius); t <= std::min(K, i + radius); ++t) pool.push_back(t);
    std::shuffle(pool.begin(), pool.end(), rng);
    const int n = std::min<int>(size_dist(rng), static_cast<int>(pool.size()));
    sets[i - 1].assign(pool.begin(), pool.begin() + n);
  }
  return MessageAssignment(K, std::move(sets));
}

}  // namespace oracle
