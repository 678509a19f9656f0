#include "comp_dof/zf_scheme.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace comp_dof {

IndexSet SchemePlan::active_users() const {
  IndexSet out;
  for (const auto& c : clusters) {
    out.insert(out.end(), c.S1.begin(), c.S1.end());
    out.insert(out.end(), c.S2.begin(), c.S2.end());
  }
  return normalized(std::move(out));
}

ChannelTopology SchemePlan::topology() const { return build_topology(Connectivity::LocalShifted, K, L); }

SchemePlan plan_clusters(int K, int M, int L, int shift) {
  if (M < 1) throw Error(ErrorCode::InvalidM, "M must be >= 1");
  if (L < 1) throw Error(ErrorCode::InvalidL, "L must be >= 1");
  if (2 * M < L)
    throw Error(ErrorCode::IaRegime,
                "2M/(2M+L) < 1/2 for M=" + std::to_string(M) + " L=" + std::to_string(L) +
                    "; only interference alignment reaches 1/2 here");
  SchemePlan plan;
  plan.K = K;
  plan.M = M;
  plan.L = L;
  plan.shift = shift;
  plan.assignment = scheme_assign(K, M, L, shift);
  const int width = 2 * M + L;
  for (int o = shift; o + width <= K; o += width) {
    Cluster c;
    c.offset = o;
    for (int p = 1; p <= M; ++p) c.S1.push_back(o + p);
    for (int p = M + 1; p <= M + L; ++p) c.inactive_rx.push_back(o + p);
    for (int p = M + L + 1; p <= width; ++p) c.S2.push_back(o + p);
    for (int p = 2 * M + 1; p <= width; ++p) c.silent_tx.push_back(o + p);
    for (int i : c.S1) {
      auto& cancel = plan.cancel_sets[i];
      for (int r = i + 1; r <= o + M; ++r) cancel.push_back(r);
    }
    for (int i : c.S2) {
      auto& cancel = plan.cancel_sets[i];
      for (int r = i - 1; r >= o + L + M + 1; --r) cancel.push_back(r);
    }
    plan.clusters.push_back(std::move(c));
  }
  return plan;
}

double BeamDesign::coefficient(int tx, int message) const {
  const auto it = beams.find(message);
  if (it == beams.end()) return 0.0;
  const auto jt = it->second.coefficients.find(tx);
  return jt == it->second.coefficients.end() ? 0.0 : jt->second;
}

double BeamDesign::effective_gain(const ChannelRealization& realization, int rx, int message) const {
  const auto it = beams.find(message);
  if (it == beams.end()) return 0.0;
  double g = 0.0;
  for (const auto& [tx, c] : it->second.coefficients) g += realization.h(rx, tx) * c;
  return g;
}

double BeamDesign::transmit_energy(int tx) const {
  double e = 0.0;
  for (const auto& [message, beam] : beams) {
    const auto jt = beam.coefficients.find(tx);
    if (jt != beam.coefficients.end()) e += jt->second * jt->second;
  }
  return e;
}

namespace {

void require_matching(const ChannelRealization& realization, const SchemePlan& plan) {
  const auto& t = realization.topology();
  const bool shifted = t.kind() == Connectivity::LocalShifted ||
                       (t.kind() == Connectivity::LocalOriginal && t.interferers() <= 1);
  if (!shifted || t.users() != plan.K || t.interferers() != plan.L)
    throw Error(ErrorCode::InvalidArgument, "realization does not match the plan's topology");
}

}  // namespace

BeamDesign design_beams(const ChannelRealization& realization, const SchemePlan& plan) {
  require_matching(realization, plan);
  BeamDesign design;
  design.K = plan.K;
  for (const auto& cluster : plan.clusters) {
    for (int i : cluster.S1) {
      const auto& t = plan.assignment.transmit_set(i);
      MessageBeam beam;
      beam.base = t.front();
      beam.coefficients[beam.base] = 1.0;
      for (int r : plan.cancel_sets.at(i)) {
        // The newest connected transmitter at r is r itself.
        double acc = 0.0;
        for (const auto& [tx, c] : beam.coefficients) acc += realization.h(r, tx) * c;
        const double divisor = realization.h(r, r);
        if (std::abs(divisor) < kSingularDivisor)
          throw Error(ErrorCode::SingularChannel, "H[" + std::to_string(r) + "][" + std::to_string(r) + "] ~ 0");
        beam.coefficients[r] = -acc / divisor;
      }
      design.beams[i] = std::move(beam);
    }
    for (int i : cluster.S2) {
      const auto& t = plan.assignment.transmit_set(i);
      MessageBeam beam;
      beam.base = t.back();
      beam.coefficients[beam.base] = 1.0;
      for (int r : plan.cancel_sets.at(i)) {
        // Walking downward, the only unset connected transmitter is r - L.
        const int fresh = r - plan.L;
        double acc = 0.0;
        for (const auto& [tx, c] : beam.coefficients) acc += realization.h(r, tx) * c;
        const double divisor = realization.h(r, fresh);
        if (std::abs(divisor) < kSingularDivisor)
          throw Error(ErrorCode::SingularChannel,
                      "H[" + std::to_string(r) + "][" + std::to_string(fresh) + "] ~ 0");
        beam.coefficients[fresh] = -acc / divisor;
      }
      design.beams[i] = std::move(beam);
    }
  }
  return design;
}

BeamDesign design_nullspace_beams(const ChannelRealization& realization,
                                  const MessageAssignment& assignment, const IndexSet& active_in) {
  const int K = realization.users();
  if (assignment.users() != K) throw Error(ErrorCode::InvalidArgument, "assignment and realization disagree on K");
  const auto active = normalized(active_in);
  BeamDesign design;
  design.K = K;
  for (int i : active) {
    const auto& t = assignment.transmit_set(i);
    if (t.empty()) throw Error(ErrorCode::Infeasible, "message " + std::to_string(i) + " has no transmitters");
    std::vector<int> rows;
    for (int r : active) {
      if (r == i) continue;
      const bool hit = std::any_of(t.begin(), t.end(), [&](int tx) { return realization.h(r, tx) != 0.0; });
      if (hit) rows.push_back(r);
    }
    const auto n = static_cast<Eigen::Index>(t.size());
    Eigen::VectorXd h(n);
    for (Eigen::Index k = 0; k < n; ++k) h(k) = realization.h(i, t[k]);

    Eigen::VectorXd c = h;
    if (!rows.empty()) {
      Eigen::MatrixXd A(static_cast<Eigen::Index>(rows.size()), n);
      for (std::size_t a = 0; a < rows.size(); ++a)
        for (Eigen::Index k = 0; k < n; ++k) A(static_cast<Eigen::Index>(a), k) = realization.h(rows[a], t[k]);
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullV);
      const auto& sv = svd.singularValues();
      const double tol = std::max(A.rows(), A.cols()) * (sv.size() ? sv(0) : 0.0) * 1e-12;
      Eigen::Index rank = 0;
      for (Eigen::Index k = 0; k < sv.size(); ++k)
        if (sv(k) > tol) ++rank;
      const Eigen::MatrixXd null = svd.matrixV().rightCols(n - rank);
      c = null * (null.transpose() * h);
    }
    const double own = h.dot(c);
    if (c.size() == 0 || std::abs(own) <= 1e-12 * h.norm() * h.norm())
      throw Error(ErrorCode::Infeasible, "no zero-forcing beam for message " + std::to_string(i));
    Eigen::Index peak = 0;
    c.cwiseAbs().maxCoeff(&peak);
    c /= c(peak);
    MessageBeam beam;
    beam.base = t[static_cast<std::size_t>(peak)];
    for (Eigen::Index k = 0; k < n; ++k)
      if (c(k) != 0.0) beam.coefficients[t[static_cast<std::size_t>(k)]] = c(k);
    beam.coefficients[beam.base] = 1.0;
    design.beams[i] = std::move(beam);
  }
  return design;
}

InterferenceReport verify_zero_interference(const ChannelRealization& realization,
                                            const IndexSet& active_in, const BeamDesign& beams) {
  const auto active = normalized(active_in);
  InterferenceReport report;
  bool first = true;
  for (int r : active) {
    ReceiverInterference ri;
    ri.rx = r;
    double scale = 0.0;
    for (const auto& [i, beam] : beams.beams) {
      if (i == r) continue;
      double g = 0.0;
      for (const auto& [tx, c] : beam.coefficients) {
        const double term = realization.h(r, tx) * c;
        g += term;
        scale += std::abs(term);
      }
      ri.absolute += std::abs(g);
    }
    ri.relative = scale > 0.0 ? ri.absolute / scale : 0.0;
    ri.own_gain = std::abs(beams.effective_gain(realization, r, r));
    report.max_residual = std::max(report.max_residual, ri.absolute);
    report.max_relative_residual = std::max(report.max_relative_residual, ri.relative);
    report.min_own_gain = first ? ri.own_gain : std::min(report.min_own_gain, ri.own_gain);
    first = false;
    report.per_rx.push_back(ri);
  }
  return report;
}

InterferenceReport verify_zero_interference(const ChannelRealization& realization,
                                            const SchemePlan& plan, const BeamDesign& beams) {
  require_matching(realization, plan);
  auto report = verify_zero_interference(realization, plan.active_users(), beams);
  report.structural_silence = structural_silence(plan);
  return report;
}

bool structural_silence(const SchemePlan& plan) {
  const auto topology = plan.topology();
  const auto reaches_any = [&](const IndexSet& t, const IndexSet& receivers) {
    for (int tx : t)
      for (int r : receivers)
        if (topology.connected(r, tx)) return true;
    return false;
  };
  const auto active = plan.active_users();
  for (const auto& c : plan.clusters) {
    for (int i : c.S1)
      if (reaches_any(plan.assignment.transmit_set(i), c.S2)) return false;
    for (int i : c.S2)
      if (reaches_any(plan.assignment.transmit_set(i), c.S1)) return false;
    IndexSet outside;
    for (int r : active)
      if (r <= c.offset || r > c.offset + 2 * plan.M + plan.L) outside.push_back(r);
    for (int i : c.S1)
      if (reaches_any(plan.assignment.transmit_set(i), outside)) return false;
    for (int i : c.S2)
      if (reaches_any(plan.assignment.transmit_set(i), outside)) return false;
    for (int tx : c.silent_tx)
      for (int i = 1; i <= plan.K; ++i)
        if (contains(plan.assignment.transmit_set(i), tx)) return false;
  }
  return true;
}

std::vector<SchemePlan> reuse_schedule(int K, int M, int L, int sessions) {
  if (sessions < 1) throw Error(ErrorCode::InvalidArgument, "sessions must be >= 1");
  const int width = 2 * M + L;
  std::vector<SchemePlan> plans;
  plans.reserve(static_cast<std::size_t>(sessions));
  for (int t = 0; t < sessions; ++t) plans.push_back(plan_clusters(K, M, L, t % width));
  return plans;
}

std::vector<SchemePlan> reuse_schedule(int K, int M, int L) { return reuse_schedule(K, M, L, 2 * M + L); }

PlanDof plan_dof(const std::vector<SchemePlan>& plans) {
  if (plans.empty()) throw Error(ErrorCode::InvalidArgument, "no plans given");
  const int K = plans.front().K;
  const auto sessions = static_cast<std::int64_t>(plans.size());
  std::vector<std::int64_t> active_count(static_cast<std::size_t>(K), 0);
  std::vector<bool> interior(static_cast<std::size_t>(K), true);
  for (const auto& plan : plans) {
    if (plan.K != K) throw Error(ErrorCode::InvalidArgument, "plans disagree on K");
    for (int u : plan.active_users()) ++active_count[u - 1];
    std::vector<bool> covered(static_cast<std::size_t>(K), false);
    const int width = 2 * plan.M + plan.L;
    for (const auto& c : plan.clusters)
      for (int u = c.offset + 1; u <= c.offset + width; ++u) covered[u - 1] = true;
    for (int u = 0; u < K; ++u) interior[u] = interior[u] && covered[u];
  }
  PlanDof out;
  out.interior = interior;
  std::int64_t total = 0, interior_total = 0, interior_users = 0;
  for (int u = 0; u < K; ++u) {
    out.per_user.emplace_back(active_count[u], sessions);
    total += active_count[u];
    if (interior[u]) {
      interior_total += active_count[u];
      ++interior_users;
    }
  }
  out.overall_average = Rational(total, sessions * K);
  out.interior_average = interior_users ? Rational(interior_total, sessions * interior_users) : Rational(0);
  return out;
}

}  // namespace comp_dof
