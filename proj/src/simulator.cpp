#include "comp_dof/simulator.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace comp_dof {

std::vector<double> power_sweep_db(double first, double last, double step) {
  if (!(step > 0.0) || last < first) throw Error(ErrorCode::InvalidArgument, "bad dB sweep");
  std::vector<double> out;
  const int n = static_cast<int>(std::floor((last - first) / step + 1e-9));
  for (int k = 0; k <= n; ++k) out.push_back(std::pow(10.0, (first + k * step) / 10.0));
  return out;
}

namespace {

void validate(const SimulationConfig& config) {
  if (config.power_sweep.empty()) throw Error(ErrorCode::InvalidArgument, "empty power sweep");
  if (config.trials < 1) throw Error(ErrorCode::InvalidArgument, "trials must be >= 1");
  for (std::size_t k = 0; k < config.power_sweep.size(); ++k) {
    const double p = config.power_sweep[k];
    if (!(p >= 1.0) || !std::isfinite(p)) throw Error(ErrorCode::InvalidArgument, "powers must be finite and >= 1");
    if (k > 0 && !(p > config.power_sweep[k - 1]))
      throw Error(ErrorCode::InvalidArgument, "powers must be strictly increasing");
  }
}

constexpr double kMinSpanRatio = 1e3;

bool sweep_fits(const std::vector<double>& powers) {
  return powers.size() >= 3 && powers.back() >= powers.front() * kMinSpanRatio * (1.0 - 1e-12);
}

}  // namespace

std::vector<double> estimate_dof_slope(const RateSamples& samples) {
  const auto& p = samples.powers;
  if (!sweep_fits(p))
    throw Error(ErrorCode::InsufficientSweep, "need >= 3 power points spanning >= 30 dB");
  const std::size_t n = p.size();
  const std::size_t used = std::max<std::size_t>(2, (n + 1) / 2);
  const std::size_t from = n - used;
  double mean_x = 0.0;
  for (std::size_t k = from; k < n; ++k) mean_x += std::log2(p[k]);
  mean_x /= static_cast<double>(used);
  double sxx = 0.0;
  for (std::size_t k = from; k < n; ++k) sxx += (std::log2(p[k]) - mean_x) * (std::log2(p[k]) - mean_x);

  std::vector<double> slopes;
  slopes.reserve(samples.rates.size());
  for (const auto& r : samples.rates) {
    double mean_y = 0.0;
    for (std::size_t k = from; k < n; ++k) mean_y += r[k];
    mean_y /= static_cast<double>(used);
    double sxy = 0.0;
    for (std::size_t k = from; k < n; ++k) sxy += (std::log2(p[k]) - mean_x) * (r[k] - mean_y);
    slopes.push_back(sxy / sxx);
  }
  return slopes;
}

RateSamples simulate_rates(const ChannelRealization& realization, const IndexSet& active_in,
                           const BeamDesign& beams, const SimulationConfig& config) {
  validate(config);
  const int K = realization.users();
  const auto active = normalized(active_in);
  // Each transmitter splits P evenly over the streams it carries; a stream
  // takes the largest power every one of its transmitters can afford.
  std::vector<int> streams_at(static_cast<std::size_t>(K) + 1, 0);
  for (const auto& [i, beam] : beams.beams)
    for (const auto& [tx, c] : beam.coefficients) {
      if (!std::isfinite(c)) throw Error(ErrorCode::PowerViolation, "beam coefficients are not finite");
      if (c != 0.0) ++streams_at[tx];
    }
  std::map<int, double> share;
  for (const auto& [i, beam] : beams.beams) {
    double s = std::numeric_limits<double>::infinity();
    for (const auto& [tx, c] : beam.coefficients)
      if (c != 0.0) s = std::min(s, 1.0 / (streams_at[tx] * c * c));
    if (!std::isfinite(s)) {
      if (contains(active, i)) throw Error(ErrorCode::PowerViolation, "active stream carries no energy");
      s = 0.0;
    }
    share[i] = s;
  }

  // Effective gains do not depend on P.
  std::vector<double> signal(static_cast<std::size_t>(K), 0.0), interference(static_cast<std::size_t>(K), 0.0);
  for (int r : active) {
    for (const auto& [i, beam] : beams.beams) {
      const double g = beams.effective_gain(realization, r, i);
      if (i == r)
        signal[r - 1] = g * g * share[i];
      else
        interference[r - 1] += g * g * share[i];
    }
  }

  RateSamples out;
  out.powers = config.power_sweep;
  out.rates.assign(static_cast<std::size_t>(K), std::vector<double>(config.power_sweep.size(), 0.0));
  for (std::size_t k = 0; k < config.power_sweep.size(); ++k) {
    const double P = config.power_sweep[k];
    for (int r : active) {
      const double sinr = signal[r - 1] * P / (1.0 + interference[r - 1] * P);
      out.rates[r - 1][k] = std::log2(1.0 + sinr);
    }
  }
  if (sweep_fits(out.powers)) out.slopes = estimate_dof_slope(out);
  return out;
}

RateSamples simulate_rates(const ChannelRealization& realization, const SchemePlan& plan,
                           const BeamDesign& beams, const SimulationConfig& config) {
  return simulate_rates(realization, plan.active_users(), beams, config);
}

RateSamples simulate_plan(const SchemePlan& plan, const SimulationConfig& config) {
  validate(config);
  const auto topology = plan.topology();
  RateSamples total;
  for (int t = 0; t < config.trials; ++t) {
    const auto realization = realize(topology, config.seed + static_cast<std::uint64_t>(t));
    const auto beams = design_beams(realization, plan);
    auto one = simulate_rates(realization, plan, beams, config);
    if (t == 0) {
      total = std::move(one);
      continue;
    }
    for (std::size_t u = 0; u < total.rates.size(); ++u)
      for (std::size_t k = 0; k < total.rates[u].size(); ++k) total.rates[u][k] += one.rates[u][k];
  }
  for (auto& row : total.rates)
    for (double& v : row) v /= static_cast<double>(config.trials);
  total.slopes.clear();
  if (sweep_fits(total.powers)) total.slopes = estimate_dof_slope(total);
  return total;
}

ReconstructionPlan plan_wyner_reconstruction(const ChannelRealization& realization, int M) {
  const auto& topology = realization.topology();
  const bool wyner = topology.interferers() == 1 && topology.kind() != Connectivity::FullyConnected;
  if (!wyner) throw Error(ErrorCode::UnsupportedTopology, "reconstruction needs a locally connected channel with L = 1");
  if (M < 1) throw Error(ErrorCode::InvalidM, "M must be >= 1");
  const int K = realization.users();
  const int block = 2 * M + 1;
  if (K % block != 0)
    throw Error(ErrorCode::InvalidK, "K must be a multiple of 2M+1 = " + std::to_string(block));

  ReconstructionPlan plan;
  plan.K = K;
  plan.M = M;
  for (int k = 1; k <= K; ++k)
    if ((k - 1) % block != M) plan.used_rx.push_back(k);
  for (int s = block; s <= K; s += block) plan.given_tx.push_back(s);

  const auto divide_check = [&](int rx, int tx) {
    if (std::abs(realization.h(rx, tx)) < kSingularDivisor)
      throw Error(ErrorCode::SingularChannel, "H[" + std::to_string(rx) + "][" + std::to_string(tx) + "] ~ 0");
  };
  for (int s : plan.given_tx) {
    const int base = s - block;
    for (int k = s; k >= base + M + 2; --k) {
      divide_check(k, k - 1);
      plan.steps.push_back({k - 1, k, k});
    }
    if (s < K) {
      for (int k = s + 1; k <= s + M; ++k) {
        divide_check(k, k);
        plan.steps.push_back({k, k, k - 1});
      }
    }
  }
  for (const auto& st : plan.steps) {
    std::map<int, double> coeff;
    if (auto it = plan.noise_coefficients.find(st.known); it != plan.noise_coefficients.end()) {
      const double ratio = realization.h(st.via, st.known);
      for (const auto& [z, c] : it->second) coeff[z] -= ratio * c;
    }
    coeff[st.via] += 1.0;
    const double d = realization.h(st.via, st.target);
    for (auto& [z, c] : coeff) c /= d;
    plan.noise_coefficients[st.target] = std::move(coeff);
  }
  return plan;
}

ReconstructionResult wyner_reconstruct(const ChannelRealization& realization, int M,
                                       const std::vector<double>& x, const std::vector<double>& z) {
  return wyner_reconstruct(realization, plan_wyner_reconstruction(realization, M), x, z);
}

ReconstructionResult wyner_reconstruct(const ChannelRealization& realization, const ReconstructionPlan& plan,
                                       const std::vector<double>& x, const std::vector<double>& z) {
  const int K = plan.K;
  if (static_cast<int>(x.size()) != K || static_cast<int>(z.size()) != K)
    throw Error(ErrorCode::InvalidArgument, "x and z must have length K");
  const auto H = [&](int rx, int tx) { return mpq_class(realization.h(rx, tx)); };

  std::vector<mpq_class> y(static_cast<std::size_t>(K) + 1);
  for (int k : plan.used_rx) {
    mpq_class v = H(k, k) * mpq_class(x[k - 1]) + mpq_class(z[k - 1]);
    if (k > 1) v += H(k, k - 1) * mpq_class(x[k - 2]);
    y[k] = v;
  }
  std::map<int, mpq_class> known;
  for (int s : plan.given_tx) known[s] = mpq_class(x[s - 1]);
  ReconstructionResult out;
  for (const auto& st : plan.steps) {
    mpq_class v = (y[st.via] - H(st.via, st.known) * known.at(st.known)) / H(st.via, st.target);
    known[st.target] = v;
    out.estimates[st.target] = v.get_d();
    out.residuals[st.target] = mpq_class(v - mpq_class(x[st.target - 1])).get_d();
  }
  return out;
}

}  // namespace comp_dof
