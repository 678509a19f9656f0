#include "comp_dof/simulator.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <map>
#include <random>

using namespace comp_dof;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::InvalidArgument;
}

}  // namespace

TEST(PowerSweep, DecibelsToLinear) {
  const auto p = power_sweep_db(30, 60, 10);
  ASSERT_EQ(p.size(), 4u);
  EXPECT_DOUBLE_EQ(p[0], 1e3);
  EXPECT_NEAR(p[3], 1e6, 1e-6);
  EXPECT_THROW(power_sweep_db(30, 20, 10), Error);
}

TEST(Simulate, VerifiedPlanSlopeExample) {
  const auto plan = plan_clusters(7, 3, 1);
  const auto h = realize(plan.topology(), 0);
  const auto s = simulate_rates(h, plan, design_beams(h, plan), {{1e3, 1e4, 1e5, 1e6}, 1, 0});
  for (int u = 1; u <= 7; ++u) {
    if (u == 4) {
      EXPECT_EQ(s.slopes[u - 1], 0.0);
      continue;
    }
    EXPECT_GE(s.slopes[u - 1], 0.95) << u;
    EXPECT_LE(s.slopes[u - 1], 1.05) << u;
  }
}

TEST(Simulate, SlopesApproachOneAtHighPower) {
  // Finite-SNR slopes dip for weak draws; far enough up the sweep every
  // active user reaches unit slope.
  for (auto [M, L] : std::vector<std::pair<int, int>>{{3, 1}, {1, 1}, {2, 2}}) {
    const auto plan = plan_clusters(2 * (2 * M + L), M, L);
    const auto active = plan.active_users();
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      const auto s = simulate_plan(plan, {power_sweep_db(120, 150, 5), 1, seed});
      ASSERT_EQ(s.slopes.size(), static_cast<std::size_t>(plan.K));
      for (int u = 1; u <= plan.K; ++u) {
        if (contains(active, u)) {
          EXPECT_NEAR(s.slopes[u - 1], 1.0, 0.01) << M << L << " seed " << seed << " user " << u;
        } else {
          EXPECT_LT(std::abs(s.slopes[u - 1]), 1e-12);
          for (double r : s.rates[u - 1]) EXPECT_EQ(r, 0.0);
        }
      }
    }
  }
}

TEST(Simulate, TrialsAverageRates) {
  const auto plan = plan_clusters(6, 2, 2);
  const auto sweep = power_sweep_db(20, 50, 10);
  const auto avg = simulate_plan(plan, {sweep, 2, 5});
  const auto a = simulate_plan(plan, {sweep, 1, 5});
  const auto b = simulate_plan(plan, {sweep, 1, 6});
  for (int u = 1; u <= 6; ++u)
    for (std::size_t k = 0; k < sweep.size(); ++k)
      EXPECT_NEAR(avg.rates[u - 1][k], (a.rates[u - 1][k] + b.rates[u - 1][k]) / 2, 1e-12);
}

TEST(Simulate, PerTransmitterPowerHolds) {
  const auto plan = plan_clusters(10, 2, 1);
  const auto h = realize(plan.topology(), 3);
  const auto beams = design_beams(h, plan);
  const double P = 1e4;
  const auto s = simulate_rates(h, plan, beams, {{P}, 1, 0});
  // Recover P_i from the rate of each active user and check every transmitter.
  std::map<int, double> stream_power;
  for (int i : plan.active_users()) {
    const double g = beams.effective_gain(h, i, i);
    stream_power[i] = (std::exp2(s.rates[i - 1][0]) - 1.0) / (g * g);
  }
  for (int tx = 1; tx <= 10; ++tx) {
    double used = 0.0;
    for (const auto& [i, beam] : beams.beams)
      if (auto it = beam.coefficients.find(tx); it != beam.coefficients.end())
        used += it->second * it->second * stream_power.at(i);
    EXPECT_LE(used, P * (1 + 1e-9)) << tx;
  }
}

TEST(Simulate, RatesGrowWithPower) {
  const auto plan = plan_clusters(7, 3, 1);
  const auto s = simulate_plan(plan, {power_sweep_db(0, 60, 10), 1, 4});
  for (int u : plan.active_users())
    for (std::size_t k = 1; k < s.powers.size(); ++k) EXPECT_GT(s.rates[u - 1][k], s.rates[u - 1][k - 1]);
}

TEST(Simulate, UncancelledInterferenceFlattensTheSlope) {
  const auto t = build_topology(Connectivity::LocalShifted, 3, 1);
  const auto h = realize(t, 2);
  BeamDesign bare;
  bare.K = 3;
  for (int i = 1; i <= 3; ++i) bare.beams[i] = MessageBeam{i, {{i, 1.0}}};
  const auto s = simulate_rates(h, IndexSet{1, 2, 3}, bare, {power_sweep_db(30, 60, 5), 1, 0});
  EXPECT_GT(s.slopes[0], 0.95);
  EXPECT_LT(s.slopes[1], 0.1);
  EXPECT_LT(s.slopes[2], 0.1);
}

TEST(Simulate, SlopeNeedsAWideSweep) {
  const auto plan = plan_clusters(3, 1, 1);
  const auto h = realize(plan.topology(), 0);
  const auto beams = design_beams(h, plan);
  const auto narrow = simulate_rates(h, plan, beams, {power_sweep_db(30, 50, 10), 1, 0});
  EXPECT_TRUE(narrow.slopes.empty());
  EXPECT_EQ(code_of([&] { estimate_dof_slope(narrow); }), ErrorCode::InsufficientSweep);
  const auto two = simulate_rates(h, plan, beams, {{1e3, 1e6}, 1, 0});
  EXPECT_EQ(code_of([&] { estimate_dof_slope(two); }), ErrorCode::InsufficientSweep);
}

TEST(Simulate, RejectsBadConfigAndBeams) {
  const auto plan = plan_clusters(3, 1, 1);
  const auto h = realize(plan.topology(), 0);
  auto beams = design_beams(h, plan);
  EXPECT_EQ(code_of([&] { simulate_rates(h, plan, beams, {{}, 1, 0}); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([&] { simulate_rates(h, plan, beams, {{10, 5, 100}, 1, 0}); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([&] { simulate_plan(plan, {{10, 100, 1000}, 0, 0}); }), ErrorCode::InvalidArgument);
  beams.beams.at(1).coefficients.at(1) = std::nan("");
  EXPECT_EQ(code_of([&] { simulate_rates(h, plan, beams, {{10, 100, 1000}, 1, 0}); }), ErrorCode::PowerViolation);
}

TEST(Simulate, DeterministicPerSeed) {
  const auto plan = plan_clusters(10, 2, 1);
  const SimulationConfig config{power_sweep_db(20, 60, 10), 2, 9};
  EXPECT_EQ(simulate_plan(plan, config).rates, simulate_plan(plan, config).rates);
}

TEST(Reconstruction, PlanShape) {
  const auto h = realize(build_topology(Connectivity::LocalShifted, 7, 1), 0);
  const auto p = plan_wyner_reconstruction(h, 3);
  EXPECT_EQ(p.given_tx, (IndexSet{7}));
  EXPECT_EQ(p.used_rx, (IndexSet{1, 2, 3, 5, 6, 7}));
  IndexSet targets;
  for (const auto& st : p.steps) targets.push_back(st.target);
  EXPECT_EQ(targets, (IndexSet{6, 5, 4}));

  const auto h14 = realize(build_topology(Connectivity::LocalShifted, 14, 1), 0);
  const auto q = plan_wyner_reconstruction(h14, 3);
  EXPECT_EQ(q.given_tx, (IndexSet{7, 14}));
  EXPECT_EQ(q.used_rx, (IndexSet{1, 2, 3, 5, 6, 7, 8, 9, 10, 12, 13, 14}));
  EXPECT_EQ(q.steps.size(), 9u);
}

TEST(Reconstruction, Errors) {
  EXPECT_EQ(code_of([] { plan_wyner_reconstruction(realize(build_topology(Connectivity::LocalShifted, 8, 1), 0), 3); }),
            ErrorCode::InvalidK);
  EXPECT_EQ(code_of([] { plan_wyner_reconstruction(realize(build_topology(Connectivity::LocalShifted, 6, 2), 0), 1); }),
            ErrorCode::UnsupportedTopology);
  const auto h = realize(build_topology(Connectivity::LocalShifted, 3, 1), 0).with_coefficient(3, 2, 1e-15);
  EXPECT_EQ(code_of([&] { plan_wyner_reconstruction(h, 1); }), ErrorCode::SingularChannel);
}

TEST(Reconstruction, NoiselessIsExact) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  for (int M = 1; M <= 3; ++M) {
    const int K = 2 * (2 * M + 1);
    const auto h = realize(build_topology(Connectivity::LocalShifted, K, 1), M);
    std::vector<double> x(K), z(K, 0.0);
    for (double& v : x) v = 1e3 * g(rng);
    const auto r = wyner_reconstruct(h, M, x, z);
    EXPECT_EQ(r.residuals.size(), static_cast<std::size_t>(3 * M));
    for (const auto& [k, res] : r.residuals) EXPECT_EQ(res, 0.0) << k;
  }
}

TEST(Reconstruction, ResidualsIgnorePowerAndMatchDenseSolve) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g;
  for (int M = 1; M <= 3; ++M) {
    const int K = 2 * (2 * M + 1);
    const auto h = realize(build_topology(Connectivity::LocalShifted, K, 1), 10 + M);
    const auto plan = plan_wyner_reconstruction(h, M);
    const auto dense = oracle::dense_reconstruction_noise(h, M);
    std::vector<double> x0(K), z(K);
    for (double& v : x0) v = g(rng);
    for (double& v : z) v = g(rng);
    std::map<int, double> first;
    for (double P : {1e2, 1e4, 1e6}) {
      std::vector<double> x(K);
      for (int k = 0; k < K; ++k) x[k] = std::sqrt(P) * x0[k];
      const auto r = wyner_reconstruct(h, plan, x, z);
      if (first.empty()) first = r.residuals;
      EXPECT_EQ(r.residuals, first);
    }
    for (const auto& [target, coeff] : plan.noise_coefficients) {
      double predicted = 0.0;
      for (const auto& [rx, c] : coeff) {
        EXPECT_NEAR(c, dense.at(target).at(rx), 1e-10 * std::max(1.0, std::abs(c)));
        predicted += c * z[rx - 1];
      }
      for (const auto& [rx, c] : dense.at(target))
        if (std::abs(c) > 1e-12) EXPECT_TRUE(coeff.count(rx)) << target << ' ' << rx;
      EXPECT_NEAR(first.at(target), predicted, 1e-10 * std::max(1.0, std::abs(predicted)));
    }
  }
}
