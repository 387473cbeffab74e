#include <gtest/gtest.h>

#include <atomic>
#include <cmath>
#include <stdexcept>

#include "nsv/diagnostics.hpp"
#include "nsv/experiments.hpp"
#include "nsv/galerkin.hpp"

using namespace nsv;

namespace {

SimConfig small_config(int dim = 2) {
  SimConfig c;
  c.grid = TorusGrid(dim, 8);
  c.galerkin_n = 3;
  c.dt = 0.05;
  c.t_end = 0.3;
  return c;
}

PdeParams small_params(double p = 2.0) {
  PdeParams q;
  q.nu = 0.1;
  q.kappa = 0.5;
  q.p = p;
  return q;
}

}  // namespace

TEST(Experiments, ParallelForCoversEveryIndexOnce) {
  std::vector<std::atomic<int>> hits(100);
  parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i]++; });
  for (const auto& h : hits) EXPECT_EQ(h.load(), 1);
  parallel_for(0, 4, [](std::size_t) { FAIL(); });
}

TEST(Experiments, ParallelForRethrows) {
  EXPECT_THROW(parallel_for(10, 3,
                            [](std::size_t i) {
                              if (i == 7) throw std::runtime_error("boom");
                            }),
               std::runtime_error);
}

TEST(Experiments, FitLineAndSpreadByHand) {
  const auto [slope, icept] = fit_line({0, 1, 2, 3}, {1, 3, 5, 7});
  EXPECT_NEAR(slope, 2.0, 1e-14);
  EXPECT_NEAR(icept, 1.0, 1e-14);
  EXPECT_THROW(fit_line({1}, {1}), std::invalid_argument);
  EXPECT_THROW(fit_line({1, 1}, {1, 2}), std::invalid_argument);
  EXPECT_NEAR(relative_spread({2.0, 1.9, 2.1}), 0.2 / 2.1, 1e-15);
  EXPECT_EQ(relative_spread({}), 0.0);
}

TEST(Experiments, TaylorGreenReport) {
  SimConfig c = small_config();
  c.grid = TorusGrid(2, 16);
  c.galerkin_n = 7;
  c.dt = 0.01;
  c.t_end = 0.5;
  c.fixed_point_tol = 1e-14;
  const auto rep = run_taylor_green(c, small_params());
  EXPECT_DOUBLE_EQ(rep.expected_rate, -0.2 / 2.0);
  EXPECT_NEAR(rep.measured_rate, rep.expected_rate, 1e-6);
  EXPECT_LT(rep.relative_error, 1e-6);
  EXPECT_THROW(run_taylor_green(c, small_params(3.0)), std::invalid_argument);
  EXPECT_THROW(run_taylor_green(small_config(3), small_params()), std::invalid_argument);
}

TEST(Experiments, SteadyManufacturedSolutionIsReproduced) {
  // The forcing is exact on the retained modes, so only time error remains.
  SimConfig c;
  c.grid = TorusGrid(3, 12);
  c.galerkin_n = 5;
  c.dt = 0.05;
  c.t_end = 0.5;
  c.fixed_point_tol = 1e-13;
  const auto target = ManufacturedTarget::steady(abc_flow(c.grid, 1.0, 0.5, 0.5));
  const auto rep = run_manufactured(c, small_params(2.0), target);
  EXPECT_LT(rep.max_l2_error, 1e-10 * rep.target_norm);
}

TEST(Experiments, OscillatingTargetProfile) {
  const TorusGrid g(2, 8);
  const auto t = ManufacturedTarget::oscillating(taylor_green(g), 0.5, 2.0);
  EXPECT_DOUBLE_EQ(t.profile(0.0), 1.0);
  EXPECT_NEAR(t.profile(0.3), 1.0 + 0.5 * std::sin(0.6), 1e-15);
  EXPECT_NEAR(t.profile_rate(0.3), 1.0 * std::cos(0.6), 1e-15);
}

TEST(Experiments, GronwallZeroPerturbationIsIdentical) {
  const auto c = small_config();
  const auto v0 = random_velocity(c.grid, 3, 1.0, 1);
  const auto dir = random_velocity(c.grid, 3, 1.0, 2);
  const auto rep = run_gronwall(c, small_params(1.5), v0, dir, 0.0);
  EXPECT_TRUE(rep.identical);
  for (double w : rep.grad_w_sq) EXPECT_EQ(w, 0.0);
  EXPECT_THROW(run_gronwall(c, small_params(), v0, SpectralVelocity(c.grid), 1e-6), std::invalid_argument);
}

TEST(Experiments, GronwallPerturbationDecaysForNewtonianUnforcedFlow) {
  const auto c = small_config();
  const auto v0 = random_velocity(c.grid, 3, 0.1, 1);
  const auto rep = run_gronwall(c, small_params(), v0, random_velocity(c.grid, 3, 1.0, 2), 1e-6);
  EXPECT_FALSE(rep.identical);
  // ||grad w(0)||^2 = delta^2 ||grad d||^2 / ||d||_{W^{1,2}}^2 < delta^2.
  EXPECT_LT(rep.grad_w_sq.front(), 1e-12);
  EXPECT_GT(rep.grad_w_sq.front(), 0.5e-12);
  EXPECT_LT(rep.fitted_rate, 0.0);
}

TEST(Experiments, BredDirectionHasUnitNorm) {
  const auto c = small_config();
  const auto v0 = random_velocity(c.grid, 3, 1.0, 1);
  const auto d = bred_direction(c, small_params(), v0, random_velocity(c.grid, 3, 1.0, 2), 2, 0.2);
  EXPECT_NEAR(l2_norm_sq(d) + grad_norm_sq(d), 1.0, 1e-12);
}

TEST(Experiments, RefinementTableShape) {
  SimConfig c = small_config();
  c.grid = TorusGrid(2, 16);
  const auto v0 = random_velocity(c.grid, 6, 1.0, 3);
  EXPECT_TRUE(run_refinement(c, small_params(3.0), v0, {4}).empty());
  EXPECT_THROW(run_refinement(c, small_params(3.0), v0, {4, 4}), std::invalid_argument);
  const auto rows = run_refinement(c, small_params(3.0), v0, {2, 4, 7}, 2);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].coarse_shell, 2);
  EXPECT_EQ(rows[1].fine_shell, 7);

  // Direct recomputation of the first row.
  auto c2 = c, c4 = c;
  c2.galerkin_n = 2;
  c4.galerkin_n = 4;
  const auto a = integrate(c2, small_params(3.0), v0);
  const auto b = integrate(c4, small_params(3.0), v0);
  double sup = 0.0;
  for (std::size_t i = 0; i < a.snapshots.size(); ++i) {
    const auto d = a.snapshots[i] - b.snapshots[i];
    sup = std::max(sup, std::sqrt(l2_norm_sq(d) + grad_norm_sq(d)));
  }
  EXPECT_NEAR(rows[0].sup_h1, sup, 1e-12 * sup);
}

TEST(Experiments, RegularizationSweepDecreasesInN) {
  SimConfig c = small_config(3);
  PdeParams p = small_params(1.4);
  const auto v0 = random_velocity(c.grid, 3, 1.0, 3);
  const auto rep = run_regularization_sweep(c, p, v0, 5.0 / 3.0, {1, 2, 4, 8}, 2);
  ASSERT_EQ(rep.stress_dual.size(), 4u);
  for (std::size_t i = 1; i < 4; ++i) EXPECT_LT(rep.stress_dual[i], rep.stress_dual[i - 1]);
  EXPECT_LT(rep.slope, -1.0);
}

TEST(Experiments, KappaSweepIsDissipative) {
  const auto c = small_config();
  const auto rows = run_kappa_sweep(c, small_params(1.5), random_velocity(c.grid, 3, 1.0, 4), {0.1, 1.0, 10.0});
  ASSERT_EQ(rows.size(), 3u);
  for (const auto& r : rows) {
    EXPECT_LT(r.terminal_energy, r.initial_energy);
    EXPECT_LE(r.max_energy_increase, 0.0);
  }
  // Larger relaxation time slows the decay.
  EXPECT_LT(rows[0].decay_rate, rows[2].decay_rate);
}

TEST(Experiments, AprioriSweepRowsPerShell) {
  const auto c = small_config();
  const auto rows = run_apriori_sweep(c, small_params(3.0), random_velocity(c.grid, 2, 1.0, 4), {1, 2, 3});
  ASSERT_EQ(rows.size(), 3u);
  for (const auto& r : rows) EXPECT_GT(r.report.constant_energy, 0.0);
}
