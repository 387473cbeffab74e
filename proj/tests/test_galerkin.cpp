#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "nsv/diagnostics.hpp"
#include "nsv/galerkin.hpp"
#include "nsv/ledger.hpp"

using namespace nsv;

namespace {

PdeParams newtonian(double nu = 0.1, double kappa = 0.5) {
  PdeParams p;
  p.nu = nu;
  p.kappa = kappa;
  p.p = 2.0;
  return p;
}

// vol * sum (1 + kappa |k|^2) Re(a_k conj(b_k)): the Voigt-weighted pairing.
double mass_inner(const SpectralVelocity& a, const SpectralVelocity& b, double kappa) {
  const auto& g = a.grid();
  double s = 0.0;
  for (int c = 0; c < a.dim(); ++c)
    for (std::size_t f = 0; f < g.points(); ++f)
      s += (1.0 + kappa * g.wavenumber_sq(f)) * std::real(a.at(c, f) * std::conj(b.at(c, f)));
  return s * g.volume();
}

}  // namespace

TEST(Galerkin, SchemeNames) {
  EXPECT_EQ(parse_scheme("midpoint"), Scheme::midpoint);
  EXPECT_EQ(parse_scheme("rk4"), Scheme::explicit_rk4);
  EXPECT_EQ(parse_scheme(to_string(Scheme::explicit_rk4)), Scheme::explicit_rk4);
  EXPECT_THROW(parse_scheme("euler"), std::invalid_argument);
}

TEST(Galerkin, ConfigValidation) {
  SimConfig c;
  c.galerkin_n = 8;  // M = 16 holds shells up to 7
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c.galerkin_n = 7;
  c.dt = 2.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c.dt = 0.1;
  c.snapshot_every = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(Galerkin, ParamsValidation) {
  PdeParams p = newtonian();
  EXPECT_NO_THROW(p.validate(3));
  p.p = 1.0;
  EXPECT_THROW(p.validate(3), std::invalid_argument);
  p = newtonian();
  p.kappa = 0.0;
  EXPECT_THROW(p.validate(2), std::invalid_argument);
  p = newtonian();
  p.p = 1.4;
  p.regularization = Regularization{5.0 / 3.0, 2.0};
  EXPECT_NO_THROW(p.validate(3));
  p.regularization = Regularization{1.2, 2.0};  // below p
  EXPECT_THROW(p.validate(3), std::invalid_argument);
  p.regularization = Regularization{5.0 / 3.0, 2.5};
  EXPECT_THROW(p.validate(3), std::invalid_argument);
  EXPECT_TRUE(beta_admissible(5.0 / 3.0, 1.4, 3));
  EXPECT_FALSE(beta_admissible(3.5, 1.4, 3));
}

TEST(Galerkin, SingleModeTendencyAtPTwo) {
  // Taylor-Green: the convective term is a gradient, |k|^2 = 2.
  const TorusGrid g(2, 16);
  const auto p = newtonian(0.3, 0.7);
  GalerkinOperator op(g, 7, p);
  const auto v = taylor_green(g, 0.8);
  const auto dv = op.tendency(v, 0.0);
  const auto expected = (-2.0 * 0.3 / (1.0 + 2.0 * 0.7)) * v;
  EXPECT_LT(max_coeff_diff(dv, expected), 1e-15);
}

TEST(Galerkin, TendencyEnergyPairingIsExact) {
  // <(I - kappa Delta) d_t v, v> = -2 nu int |D|^p - 2 w int |D|^beta + <f, v>.
  for (int dim : {2, 3}) {
    const TorusGrid g(dim, dim == 2 ? 16 : 8);
    const int n = g.max_shell();
    for (double pexp : {1.5, 2.0, 3.0}) {
      PdeParams p = newtonian(0.2, 0.4);
      p.p = pexp;
      p.forcing = Forcing::steady(random_velocity(g, 2, 0.5, 3));
      if (dim == 3) p.regularization = Regularization{3.0, 4.0};
      GalerkinOperator op(g, n, p);
      const auto v = random_velocity(g, n, 1.0, 4);
      SpectralVelocity dv(g);
      const auto row = op.diagnose(v, 0.0, dv);
      const double lhs = mass_inner(dv, v, p.kappa);
      const double rhs =
          -kStressScale * (p.nu * row.sym_grad_p + row.reg_sym_grad_beta) + row.forcing_work;
      EXPECT_NEAR(lhs, rhs, 1e-12 * std::max(1.0, std::abs(rhs))) << dim << " p=" << pexp;
    }
  }
}

TEST(Galerkin, TaylorGreenMatchesClosedForm) {
  const TorusGrid g(2, 16);
  SimConfig c;
  c.grid = g;
  c.galerkin_n = 7;
  c.dt = 0.01;
  c.t_end = 0.5;
  c.fixed_point_tol = 1e-14;
  const auto p = newtonian();
  const auto traj = integrate(c, p, taylor_green(g));
  const double rate = -2 * p.nu / (1 + 2 * p.kappa);
  const auto exact = std::exp(rate * c.t_end) * taylor_green(g);
  EXPECT_LT(std::sqrt(l2_norm_sq(traj.final_state() - exact)), 1e-6);
}

TEST(Galerkin, SolutionStaysInShellAndSolenoidal) {
  const TorusGrid g(3, 12);
  SimConfig c;
  c.grid = g;
  c.galerkin_n = 3;
  c.dt = 0.05;
  c.t_end = 0.25;
  PdeParams p = newtonian(0.1, 0.3);
  p.p = 1.5;
  p.forcing = Forcing::steady(random_velocity(g, 5, 0.5, 9));
  const auto traj = integrate(c, p, random_velocity(g, 5, 1.0, 8));
  for (const auto& s : traj.snapshots) {
    EXPECT_LT(max_divergence(s), 1e-13);
    EXPECT_LT(reality_defect(s), 1e-14);
    for (std::size_t f = 0; f < g.points(); ++f)
      if (g.shell(f) > 3) ASSERT_EQ(std::abs(s.at(0, f)) + std::abs(s.at(2, f)), 0.0);
  }
  EXPECT_EQ(traj.ledger.rows.size(), 6u);
  EXPECT_EQ(traj.snapshots.size(), 6u);
}

TEST(Galerkin, SnapshotStrideKeepsFinalState) {
  const TorusGrid g(2, 8);
  SimConfig c;
  c.grid = g;
  c.galerkin_n = 3;
  c.dt = 0.1;
  c.t_end = 0.5;
  c.snapshot_every = 2;
  const auto traj = integrate(c, newtonian(), random_velocity(g, 3, 1.0, 1));
  EXPECT_EQ(traj.times, (std::vector<double>{0.0, 0.2, 0.4, 0.5}));
}

TEST(Galerkin, MidpointAndRk4AgreeAtSmallStep) {
  const TorusGrid g(2, 16);
  SimConfig c;
  c.grid = g;
  c.galerkin_n = 5;
  c.dt = 0.005;
  c.t_end = 0.2;
  c.fixed_point_tol = 1e-14;
  PdeParams p = newtonian();
  p.p = 3.0;
  const auto v0 = random_velocity(g, 4, 1.0, 2);
  const auto a = integrate(c, p, v0).final_state();
  c.scheme = Scheme::explicit_rk4;
  const auto b = integrate(c, p, v0).final_state();
  // Midpoint error is O(dt^2) ~ 1e-5 relative.
  EXPECT_LT(std::sqrt(l2_norm_sq(a - b) / l2_norm_sq(b)), 1e-4);
}

TEST(Galerkin, HugeStepRaisesDivergenceWithTime) {
  const TorusGrid g(2, 16);
  SimConfig c;
  c.grid = g;
  c.galerkin_n = 7;
  c.dt = 50.0;
  c.t_end = 200.0;
  PdeParams p = newtonian();
  p.p = 1.5;
  try {
    integrate(c, p, random_velocity(g, 4, 1.0, 1));
    FAIL() << "expected FixedPointDiverged";
  } catch (const FixedPointDiverged& e) {
    EXPECT_GE(e.time(), 0.0);
    EXPECT_LT(e.time(), 200.0);
  }
}

TEST(Galerkin, RejectsCompressibleInitialData) {
  const TorusGrid g(2, 8);
  const auto u = sample_velocity(g, [](const std::array<double, 3>& x) {
    return std::array<double, 3>{std::sin(x[0]), 0.0, 0.0};
  });
  SimConfig c;
  c.grid = g;
  c.galerkin_n = 3;
  EXPECT_THROW(integrate(c, newtonian(), u), std::invalid_argument);
}

TEST(Galerkin, SolveRegularizedNeedsPair) {
  const TorusGrid g(3, 8);
  SimConfig c;
  c.grid = g;
  c.galerkin_n = 3;
  c.dt = 0.1;
  c.t_end = 0.1;
  PdeParams p = newtonian();
  p.p = 1.4;
  const auto v0 = random_velocity(g, 3, 1.0, 1);
  EXPECT_THROW(solve_regularized(c, p, v0), std::invalid_argument);
  p.regularization = Regularization{5.0 / 3.0, 2.0};
  const auto traj = solve_regularized(c, p, v0);
  EXPECT_GT(traj.ledger.rows.front().reg_grad_beta, 0.0);
  EXPECT_NEAR(traj.ledger.reg_weight, 0.5, 0.0);
}

TEST(Galerkin, InfiniteRegularizationIndexSwitchesTermOff) {
  const TorusGrid g(3, 8);
  SimConfig c;
  c.grid = g;
  c.galerkin_n = 3;
  c.dt = 0.1;
  c.t_end = 0.3;
  PdeParams p = newtonian();
  p.p = 1.4;
  const auto v0 = random_velocity(g, 3, 1.0, 1);
  const auto plain = integrate(c, p, v0).final_state();
  p.regularization = Regularization{5.0 / 3.0, std::numeric_limits<double>::infinity()};
  EXPECT_EQ(max_coeff_diff(integrate(c, p, v0).final_state(), plain), 0.0);
}

TEST(Galerkin, LedgerCsvHeaderAndPrecision) {
  EnergyLedger l;
  LedgerRow r;
  r.l2_sq = 0.1;
  l.rows.push_back(r);
  std::ostringstream os;
  write_ledger_csv(os, l);
  const auto text = os.str();
  EXPECT_EQ(text.substr(0, text.find('\n')),
            "step,t,l2_sq,kappa_grad_sq,grad_p,sym_grad_p,reg_grad_beta,reg_sym_grad_beta,"
            "reg_stress_dual,forcing_work,forcing_dual,dt_l2_sq,kappa_dt_grad_sq,iterations");
  EXPECT_NE(text.find("0.10000000000000001"), std::string::npos);
}

TEST(Galerkin, MidpointStepSolvesItsImplicitEquation) {
  // Slow Picard contraction (p = 1.5, small kappa) exercises the mixed iteration.
  const TorusGrid g(2, 16);
  SimConfig c;
  c.grid = g;
  c.galerkin_n = 7;
  c.dt = 0.05;
  c.fixed_point_tol = 1e-12;
  PdeParams p = newtonian(0.1, 0.01);
  p.p = 1.5;
  GalerkinOperator op(g, 7, p);
  const auto v = random_velocity(g, 4, 1.0, 1);
  const auto r = step(op, v, op.tendency(v, 0.0), 0.0, c.dt, c);
  auto mid = v + r.state;
  mid *= 0.5;
  auto residual = r.state - v;
  residual.axpy(-c.dt, op.tendency(mid, 0.5 * c.dt));
  EXPECT_LT(std::sqrt(l2_norm_sq(residual) / l2_norm_sq(r.state)), 1e-10);
}

TEST(Galerkin, ShearThinningSmallKappaRunCompletes) {
  const TorusGrid g(2, 16);
  SimConfig c;
  c.grid = g;
  c.galerkin_n = 7;
  c.dt = 0.05;
  c.t_end = 1.0;
  PdeParams p = newtonian(0.1, 0.01);
  p.p = 1.5;
  const auto traj = integrate(c, p, random_velocity(g, 4, 1.0, 1));
  EXPECT_LE(max_energy_increase(traj.ledger), 0.0);
}
