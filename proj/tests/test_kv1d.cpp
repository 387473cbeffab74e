#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "nsv/galerkin.hpp"
#include "nsv/kv1d.hpp"

using namespace nsv;
constexpr double kPi = std::numbers::pi;

namespace {

Kv1dParams kv(double p, double nu = 0.2, double kappa = 0.3) {
  Kv1dParams q;
  q.nu = nu;
  q.kappa = kappa;
  q.p = p;
  return q;
}

// (2/L) int_0^L nu |v_x|^{p-2} v_x cos(w x) dx by composite Simpson on a fine grid.
double stress_cosine_coefficient(const std::vector<double>& a, const Kv1dParams& q, int k) {
  const double L = q.length;
  const int n = 200000;
  const double h = L / n;
  double s = 0.0;
  for (int j = 0; j <= n; ++j) {
    const double x = j * h;
    double vx = 0.0;
    for (std::size_t m = 0; m < a.size(); ++m) {
      const double w = (m + 1) * kPi / L;
      vx += a[m] * w * std::cos(w * x);
    }
    const double tau = q.nu * (vx == 0.0 ? 0.0 : std::pow(std::abs(vx), q.p - 2.0)) * vx;
    const double weight = (j == 0 || j == n) ? 1.0 : (j % 2 ? 4.0 : 2.0);
    s += weight * tau * std::cos(k * kPi * x / L);
  }
  return 2.0 / L * s * h / 3.0;
}

}  // namespace

TEST(Kv1d, ParamsValidation) {
  EXPECT_NO_THROW(kv(1.5).validate());
  EXPECT_THROW(kv(1.0).validate(), std::invalid_argument);
  EXPECT_THROW(kv(2.0, 0.0).validate(), std::invalid_argument);
  EXPECT_THROW(kv(2.0, 0.1, -1.0).validate(), std::invalid_argument);
  EXPECT_THROW(Kv1dOperator(0, kv(2.0)), std::invalid_argument);
}

TEST(Kv1d, SineStateValuesAndExactBoundaryZeros) {
  const SineState s{{1.0, -0.5, 0.25}, kPi};
  EXPECT_NEAR(s.value(kPi / 2), 1.0 - 0.0 - 0.25, 1e-15);
  EXPECT_EQ(s.value(0.0), 0.0);
  EXPECT_EQ(s.value(kPi), 0.0);
  const auto vals = s.sample(8);
  ASSERT_EQ(vals.size(), 9u);
  EXPECT_EQ(vals.front(), 0.0);
  EXPECT_EQ(vals.back(), 0.0);
  EXPECT_NEAR(vals[4], s.value(kPi / 2), 1e-15);
}

TEST(Kv1d, LinearTendencyPerMode) {
  // p = 2: d_t a_k = -nu w^2 a_k / (1 + kappa w^2), w = k on (0, pi).
  const auto q = kv(2.0);
  Kv1dOperator op(5, q);
  const std::vector<double> a{0.3, -1.0, 0.5, 0.0, 2.0};
  std::vector<double> out;
  op.tendency(a, 0.0, out);
  for (int k = 1; k <= 5; ++k)
    EXPECT_NEAR(out[k - 1], -q.nu * k * k * a[k - 1] / (1 + q.kappa * k * k), 1e-14) << k;
}

TEST(Kv1d, NonlinearTendencyAgainstFineQuadrature) {
  for (double p : {1.5, 3.0, 4.0}) {
    const auto q = kv(p);
    // Zero padding refines the collocation grid the quadrature runs on.
    std::vector<double> a(128, 0.0);
    a[0] = 1.0, a[1] = 0.4, a[2] = -0.3, a[3] = 0.1, a[4] = 0.05;
    Kv1dOperator op(static_cast<int>(a.size()), q);
    std::vector<double> out;
    op.tendency(a, 0.0, out);
    for (int k = 1; k <= 5; ++k) {
      const double expected = -k * stress_cosine_coefficient(a, q, k) / (1 + q.kappa * k * k);
      EXPECT_NEAR(out[k - 1], expected, 2e-3 * std::abs(expected) + 1e-9) << "p=" << p << " k=" << k;
    }
  }
}

TEST(Kv1d, SingleModeDecayMatchesClosedForm) {
  const auto q = kv(2.0, 0.1, 0.5);
  Kv1dConfig c;
  c.dt = 1e-3;
  c.t_end = 1.0;
  c.fixed_point_tol = 1e-14;
  const auto tr = integrate_1d(SineState{{1.0, 0.0, 0.0, 0.0}, kPi}, q, c);
  const double exact = std::exp(-q.nu * c.t_end / (1 + q.kappa));
  EXPECT_NEAR(tr.snapshots.back().coeffs[0], exact, 1e-7);
  for (int k = 1; k < 4; ++k) EXPECT_LT(std::abs(tr.snapshots.back().coeffs[k]), 1e-15);
}

TEST(Kv1d, ForcedLinearModelApproachesSteadyState) {
  // f = F sin(2x): a_2 -> F / (nu 4).
  const auto q = kv(2.0, 0.5, 0.1);
  Kv1dConfig c;
  c.dt = 0.01;
  c.t_end = 30.0;
  c.snapshot_every = 100;
  const auto tr = integrate_1d(SineState{{0.0, 0.0, 0.0}, kPi}, q, c,
                               [](double) { return std::vector<double>{0.0, 1.0, 0.0}; });
  EXPECT_NEAR(tr.snapshots.back().coeffs[1], 1.0 / (0.5 * 4), 1e-6);
}

TEST(Kv1d, EnergyDefectIsSecondOrder) {
  for (double p : {1.3, 4.0}) {
    const auto q = kv(p);
    double defect[2];
    for (int r = 0; r < 2; ++r) {
      Kv1dConfig c;
      c.dt = 0.02 / (1 << r);
      c.t_end = 1.0;
      c.fixed_point_tol = 1e-14;
      const auto tr = integrate_1d(SineState{{1.0, -0.4, 0.2, 0.1, 0.0, 0.0, 0.0, 0.0}, kPi}, q, c,
                                   [](double t) { return std::vector<double>{0.3 * std::cos(t), 0.1}; });
      defect[r] = std::abs(energy_check_1d(tr).back());
    }
    const double ratio = defect[0] / defect[1];
    EXPECT_GT(ratio, 3.5) << p;
    EXPECT_LT(ratio, 4.5) << p;
  }
}

TEST(Kv1d, UnforcedEnergyDecays) {
  const auto q = kv(1.5);
  Kv1dConfig c;
  c.dt = 0.01;
  c.t_end = 1.0;
  const auto tr = integrate_1d(SineState{{1.0, 0.5, -0.2, 0.0}, kPi}, q, c);
  for (std::size_t i = 1; i < tr.ledger.rows.size(); ++i)
    EXPECT_LE(tr.ledger.rows[i].energy(), tr.ledger.rows[i - 1].energy() * (1 + 1e-14));
  for (const auto& s : tr.snapshots) {
    EXPECT_EQ(s.value(0.0), 0.0);
    EXPECT_EQ(s.value(kPi), 0.0);
  }
}

TEST(Kv1d, NonDefaultLengthScalesWavenumbers) {
  auto q = kv(2.0);
  q.length = 2.0;
  Kv1dOperator op(1, q);
  std::vector<double> out;
  op.tendency({1.0}, 0.0, out);
  const double w = kPi / 2.0;
  EXPECT_NEAR(out[0], -q.nu * w * w / (1 + q.kappa * w * w), 1e-14);
  EXPECT_THROW(integrate_1d(SineState{{1.0}, kPi}, q, Kv1dConfig{}), std::invalid_argument);
}

TEST(Kv1d, HugeStepDivergesWithTime) {
  const auto q = kv(4.0, 1.0, 0.01);
  Kv1dConfig c;
  c.dt = 10.0;
  c.t_end = 100.0;
  EXPECT_THROW(integrate_1d(SineState{{5.0, 3.0, 2.0, 1.0}, kPi}, q, c), FixedPointDiverged);
}
