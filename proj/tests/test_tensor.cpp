#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "nsv/tensor.hpp"
#include "support.hpp"

using nsv::SymTensor;

TEST(Tensor, ContractionAndNormByHand) {
  const SymTensor a(2, {1, 2, 2, 3});
  const SymTensor b(2, {4, -1, -1, 0.5});
  EXPECT_DOUBLE_EQ(nsv::contract(a, b), 4 - 2 - 2 + 1.5);
  EXPECT_DOUBLE_EQ(a.norm(), std::sqrt(1 + 4 + 4 + 9.0));
  EXPECT_DOUBLE_EQ(a.trace(), 4.0);
}

TEST(Tensor, PowerLawOnDiagonalStrain) {
  // |diag(3, 4)| = 5, so A(D) = 5^{p-2} D.
  const auto d = SymTensor::diag({3, 4});
  EXPECT_LT(nsv::max_abs_diff(nsv::power_law_stress(d, 3.0), 5.0 * d), 1e-14);
  EXPECT_EQ(nsv::max_abs_diff(nsv::power_law_stress(d, 2.0), d), 0.0);
  EXPECT_LT(nsv::max_abs_diff(nsv::power_law_stress(d, 1.5), std::pow(5.0, -0.5) * d), 1e-15);
}

TEST(Tensor, ZeroStrainGivesZeroStressForEveryExponent) {
  for (double p : {1.01, 1.2, 1.5, 2.0, 3.0, 4.0})
    EXPECT_EQ(nsv::power_law_stress(SymTensor(3), p).norm(), 0.0) << p;
}

TEST(Tensor, RejectsBadInput) {
  EXPECT_THROW(nsv::power_law_stress(SymTensor(2, {0, 1, 0, 0}), 2.0), std::invalid_argument);
  EXPECT_THROW(nsv::power_law_stress(SymTensor::identity(2), 1.0), std::invalid_argument);
  EXPECT_THROW(SymTensor(4), std::invalid_argument);
  EXPECT_THROW(SymTensor(2, {1, 2, 3}), std::invalid_argument);
}

TEST(Tensor, MonotoneInequalitiesOnRandomPairs) {
  std::mt19937_64 rng(42);
  for (double p : {1.1, 1.2, 1.5, 2.0, 2.5, 3.0, 4.0}) {
    for (int trial = 0; trial < 500; ++trial) {
      const int dim = 2 + trial % 2;
      const double scale = std::pow(10.0, (trial % 7) - 3);
      const auto e = nsvtest::random_sym(rng, dim, scale);
      const auto f = nsvtest::random_sym(rng, dim, scale);
      EXPECT_GE(nsv::monotonicity_gap(e, f, p), -1e-12 * std::pow(scale, p));
      EXPECT_TRUE(nsv::check_lemma21(e, f, p).holds) << "p=" << p << " trial " << trial;
    }
  }
}

TEST(Tensor, BoundsAtPTwoByHand) {
  // p = 2: gap = |E-F|^2 and the bound is 2^{-1}|E-F|^2.
  const auto e = SymTensor::diag({1, -1});
  const auto f = SymTensor::diag({-1, 1});
  const auto r = nsv::check_lemma21(e, f, 2.0);
  EXPECT_NEAR(r.lhs, 4.0, 1e-13);
  EXPECT_NEAR(r.rhs, 8.0, 1e-13);
}

TEST(Tensor, PositivityIdentity) {
  std::mt19937_64 rng(7);
  for (double p : {1.2, 1.5, 2.0, 3.0, 4.0})
    for (int i = 0; i < 200; ++i) {
      const auto d = nsvtest::random_sym(rng, 3);
      const double lhs = nsv::contract(nsv::power_law_stress(d, p), d);
      EXPECT_NEAR(lhs, std::pow(d.norm(), p), 1e-12 * std::pow(d.norm(), p));
    }
}

TEST(Tensor, HomogeneityOfDegreePMinusOne) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> lam(0.01, 100.0), pd(1.05, 5.0);
  for (int i = 0; i < 1000; ++i) {
    const double l = lam(rng), p = pd(rng);
    const auto d = nsvtest::random_sym(rng, 2 + i % 2);
    const auto lhs = nsv::power_law_stress(l * d, p);
    const auto rhs = std::pow(l, p - 1) * nsv::power_law_stress(d, p);
    EXPECT_LE(nsv::max_abs_diff(lhs, rhs), 1e-12 * std::max(1.0, rhs.norm()));
  }
}

TEST(Tensor, SignFlippedStressBreaksMonotonicity) {
  const nsv::StressMap flipped = [](const SymTensor& d, double p) { return -1.0 * nsv::power_law_stress(d, p); };
  const auto e = SymTensor::diag({1, 0});
  const auto f = SymTensor::diag({0, 1});
  EXPECT_LT(nsv::monotonicity_gap(e, f, 2.0, flipped), 0.0);
  EXPECT_FALSE(nsv::check_lemma21(e, f, 2.0, flipped).holds);
}

TEST(Tensor, FiniteDifferenceSymGradientOfLinearField) {
  // v = (x + 2y, 3x - y): D = [[1, 2.5], [2.5, -1]].
  const nsv::VectorField v = [](const std::array<double, 3>& x) {
    return std::array<double, 3>{x[0] + 2 * x[1], 3 * x[0] - x[1], 0.0};
  };
  const auto d = nsv::fd_sym_gradient(v, 2, {0.3, 0.7, 0.0});
  EXPECT_LT(nsv::max_abs_diff(d, SymTensor(2, {1, 2.5, 2.5, -1})), 1e-12);
}

TEST(Tensor, ObjectivityUnderRotation) {
  const double c = std::cos(0.7), s = std::sin(0.7);
  const SymTensor q(2, {c, -s, s, c});
  const nsv::VectorField v = [](const std::array<double, 3>& x) {
    return std::array<double, 3>{std::sin(x[0]) * std::cos(x[1]), -std::cos(x[0]) * std::sin(x[1]), 0.0};
  };
  EXPECT_LT(nsv::objectivity_check(v, q), 1e-8);
  EXPECT_THROW(nsv::objectivity_check(v, SymTensor(2, {1, 1, 0, 1})), std::invalid_argument);
}
