#pragma once

#include <optional>
#include <vector>

#include "nsv/galerkin.hpp"

namespace nsv {

/// Defect of the discrete energy balance
///   E(T) + 2 int_0^T int tau : D  -  E(0)  -  2 int_0^T <f, v>
/// with E = ||v||^2 + kappa ||grad v||^2 and tau : D = 2 nu |D|^p + (2/n) |D|^beta,
/// time integrals by the trapezoid rule on the ledger rows.
struct EnergyResidual {
  std::vector<double> times;
  std::vector<double> defect;

  double max_abs() const;
  double terminal() const { return defect.empty() ? 0.0 : defect.back(); }
};

EnergyResidual energy_identity_residual(const EnergyLedger& ledger);

/// Largest step-to-step growth of ||v||^2 + kappa ||grad v||^2 (<= 0 when dissipative).
double max_energy_increase(const EnergyLedger& ledger);

/// Both sides of the two a-priori estimates and their ratios.
///   (1) sup(||v||^2 + kappa||grad v||^2) + int nu ||grad v||_p^p (+ (1/n)||grad v||_b^b)
///       vs  int ||f||_{p'}^{p'} + ||v0||^2 + ||grad v0||^2
///   (2) sup ||grad v||_p^p (+ (1/n)||grad v||_b^b) + int ||d_t v||^2 + kappa ||grad d_t v||^2
///       vs  int ||f||_{p'}^{p'} + ||grad v0||_p^p (+ (1/n)||grad v0||_b^b)
struct AprioriReport {
  double lhs_energy = 0.0;
  double rhs_energy = 0.0;
  double constant_energy = 0.0;
  double lhs_time_derivative = 0.0;
  double rhs_time_derivative = 0.0;
  double constant_time_derivative = 0.0;
  bool trivial = false;  ///< both right-hand sides vanish
  bool regularized = false;
};

AprioriReport apriori_report(const Trajectory& traj, const SpectralVelocity& v0, const PdeParams& params);

/// int_0^T ||v(t)||_zeta^zeta dt over the stored snapshots (zeta >= 1).
double lebesgue_time_norm(const Trajectory& traj, double zeta);

struct ConvectiveNormReport {
  double tensor_norm = 0.0;      ///< int ||v (x) v||_{r0}^{r0}
  double divergence_norm = 0.0;  ///< int ||div(v (x) v)||_{r0}^{r0}
};

/// Rejects r0 outside [1, d/(d-1)].
ConvectiveNormReport convective_norm_report(const Trajectory& traj, double r0);

/// ||grad u||_q^q by padded-grid quadrature.
double gradient_power_integral(const SpectralVelocity& u, double q);

/// Trapezoid rule for samples y(t_i).
double trapezoid(const std::vector<double>& t, const std::vector<double>& y);

}  // namespace nsv
