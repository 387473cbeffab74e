#pragma once

#include <functional>
#include <vector>

#include "nsv/galerkin.hpp"
#include "nsv/ledger.hpp"

namespace nsv {

/// Scalar power-law Kelvin-Voigt model on (0, L) with v = 0 at both ends:
///   d_t (v - kappa v_xx) = d_x (nu |v_x|^{p-2} v_x) + f.
struct Kv1dParams {
  double nu = 0.0;
  double kappa = 0.0;
  double p = 2.0;
  double length = 3.14159265358979323846;

  void validate() const;
};

/// v(x) = sum_{k=1}^{M} a_k sin(k pi x / L).
struct SineState {
  std::vector<double> coeffs;
  double length = 3.14159265358979323846;

  int modes() const { return static_cast<int>(coeffs.size()); }
  /// Point value; exactly zero at x = 0 and x = L.
  double value(double x) const;
  /// Values at x_j = j L / n, j = 0..n.
  std::vector<double> sample(int n) const;
};

/// Sine coefficients of the forcing at time t (empty means f = 0).
using SineForcing = std::function<std::vector<double>(double)>;

struct Kv1dConfig {
  double dt = 1e-3;
  double t_end = 1.0;
  double fixed_point_tol = 1e-10;
  int max_fixed_point_iters = 50;
  int snapshot_every = 1;
};

/// Ledger rows reuse the 3-D column layout: grad_p = sym_grad_p = ||v_x||_p^p,
/// kappa_grad_sq = kappa ||v_x||_2^2; regularizer columns stay 0.
struct Trajectory1d {
  std::vector<double> times;
  std::vector<SineState> snapshots;
  EnergyLedger ledger;
};

/// d_t a per mode; the nonlinearity is evaluated at x_j = j L / (2M) through
/// a type-I cosine transform.
class Kv1dOperator {
 public:
  Kv1dOperator(int modes, Kv1dParams params, SineForcing forcing = {});
  ~Kv1dOperator();
  Kv1dOperator(const Kv1dOperator&) = delete;
  Kv1dOperator& operator=(const Kv1dOperator&) = delete;

  int modes() const { return modes_; }
  void tendency(const std::vector<double>& a, double t, std::vector<double>& out);
  LedgerRow diagnose(const std::vector<double>& a, double t, std::vector<double>& out);

 private:
  void assemble(const std::vector<double>& a, double t, std::vector<double>& out, LedgerRow* row);

  int modes_;
  int n_;  // collocation intervals
  Kv1dParams params_;
  SineForcing forcing_;
  std::vector<double> wave_;  // k pi / L
  std::vector<double> mass_inv_;
  std::vector<double> buf_, cos_;
  void* plan_ = nullptr;
};

Trajectory1d integrate_1d(const SineState& initial, const Kv1dParams& params, const Kv1dConfig& config,
                          const SineForcing& forcing = {});

/// Defect of ||v||^2 + kappa ||v_x||^2 + 2 nu int int |v_x|^p - initial - 2 int int f v
/// per ledger row, trapezoid rule in time.
std::vector<double> energy_check_1d(const Trajectory1d& traj);

}  // namespace nsv
