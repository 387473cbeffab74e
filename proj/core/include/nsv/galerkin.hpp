#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "nsv/ledger.hpp"
#include "nsv/params.hpp"
#include "nsv/spectral.hpp"

namespace nsv {

enum class Scheme { midpoint, explicit_rk4 };

Scheme parse_scheme(const std::string& name);
std::string to_string(Scheme s);

struct SimConfig {
  TorusGrid grid{2, 16};
  int galerkin_n = 7;  ///< shell cutoff |k|_inf <= n
  double dt = 1e-2;
  double t_end = 1.0;
  Scheme scheme = Scheme::midpoint;
  double fixed_point_tol = 1e-10;
  int max_fixed_point_iters = 50;
  /// Keep every k-th state (the final state is always kept).
  int snapshot_every = 1;

  void validate() const;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<SpectralVelocity> snapshots;
  EnergyLedger ledger;

  const SpectralVelocity& final_state() const { return snapshots.back(); }
};

/// Raised when the implicit midpoint iteration fails to contract; the
/// usual remedy is a smaller time step.
class FixedPointDiverged : public std::runtime_error {
 public:
  FixedPointDiverged(double time, int iterations, double increment);
  double time() const { return time_; }
  int iterations() const { return iterations_; }

 private:
  double time_;
  int iterations_;
};

/// Right-hand side of the Galerkin system on one grid and shell.
///
/// Per wavenumber k in the shell:
///   (1 + kappa |k|^2) d_t v_k = P_k [ f_k - i k . (v v)_k + i k . (tau)_k ]
/// with tau = 2 nu A(v) + (2/n_reg) B(v) and P the Leray projector.  Products
/// and stresses are evaluated on the 3/2-padded grid.  Instances own scratch
/// buffers and must not be shared between threads.
class GalerkinOperator {
 public:
  GalerkinOperator(const TorusGrid& grid, int shell, PdeParams params);

  const TorusGrid& grid() const { return grid_; }
  int shell() const { return shell_; }
  const PdeParams& params() const { return params_; }

  SpectralVelocity tendency(const SpectralVelocity& v, double t);
  void tendency_into(const SpectralVelocity& v, double t, SpectralVelocity& out);

  /// Tendency plus every ledger functional at (v, t).
  LedgerRow diagnose(const SpectralVelocity& v, double t, SpectralVelocity& tendency_out);

 private:
  void assemble(const SpectralVelocity& v, double t, SpectralVelocity& out, LedgerRow* row);

  TorusGrid grid_;
  int shell_;
  PdeParams params_;
  Padding padding_;
  std::vector<std::array<double, 3>> kvec_;
  std::vector<double> mass_inv_;  // 0 outside the shell
  SpectralVelocity forcing_now_;
  std::vector<std::vector<Complex>> vel_, grad_, flux_;
  std::vector<Complex> scratch_, spec_;
  std::vector<std::vector<Complex>> flux_hat_;
};

struct StepResult {
  SpectralVelocity state;
  int iterations = 0;
};

/// One step of the chosen scheme.  `current_tendency` is d_t v at (v, t);
/// it seeds the midpoint predictor and is the first RK4 stage.
StepResult step(GalerkinOperator& op, const SpectralVelocity& v, const SpectralVelocity& current_tendency,
                double t, double dt, const SimConfig& config);

/// P^n v0 after checking that v0 is divergence free.
SpectralVelocity project_initial(const SpectralVelocity& v0, int n);

/// Integrates from 0 to t_end, recording a ledger row at every step.
/// Throws FixedPointDiverged carrying the failing time.
Trajectory integrate(const SimConfig& config, const PdeParams& params, const SpectralVelocity& v0);

/// integrate() for the problem with the auxiliary stress; requires
/// params.regularization.
Trajectory solve_regularized(const SimConfig& config, const PdeParams& params,
                             const SpectralVelocity& v0);

}  // namespace nsv
