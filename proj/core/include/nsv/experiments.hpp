#pragma once

#include <functional>
#include <string>
#include <vector>

#include "nsv/diagnostics.hpp"
#include "nsv/galerkin.hpp"

namespace nsv {

/// Runs fn(0..count-1) on up to `threads` workers.  Results are stored by
/// index, so output order never depends on scheduling.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn);

// -- Taylor-Green -------------------------------------------------------------

struct TaylorGreenReport {
  double expected_rate = 0.0;  ///< -2 nu / (1 + 2 kappa) in |k| = 1 units
  double measured_rate = 0.0;  ///< log(|v(T)| / |v(0)|) / T
  double terminal_l2_error = 0.0;
  double relative_error = 0.0;  ///< terminal error / exact norm (0 for amplitude 0)
};

/// 2-D, p = 2 decaying vortex on the periodic box.
TaylorGreenReport run_taylor_green(const SimConfig& config, const PdeParams& params, double amplitude = 1.0);

// -- manufactured solutions -----------------------------------------------------

/// Target a(t) u(x); `profile` and `profile_rate` are a and a'.
struct ManufacturedTarget {
  SpectralVelocity shape;
  std::function<double(double)> profile;
  std::function<double(double)> profile_rate;

  static ManufacturedTarget steady(SpectralVelocity u);
  /// a(t) = 1 + eps sin(omega t).
  static ManufacturedTarget oscillating(SpectralVelocity u, double eps, double omega);
};

/// Forcing reproducing the target exactly, built on a grid of twice the
/// resolution and truncated to `grid`.
Forcing manufactured_forcing(const ManufacturedTarget& target, const PdeParams& params, const TorusGrid& grid);

struct ManufacturedReport {
  double terminal_l2_error = 0.0;
  double target_norm = 0.0;
  double max_l2_error = 0.0;  ///< over stored snapshots
};

/// Integrates with the manufactured forcing (params.forcing is replaced).
ManufacturedReport run_manufactured(const SimConfig& config, const PdeParams& params,
                                    const ManufacturedTarget& target);

// -- Gronwall stability ---------------------------------------------------------

struct GronwallReport {
  std::vector<double> times;
  std::vector<double> grad_w_sq;  ///< ||grad w(t)||_2^2
  double fitted_rate = 0.0;       ///< slope of log(||grad w||^2 / ||grad w(0)||^2), second half
  double fitted_intercept = 0.0;
  /// max_t [log ratio - fitted line]; <= 0 means the whole curve sits below the line.
  double max_excess = 0.0;
  bool identical = false;  ///< w vanished identically
};

/// w = v_a - v_b for two runs sharing the forcing.
GronwallReport run_gronwall_pair(const SimConfig& config, const PdeParams& params, const SpectralVelocity& va,
                                 const SpectralVelocity& vb);

/// Second datum v0 + delta * direction / ||direction||_{W^{1,2}}.
GronwallReport run_gronwall(const SimConfig& config, const PdeParams& params, const SpectralVelocity& v0,
                            const SpectralVelocity& direction, double delta);

/// Dominant perturbation direction at v0: `cycles` rounds of integrating
/// v0 and v0 + eps d over `cycle_time`, each time replacing d by the
/// renormalized difference.  Unit W^{1,2} norm on return.
SpectralVelocity bred_direction(const SimConfig& config, const PdeParams& params, const SpectralVelocity& v0,
                                const SpectralVelocity& seed, int cycles, double cycle_time, double eps = 1e-6);

/// Least-squares line through (x, y); returns {slope, intercept}.
std::pair<double, double> fit_line(const std::vector<double>& x, const std::vector<double>& y);

// -- Galerkin refinement ----------------------------------------------------------

struct RefinementRow {
  int coarse_shell = 0;
  int fine_shell = 0;
  double l2_space_time = 0.0;  ///< (int ||v_c - v_f||_2^2 dt)^{1/2}
  double sup_h1 = 0.0;         ///< sup_t (||v_c - v_f||_2^2 + ||grad(v_c - v_f)||_2^2)^{1/2}
};

/// Shells must be strictly increasing; one shell gives an empty table.
std::vector<RefinementRow> run_refinement(const SimConfig& config, const PdeParams& params,
                                          const SpectralVelocity& v0, const std::vector<int>& shells,
                                          int threads = 1);

// -- regularization sweep ------------------------------------------------------------

struct RegularizationSweepReport {
  double beta = 0.0;
  std::vector<double> n_values;
  std::vector<double> stress_dual;  ///< int ||(1/n) B(v_n)||_{beta'}^{beta'} dt
  std::vector<double> reg_energy;   ///< (1/n) int ||grad v_n||_beta^beta dt
  double slope = 0.0;               ///< log-log slope over finite n
};

/// n = +infinity entries switch the regularizer off and contribute 0.
RegularizationSweepReport run_regularization_sweep(const SimConfig& config, const PdeParams& params,
                                                   const SpectralVelocity& v0, double beta,
                                                   const std::vector<double>& n_values, int threads = 1);

// -- kappa sweep -----------------------------------------------------------------------

struct KappaSweepRow {
  double kappa = 0.0;
  double initial_energy = 0.0;
  double terminal_energy = 0.0;
  double decay_rate = 0.0;  ///< log(E(T)/E(0)) / T
  double max_energy_increase = 0.0;
};

std::vector<KappaSweepRow> run_kappa_sweep(const SimConfig& config, const PdeParams& params,
                                           const SpectralVelocity& v0, const std::vector<double>& kappas,
                                           int threads = 1);

// -- a-priori sweep ----------------------------------------------------------------------

struct AprioriSweepRow {
  int shell = 0;
  AprioriReport report;
};

std::vector<AprioriSweepRow> run_apriori_sweep(const SimConfig& config, const PdeParams& params,
                                               const SpectralVelocity& v0, const std::vector<int>& shells,
                                               int threads = 1);

/// (max - min) / max of the values; 0 for an empty or all-zero list.
double relative_spread(const std::vector<double>& values);

}  // namespace nsv
