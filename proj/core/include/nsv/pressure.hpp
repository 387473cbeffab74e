#pragma once

#include <optional>
#include <vector>

#include "nsv/galerkin.hpp"

namespace nsv {

/// Unprojected momentum right-hand side f - div(v v) + div(2 nu A(v) + 2 w B(v)),
/// products on the padded grid.
SpectralVelocity momentum_rhs(const SpectralVelocity& v, double t, const PdeParams& params);

/// Zero-mean pi with grad pi = (I - P) momentum_rhs.  The Voigt and
/// time-derivative terms are solenoidal and drop out.
SpectralScalar recover_pressure(const SpectralVelocity& v, double t, const PdeParams& params);

/// i k pi_k as a vector field.
SpectralVelocity pressure_gradient(const TorusGrid& grid, const SpectralScalar& pi);

/// Spectral d x d tensor, entry (i, j) at index i * dim + j.
using SpectralTensor = std::vector<SpectralScalar>;

/// Delta^{-1} div div G, zero mean.
SpectralScalar inverse_laplacian_divdiv(const TorusGrid& grid, const SpectralTensor& g);

/// G1 = 2 nu A(v);  G2 = -grad (-Delta)^{-1} f + 2 w B(v) - v (x) v.
/// div G1 + div G2 is the momentum right-hand side.
struct PressureTensors {
  SpectralTensor g1;
  SpectralTensor g2;
};

PressureTensors pressure_tensors(const SpectralVelocity& v, double t, const PdeParams& params);

struct PressureParts {
  TorusGrid grid;
  SpectralScalar pi1;  ///< viscous part
  SpectralScalar pi2;  ///< convective, forcing and regularizer part
  SpectralScalar pih;  ///< harmonic part; identically zero on the torus

  SpectralScalar sum() const;
  ScalarField collocation(const SpectralScalar& part) const { return scalar_to_collocation(grid, part); }
};

PressureParts decompose_pressure(const SpectralVelocity& v, double t, const PdeParams& params);

/// Space integrals entering the three bound ratios at one instant,
/// evaluated by padded-grid quadrature.
struct BoundSample {
  double t = 0.0;
  double pi1 = 0.0;          ///< ||pi1||_{m1}^{m1}
  double g1 = 0.0;           ///< ||G1||_{m1}^{m1}
  double pi2 = 0.0;          ///< ||pi2||_{m2}^{m2}
  double g2 = 0.0;           ///< ||G2||_{m2}^{m2}
  double grad_pi2 = 0.0;     ///< ||grad pi2||_{m2}^{m2}
  double g2_with_div = 0.0;  ///< || |G2| + |div G2| ||_{m2}^{m2}
};

BoundSample bound_sample(const SpectralVelocity& v, double t, const PdeParams& params, double m1, double m2);

/// Time-integrated ratios; nullopt where the denominator vanishes.
struct PressureBoundReport {
  double m1 = 0.0;
  double m2 = 0.0;
  std::optional<double> viscous;
  std::optional<double> convective;
  std::optional<double> gradient;
};

PressureBoundReport verify_pressure_bounds(const std::vector<BoundSample>& samples, double m1, double m2);
PressureBoundReport verify_pressure_bounds(const Trajectory& traj, const PdeParams& params, double m1,
                                           double m2);

}  // namespace nsv
