#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nsv/spectral.hpp"

namespace nsv {

/// Factor between the deviatoric viscous stress and the power-law map:
/// tau = 2 nu |D|^{p-2} D (Kelvin-Voigt/Ostwald-de Waele law), so the
/// momentum balance carries div(2 nu A(v)).  At p = 2 this is nu * Laplacian.
inline constexpr double kStressScale = 2.0;

/// Auxiliary stress (1/n_reg) |D|^{beta-2} D used for small exponents.
struct Regularization {
  double beta = 2.0;
  /// Regularization index; +infinity switches the term off exactly.
  double n_reg = 1.0;

  double weight() const;
};

/// Admissible window max{(3d-4)/d, p} <= beta <= d.
bool beta_admissible(double beta, double p, int dim);

/// One separable forcing contribution f(x, t) = profile(t) * shape(x).
struct ForcingTerm {
  SpectralVelocity shape;
  std::function<double(double)> profile;
};

class Forcing {
 public:
  Forcing() = default;

  static Forcing steady(SpectralVelocity shape);

  void add(SpectralVelocity shape, std::function<double(double)> profile);
  bool empty() const { return terms_.empty(); }
  const std::vector<ForcingTerm>& terms() const { return terms_; }

  /// Coefficients at time t on the given grid (zero when empty).
  SpectralVelocity evaluate(const TorusGrid& grid, double t) const;
  void evaluate_into(SpectralVelocity& out, double t) const;

 private:
  std::vector<ForcingTerm> terms_;
};

struct PdeParams {
  double nu = 0.0;
  double kappa = 0.0;
  double p = 2.0;
  Forcing forcing;
  std::optional<Regularization> regularization;

  /// Throws std::invalid_argument on nu <= 0, kappa <= 0, p <= 1 or an
  /// inadmissible regularization pair.
  void validate(int dim) const;
  double regularization_weight() const;
  double regularization_beta() const;
};

}  // namespace nsv
