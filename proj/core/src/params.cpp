#include "nsv/params.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nsv {

double Regularization::weight() const { return std::isinf(n_reg) ? 0.0 : 1.0 / n_reg; }

bool beta_admissible(double beta, double p, int dim) {
  const double lower = std::max((3.0 * dim - 4.0) / dim, p);
  constexpr double slack = 1e-12;
  return beta >= lower - slack && beta <= dim + slack;
}

Forcing Forcing::steady(SpectralVelocity shape) {
  Forcing f;
  f.add(std::move(shape), [](double) { return 1.0; });
  return f;
}

void Forcing::add(SpectralVelocity shape, std::function<double(double)> profile) {
  if (!terms_.empty() && !(terms_.front().shape.grid() == shape.grid()))
    throw std::invalid_argument("forcing terms must share one grid");
  terms_.push_back({std::move(shape), std::move(profile)});
}

SpectralVelocity Forcing::evaluate(const TorusGrid& grid, double t) const {
  SpectralVelocity out(grid);
  evaluate_into(out, t);
  return out;
}

void Forcing::evaluate_into(SpectralVelocity& out, double t) const {
  std::fill(out.coeffs().begin(), out.coeffs().end(), Complex{});
  for (const auto& term : terms_) out.axpy(term.profile(t), term.shape);
}

void PdeParams::validate(int dim) const {
  if (!(nu > 0.0)) throw std::invalid_argument("viscosity nu must be positive");
  if (!(kappa > 0.0)) throw std::invalid_argument("relaxation time kappa must be positive");
  require_exponent(p);
  if (regularization) {
    if (!(regularization->n_reg >= 1.0))
      throw std::invalid_argument("regularization index must be >= 1");
    if (!std::isinf(regularization->n_reg) &&
        regularization->n_reg != std::floor(regularization->n_reg))
      throw std::invalid_argument("regularization index must be an integer");
    if (!beta_admissible(regularization->beta, p, dim))
      throw std::invalid_argument("beta outside [max{(3d-4)/d, p}, d]");
  }
}

double PdeParams::regularization_weight() const {
  return regularization ? regularization->weight() : 0.0;
}

double PdeParams::regularization_beta() const {
  return regularization ? regularization->beta : 2.0;
}

}  // namespace nsv
