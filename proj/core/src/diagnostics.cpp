#include "nsv/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nsv {

double EnergyResidual::max_abs() const {
  double m = 0.0;
  for (double d : defect) m = std::max(m, std::abs(d));
  return m;
}

double trapezoid(const std::vector<double>& t, const std::vector<double>& y) {
  double s = 0.0;
  for (std::size_t i = 1; i < t.size(); ++i) s += 0.5 * (t[i] - t[i - 1]) * (y[i] + y[i - 1]);
  return s;
}

EnergyResidual energy_identity_residual(const EnergyLedger& ledger) {
  EnergyResidual res;
  if (ledger.rows.empty()) return res;
  const auto& rows = ledger.rows;
  const double e0 = rows.front().energy();
  double dissipated = 0.0;
  double work = 0.0;
  auto stress_power = [&](const LedgerRow& r) {
    return kStressScale * (ledger.nu * r.sym_grad_p + r.reg_sym_grad_beta);
  };
  res.times.push_back(rows.front().t);
  res.defect.push_back(0.0);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double h = rows[i].t - rows[i - 1].t;
    dissipated += 0.5 * h * (stress_power(rows[i]) + stress_power(rows[i - 1]));
    work += 0.5 * h * (rows[i].forcing_work + rows[i - 1].forcing_work);
    res.times.push_back(rows[i].t);
    res.defect.push_back(rows[i].energy() + 2.0 * dissipated - e0 - 2.0 * work);
  }
  return res;
}

double max_energy_increase(const EnergyLedger& ledger) {
  double worst = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < ledger.rows.size(); ++i)
    worst = std::max(worst, ledger.rows[i].energy() - ledger.rows[i - 1].energy());
  return ledger.rows.size() < 2 ? 0.0 : worst;
}

double gradient_power_integral(const SpectralVelocity& u, double q) {
  const auto grad = padded_gradient(u);
  const std::size_t n = grad.front().size();
  std::vector<double> mag(n);
  for (std::size_t x = 0; x < n; ++x) {
    double s = 0.0;
    for (const auto& g : grad) s += g[x] * g[x];
    mag[x] = std::sqrt(s);
  }
  return power_integral(u.grid().volume(), mag, q);
}

AprioriReport apriori_report(const Trajectory& traj, const SpectralVelocity& v0, const PdeParams& params) {
  AprioriReport rep;
  const auto& rows = traj.ledger.rows;
  if (rows.empty()) throw std::invalid_argument("empty ledger");
  rep.regularized = params.regularization.has_value() && params.regularization_weight() > 0.0;
  const double w = params.regularization_weight();
  const double beta = params.regularization_beta();

  std::vector<double> t, dissip, fdual, dtnorm;
  double sup_energy = 0.0, sup_grad = 0.0;
  for (const auto& r : rows) {
    t.push_back(r.t);
    dissip.push_back(params.nu * r.grad_p + r.reg_grad_beta);
    fdual.push_back(r.forcing_dual);
    dtnorm.push_back(r.dt_l2_sq + r.kappa_dt_grad_sq);
    sup_energy = std::max(sup_energy, r.energy());
    sup_grad = std::max(sup_grad, r.grad_p + r.reg_grad_beta);
  }
  const double forcing = trapezoid(t, fdual);

  rep.lhs_energy = sup_energy + trapezoid(t, dissip);
  rep.rhs_energy = forcing + l2_norm_sq(v0) + grad_norm_sq(v0);
  rep.lhs_time_derivative = sup_grad + trapezoid(t, dtnorm);
  rep.rhs_time_derivative = forcing + gradient_power_integral(v0, params.p);
  if (rep.regularized) rep.rhs_time_derivative += w * gradient_power_integral(v0, beta);

  rep.trivial = rep.rhs_energy == 0.0 && rep.rhs_time_derivative == 0.0;
  rep.constant_energy = rep.rhs_energy > 0.0 ? rep.lhs_energy / rep.rhs_energy : 0.0;
  rep.constant_time_derivative =
      rep.rhs_time_derivative > 0.0 ? rep.lhs_time_derivative / rep.rhs_time_derivative : 0.0;
  return rep;
}

double lebesgue_time_norm(const Trajectory& traj, double zeta) {
  if (!(zeta >= 1.0)) throw std::invalid_argument("zeta must be >= 1");
  std::vector<double> values;
  for (const auto& snap : traj.snapshots) {
    const auto vel = padded_values(snap);
    std::vector<double> mag(vel.front().size());
    for (std::size_t x = 0; x < mag.size(); ++x) {
      double s = 0.0;
      for (const auto& c : vel) s += c[x] * c[x];
      mag[x] = std::sqrt(s);
    }
    values.push_back(power_integral(snap.grid().volume(), mag, zeta));
  }
  return trapezoid(traj.times, values);
}

ConvectiveNormReport convective_norm_report(const Trajectory& traj, double r0) {
  ConvectiveNormReport rep;
  if (traj.snapshots.empty()) return rep;
  const int d = traj.snapshots.front().dim();
  const double upper = static_cast<double>(d) / (d - 1);
  if (r0 < 1.0 || r0 > upper + 1e-12)
    throw std::invalid_argument("r0 must lie in [1, d/(d-1)]");
  std::vector<double> tensor_vals, div_vals;
  for (const auto& snap : traj.snapshots) {
    const auto vel = padded_values(snap);
    const auto grad = padded_gradient(snap);
    const std::size_t n = vel.front().size();
    std::vector<double> tmag(n), dmag(n);
    for (std::size_t x = 0; x < n; ++x) {
      double speed_sq = 0.0, conv_sq = 0.0;
      for (int i = 0; i < d; ++i) {
        speed_sq += vel[i][x] * vel[i][x];
        // div(v v)_i = (v . grad) v_i for divergence-free v.
        double c = 0.0;
        for (int j = 0; j < d; ++j) c += vel[j][x] * grad[i * d + j][x];
        conv_sq += c * c;
      }
      tmag[x] = speed_sq;  // |v (x) v|_F = |v|^2
      dmag[x] = std::sqrt(conv_sq);
    }
    tensor_vals.push_back(power_integral(snap.grid().volume(), tmag, r0));
    div_vals.push_back(power_integral(snap.grid().volume(), dmag, r0));
  }
  rep.tensor_norm = trapezoid(traj.times, tensor_vals);
  rep.divergence_norm = trapezoid(traj.times, div_vals);
  return rep;
}

}  // namespace nsv
