#include "nsv/pressure.hpp"

#include <cmath>

#include "nsv/diagnostics.hpp"

namespace nsv {

namespace {

constexpr Complex kI{0.0, 1.0};

// Pointwise tensors on the padded grid, returned as coarse coefficients.
struct PointwiseTensors {
  SpectralTensor viscous;     // 2 nu A(v)
  SpectralTensor convective;  // 2 w B(v) - v (x) v
};

PointwiseTensors pointwise_tensors(const SpectralVelocity& v, const PdeParams& params) {
  const auto& g = v.grid();
  const int d = v.dim();
  const auto vel = padded_values(v);
  const auto grad = padded_gradient(v);
  const Padding pad(g);
  const std::size_t n = pad.padded_points();
  const double w = params.regularization_weight();
  const double beta = params.regularization_beta();

  std::vector<std::vector<Complex>> visc(d * d, std::vector<Complex>(n));
  std::vector<std::vector<Complex>> conv(d * d, std::vector<Complex>(n));
  double dmat[3][3];
  for (std::size_t x = 0; x < n; ++x) {
    double sq = 0.0;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        dmat[i][j] = 0.5 * (grad[i * d + j][x] + grad[j * d + i][x]);
        sq += dmat[i][j] * dmat[i][j];
      }
    const double norm = std::sqrt(sq);
    const double fa = kStressScale * params.nu * power_law_factor(norm, params.p);
    const double fb = w > 0.0 ? kStressScale * w * power_law_factor(norm, beta) : 0.0;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        visc[i * d + j][x] = fa * dmat[i][j];
        conv[i * d + j][x] = fb * dmat[i][j] - vel[i][x] * vel[j][x];
      }
  }
  PointwiseTensors out;
  std::vector<Complex> scratch(n);
  for (int c = 0; c < d * d; ++c) {
    out.viscous.emplace_back(g.points());
    out.convective.emplace_back(g.points());
    pad.to_spectral(visc[c], scratch, out.viscous.back());
    pad.to_spectral(conv[c], scratch, out.convective.back());
  }
  return out;
}

SpectralVelocity forcing_at(const TorusGrid& grid, double t, const PdeParams& params) {
  return params.forcing.evaluate(grid, t);
}

// sum_j i k_j T_ij
SpectralVelocity tensor_divergence(const TorusGrid& g, const SpectralTensor& tensor) {
  const int d = g.dim();
  SpectralVelocity out(g);
  for (std::size_t f = 0; f < g.points(); ++f) {
    const auto k = g.wavevector(f);
    for (int i = 0; i < d; ++i) {
      Complex s = 0.0;
      for (int j = 0; j < d; ++j) s += kI * k[j] * tensor[i * d + j][f];
      out.at(i, f) = s;
    }
  }
  return out;
}

std::vector<double> frobenius(const std::vector<ScalarField>& comps) {
  std::vector<double> mag(comps.front().size());
  for (std::size_t x = 0; x < mag.size(); ++x) {
    double s = 0.0;
    for (const auto& c : comps) s += c[x] * c[x];
    mag[x] = std::sqrt(s);
  }
  return mag;
}

std::optional<double> ratio(double num, double den) {
  if (den == 0.0) return std::nullopt;
  return num / den;
}

}  // namespace

SpectralVelocity momentum_rhs(const SpectralVelocity& v, double t, const PdeParams& params) {
  const auto& g = v.grid();
  auto parts = pointwise_tensors(v, params);
  for (std::size_t c = 0; c < parts.viscous.size(); ++c)
    for (std::size_t f = 0; f < g.points(); ++f) parts.viscous[c][f] += parts.convective[c][f];
  auto rhs = tensor_divergence(g, parts.viscous);
  rhs += forcing_at(g, t, params);
  return rhs;
}

SpectralScalar recover_pressure(const SpectralVelocity& v, double t, const PdeParams& params) {
  const auto& g = v.grid();
  const auto rhs = momentum_rhs(v, t, params);
  SpectralScalar pi(g.points());
  for (std::size_t f = 0; f < g.points(); ++f) {
    const double k2 = g.wavenumber_sq(f);
    if (k2 == 0.0 || g.is_nyquist(f)) continue;
    const auto k = g.wavevector(f);
    Complex dot = 0.0;
    for (int i = 0; i < g.dim(); ++i) dot += k[i] * rhs.at(i, f);
    pi[f] = -kI * dot / k2;
  }
  return pi;
}

SpectralVelocity pressure_gradient(const TorusGrid& grid, const SpectralScalar& pi) {
  SpectralVelocity out(grid);
  for (std::size_t f = 0; f < grid.points(); ++f) {
    const auto k = grid.wavevector(f);
    for (int i = 0; i < grid.dim(); ++i) out.at(i, f) = kI * k[i] * pi[f];
  }
  return out;
}

SpectralScalar inverse_laplacian_divdiv(const TorusGrid& g, const SpectralTensor& tensor) {
  const int d = g.dim();
  SpectralScalar out(g.points());
  for (std::size_t f = 0; f < g.points(); ++f) {
    const double k2 = g.wavenumber_sq(f);
    if (k2 == 0.0 || g.is_nyquist(f)) continue;
    const auto k = g.wavevector(f);
    Complex s = 0.0;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) s += k[i] * k[j] * tensor[i * d + j][f];
    out[f] = s / k2;
  }
  return out;
}

PressureTensors pressure_tensors(const SpectralVelocity& v, double t, const PdeParams& params) {
  const auto& g = v.grid();
  const int d = g.dim();
  auto parts = pointwise_tensors(v, params);
  const auto f = forcing_at(g, t, params);
  for (std::size_t x = 0; x < g.points(); ++x) {
    const double k2 = g.wavenumber_sq(x);
    if (k2 == 0.0) continue;
    const auto k = g.wavevector(x);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) parts.convective[i * d + j][x] -= kI * k[j] * f.at(i, x) / k2;
  }
  return {std::move(parts.viscous), std::move(parts.convective)};
}

SpectralScalar PressureParts::sum() const {
  SpectralScalar s(pi1.size());
  for (std::size_t f = 0; f < s.size(); ++f) s[f] = pi1[f] + pi2[f] + pih[f];
  return s;
}

PressureParts decompose_pressure(const SpectralVelocity& v, double t, const PdeParams& params) {
  const auto& g = v.grid();
  const auto tensors = pressure_tensors(v, t, params);
  return PressureParts{g, inverse_laplacian_divdiv(g, tensors.g1), inverse_laplacian_divdiv(g, tensors.g2),
                       SpectralScalar(g.points())};
}

BoundSample bound_sample(const SpectralVelocity& v, double t, const PdeParams& params, double m1, double m2) {
  const auto& g = v.grid();
  const double vol = g.volume();
  const auto tensors = pressure_tensors(v, t, params);
  const auto pi1 = inverse_laplacian_divdiv(g, tensors.g1);
  const auto pi2 = inverse_laplacian_divdiv(g, tensors.g2);

  auto padded_tensor = [&](const SpectralTensor& tensor) {
    std::vector<ScalarField> comps;
    for (const auto& c : tensor) comps.push_back(padded_scalar(g, c));
    return frobenius(comps);
  };
  auto padded_abs = [&](const SpectralScalar& s) {
    auto vals = padded_scalar(g, s);
    for (double& x : vals) x = std::abs(x);
    return vals;
  };

  BoundSample out;
  out.t = t;
  out.pi1 = power_integral(vol, padded_abs(pi1), m1);
  out.g1 = power_integral(vol, padded_tensor(tensors.g1), m1);
  out.pi2 = power_integral(vol, padded_abs(pi2), m2);
  const auto g2mag = padded_tensor(tensors.g2);
  out.g2 = power_integral(vol, g2mag, m2);
  out.grad_pi2 = power_integral(vol, frobenius(padded_values(pressure_gradient(g, pi2))), m2);
  const auto div_mag = frobenius(padded_values(tensor_divergence(g, tensors.g2)));
  std::vector<double> combined(g2mag.size());
  for (std::size_t x = 0; x < combined.size(); ++x) combined[x] = g2mag[x] + div_mag[x];
  out.g2_with_div = power_integral(vol, combined, m2);
  return out;
}

PressureBoundReport verify_pressure_bounds(const std::vector<BoundSample>& samples, double m1, double m2) {
  std::vector<double> t, pi1, g1, pi2, g2, gp, gd;
  for (const auto& s : samples) {
    t.push_back(s.t);
    pi1.push_back(s.pi1);
    g1.push_back(s.g1);
    pi2.push_back(s.pi2);
    g2.push_back(s.g2);
    gp.push_back(s.grad_pi2);
    gd.push_back(s.g2_with_div);
  }
  // A single sample is an instantaneous check; weight it as unit time.
  auto integral = [&](const std::vector<double>& y) { return t.size() == 1 ? y[0] : trapezoid(t, y); };
  PressureBoundReport rep;
  rep.m1 = m1;
  rep.m2 = m2;
  if (samples.empty()) return rep;
  rep.viscous = ratio(integral(pi1), integral(g1));
  rep.convective = ratio(integral(pi2), integral(g2));
  rep.gradient = ratio(integral(gp), integral(gd));
  return rep;
}

PressureBoundReport verify_pressure_bounds(const Trajectory& traj, const PdeParams& params, double m1,
                                           double m2) {
  std::vector<BoundSample> samples;
  for (std::size_t i = 0; i < traj.snapshots.size(); ++i)
    samples.push_back(bound_sample(traj.snapshots[i], traj.times[i], params, m1, m2));
  return verify_pressure_bounds(samples, m1, m2);
}

}  // namespace nsv
