#include "nsv/galerkin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

namespace nsv {

Scheme parse_scheme(const std::string& name) {
  if (name == "midpoint") return Scheme::midpoint;
  if (name == "explicit_rk4" || name == "rk4") return Scheme::explicit_rk4;
  throw std::invalid_argument("unknown scheme '" + name + "'");
}

std::string to_string(Scheme s) { return s == Scheme::midpoint ? "midpoint" : "explicit_rk4"; }

void SimConfig::validate() const {
  if (galerkin_n < 1) throw std::invalid_argument("galerkin shell must be >= 1");
  if (galerkin_n > grid.max_shell())
    throw std::invalid_argument("galerkin shell exceeds the grid (max " +
                                std::to_string(grid.max_shell()) + ")");
  if (!(dt > 0.0) || !(t_end > 0.0)) throw std::invalid_argument("dt and t_end must be positive");
  if (!(dt < t_end) && dt != t_end) throw std::invalid_argument("dt must not exceed t_end");
  if (!(fixed_point_tol > 0.0)) throw std::invalid_argument("fixed_point_tol must be positive");
  if (max_fixed_point_iters < 1) throw std::invalid_argument("max_fixed_point_iters must be >= 1");
  if (snapshot_every < 1) throw std::invalid_argument("snapshot_every must be >= 1");
}

FixedPointDiverged::FixedPointDiverged(double time, int iterations, double increment)
    : std::runtime_error([&] {
        std::ostringstream os;
        os.precision(17);
        os << "fixed-point iteration diverged at t=" << time << " after " << iterations
           << " iterations (last increment " << increment << "); reduce dt";
        return os.str();
      }()),
      time_(time),
      iterations_(iterations) {}

// ---------------------------------------------------------------------------

namespace {

int sym_count(int d) { return d * (d + 1) / 2; }

// Packed index of (i, j), i <= j, in the d(d+1)/2 symmetric storage.
int sym_index(int i, int j, int d) {
  if (i > j) std::swap(i, j);
  return i * d - i * (i - 1) / 2 + (j - i);
}

double coeff_norm(const SpectralVelocity& v) {
  double s = 0.0;
  for (const auto& c : v.coeffs()) s += std::norm(c);
  return std::sqrt(s);
}

double coeff_dist(const SpectralVelocity& a, const SpectralVelocity& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.coeffs().size(); ++i) s += std::norm(a.coeffs()[i] - b.coeffs()[i]);
  return std::sqrt(s);
}

bool all_finite(const SpectralVelocity& v) {
  return std::all_of(v.coeffs().begin(), v.coeffs().end(),
                     [](const Complex& c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); });
}

double real_dot(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
  return s;
}

// Anderson mixing for x = G(x).  Given x and g = G(x), replaces g by the
// next iterate g - sum_j gamma_j dG_j, where gamma minimises
// |f - sum_j gamma_j dF_j| over the stored differences of f = g - x.
// Solves the small least-squares problem by modified Gram-Schmidt and
// drops numerically dependent columns.
class AndersonMixer {
 public:
  explicit AndersonMixer(std::size_t depth) : depth_(depth) {}

  void mix(const SpectralVelocity& x, SpectralVelocity& g) {
    const auto& gc = g.coeffs();
    std::vector<Complex> f(gc.size());
    for (std::size_t i = 0; i < f.size(); ++i) f[i] = gc[i] - x.coeffs()[i];
    if (!f_prev_.empty()) {
      df_.push_back(f);
      dg_.push_back(gc);
      for (std::size_t i = 0; i < f.size(); ++i) {
        df_.back()[i] -= f_prev_[i];
        dg_.back()[i] -= g_prev_[i];
      }
      if (df_.size() > depth_) {
        df_.erase(df_.begin());
        dg_.erase(dg_.begin());
      }
    }
    f_prev_ = f;
    g_prev_ = gc;
    if (df_.empty()) return;

    const std::size_t m = df_.size();
    std::vector<std::vector<Complex>> q = df_;
    std::vector<std::vector<double>> r(m, std::vector<double>(m, 0.0));
    std::vector<bool> keep(m, true);
    for (std::size_t j = 0; j < m; ++j) {
      const double original = std::sqrt(real_dot(q[j], q[j]));
      for (std::size_t i = 0; i < j; ++i) {
        if (!keep[i]) continue;
        r[i][j] = real_dot(q[i], q[j]);
        for (std::size_t k = 0; k < q[j].size(); ++k) q[j][k] -= r[i][j] * q[i][k];
      }
      const double norm = std::sqrt(real_dot(q[j], q[j]));
      if (!(norm > 1e-10 * original) || original == 0.0) {
        keep[j] = false;
        continue;
      }
      r[j][j] = norm;
      for (auto& c : q[j]) c /= norm;
    }
    std::vector<double> gamma(m, 0.0);
    for (std::size_t j = 0; j < m; ++j)
      if (keep[j]) gamma[j] = real_dot(q[j], f);
    for (std::size_t j = m; j-- > 0;) {
      if (!keep[j]) continue;
      for (std::size_t k = j + 1; k < m; ++k)
        if (keep[k]) gamma[j] -= r[j][k] * gamma[k];
      gamma[j] /= r[j][j];
    }
    auto& out = g.coeffs();
    for (std::size_t j = 0; j < m; ++j)
      if (keep[j])
        for (std::size_t k = 0; k < out.size(); ++k) out[k] -= gamma[j] * dg_[j][k];
  }

 private:
  std::size_t depth_;
  std::vector<Complex> f_prev_, g_prev_;
  std::vector<std::vector<Complex>> df_, dg_;
};

}  // namespace

GalerkinOperator::GalerkinOperator(const TorusGrid& grid, int shell, PdeParams params)
    : grid_(grid), shell_(shell), params_(std::move(params)), padding_(grid), forcing_now_(grid) {
  params_.validate(grid.dim());
  if (shell < 1 || shell > grid.max_shell()) throw std::invalid_argument("shell outside grid");
  for (const auto& term : params_.forcing.terms())
    if (!(term.shape.grid() == grid)) throw std::invalid_argument("forcing lives on another grid");

  const int d = grid.dim();
  kvec_.resize(grid.points());
  mass_inv_.resize(grid.points());
  for (std::size_t f = 0; f < grid.points(); ++f) {
    kvec_[f] = grid.wavevector(f);
    const bool inside = grid.shell(f) <= shell && !grid.is_nyquist(f);
    mass_inv_[f] = inside ? 1.0 / (1.0 + params_.kappa * grid.wavenumber_sq(f)) : 0.0;
  }
  const std::size_t np = padding_.padded_points();
  vel_.assign(d, std::vector<Complex>(np));
  grad_.assign(d * d, std::vector<Complex>(np));
  flux_.assign(sym_count(d), std::vector<Complex>(np));
  flux_hat_.assign(sym_count(d), std::vector<Complex>(grid.points()));
  scratch_.resize(np);
  spec_.resize(grid.points());
}

SpectralVelocity GalerkinOperator::tendency(const SpectralVelocity& v, double t) {
  SpectralVelocity out(grid_);
  assemble(v, t, out, nullptr);
  return out;
}

void GalerkinOperator::tendency_into(const SpectralVelocity& v, double t, SpectralVelocity& out) {
  assemble(v, t, out, nullptr);
}

LedgerRow GalerkinOperator::diagnose(const SpectralVelocity& v, double t,
                                     SpectralVelocity& tendency_out) {
  LedgerRow row;
  assemble(v, t, tendency_out, &row);
  return row;
}

void GalerkinOperator::assemble(const SpectralVelocity& v, double t, SpectralVelocity& out,
                                LedgerRow* row) {
  const int d = grid_.dim();
  const std::size_t npts = grid_.points();
  const std::size_t np = padding_.padded_points();
  const double p = params_.p;
  const double nu2 = kStressScale * params_.nu;
  const double w = params_.regularization_weight();
  const double w2 = kStressScale * w;
  const double beta = params_.regularization_beta();
  const bool full_gradient = row != nullptr;

  for (int c = 0; c < d; ++c) padding_.to_physical(v.component(c), scratch_, vel_[c]);

  // Full gradient when diagnosing, otherwise only the symmetric part.
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      if (!full_gradient && j < i) continue;
      for (std::size_t f = 0; f < npts; ++f) {
        if (full_gradient)
          spec_[f] = Complex(0.0, kvec_[f][j]) * v.at(i, f);
        else
          spec_[f] = Complex(0.0, 0.5) * (kvec_[f][j] * v.at(i, f) + kvec_[f][i] * v.at(j, f));
      }
      padding_.to_physical(spec_, scratch_, grad_[i * d + j]);
    }

  double grad_p = 0.0, sym_p = 0.0, grad_beta = 0.0, sym_beta = 0.0, reg_dual = 0.0;
  const double beta_dual = beta / (beta - 1.0);
  SymTensor strain(d);
  for (std::size_t x = 0; x < np; ++x) {
    double gsq = 0.0;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        if (full_gradient) {
          const double gij = grad_[i * d + j][x].real();
          gsq += gij * gij;
          strain(i, j) = 0.5 * (gij + grad_[j * d + i][x].real());
        } else {
          strain(i, j) = grad_[std::min(i, j) * d + std::max(i, j)][x].real();
        }
      }
    const double dnorm = strain.norm();
    const double fa = power_law_factor(dnorm, p);
    const double fb = w != 0.0 ? power_law_factor(dnorm, beta) : 0.0;
    const double coef = nu2 * fa + w2 * fb;
    for (int i = 0; i < d; ++i)
      for (int j = i; j < d; ++j) {
        const double uu = vel_[i][x].real() * vel_[j][x].real();
        flux_[sym_index(i, j, d)][x] = coef * strain(i, j) - uu;
      }
    if (row) {
      const double gnorm = std::sqrt(gsq);
      if (dnorm > 0.0) sym_p += std::pow(dnorm, p);
      if (gnorm > 0.0) grad_p += std::pow(gnorm, p);
      if (w != 0.0) {
        if (dnorm > 0.0) {
          sym_beta += std::pow(dnorm, beta);
          reg_dual += std::pow(w * fb * dnorm, beta_dual);
        }
        if (gnorm > 0.0) grad_beta += std::pow(gnorm, beta);
      }
    }
  }

  for (int s = 0; s < sym_count(d); ++s) padding_.to_spectral(flux_[s], scratch_, flux_hat_[s]);

  if (!params_.forcing.empty()) params_.forcing.evaluate_into(forcing_now_, t);

  for (std::size_t f = 0; f < npts; ++f) {
    const double minv = mass_inv_[f];
    if (minv == 0.0) {
      for (int c = 0; c < d; ++c) out.at(c, f) = 0.0;
      continue;
    }
    const auto& k = kvec_[f];
    Complex rhs[3];
    for (int i = 0; i < d; ++i) {
      Complex acc = params_.forcing.empty() ? Complex{} : forcing_now_.at(i, f);
      for (int j = 0; j < d; ++j) acc += Complex(0.0, k[j]) * flux_hat_[sym_index(i, j, d)][f];
      rhs[i] = acc;
    }
    const double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
    if (k2 > 0.0) {
      Complex kr = 0.0;
      for (int i = 0; i < d; ++i) kr += k[i] * rhs[i];
      for (int i = 0; i < d; ++i) rhs[i] -= k[i] * kr / k2;
    }
    for (int i = 0; i < d; ++i) out.at(i, f) = minv * rhs[i];
  }

  if (row) {
    const double vol = grid_.volume();
    const double cell = vol / static_cast<double>(np);
    row->t = t;
    row->l2_sq = l2_norm_sq(v);
    row->kappa_grad_sq = params_.kappa * grad_norm_sq(v);
    row->grad_p = grad_p * cell;
    row->sym_grad_p = sym_p * cell;
    row->reg_grad_beta = w * grad_beta * cell;
    row->reg_sym_grad_beta = w * sym_beta * cell;
    row->reg_stress_dual = reg_dual * cell;
    row->dt_l2_sq = l2_norm_sq(out);
    row->kappa_dt_grad_sq = params_.kappa * grad_norm_sq(out);
    if (!params_.forcing.empty()) {
      row->forcing_work = inner(forcing_now_, v);
      const double pd = p / (p - 1.0);
      double dual = 0.0;
      for (int c = 0; c < d; ++c) padding_.to_physical(forcing_now_.component(c), scratch_, vel_[c]);
      for (std::size_t x = 0; x < np; ++x) {
        double fsq = 0.0;
        for (int c = 0; c < d; ++c) fsq += vel_[c][x].real() * vel_[c][x].real();
        if (fsq > 0.0) dual += std::pow(fsq, 0.5 * pd);
      }
      row->forcing_dual = dual * cell;
    }
  }
}

// ---------------------------------------------------------------------------

StepResult step(GalerkinOperator& op, const SpectralVelocity& v, const SpectralVelocity& current_tendency,
                double t, double dt, const SimConfig& config) {
  if (config.scheme == Scheme::explicit_rk4) {
    SpectralVelocity stage = v;
    stage.axpy(0.5 * dt, current_tendency);
    SpectralVelocity k2 = op.tendency(stage, t + 0.5 * dt);
    stage = v;
    stage.axpy(0.5 * dt, k2);
    SpectralVelocity k3 = op.tendency(stage, t + 0.5 * dt);
    stage = v;
    stage.axpy(dt, k3);
    SpectralVelocity k4 = op.tendency(stage, t + dt);
    SpectralVelocity next = v;
    next.axpy(dt / 6.0, current_tendency).axpy(dt / 3.0, k2).axpy(dt / 3.0, k3).axpy(dt / 6.0, k4);
    if (!all_finite(next)) throw FixedPointDiverged(t, 1, std::numeric_limits<double>::infinity());
    return {std::move(next), 1};
  }

  // Implicit midpoint: v+ = v + dt T((v + v+)/2, t + dt/2), explicit Euler predictor.
  // Plain Picard sweeps while they contract well; once an increment fails to
  // halve, Anderson mixing takes over.  For p < 2 the stress is not
  // Lipschitz at D = 0, so Picard alone can cycle at any dt.
  SpectralVelocity next = v;
  next.axpy(dt, current_tendency);
  SpectralVelocity mid(v.grid()), slope(v.grid());
  constexpr double kRoundoffFloor = 64.0 * std::numeric_limits<double>::epsilon();
  constexpr int kPicardWarmup = 3;
  double increment = 0.0;
  double previous = std::numeric_limits<double>::infinity();
  int stalled = 0;
  std::optional<AndersonMixer> mixer;
  for (int it = 1; it <= config.max_fixed_point_iters; ++it) {
    mid = v;
    mid += next;
    mid *= 0.5;
    op.tendency_into(mid, t + 0.5 * dt, slope);
    SpectralVelocity candidate = v;
    candidate.axpy(dt, slope);
    increment = coeff_dist(candidate, next);
    if (!std::isfinite(increment)) break;
    const double scale = coeff_norm(candidate);
    if (increment <= config.fixed_point_tol * scale || increment == 0.0) return {std::move(candidate), it};
    // Increments that stop shrinking at roundoff level count as converged.
    if (increment <= kRoundoffFloor * scale || (increment >= previous && increment <= 1e3 * kRoundoffFloor * scale)) {
      if (++stalled >= 2) return {std::move(candidate), it};
    }
    if (!mixer && it >= kPicardWarmup && increment > 0.5 * previous) mixer.emplace(10);
    if (mixer) mixer->mix(next, candidate);
    next = std::move(candidate);
    previous = increment;
  }
  throw FixedPointDiverged(t, config.max_fixed_point_iters, increment);
}

SpectralVelocity project_initial(const SpectralVelocity& v0, int n) {
  const double scale = std::max(1.0, std::sqrt(grad_norm_sq(v0) / v0.grid().volume()));
  if (max_divergence(v0) > 1e-10 * scale)
    throw std::invalid_argument("initial velocity is not divergence free");
  return truncate(v0, n);
}

Trajectory integrate(const SimConfig& config, const PdeParams& params, const SpectralVelocity& v0) {
  config.validate();
  if (!(v0.grid() == config.grid)) throw std::invalid_argument("initial field lives on another grid");
  GalerkinOperator op(config.grid, config.galerkin_n, params);

  const long steps = std::max<long>(1, static_cast<long>(std::ceil(config.t_end / config.dt - 1e-9)));
  const double h = config.t_end / static_cast<double>(steps);

  Trajectory traj;
  traj.ledger.nu = params.nu;
  traj.ledger.kappa = params.kappa;
  traj.ledger.p = params.p;
  traj.ledger.beta = params.regularization_beta();
  traj.ledger.reg_weight = params.regularization_weight();

  SpectralVelocity v = project_initial(v0, config.galerkin_n);
  SpectralVelocity slope(config.grid);
  int iterations = 0;
  for (long n = 0; n <= steps; ++n) {
    const double t = n == steps ? config.t_end : h * static_cast<double>(n);
    LedgerRow row = op.diagnose(v, t, slope);
    row.step = n;
    row.iterations = iterations;
    traj.ledger.rows.push_back(row);
    if (n % config.snapshot_every == 0 || n == steps) {
      traj.times.push_back(t);
      traj.snapshots.push_back(v);
    }
    if (n == steps) break;
    StepResult r = step(op, v, slope, t, h, config);
    v = std::move(r.state);
    iterations = r.iterations;
  }
  return traj;
}

Trajectory solve_regularized(const SimConfig& config, const PdeParams& params,
                             const SpectralVelocity& v0) {
  if (!params.regularization)
    throw std::invalid_argument("solve_regularized needs a (beta, n_reg) pair");
  return integrate(config, params, v0);
}

}  // namespace nsv
