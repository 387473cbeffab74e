#include "nsv/kv1d.hpp"

#include <fftw3.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "nsv/diagnostics.hpp"
#include "nsv/tensor.hpp"

namespace nsv {

namespace {

// sin(pi r), exactly zero for integer r.
double sin_pi(double r) {
  if (r == std::floor(r)) return 0.0;
  const double m = std::fmod(r, 2.0);
  return std::sin(std::numbers::pi * m);
}

double dist(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

double norm(const std::vector<double>& a) {
  double s = 0.0;
  for (double x : a) s += x * x;
  return std::sqrt(s);
}

}  // namespace

void Kv1dParams::validate() const {
  if (!(nu > 0.0)) throw std::invalid_argument("nu must be positive");
  if (!(kappa > 0.0)) throw std::invalid_argument("kappa must be positive");
  require_exponent(p);
  if (!(length > 0.0)) throw std::invalid_argument("length must be positive");
}

double SineState::value(double x) const {
  const double s = x / length;
  double v = 0.0;
  for (int k = 1; k <= modes(); ++k) v += coeffs[k - 1] * sin_pi(k * s);
  return v;
}

std::vector<double> SineState::sample(int n) const {
  std::vector<double> out(n + 1);
  for (int j = 0; j <= n; ++j) out[j] = value(length * (static_cast<double>(j) / n));
  return out;
}

Kv1dOperator::Kv1dOperator(int modes, Kv1dParams params, SineForcing forcing)
    : modes_(modes), n_(2 * modes), params_(params), forcing_(std::move(forcing)) {
  if (modes < 1) throw std::invalid_argument("need at least one sine mode");
  params_.validate();
  for (int k = 1; k <= modes; ++k) {
    const double w = k * std::numbers::pi / params_.length;
    wave_.push_back(w);
    mass_inv_.push_back(1.0 / (1.0 + params_.kappa * w * w));
  }
  buf_.assign(n_ + 1, 0.0);
  cos_.assign(n_ + 1, 0.0);
  std::lock_guard lock(fftw_planner_mutex());
  plan_ = fftw_plan_r2r_1d(n_ + 1, buf_.data(), cos_.data(), FFTW_REDFT00, FFTW_ESTIMATE);
  if (!plan_) throw std::runtime_error("FFTW planning failed");
}

Kv1dOperator::~Kv1dOperator() {
  std::lock_guard lock(fftw_planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(plan_));
}

void Kv1dOperator::tendency(const std::vector<double>& a, double t, std::vector<double>& out) {
  assemble(a, t, out, nullptr);
}

LedgerRow Kv1dOperator::diagnose(const std::vector<double>& a, double t, std::vector<double>& out) {
  LedgerRow row;
  assemble(a, t, out, &row);
  return row;
}

void Kv1dOperator::assemble(const std::vector<double>& a, double t, std::vector<double>& out, LedgerRow* row) {
  const double L = params_.length;
  const int m = modes_;
  const int n = n_;
  auto plan = static_cast<fftw_plan>(plan_);

  // v_x(x_j) = sum_k a_k w_k cos(pi k j / n) = DCT-I / 2.
  std::fill(buf_.begin(), buf_.end(), 0.0);
  for (int k = 1; k <= m; ++k) buf_[k] = a[k - 1] * wave_[k - 1];
  fftw_execute_r2r(plan, buf_.data(), cos_.data());
  std::vector<double> vx(n + 1);
  double dissipation = 0.0;
  for (int j = 0; j <= n; ++j) {
    vx[j] = 0.5 * cos_[j];
    const double mag = std::abs(vx[j]);
    buf_[j] = params_.nu * power_law_factor(mag, params_.p) * vx[j];
    if (row) dissipation += (j == 0 || j == n ? 0.5 : 1.0) * std::pow(mag, params_.p);
  }
  // Cosine coefficients of tau by trapezoid quadrature: c_k = DCT-I_k / n.
  fftw_execute_r2r(plan, buf_.data(), cos_.data());

  std::vector<double> f(m, 0.0);
  if (forcing_) {
    const auto fk = forcing_(t);
    for (int k = 0; k < m && k < static_cast<int>(fk.size()); ++k) f[k] = fk[k];
  }
  out.resize(m);
  for (int k = 1; k <= m; ++k) out[k - 1] = mass_inv_[k - 1] * (-wave_[k - 1] * cos_[k] / n + f[k - 1]);

  if (!row) return;
  const double half = 0.5 * L;
  for (int k = 0; k < m; ++k) {
    const double w2 = wave_[k] * wave_[k];
    row->l2_sq += half * a[k] * a[k];
    row->kappa_grad_sq += half * params_.kappa * w2 * a[k] * a[k];
    row->forcing_work += half * f[k] * a[k];
    row->dt_l2_sq += half * out[k] * out[k];
    row->kappa_dt_grad_sq += half * params_.kappa * w2 * out[k] * out[k];
  }
  row->t = t;
  row->grad_p = row->sym_grad_p = dissipation * L / n;
  if (forcing_) {
    const double q = params_.p / (params_.p - 1.0);
    const SineState fs{f, L};
    const auto vals = fs.sample(n);
    double s = 0.0;
    for (int j = 0; j <= n; ++j) s += (j == 0 || j == n ? 0.5 : 1.0) * std::pow(std::abs(vals[j]), q);
    row->forcing_dual = s * L / n;
  }
}

Trajectory1d integrate_1d(const SineState& initial, const Kv1dParams& params, const Kv1dConfig& config,
                          const SineForcing& forcing) {
  if (!(config.dt > 0.0) || !(config.t_end > 0.0)) throw std::invalid_argument("dt and t_end must be positive");
  if (config.snapshot_every < 1) throw std::invalid_argument("snapshot_every must be >= 1");
  if (initial.length != params.length) throw std::invalid_argument("state and parameters disagree on L");
  Kv1dOperator op(initial.modes(), params, forcing);

  const long steps = std::max<long>(1, static_cast<long>(std::ceil(config.t_end / config.dt - 1e-9)));
  const double h = config.t_end / static_cast<double>(steps);
  constexpr double kRoundoffFloor = 64.0 * std::numeric_limits<double>::epsilon();

  Trajectory1d traj;
  traj.ledger.nu = params.nu;
  traj.ledger.kappa = params.kappa;
  traj.ledger.p = params.p;
  std::vector<double> a = initial.coeffs, slope, mid(a.size()), next, candidate(a.size());
  int iterations = 0;
  for (long s = 0; s <= steps; ++s) {
    const double t = s == steps ? config.t_end : h * static_cast<double>(s);
    LedgerRow row = op.diagnose(a, t, slope);
    row.step = s;
    row.iterations = iterations;
    traj.ledger.rows.push_back(row);
    if (s % config.snapshot_every == 0 || s == steps) {
      traj.times.push_back(t);
      traj.snapshots.push_back({a, params.length});
    }
    if (s == steps) break;

    next = a;
    for (std::size_t k = 0; k < a.size(); ++k) next[k] += h * slope[k];
    double previous = std::numeric_limits<double>::infinity();
    int stalled = 0;
    bool converged = false;
    double increment = 0.0;
    std::vector<double> mid_slope;
    for (int it = 1; it <= config.max_fixed_point_iters; ++it) {
      for (std::size_t k = 0; k < a.size(); ++k) mid[k] = 0.5 * (a[k] + next[k]);
      op.tendency(mid, t + 0.5 * h, mid_slope);
      for (std::size_t k = 0; k < a.size(); ++k) candidate[k] = a[k] + h * mid_slope[k];
      increment = dist(candidate, next);
      next.swap(candidate);
      iterations = it;
      if (!std::isfinite(increment)) break;
      const double scale = norm(next);
      if (increment <= config.fixed_point_tol * scale || increment == 0.0) {
        converged = true;
        break;
      }
      if (increment <= kRoundoffFloor * scale ||
          (increment >= previous && increment <= 1e3 * kRoundoffFloor * scale)) {
        if (++stalled >= 2) {
          converged = true;
          break;
        }
      }
      previous = increment;
    }
    if (!converged) throw FixedPointDiverged(t, config.max_fixed_point_iters, increment);
    a.swap(next);
  }
  return traj;
}

std::vector<double> energy_check_1d(const Trajectory1d& traj) {
  std::vector<double> out;
  const auto& rows = traj.ledger.rows;
  if (rows.empty()) return out;
  const double e0 = rows.front().energy();
  double dissipated = 0.0, work = 0.0;
  out.push_back(0.0);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double h = rows[i].t - rows[i - 1].t;
    dissipated += 0.5 * h * traj.ledger.nu * (rows[i].grad_p + rows[i - 1].grad_p);
    work += 0.5 * h * (rows[i].forcing_work + rows[i - 1].forcing_work);
    out.push_back(rows[i].energy() + 2.0 * dissipated - e0 - 2.0 * work);
  }
  return out;
}

}  // namespace nsv
