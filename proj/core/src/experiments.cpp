#include "nsv/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <stdexcept>
#include <thread>
#include <tuple>

#include "nsv/pressure.hpp"

namespace nsv {

namespace {

// Copies the coefficients of u onto another grid of the same box; modes the
// target cannot hold are dropped.
SpectralVelocity resample(const SpectralVelocity& u, const TorusGrid& target) {
  SpectralVelocity out(target);
  const auto& src = u.grid();
  const int half = target.modes() / 2;
  for (std::size_t f = 0; f < src.points(); ++f) {
    if (src.is_nyquist(f)) continue;
    const auto k = src.lattice(f);
    bool fits = true;
    for (int a = 0; a < src.dim(); ++a) fits = fits && std::abs(k[a]) < half;
    if (!fits) continue;
    const std::size_t g = target.flat_index(k);
    for (int c = 0; c < src.dim(); ++c) out.at(c, g) = u.at(c, f);
  }
  return out;
}

double signed_power(double a, double q) { return power_law_factor(std::abs(a), q) * a; }

SpectralVelocity difference(const SpectralVelocity& a, const SpectralVelocity& b) {
  SpectralVelocity d = a;
  d -= b;
  return d;
}

}  // namespace

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min<std::size_t>(count, static_cast<std::size_t>(std::max(1, threads)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

double relative_spread(const std::vector<double>& values) {
  if (values.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  const double scale = std::max(std::abs(*lo), std::abs(*hi));
  return scale == 0.0 ? 0.0 : (*hi - *lo) / scale;
}

std::pair<double, double> fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n < 2) throw std::invalid_argument("line fit needs two points");
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("degenerate abscissae");
  const double slope = sxy / sxx;
  return {slope, my - slope * mx};
}

// ---------------------------------------------------------------------------

TaylorGreenReport run_taylor_green(const SimConfig& config, const PdeParams& params, double amplitude) {
  if (config.grid.dim() != 2) throw std::invalid_argument("Taylor-Green run is two-dimensional");
  if (params.p != 2.0) throw std::invalid_argument("Taylor-Green closed form needs p = 2");
  const auto v0 = taylor_green(config.grid, amplitude);
  const auto traj = integrate(config, params, v0);

  const double k2 = 2.0 * config.grid.wavenumber_unit() * config.grid.wavenumber_unit();
  TaylorGreenReport rep;
  rep.expected_rate = -params.nu * k2 / (1.0 + params.kappa * k2);
  const double t_end = traj.times.back();
  auto exact = truncate(v0, config.galerkin_n);
  exact *= std::exp(rep.expected_rate * t_end);
  rep.terminal_l2_error = std::sqrt(l2_norm_sq(difference(traj.final_state(), exact)));
  const double n0 = std::sqrt(l2_norm_sq(v0));
  if (n0 > 0.0) {
    rep.measured_rate = std::log(std::sqrt(l2_norm_sq(traj.final_state())) / n0) / t_end;
    rep.relative_error = rep.terminal_l2_error / std::sqrt(l2_norm_sq(exact));
  }
  return rep;
}

// ---------------------------------------------------------------------------

ManufacturedTarget ManufacturedTarget::steady(SpectralVelocity u) {
  return {std::move(u), [](double) { return 1.0; }, [](double) { return 0.0; }};
}

ManufacturedTarget ManufacturedTarget::oscillating(SpectralVelocity u, double eps, double omega) {
  return {std::move(u), [eps, omega](double t) { return 1.0 + eps * std::sin(omega * t); },
          [eps, omega](double t) { return eps * omega * std::cos(omega * t); }};
}

Forcing manufactured_forcing(const ManufacturedTarget& target, const PdeParams& params, const TorusGrid& grid) {
  const TorusGrid fine(grid.dim(), 2 * grid.modes(), grid.length());
  const auto u = resample(target.shape, fine);

  // momentum_rhs is affine in the stress prefactors; isolate each term.
  PdeParams inviscid;
  inviscid.nu = 0.0;
  inviscid.p = params.p;
  const auto convective = momentum_rhs(u, 0.0, inviscid);  // -div(u u)
  PdeParams viscous = inviscid;
  viscous.nu = params.nu;
  auto stress = momentum_rhs(u, 0.0, viscous);
  stress -= convective;  // div(2 nu A(u))

  SpectralVelocity mass(grid);
  const auto coarse_u = resample(target.shape, grid);
  for (std::size_t f = 0; f < grid.points(); ++f)
    for (int c = 0; c < grid.dim(); ++c)
      mass.at(c, f) = (1.0 + params.kappa * grid.wavenumber_sq(f)) * coarse_u.at(c, f);

  Forcing forcing;
  const auto a = target.profile;
  const double p = params.p;
  forcing.add(std::move(mass), target.profile_rate);
  auto neg_conv = resample(convective, grid);
  neg_conv *= -1.0;
  forcing.add(std::move(neg_conv), [a](double t) { return a(t) * a(t); });
  auto neg_stress = resample(stress, grid);
  neg_stress *= -1.0;
  forcing.add(std::move(neg_stress), [a, p](double t) { return signed_power(a(t), p); });

  if (params.regularization && params.regularization_weight() > 0.0) {
    PdeParams reg = inviscid;
    reg.regularization = params.regularization;
    auto extra = momentum_rhs(u, 0.0, reg);
    extra -= convective;  // div(2 w B(u))
    auto neg_extra = resample(extra, grid);
    neg_extra *= -1.0;
    const double beta = params.regularization_beta();
    forcing.add(std::move(neg_extra), [a, beta](double t) { return signed_power(a(t), beta); });
  }
  return forcing;
}

ManufacturedReport run_manufactured(const SimConfig& config, const PdeParams& params,
                                    const ManufacturedTarget& target) {
  PdeParams forced = params;
  forced.forcing = manufactured_forcing(target, params, config.grid);
  const auto shape = truncate(resample(target.shape, config.grid), config.galerkin_n);
  auto v0 = shape;
  v0 *= target.profile(0.0);
  const auto traj = integrate(config, forced, v0);

  ManufacturedReport rep;
  for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
    auto exact = shape;
    exact *= target.profile(traj.times[i]);
    const double err = std::sqrt(l2_norm_sq(difference(traj.snapshots[i], exact)));
    rep.max_l2_error = std::max(rep.max_l2_error, err);
    if (i + 1 == traj.snapshots.size()) {
      rep.terminal_l2_error = err;
      rep.target_norm = std::sqrt(l2_norm_sq(exact));
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------

GronwallReport run_gronwall_pair(const SimConfig& config, const PdeParams& params, const SpectralVelocity& va,
                                 const SpectralVelocity& vb) {
  const auto ta = integrate(config, params, va);
  const auto tb = integrate(config, params, vb);
  GronwallReport rep;
  rep.times = ta.times;
  for (std::size_t i = 0; i < ta.snapshots.size(); ++i)
    rep.grad_w_sq.push_back(grad_norm_sq(difference(ta.snapshots[i], tb.snapshots[i])));

  const double w0 = rep.grad_w_sq.front();
  rep.identical = std::all_of(rep.grad_w_sq.begin(), rep.grad_w_sq.end(), [](double g) { return g == 0.0; });
  if (w0 == 0.0 || rep.times.size() < 3) return rep;

  std::vector<double> x, y;
  const double half = 0.5 * rep.times.back();
  for (std::size_t i = 0; i < rep.times.size(); ++i)
    if (rep.times[i] >= half) {
      x.push_back(rep.times[i]);
      y.push_back(std::log(rep.grad_w_sq[i] / w0));
    }
  std::tie(rep.fitted_rate, rep.fitted_intercept) = fit_line(x, y);
  rep.max_excess = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < rep.times.size(); ++i) {
    const double line = rep.fitted_rate * rep.times[i] + rep.fitted_intercept;
    rep.max_excess = std::max(rep.max_excess, std::log(rep.grad_w_sq[i] / w0) - line);
  }
  return rep;
}

GronwallReport run_gronwall(const SimConfig& config, const PdeParams& params, const SpectralVelocity& v0,
                            const SpectralVelocity& direction, double delta) {
  auto vb = v0;
  if (delta != 0.0) {
    const double size = std::sqrt(l2_norm_sq(direction) + grad_norm_sq(direction));
    if (size == 0.0) throw std::invalid_argument("perturbation direction vanishes");
    vb.axpy(delta / size, direction);
  }
  return run_gronwall_pair(config, params, v0, vb);
}

SpectralVelocity bred_direction(const SimConfig& config, const PdeParams& params, const SpectralVelocity& v0,
                                const SpectralVelocity& seed, int cycles, double cycle_time, double eps) {
  auto h1 = [](const SpectralVelocity& u) { return std::sqrt(l2_norm_sq(u) + grad_norm_sq(u)); };
  SimConfig c = config;
  c.t_end = cycle_time;
  c.snapshot_every = std::numeric_limits<int>::max();
  const auto base = integrate(c, params, v0).final_state();
  SpectralVelocity d = truncate(seed, config.galerkin_n);
  for (int i = 0; i < cycles; ++i) {
    const double size = h1(d);
    if (size == 0.0) throw std::invalid_argument("perturbation direction vanishes");
    auto vb = truncate(v0, config.galerkin_n);
    vb.axpy(eps / size, d);
    d = difference(integrate(c, params, vb).final_state(), base);
  }
  d *= 1.0 / h1(d);
  return d;
}

// ---------------------------------------------------------------------------

std::vector<RefinementRow> run_refinement(const SimConfig& config, const PdeParams& params,
                                          const SpectralVelocity& v0, const std::vector<int>& shells,
                                          int threads) {
  for (std::size_t i = 1; i < shells.size(); ++i)
    if (shells[i] <= shells[i - 1]) throw std::invalid_argument("shells must be strictly increasing");
  std::vector<Trajectory> runs(shells.size());
  parallel_for(shells.size(), threads, [&](std::size_t i) {
    SimConfig c = config;
    c.galerkin_n = shells[i];
    runs[i] = integrate(c, params, v0);
  });
  std::vector<RefinementRow> table;
  for (std::size_t i = 0; i + 1 < runs.size(); ++i) {
    RefinementRow row{shells[i], shells[i + 1], 0.0, 0.0};
    std::vector<double> l2;
    for (std::size_t s = 0; s < runs[i].snapshots.size(); ++s) {
      const auto d = difference(runs[i].snapshots[s], runs[i + 1].snapshots[s]);
      const double a = l2_norm_sq(d);
      l2.push_back(a);
      row.sup_h1 = std::max(row.sup_h1, std::sqrt(a + grad_norm_sq(d)));
    }
    row.l2_space_time = std::sqrt(trapezoid(runs[i].times, l2));
    table.push_back(row);
  }
  return table;
}

// ---------------------------------------------------------------------------

RegularizationSweepReport run_regularization_sweep(const SimConfig& config, const PdeParams& params,
                                                   const SpectralVelocity& v0, double beta,
                                                   const std::vector<double>& n_values, int threads) {
  RegularizationSweepReport rep;
  rep.beta = beta;
  rep.n_values = n_values;
  rep.stress_dual.assign(n_values.size(), 0.0);
  rep.reg_energy.assign(n_values.size(), 0.0);
  parallel_for(n_values.size(), threads, [&](std::size_t i) {
    PdeParams pr = params;
    pr.regularization = Regularization{beta, n_values[i]};
    pr.validate(config.grid.dim());
    const auto traj = solve_regularized(config, pr, v0);
    std::vector<double> t, dual, energy;
    for (const auto& r : traj.ledger.rows) {
      t.push_back(r.t);
      dual.push_back(r.reg_stress_dual);
      energy.push_back(r.reg_grad_beta);
    }
    rep.stress_dual[i] = trapezoid(t, dual);
    rep.reg_energy[i] = trapezoid(t, energy);
  });
  std::vector<double> x, y;
  for (std::size_t i = 0; i < n_values.size(); ++i)
    if (std::isfinite(n_values[i]) && rep.stress_dual[i] > 0.0) {
      x.push_back(std::log(n_values[i]));
      y.push_back(std::log(rep.stress_dual[i]));
    }
  if (x.size() >= 2) rep.slope = fit_line(x, y).first;
  return rep;
}

// ---------------------------------------------------------------------------

std::vector<KappaSweepRow> run_kappa_sweep(const SimConfig& config, const PdeParams& params,
                                           const SpectralVelocity& v0, const std::vector<double>& kappas,
                                           int threads) {
  std::vector<KappaSweepRow> rows(kappas.size());
  parallel_for(kappas.size(), threads, [&](std::size_t i) {
    PdeParams pk = params;
    pk.kappa = kappas[i];
    pk.validate(config.grid.dim());
    const auto traj = integrate(config, pk, v0);
    KappaSweepRow row;
    row.kappa = kappas[i];
    row.initial_energy = traj.ledger.rows.front().energy();
    row.terminal_energy = traj.ledger.rows.back().energy();
    if (row.initial_energy > 0.0 && row.terminal_energy > 0.0)
      row.decay_rate = std::log(row.terminal_energy / row.initial_energy) / traj.ledger.rows.back().t;
    row.max_energy_increase = max_energy_increase(traj.ledger);
    rows[i] = row;
  });
  return rows;
}

std::vector<AprioriSweepRow> run_apriori_sweep(const SimConfig& config, const PdeParams& params,
                                               const SpectralVelocity& v0, const std::vector<int>& shells,
                                               int threads) {
  std::vector<AprioriSweepRow> rows(shells.size());
  parallel_for(shells.size(), threads, [&](std::size_t i) {
    SimConfig c = config;
    c.galerkin_n = shells[i];
    const auto traj = integrate(c, params, v0);
    rows[i] = {shells[i], apriori_report(traj, truncate(v0, shells[i]), params)};
  });
  return rows;
}

}  // namespace nsv
