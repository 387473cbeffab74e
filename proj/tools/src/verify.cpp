#include "nsvcli/verify.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <stdexcept>

#include "nsv/diagnostics.hpp"
#include "nsv/galerkin.hpp"
#include "nsv/pressure.hpp"
#include "nsv/spectral.hpp"

namespace nsvcli {

namespace {

using nsv::SymTensor;

std::string fmt(const char* f, double a, double b = 0.0) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

CheckResult bounded(std::string name, double value, double limit) {
  return {std::move(name), value <= limit, fmt("%.3e (limit %.1e)", value, limit)};
}

SymTensor random_sym(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> n01;
  std::uniform_real_distribution<double> decade(-3.0, 3.0);
  const double scale = std::pow(10.0, decade(rng));
  SymTensor t(dim);
  for (int i = 0; i < dim; ++i)
    for (int j = i; j < dim; ++j) t(i, j) = t(j, i) = scale * n01(rng);
  return t;
}

SymTensor stress_of(const SuiteHooks& hooks, const SymTensor& d, double p) {
  return hooks.stress ? hooks.stress(d, p) : nsv::power_law_stress(d, p);
}

// -- tensor ------------------------------------------------------------------

std::vector<CheckResult> tensor_suite(const SuiteHooks& hooks) {
  std::vector<CheckResult> out;
  std::mt19937_64 rng(2024);
  const double exponents[] = {1.2, 1.5, 2.0, 3.0, 4.0};

  int failures = 0, trials = 0;
  for (double p : exponents)
    for (int i = 0; i < 2000; ++i, ++trials) {
      const auto e = random_sym(rng, 3), f = random_sym(rng, 3);
      if (!nsv::check_lemma21(e, f, p, hooks.stress).holds) ++failures;
    }
  out.push_back({"monotone_inequalities", failures == 0, fmt("%.0f of %.0f pairs violate", failures, trials)});

  double worst = 0.0;
  for (double p : exponents)
    for (int i = 0; i < 500; ++i) {
      const auto d = random_sym(rng, 3);
      const double work = nsv::contract(stress_of(hooks, d, p), d);
      const double expected = std::pow(d.norm(), p);
      worst = std::max(worst, std::abs(work - expected) / expected);
      if (work < 0.0) worst = std::numeric_limits<double>::infinity();
    }
  out.push_back(bounded("positivity", worst, 1e-12));

  worst = 0.0;
  std::uniform_real_distribution<double> lam(0.01, 100.0), pdist(1.05, 5.0);
  for (int i = 0; i < 1000; ++i) {
    const auto d = random_sym(rng, 3);
    const double l = lam(rng), p = pdist(rng);
    const auto lhs = stress_of(hooks, l * d, p);
    const auto rhs = std::pow(l, p - 1.0) * stress_of(hooks, d, p);
    worst = std::max(worst, nsv::max_abs_diff(lhs, rhs) / std::max(rhs.norm(), 1e-300));
  }
  out.push_back(bounded("homogeneity", worst, 1e-12));

  worst = 0.0;
  for (double p : exponents) {
    const auto z = stress_of(hooks, SymTensor(3), p);
    worst = std::max(worst, z.norm());
  }
  out.push_back(bounded("zero_strain", worst, 0.0));

  const nsv::VectorField abc = [](const std::array<double, 3>& x) {
    return std::array<double, 3>{std::sin(x[2]) + 0.5 * std::cos(x[1]), 0.5 * std::sin(x[0]) + std::cos(x[2]),
                                 0.5 * std::sin(x[1]) + 0.5 * std::cos(x[0])};
  };
  const double c = std::cos(0.7), s = std::sin(0.7);
  const SymTensor q(3, {c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0});
  out.push_back(bounded("objectivity", nsv::objectivity_check(abc, q), 1e-8));
  return out;
}

// -- spectral ------------------------------------------------------------------

std::vector<CheckResult> spectral_suite() {
  std::vector<CheckResult> out;
  const nsv::TorusGrid g(2, 16);
  const auto u = nsv::random_velocity(g, 5, 1.0, 7);

  const auto phys = nsv::to_collocation(u);
  double quad = 0.0;
  for (const auto& comp : phys)
    for (double x : comp) quad += x * x;
  quad *= g.volume() / static_cast<double>(g.points());
  out.push_back(bounded("parseval", std::abs(quad - nsv::l2_norm_sq(u)) / nsv::l2_norm_sq(u), 1e-12));

  // Leray idempotence on a field with a gradient part.
  auto raw = nsv::sample_velocity(g, [](const std::array<double, 3>& x) {
    return std::array<double, 3>{std::sin(x[0]) * std::cos(2 * x[1]) + std::cos(x[0]), std::sin(3 * x[1]), 0.0};
  });
  const auto once = nsv::leray_project(raw);
  const auto twice = nsv::leray_project(once);
  out.push_back(bounded("leray_idempotent", nsv::max_coeff_diff(once, twice), 1e-14));
  out.push_back(bounded("leray_divergence_free", nsv::max_divergence(once), 1e-13));

  const auto t1 = nsv::truncate(u, 3);
  out.push_back(bounded("truncate_idempotent", nsv::max_coeff_diff(t1, nsv::truncate(t1, 3)), 0.0));

  // Korn identity on the torus: int |D|^2 = 1/2 int |grad v|^2.
  const auto d = nsv::sym_gradient(u);
  double dd = 0.0;
  for (std::size_t f = 0; f < g.points(); ++f) {
    const auto t = d.at(f);
    dd += nsv::contract(t, t);
  }
  dd *= g.volume() / static_cast<double>(g.points());
  out.push_back(bounded("korn_identity", std::abs(dd - 0.5 * nsv::grad_norm_sq(u)) / dd, 1e-12));

  // Dealiased product against the direct convolution sum.
  const nsv::TorusGrid small(2, 8);
  const auto a = nsv::random_velocity(small, 3, 1.0, 11);
  const auto b = nsv::random_velocity(small, 3, 1.0, 12);
  const auto prod = nsv::dealiased_product(small, a.component(0), b.component(1));
  double worst = 0.0;
  for (std::size_t k = 0; k < small.points(); ++k) {
    if (small.is_nyquist(k)) continue;
    const auto kk = small.lattice(k);
    nsv::Complex s = 0.0;
    for (std::size_t m = 0; m < small.points(); ++m) {
      if (small.is_nyquist(m)) continue;
      const auto mm = small.lattice(m);
      const std::array<int, 3> r{kk[0] - mm[0], kk[1] - mm[1], 0};
      if (std::abs(r[0]) >= 4 || std::abs(r[1]) >= 4) continue;
      const std::size_t rf = small.flat_index(r);
      s += a.at(0, m) * b.at(1, rf);
    }
    worst = std::max(worst, std::abs(s - prod[k]));
  }
  out.push_back(bounded("dealiased_convolution", worst, 1e-14));
  out.push_back(bounded("reality", nsv::reality_defect(u), 1e-15));
  return out;
}

// -- energy --------------------------------------------------------------------

std::vector<CheckResult> energy_suite() {
  std::vector<CheckResult> out;
  nsv::PdeParams params;
  params.nu = 0.1;
  params.kappa = 0.5;
  params.p = 2.0;
  const nsv::TorusGrid g(2, 16);
  nsv::SimConfig cfg;
  cfg.grid = g;
  cfg.galerkin_n = g.max_shell();
  cfg.t_end = 1.0;
  cfg.fixed_point_tol = 1e-13;
  const auto v0 = nsv::taylor_green(g, 1.0);

  double defect[2];
  double increase = 0.0;  // in units of dt^2 E(0)
  for (int r = 0; r < 2; ++r) {
    cfg.dt = 0.02 / (1 << r);
    const auto traj = nsv::integrate(cfg, params, v0);
    defect[r] = nsv::energy_identity_residual(traj.ledger).terminal();
    const double scale = cfg.dt * cfg.dt * traj.ledger.rows.front().energy();
    increase = std::max(increase, nsv::max_energy_increase(traj.ledger) / scale);
  }
  const double ratio = defect[0] / defect[1];
  out.push_back({"energy_defect_order", ratio >= 3.5 && ratio <= 4.5, fmt("ratio %.4f", ratio)});
  out.push_back(bounded("dissipation", std::max(0.0, increase), 1.0));

  const double rate = -2.0 * params.nu / (1.0 + 2.0 * params.kappa);
  cfg.dt = 1e-2;
  const auto traj = nsv::integrate(cfg, params, v0);
  auto exact = v0;
  exact *= std::exp(rate * cfg.t_end);
  auto diff = traj.final_state();
  diff -= exact;
  out.push_back(bounded("taylor_green_decay", std::sqrt(nsv::l2_norm_sq(diff) / nsv::l2_norm_sq(exact)), 1e-4));

  params.p = 3.0;
  const auto nonlinear = nsv::integrate(cfg, params, nsv::random_velocity(g, 4, 1.0, 3));
  const double scale = cfg.dt * cfg.dt * nonlinear.ledger.rows.front().energy();
  out.push_back(bounded("dissipation_p3", std::max(0.0, nsv::max_energy_increase(nonlinear.ledger) / scale), 1.0));
  return out;
}

// -- pressure ------------------------------------------------------------------

double scalar_norm(const nsv::SpectralScalar& s) {
  double n = 0.0;
  for (const auto& c : s) n += std::norm(c);
  return std::sqrt(n);
}

std::vector<CheckResult> pressure_suite() {
  std::vector<CheckResult> out;
  const nsv::TorusGrid g(2, 16);
  nsv::PdeParams params;
  params.nu = 0.1;
  params.kappa = 0.5;
  params.p = 3.0;
  params.forcing = nsv::Forcing::steady(nsv::random_velocity(g, 3, 0.5, 99));

  double sum_err = 0.0, grad_err = 0.0, mean = 0.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto v = nsv::random_velocity(g, 4, 1.0, seed);
    const auto pi = nsv::recover_pressure(v, 0.0, params);
    const auto parts = nsv::decompose_pressure(v, 0.0, params);
    auto total = parts.sum();
    for (std::size_t f = 0; f < total.size(); ++f) total[f] -= pi[f];
    sum_err = std::max(sum_err, scalar_norm(total) / scalar_norm(pi));
    mean = std::max({mean, std::abs(parts.pi1[0]), std::abs(parts.pi2[0]), std::abs(parts.pih[0])});

    const auto rhs = nsv::momentum_rhs(v, 0.0, params);
    auto complement = rhs;
    complement -= nsv::leray_project(rhs);
    complement -= nsv::pressure_gradient(g, pi);
    grad_err = std::max(grad_err, std::sqrt(nsv::l2_norm_sq(complement) / nsv::l2_norm_sq(rhs)));
  }
  out.push_back(bounded("decomposition_sum", sum_err, 1e-10));
  out.push_back(bounded("gradient_consistency", grad_err, 1e-10));
  out.push_back(bounded("zero_mean", mean, 0.0));

  nsv::PdeParams newtonian;
  newtonian.nu = 0.1;
  newtonian.kappa = 0.5;
  const auto pi = nsv::scalar_to_collocation(g, nsv::recover_pressure(nsv::taylor_green(g, 1.0), 0.0, newtonian));
  double worst = 0.0;
  for (std::size_t f = 0; f < g.points(); ++f) {
    const auto x = g.point(f);
    worst = std::max(worst, std::abs(pi[f] - 0.25 * (std::cos(2 * x[0]) + std::cos(2 * x[1]))));
  }
  out.push_back(bounded("taylor_green_pressure", worst, 1e-12));

  const auto v = nsv::random_velocity(g, 4, 1.0, 5);
  const auto report = nsv::verify_pressure_bounds({nsv::bound_sample(v, 0.0, params, 2.0, 2.0)}, 2.0, 2.0);
  const double viscous = report.viscous.value_or(0.0);
  out.push_back({"l2_contraction", viscous <= 1.0 + 1e-12, fmt("ratio %.4f", viscous)});
  return out;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"tensor", "spectral", "energy", "pressure"};
  return names;
}

bool is_suite(const std::string& name) {
  for (const auto& n : suite_names())
    if (n == name) return true;
  return false;
}

std::vector<CheckResult> run_suite(const std::string& name, const SuiteHooks& hooks) {
  if (name == "tensor") return tensor_suite(hooks);
  if (name == "spectral") return spectral_suite();
  if (name == "energy") return energy_suite();
  if (name == "pressure") return pressure_suite();
  throw std::invalid_argument("unknown suite '" + name + "'");
}

}  // namespace nsvcli
