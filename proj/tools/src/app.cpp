#include "nsvcli/app.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>

#include "nsv/diagnostics.hpp"
#include "nsv/experiments.hpp"
#include "nsv/ledger.hpp"
#include "nsvcli/config.hpp"

namespace nsvcli {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

constexpr const char* kVersion = "0.1.0";

struct Options {
  std::string output_dir = ".";
  int threads = 1;
  std::optional<std::uint64_t> seed;
};

/// Raised for failures inside a run; carries the simulated time if known.
struct RunFailure {
  std::string message;
  std::optional<double> time;
};

json to_json(const Value& v) {
  return std::visit([](const auto& x) { return json(x); }, v);
}

json number(double x) {
  // JSON has no infinities.
  if (std::isfinite(x)) return x;
  return x > 0 ? "inf" : (x < 0 ? "-inf" : "nan");
}

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

class Manifest {
 public:
  Manifest(std::string command, std::string input, const Options& opt)
      : start_(std::chrono::steady_clock::now()), dir_(opt.output_dir) {
    doc_["command"] = std::move(command);
    doc_["input"] = std::move(input);
    doc_["code_version"] = kVersion;
    doc_["threads"] = opt.threads;
    doc_["outputs"] = json::array();
    doc_["status"] = "running";
  }

  json& doc() { return doc_; }
  const fs::path& dir() const { return dir_; }

  void echo(const ConfigDocument& cfg) {
    json c = json::object();
    for (const auto& [k, v] : cfg.values()) c[k] = to_json(v);
    doc_["config"] = c;
  }
  void output(const fs::path& file) { doc_["outputs"].push_back(file.filename().string()); }
  void fail(const RunFailure& f) {
    doc_["status"] = "failed";
    doc_["error"]["message"] = f.message;
    if (f.time) doc_["error"]["time"] = *f.time;
  }

  void write() {
    if (doc_["status"] == "running") doc_["status"] = "ok";
    doc_["wall_clock_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    fs::create_directories(dir_);
    std::ofstream os(dir_ / "manifest.json");
    os << doc_.dump(2) << '\n';
  }

 private:
  std::chrono::steady_clock::time_point start_;
  fs::path dir_;
  json doc_;
};

void write_table(Manifest& m, const std::string& name, const std::vector<std::string>& header,
                 const std::vector<std::vector<double>>& rows) {
  fs::create_directories(m.dir());
  const fs::path path = m.dir() / name;
  std::ofstream os(path);
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << '\n';
  for (const auto& r : rows) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << format_number(r[i]);
    os << '\n';
  }
  m.output(path);
}

// -- simulate ------------------------------------------------------------------

int cmd_simulate(const std::string& path, const Options& opt, std::ostream& out, std::ostream& err) {
  Manifest manifest("simulate", path, opt);
  RunSetup setup;
  try {
    const auto cfg = ConfigDocument::load(path);
    manifest.echo(cfg);
    setup = build_setup(cfg, opt.seed);
  } catch (const std::exception& e) {
    err << "config error: " << e.what() << '\n';
    manifest.fail({e.what(), std::nullopt});
    manifest.write();
    return kExitUsage;
  }
  manifest.doc()["seed"] = setup.seed;

  try {
    const auto v0 = make_field(setup.sim.grid, setup.initial);
    const auto traj = setup.params.regularization ? nsv::solve_regularized(setup.sim, setup.params, v0)
                                                  : nsv::integrate(setup.sim, setup.params, v0);
    const fs::path ledger = manifest.dir() / "ledger.csv";
    fs::create_directories(manifest.dir());
    std::ofstream os(ledger);
    nsv::write_ledger_csv(os, traj.ledger);
    manifest.output(ledger);
    const auto residual = nsv::energy_identity_residual(traj.ledger);
    manifest.doc()["report"] = {{"steps", traj.ledger.rows.size() - 1},
                                {"terminal_energy", traj.ledger.rows.back().energy()},
                                {"energy_defect_max", residual.max_abs()},
                                {"max_energy_increase", nsv::max_energy_increase(traj.ledger)}};
  } catch (const nsv::FixedPointDiverged& e) {
    err << "solver failure: " << e.what() << '\n';
    manifest.fail({e.what(), e.time()});
    manifest.write();
    return kExitSolver;
  } catch (const std::exception& e) {
    err << "solver failure: " << e.what() << '\n';
    manifest.fail({e.what(), std::nullopt});
    manifest.write();
    return kExitSolver;
  }
  manifest.write();
  out << "simulate: wrote " << (manifest.dir() / "ledger.csv").string() << '\n';
  return kExitOk;
}

// -- experiment ----------------------------------------------------------------

void experiment_taylor_green(const RunSetup& s, const std::vector<double>& sweep, const Options& opt,
                             Manifest& m) {
  std::vector<nsv::TaylorGreenReport> reps(sweep.size());
  nsv::parallel_for(sweep.size(), opt.threads, [&](std::size_t i) {
    auto sim = s.sim;
    sim.dt = sweep[i];
    reps[i] = nsv::run_taylor_green(sim, s.params, s.initial.amplitude);
  });
  std::vector<std::vector<double>> rows;
  json pts = json::array();
  for (std::size_t i = 0; i < sweep.size(); ++i) {
    rows.push_back({sweep[i], reps[i].expected_rate, reps[i].measured_rate, reps[i].terminal_l2_error,
                    reps[i].relative_error});
    pts.push_back({{"dt", sweep[i]}, {"terminal_l2_error", reps[i].terminal_l2_error}});
  }
  write_table(m, "taylor_green.csv", {"dt", "expected_rate", "measured_rate", "terminal_l2_error", "relative_error"},
              rows);
  m.doc()["report"] = {{"expected_rate", reps.front().expected_rate}, {"points", pts}};
}

void experiment_manufactured(const ConfigDocument& cfg, const RunSetup& s, const std::vector<double>& sweep,
                             const Options& opt, Manifest& m) {
  const auto shape = make_field(s.sim.grid, s.initial);
  const auto target = cfg.boolean("experiment.steady", false)
                          ? nsv::ManufacturedTarget::steady(shape)
                          : nsv::ManufacturedTarget::oscillating(shape, cfg.number("experiment.eps", 0.5),
                                                                 cfg.number("experiment.omega", 2.0));
  std::vector<nsv::ManufacturedReport> reps(sweep.size());
  nsv::parallel_for(sweep.size(), opt.threads, [&](std::size_t i) {
    auto sim = s.sim;
    sim.dt = sweep[i];
    reps[i] = nsv::run_manufactured(sim, s.params, target);
  });
  std::vector<std::vector<double>> rows;
  json ratios = json::array();
  for (std::size_t i = 0; i < sweep.size(); ++i) {
    rows.push_back({sweep[i], reps[i].terminal_l2_error, reps[i].max_l2_error, reps[i].target_norm});
    if (i > 0) ratios.push_back(number(reps[i - 1].terminal_l2_error / reps[i].terminal_l2_error));
  }
  write_table(m, "manufactured.csv", {"dt", "terminal_l2_error", "max_l2_error", "target_norm"}, rows);
  m.doc()["report"] = {{"error_ratios", ratios}};
}

void experiment_refinement(const RunSetup& s, const std::vector<double>& sweep, const Options& opt, Manifest& m) {
  std::vector<int> shells;
  for (double x : sweep) {
    if (x != std::floor(x) || x < 1) throw ConfigError("experiment.sweep", "shells must be positive integers");
    shells.push_back(static_cast<int>(x));
  }
  const auto v0 = make_field(s.sim.grid, s.initial);
  std::vector<nsv::RefinementRow> table;
  try {
    table = nsv::run_refinement(s.sim, s.params, v0, shells, opt.threads);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("experiment.sweep", e.what());
  }
  std::vector<std::vector<double>> rows;
  bool monotone = true;
  for (std::size_t i = 0; i < table.size(); ++i) {
    rows.push_back({double(table[i].coarse_shell), double(table[i].fine_shell), table[i].l2_space_time,
                    table[i].sup_h1});
    if (i > 0 && table[i].l2_space_time > table[i - 1].l2_space_time) monotone = false;
  }
  write_table(m, "refinement.csv", {"coarse_shell", "fine_shell", "l2_space_time", "sup_h1"}, rows);
  m.doc()["report"] = {{"rows", table.size()}, {"monotone", monotone}};
}

void experiment_kappa(const RunSetup& s, const std::vector<double>& sweep, const Options& opt, Manifest& m) {
  const auto v0 = make_field(s.sim.grid, s.initial);
  const auto table = nsv::run_kappa_sweep(s.sim, s.params, v0, sweep, opt.threads);
  std::vector<std::vector<double>> rows;
  for (const auto& r : table)
    rows.push_back({r.kappa, r.initial_energy, r.terminal_energy, r.decay_rate, r.max_energy_increase});
  write_table(m, "kappa_sweep.csv",
              {"kappa", "initial_energy", "terminal_energy", "decay_rate", "max_energy_increase"}, rows);
  m.doc()["report"] = {{"rows", table.size()}};
}

void experiment_gronwall(const ConfigDocument& cfg, const RunSetup& s, const std::vector<double>& sweep,
                         const Options& opt, Manifest& m) {
  auto params = s.params;
  const auto v0 = nsv::truncate(make_field(s.sim.grid, s.initial), s.sim.galerkin_n);
  if (cfg.boolean("experiment.steady_base", false))
    params.forcing = nsv::manufactured_forcing(nsv::ManufacturedTarget::steady(v0), params, s.sim.grid);
  auto direction = nsv::random_velocity(s.sim.grid, std::max(1, s.initial.shell), 1.0, s.seed + 2);
  const int cycles = cfg.integer("experiment.breeding_cycles", 0);
  if (cycles < 0) throw ConfigError("experiment.breeding_cycles", "must be nonnegative");
  if (cycles > 0)
    direction = nsv::bred_direction(s.sim, params, v0, direction, cycles, cfg.number("experiment.cycle_time", 1.0));

  std::vector<nsv::GronwallReport> reps(sweep.size());
  nsv::parallel_for(sweep.size(), opt.threads,
                    [&](std::size_t i) { reps[i] = nsv::run_gronwall(s.sim, params, v0, direction, sweep[i]); });
  std::vector<std::vector<double>> rows, series;
  json pts = json::array();
  for (std::size_t i = 0; i < sweep.size(); ++i) {
    double max_w = 0.0;
    for (double g : reps[i].grad_w_sq) max_w = std::max(max_w, std::sqrt(g));
    rows.push_back({sweep[i], reps[i].fitted_rate, reps[i].max_excess,
                    max_w, reps[i].identical ? 1.0 : 0.0});
    pts.push_back({{"delta", sweep[i]},
                   {"fitted_rate", reps[i].fitted_rate},
                   {"max_excess", number(reps[i].max_excess)},
                   {"max_grad_w", max_w},
                   {"w_identically_zero", reps[i].identical}});
  }
  std::vector<std::string> header{"t"};
  for (double d : sweep) header.push_back("grad_w_sq_delta_" + format_number(d));
  for (std::size_t k = 0; k < reps.front().times.size(); ++k) {
    std::vector<double> r{reps.front().times[k]};
    for (const auto& rep : reps) r.push_back(rep.grad_w_sq[k]);
    series.push_back(r);
  }
  write_table(m, "gronwall.csv", {"delta", "fitted_rate", "max_excess", "max_grad_w", "identical"}, rows);
  write_table(m, "gronwall_series.csv", header, series);
  m.doc()["report"] = {{"points", pts}, {"breeding_cycles", cycles}};
}

void experiment_regularization(const ConfigDocument& cfg, const RunSetup& s, const std::vector<double>& sweep,
                               const Options& opt, Manifest& m) {
  const double beta = cfg.has("experiment.beta") ? cfg.number("experiment.beta") : cfg.number("regularization.beta");
  if (!nsv::beta_admissible(beta, s.params.p, s.sim.grid.dim()))
    throw ConfigError("experiment.beta", "beta outside the admissible window");
  for (std::size_t i = 1; i < sweep.size(); ++i)
    if (sweep[i] <= sweep[i - 1]) throw ConfigError("experiment.sweep", "n values must increase");
  auto params = s.params;
  params.regularization.reset();
  const auto v0 = make_field(s.sim.grid, s.initial);
  nsv::RegularizationSweepReport rep;
  try {
    rep = nsv::run_regularization_sweep(s.sim, params, v0, beta, sweep, opt.threads);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("experiment.sweep", e.what());
  }
  std::vector<std::vector<double>> rows;
  json values = json::array();
  for (std::size_t i = 0; i < sweep.size(); ++i) {
    rows.push_back({sweep[i], rep.stress_dual[i], rep.reg_energy[i]});
    values.push_back({{"n", number(sweep[i])}, {"stress_dual", rep.stress_dual[i]}});
  }
  write_table(m, "regularization_sweep.csv", {"n", "stress_dual", "reg_energy"}, rows);
  m.doc()["report"] = {{"beta", beta}, {"slope", rep.slope}, {"values", values}};
}

int cmd_experiment(const std::string& path, const Options& opt, std::ostream& out, std::ostream& err) {
  Manifest manifest("experiment", path, opt);
  ConfigDocument cfg;
  RunSetup setup;
  std::string kind;
  std::vector<double> sweep;
  try {
    cfg = ConfigDocument::load(path);
    manifest.echo(cfg);
    setup = build_setup(cfg, opt.seed);
    kind = cfg.string("experiment.kind", "");
    static const std::set<std::string> kinds{"taylor_green", "manufactured",  "refinement",
                                             "kappa_sweep",  "gronwall",      "regularization_sweep"};
    if (!kinds.count(kind)) throw ConfigError("experiment.kind", "unknown experiment kind '" + kind + "'");
    sweep = cfg.array("experiment.sweep");
    if (sweep.empty()) throw ConfigError("experiment.sweep", "sweep must not be empty");
  } catch (const std::exception& e) {
    err << "config error: " << e.what() << '\n';
    manifest.fail({e.what(), std::nullopt});
    manifest.write();
    return kExitUsage;
  }
  manifest.doc()["kind"] = kind;
  manifest.doc()["seed"] = setup.seed;

  try {
    if (kind == "taylor_green") experiment_taylor_green(setup, sweep, opt, manifest);
    if (kind == "manufactured") experiment_manufactured(cfg, setup, sweep, opt, manifest);
    if (kind == "refinement") experiment_refinement(setup, sweep, opt, manifest);
    if (kind == "kappa_sweep") experiment_kappa(setup, sweep, opt, manifest);
    if (kind == "gronwall") experiment_gronwall(cfg, setup, sweep, opt, manifest);
    if (kind == "regularization_sweep") experiment_regularization(cfg, setup, sweep, opt, manifest);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    manifest.fail({e.what(), std::nullopt});
    manifest.write();
    return kExitUsage;
  } catch (const nsv::FixedPointDiverged& e) {
    err << "solver failure: " << e.what() << '\n';
    manifest.fail({e.what(), e.time()});
    manifest.write();
    return kExitSolver;
  } catch (const std::exception& e) {
    err << "solver failure: " << e.what() << '\n';
    manifest.fail({e.what(), std::nullopt});
    manifest.write();
    return kExitSolver;
  }
  manifest.write();
  out << "experiment " << kind << ": wrote " << manifest.dir().string() << '\n';
  return kExitOk;
}

// -- verify --------------------------------------------------------------------

int cmd_verify(const std::string& suite, const Options& opt, const SuiteHooks& hooks, std::ostream& out,
               std::ostream& err) {
  if (!is_suite(suite)) {
    err << "unknown suite '" << suite << "' (expected tensor, spectral, energy or pressure)\n";
    return kExitUsage;
  }
  Manifest manifest("verify", suite, opt);
  bool all = true;
  json checks = json::array();
  for (const auto& c : run_suite(suite, hooks)) {
    out << (c.passed ? "PASS " : "FAIL ") << suite << '.' << c.name << "  " << c.detail << '\n';
    checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    all = all && c.passed;
  }
  manifest.doc()["verifications"] = checks;
  if (!all) manifest.fail({"one or more checks failed", std::nullopt});
  manifest.write();
  return all ? kExitOk : kExitUsage;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err, const SuiteHooks& hooks) {
  CLI::App app{"Spectral Galerkin solver for power-law Navier-Stokes-Voigt flows", "nsv"};
  app.require_subcommand(1);
  Options opt;
  std::uint64_t seed = 0;
  app.add_option("--output-dir", opt.output_dir, "Directory for ledgers, tables and the manifest");
  app.add_option("--threads", opt.threads, "Worker threads for experiment sweeps")->check(CLI::PositiveNumber);
  auto* seed_opt = app.add_option("--seed", seed, "Seed for random initial data and forcing");

  std::string sim_path, exp_path, suite;
  auto* sim = app.add_subcommand("simulate", "Integrate one configuration and write its energy ledger");
  sim->add_option("config", sim_path, "Configuration file")->required();
  auto* exp = app.add_subcommand("experiment", "Run a scripted study");
  exp->add_option("spec", exp_path, "Experiment file")->required();
  auto* ver = app.add_subcommand("verify", "Run an invariant suite");
  ver->add_option("suite", suite, "tensor | spectral | energy | pressure")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return kExitUsage;
  }
  if (seed_opt->count() > 0) opt.seed = seed;

  if (sim->parsed()) return cmd_simulate(sim_path, opt, out, err);
  if (exp->parsed()) return cmd_experiment(exp_path, opt, out, err);
  return cmd_verify(suite, opt, hooks, out, err);
}

}  // namespace nsvcli
