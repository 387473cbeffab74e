#include "nsvcli/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

namespace nsvcli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool valid_name(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  return true;
}

std::optional<double> parse_number(const std::string& s) {
  if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  const char* first = s.data() + (s.size() > 1 && s[0] == '+' ? 1 : 0);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

// Strips a trailing comment that is not inside a string.
std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

Value parse_value(const std::string& key, const std::string& raw) {
  if (raw.empty()) throw ConfigError(key, "missing value");
  if (raw == "true") return true;
  if (raw == "false") return false;
  if (raw.front() == '"') {
    if (raw.size() < 2 || raw.back() != '"') throw ConfigError(key, "unterminated string");
    return raw.substr(1, raw.size() - 2);
  }
  if (raw.front() == '[') {
    if (raw.back() != ']') throw ConfigError(key, "unterminated array");
    std::vector<double> out;
    std::stringstream ss(raw.substr(1, raw.size() - 2));
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (item.empty()) continue;
      const auto v = parse_number(item);
      if (!v) throw ConfigError(key, "array entry '" + item + "' is not a number");
      out.push_back(*v);
    }
    return out;
  }
  if (const auto v = parse_number(raw)) return *v;
  throw ConfigError(key, "cannot parse value '" + raw + "'");
}

}  // namespace

ConfigError::ConfigError(std::string key, const std::string& message)
    : std::runtime_error(key.empty() ? message : key + ": " + message), key_(std::move(key)) {}

ConfigDocument ConfigDocument::parse(const std::string& text) {
  ConfigDocument doc;
  std::string section;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(strip_comment(line));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']' || !valid_name(trim(line.substr(1, line.size() - 2))))
        throw ConfigError("", "line " + std::to_string(lineno) + ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    const std::string name = trim(line.substr(0, eq));
    if (eq == std::string::npos || !valid_name(name))
      throw ConfigError(section.empty() ? name : section + "." + name,
                        "line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = section.empty() ? name : section + "." + name;
    if (doc.has(key)) throw ConfigError(key, "duplicate key");
    doc.values_[key] = parse_value(key, trim(line.substr(eq + 1)));
  }
  return doc;
}

ConfigDocument ConfigDocument::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

const Value& ConfigDocument::at(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError(key, "required key is missing");
  return it->second;
}

double ConfigDocument::number(const std::string& key) const {
  const auto* v = std::get_if<double>(&at(key));
  if (!v) throw ConfigError(key, "expected a number");
  return *v;
}

double ConfigDocument::number(const std::string& key, double fallback) const {
  return has(key) ? number(key) : fallback;
}

int ConfigDocument::integer(const std::string& key) const {
  const double v = number(key);
  if (v != std::floor(v) || std::abs(v) > std::numeric_limits<int>::max())
    throw ConfigError(key, "expected an integer");
  return static_cast<int>(v);
}

int ConfigDocument::integer(const std::string& key, int fallback) const {
  return has(key) ? integer(key) : fallback;
}

bool ConfigDocument::boolean(const std::string& key, bool fallback) const {
  if (!has(key)) return fallback;
  const auto* v = std::get_if<bool>(&at(key));
  if (!v) throw ConfigError(key, "expected true or false");
  return *v;
}

std::string ConfigDocument::string(const std::string& key, const std::string& fallback) const {
  if (!has(key)) return fallback;
  const auto* v = std::get_if<std::string>(&at(key));
  if (!v) throw ConfigError(key, "expected a quoted string");
  return *v;
}

std::vector<double> ConfigDocument::array(const std::string& key) const {
  const auto& v = at(key);
  if (const auto* a = std::get_if<std::vector<double>>(&v)) return *a;
  if (const auto* d = std::get_if<double>(&v)) return {*d};
  throw ConfigError(key, "expected a numeric array");
}

void ConfigDocument::require_known(const std::set<std::string>& allowed) const {
  for (const auto& [key, _] : values_)
    if (!allowed.count(key)) throw ConfigError(key, "unknown key");
}

const std::set<std::string>& known_keys() {
  static const std::set<std::string> keys = [] {
    std::set<std::string> k{"grid.dim",        "grid.modes",          "grid.length",
                            "physics.nu",      "physics.kappa",       "physics.p",
                            "regularization.beta", "regularization.n",
                            "solver.galerkin_n", "solver.dt",         "solver.t_end",
                            "solver.scheme",   "solver.fixed_point_tol", "solver.max_fixed_point_iters",
                            "solver.snapshot_every",
                            "experiment.kind", "experiment.sweep",    "experiment.name",
                            "experiment.beta", "experiment.eps",      "experiment.omega",
                            "experiment.steady", "experiment.breeding_cycles", "experiment.cycle_time",
                            "experiment.steady_base"};
    for (const char* s : {"initial", "forcing"})
      for (const char* f : {"kind", "amplitude", "shell", "seed", "a", "b", "c"})
        k.insert(std::string(s) + "." + f);
    return k;
  }();
  return keys;
}

namespace {

FieldSpec field_spec(const ConfigDocument& doc, const std::string& section, std::uint64_t seed) {
  FieldSpec f;
  f.kind = doc.string(section + ".kind", "zero");
  if (f.kind != "zero" && f.kind != "taylor_green" && f.kind != "abc" && f.kind != "random")
    throw ConfigError(section + ".kind", "unknown field kind '" + f.kind + "'");
  f.amplitude = doc.number(section + ".amplitude", 1.0);
  f.shell = doc.integer(section + ".shell", 2);
  f.seed = seed;
  f.a = doc.number(section + ".a", 1.0);
  f.b = doc.number(section + ".b", 0.5);
  f.c = doc.number(section + ".c", 0.5);
  return f;
}

}  // namespace

RunSetup build_setup(const ConfigDocument& doc, std::optional<std::uint64_t> seed_override) {
  doc.require_known(known_keys());
  RunSetup s;
  const int dim = doc.integer("grid.dim");
  const int modes = doc.integer("grid.modes");
  const double length = doc.number("grid.length", 2.0 * std::numbers::pi);
  try {
    s.sim.grid = nsv::TorusGrid(dim, modes, length);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("grid", e.what());
  }

  s.params.nu = doc.number("physics.nu");
  s.params.kappa = doc.number("physics.kappa");
  s.params.p = doc.number("physics.p");
  if (doc.has("regularization.beta") || doc.has("regularization.n"))
    s.params.regularization = nsv::Regularization{doc.number("regularization.beta"), doc.number("regularization.n")};
  try {
    s.params.validate(dim);
  } catch (const std::invalid_argument& e) {
    throw ConfigError("physics", e.what());
  }

  s.sim.galerkin_n = doc.integer("solver.galerkin_n", s.sim.grid.max_shell());
  s.sim.dt = doc.number("solver.dt");
  s.sim.t_end = doc.number("solver.t_end");
  try {
    s.sim.scheme = nsv::parse_scheme(doc.string("solver.scheme", "midpoint"));
  } catch (const std::invalid_argument& e) {
    throw ConfigError("solver.scheme", e.what());
  }
  s.sim.fixed_point_tol = doc.number("solver.fixed_point_tol", 1e-10);
  s.sim.max_fixed_point_iters = doc.integer("solver.max_fixed_point_iters", 50);
  s.sim.snapshot_every = doc.integer("solver.snapshot_every", 1);
  try {
    s.sim.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("solver", e.what());
  }

  const auto seed_key = [&](const std::string& key, std::uint64_t fallback) -> std::uint64_t {
    const int v = doc.integer(key, static_cast<int>(fallback));
    if (v < 0) throw ConfigError(key, "seed must be nonnegative");
    return static_cast<std::uint64_t>(v);
  };
  s.seed = seed_override.value_or(seed_key("initial.seed", 1));
  s.initial = field_spec(doc, "initial", s.seed);
  s.forcing = field_spec(doc, "forcing", seed_override ? *seed_override + 1 : seed_key("forcing.seed", s.seed + 1));
  if (s.forcing.kind != "zero") {
    try {
      s.params.forcing = nsv::Forcing::steady(make_field(s.sim.grid, s.forcing));
    } catch (const std::invalid_argument& e) {
      throw ConfigError("forcing", e.what());
    }
  }
  return s;
}

nsv::SpectralVelocity make_field(const nsv::TorusGrid& grid, const FieldSpec& spec) {
  if (spec.kind == "zero") return nsv::SpectralVelocity(grid);
  if (spec.kind == "taylor_green") return nsv::taylor_green(grid, spec.amplitude);
  if (spec.kind == "abc") {
    if (grid.dim() != 3) throw std::invalid_argument("abc flow needs dim = 3");
    auto u = nsv::abc_flow(grid, spec.a, spec.b, spec.c);
    u *= spec.amplitude;
    return u;
  }
  return nsv::random_velocity(grid, spec.shell, spec.amplitude, spec.seed);
}

}  // namespace nsvcli
