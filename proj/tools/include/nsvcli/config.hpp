#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "nsv/galerkin.hpp"

namespace nsvcli {

/// Error carrying the dotted key ("physics.nu") it refers to.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& message);
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

using Value = std::variant<double, bool, std::string, std::vector<double>>;

/// Flat key = value document with [section] headers, '#' comments,
/// numbers (inf allowed), true/false, "strings" and [numeric, arrays].
/// Keys are stored dotted: "section.key".
class ConfigDocument {
 public:
  static ConfigDocument parse(const std::string& text);
  static ConfigDocument load(const std::string& path);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  const std::map<std::string, Value>& values() const { return values_; }

  double number(const std::string& key) const;
  double number(const std::string& key, double fallback) const;
  int integer(const std::string& key) const;
  int integer(const std::string& key, int fallback) const;
  bool boolean(const std::string& key, bool fallback) const;
  std::string string(const std::string& key, const std::string& fallback) const;
  std::vector<double> array(const std::string& key) const;

  void set(const std::string& key, Value v) { values_[key] = std::move(v); }
  /// Rejects any key outside `allowed` (typo guard).
  void require_known(const std::set<std::string>& allowed) const;

 private:
  std::map<std::string, Value> values_;
  const Value& at(const std::string& key) const;
};

/// Initial data or forcing shape from [initial] / [forcing].
struct FieldSpec {
  std::string kind = "zero";  ///< zero | taylor_green | abc | random
  double amplitude = 1.0;
  int shell = 2;
  std::uint64_t seed = 1;
  double a = 1.0, b = 0.5, c = 0.5;
};

struct RunSetup {
  nsv::SimConfig sim;
  nsv::PdeParams params;
  FieldSpec initial;
  FieldSpec forcing;
  std::uint64_t seed = 1;
};

/// Builds solver inputs; nu, kappa, p, grid.dim, grid.modes, solver.dt and
/// solver.t_end have no defaults.
RunSetup build_setup(const ConfigDocument& doc, std::optional<std::uint64_t> seed_override = std::nullopt);

nsv::SpectralVelocity make_field(const nsv::TorusGrid& grid, const FieldSpec& spec);

/// Every key the simulate and experiment commands understand.
const std::set<std::string>& known_keys();

}  // namespace nsvcli
