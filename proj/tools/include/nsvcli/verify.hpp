#pragma once

#include <string>
#include <vector>

#include "nsv/tensor.hpp"

namespace nsvcli {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Substitutable pieces of the checked code; tests inject faults here to
/// confirm that a suite actually fails.
struct SuiteHooks {
  nsv::StressMap stress;  ///< empty means the library power law
};

const std::vector<std::string>& suite_names();
bool is_suite(const std::string& name);

/// Throws std::invalid_argument for an unknown suite.
std::vector<CheckResult> run_suite(const std::string& name, const SuiteHooks& hooks = {});

}  // namespace nsvcli
