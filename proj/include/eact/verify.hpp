#pragma once

#include <string>
#include <vector>

#include "eact/types.hpp"

namespace eact {

/// One named invariant check inside a suite: how many instances ran, how many
/// violated the stated slack, and the worst signed margin observed (negative
/// means a violation of that size).
struct SuiteCheck {
  std::string name;
  int instances = 0;
  int failures = 0;
  double worst_margin = 0.0;
};

struct SuiteReport {
  std::string suite;
  unsigned seed = 0;
  std::vector<SuiteCheck> checks;
  bool passed() const {
    for (const auto& c : checks)
      if (c.failures > 0) return false;
    return true;
  }
};

std::vector<std::string> suite_names();

/// Runs one of: commuting, prop1, pinching, lemma1, types.
SuiteReport run_suite(const std::string& name, unsigned seed = 20240915);

}  // namespace eact
