#pragma once

#include <string>
#include <vector>

namespace efp::verify {

struct CriterionResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

/// Runs the full acceptance property suite. scratch_dir receives run
/// artifacts (created if missing). Deterministic: all seeds are pinned.
std::vector<CriterionResult> run_all(const std::string& scratch_dir);

}  // namespace efp::verify
