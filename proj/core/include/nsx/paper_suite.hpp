#pragma once

// Built-in scenarios S1-S12 with their expected verdicts. The sources are
// the .nsx files under core/scenarios/, embedded at build time.

#include <string>
#include <vector>

#include "nsx/report.hpp"
#include "nsx/runner.hpp"

namespace nsx {

struct PaperScenario {
  std::string id;
  std::string anchor;
  std::string source;
};

/// S1..S12 in order.
const std::vector<PaperScenario>& paper_scenarios();

/// Runs the selected scenarios (all when `only` is empty); unknown ids
/// throw DomainError.
SuiteReport run_paper_suite(const RunOptions& options = {}, const std::vector<std::string>& only = {});

}  // namespace nsx
