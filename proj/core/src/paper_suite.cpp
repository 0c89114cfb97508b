#include "nsx/paper_suite.hpp"

#include <algorithm>

#include "nsx/errors.hpp"

namespace nsx {

namespace detail {
// Generated from core/scenarios/*.nsx: (id, text) pairs in suite order.
extern const std::vector<std::pair<std::string, std::string>> kPaperScenarioSources;
}  // namespace detail

const std::vector<PaperScenario>& paper_scenarios() {
  static const std::vector<PaperScenario> all = [] {
    std::vector<PaperScenario> out;
    for (const auto& [id, text] : detail::kPaperScenarioSources) {
      std::string anchor;
      if (auto parsed = dsl::parse(text); auto* s = std::get_if<dsl::Scenario>(&parsed)) anchor = s->anchor();
      out.push_back({id, anchor, text});
    }
    return out;
  }();
  return all;
}

SuiteReport run_paper_suite(const RunOptions& options, const std::vector<std::string>& only) {
  const auto& all = paper_scenarios();
  for (const auto& id : only) {
    if (std::none_of(all.begin(), all.end(), [&](const PaperScenario& s) { return s.id == id; })) {
      throw DomainError("unknown scenario '" + id + "'");
    }
  }
  SuiteReport report;
  report.seed = options.seed;
  for (const auto& s : all) {
    if (!only.empty() && std::find(only.begin(), only.end(), s.id) == only.end()) continue;
    report.scenarios.push_back(run_scenario_text(s.source, options, s.id));
  }
  return report;
}

}  // namespace nsx
