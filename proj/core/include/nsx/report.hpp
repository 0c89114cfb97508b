#pragma once

// JSON and text renderings of scenario reports.
//
// JSON: { version, seed, scenarios: [ { id, anchor, status,
//         checks: [ { anchor, kind, inputs, expect, verdict, evidence } ] } ] }
// Text: one line per check, e.g.
//   S3.2 vanishing_locus PASS (64/64 on-locus, 4096/4096 off-locus)
// followed by one status line per scenario and an overall line.

#include <cstdint>
#include <string>
#include <vector>

#include "nsx/runner.hpp"

namespace nsx {

/// Tool version, e.g. "0.4.0".
std::string version();

struct SuiteReport {
  std::string version = nsx::version();
  std::uint64_t seed = Rng::kDefaultSeed;
  std::vector<ScenarioReport> scenarios;

  bool pass() const;
};

/// Deterministic: keys in fixed order, two-space indent, trailing newline.
std::string to_json(const SuiteReport& r);
std::string to_text(const SuiteReport& r);

}  // namespace nsx
