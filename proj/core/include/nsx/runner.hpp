#pragma once

// Executes the checks of a scenario in declaration order.
//
// Check kinds (positional names, then clauses):
//
//   closed W                                 dW = 0
//   rank W at (...) = k                      rank of the 2-form at a point
//   rank W on|off L in R = k                 rank at on-/off-locus samples
//   gradient_rank W at (...) [power k] = r   rank of the gradient of W (or W^k)
//   nearsympl W at (...)                     near-symplectic point test
//   nearsympl W on L in R [count n]          test passes at n on-locus points
//   nearsympl W off L in R [count n]         test rejects n off-locus points
//                                            as nondegenerate
//   contact A [in R, ...]                    A ^ (dA)^m nonvanishing, one sign
//   vanishing_locus W on L in R [sign s] [witness V]
//   rank_drop_locus F on L in R regular a singular b
//   fixed_points X on L in R
//   dividing_set A X on L in R [= e]
//   pullback_eq F A = e                      F*A equals e
//   equal A = e                              A equals e
//   bracket_table h                          straightening of the graph of h
//   stabilize E B in R [kmax n] [= K]        smallest dyadic K with E + K B
//                                            nondegenerate
//   fibre_sign T F on L in R [sign s]        sign of T on the fibres of F
//   property NAME [count n]                  invariant battery member

#include <cstdint>
#include <string>
#include <vector>

#include "nsx/dsl.hpp"
#include "nsx/rng.hpp"

namespace nsx {

enum class Verdict { Pass, Fail, Undecided, Error };

std::string to_string(Verdict v);

struct CheckResult;
/// Report label: "report-only" for report checks, "fail" for errors,
/// otherwise the verdict.
std::string verdict_label(const CheckResult& c);

struct CheckResult {
  std::string kind;
  /// "<scenario id>.<check number>".
  std::string anchor;
  /// The check statement in canonical syntax.
  std::string inputs;
  dsl::Expect expect = dsl::Expect::Pass;
  Verdict verdict = Verdict::Error;
  std::string evidence;

  /// Whether this check keeps its scenario passing: an expected pass
  /// passed, or an expected failure failed. Report-only checks never
  /// flip the status; undecided and error never count as a pass.
  bool ok() const;
};

struct ScenarioReport {
  std::string id;
  std::string anchor;
  std::vector<CheckResult> checks;

  bool pass() const;
};

struct RunOptions {
  std::uint64_t seed = Rng::kDefaultSeed;
  /// Random-sample override for regions, floored at kMinRandomSamples.
  int samples = 0;
  double tol = 1e-9;
};

/// Never throws for evaluation problems: a failing declaration or check
/// becomes a check with verdict Error.
ScenarioReport run_scenario(const dsl::Scenario& scenario, const RunOptions& options = {},
                            const std::string& default_id = "scenario");

/// Parses and runs scenario text; a parse error becomes a single failed
/// "parse" check carrying the position.
ScenarioReport run_scenario_text(const std::string& text, const RunOptions& options = {},
                                 const std::string& default_id = "scenario");

}  // namespace nsx
