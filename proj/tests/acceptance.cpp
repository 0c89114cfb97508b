// Acceptance run: one PASS/FAIL line per criterion. Exit status 0 iff all
// criteria pass.
//
//   nsx_acceptance [path/to/nsx]
//
// The CLI path (for the determinism criterion) defaults to NSX_CLI_PATH.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <unistd.h>

#include "nsx/dsl.hpp"
#include "nsx/environment.hpp"
#include "nsx/paper_suite.hpp"
#include "nsx/pointcheck.hpp"
#include "nsx/properties.hpp"
#include "oracles.hpp"

namespace {

using namespace nsx;

constexpr double kSuiteBudgetSeconds = 120.0;
constexpr int kContactSamples = 2 * 64 * 64 * 8;

int failures = 0;

void verdict(int n, bool pass, const std::string& what, const std::string& detail) {
  std::cout << "criterion " << n << ' ' << (pass ? "PASS" : "FAIL") << ": " << what << " (" << detail << ")\n";
  if (!pass) ++failures;
}

const CheckResult* find_check(const SuiteReport& r, const std::string& anchor) {
  for (const auto& s : r.scenarios)
    for (const auto& c : s.checks)
      if (c.anchor == anchor) return &c;
  return nullptr;
}

bool has(const CheckResult* c, const std::string& needle) {
  return c && c->evidence.find(needle) != std::string::npos;
}

bool passed(const CheckResult* c) { return c && c->verdict == Verdict::Pass && c->ok(); }

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void criterion1(const SuiteReport& r, double seconds) {
  std::ostringstream d;
  bool ok = seconds < kSuiteBudgetSeconds && r.scenarios.size() == 12;
  d << seconds << " s of " << kSuiteBudgetSeconds << " s budget";
  for (const auto& s : r.scenarios) {
    for (const auto& c : s.checks) {
      if (!c.ok()) {
        ok = false;
        d << "; " << c.anchor << " " << c.kind << " expected " << dsl::to_string(c.expect) << ", got "
          << to_string(c.verdict);
      }
    }
  }
  const bool s3 = find_check(r, "S3.1") && find_check(r, "S3.1")->evidence == "d(w) = 0" &&
                  has(find_check(r, "S3.2"), "64/64 on-locus, 4096/4096 off-locus") &&
                  has(find_check(r, "S3.3"), "10/10 on-locus points pass") &&
                  has(find_check(r, "S3.3"), "dim K = 4, dim Im(D_K) = 3");
  if (!s3) d << "; S3 evidence incomplete";
  d << "; S3 " << (s3 ? "closed exactly, 64 on / 4096 off samples, 10 locus points pass" : "FAIL");
  verdict(1, ok && s3, "paper suite statuses, S3 specifics, runtime", d.str());
}

void criterion2() {
  std::ostringstream d;
  bool ok = true;
  for (const std::string name : {"d_squared", "graded_commutativity", "functoriality", "antiderivation", "double_star"}) {
    const auto p = run_property(name, default_property_count(name), Rng::kDefaultSeed);
    ok &= p.pass && p.failures == 0;
    d << (d.tellp() ? "; " : "") << name << " " << p.trials - p.failures << "/" << p.trials;
    if (!p.pass) d << " first: " << p.counterexample;
  }
  ok &= default_property_count("d_squared") >= 1000 && default_property_count("graded_commutativity") >= 500 &&
        default_property_count("functoriality") >= 100 && default_property_count("antiderivation") >= 200;
  verdict(2, ok, "invariant battery with zero failures", d.str());
}

void criterion3() {
  const auto r = oracle::derivative_oracle(Rng::kDefaultSeed, 200, 20);
  std::ostringstream d;
  d << r.comparisons - r.failures << "/" << r.comparisons << " within rel " << oracle::kFdRelTol << ", step "
    << oracle::kFdStep << ", worst " << r.worst;
  if (r.failures) d << "; first: " << r.first_failure;
  verdict(3, r.failures == 0 && r.expressions == 200 && r.comparisons == 4000,
          "symbolic derivative vs central differences", d.str());
}

void criterion4(const SuiteReport& r) {
  Environment env;
  const auto parsed = dsl::parse(
      "chart H (r, x, y)\n"
      "form a on H = sin(pi*r)*d(x) + cos(pi*r)*d(y)\n");
  for (const auto& st : std::get<dsl::Scenario>(parsed).statements) env.declare(st);
  const auto v = contact_test(env.form("a"), nullptr, {});
  const bool exact = v.pass && v.symbolic && v.top.str() == "pi" && v.top.kind() != Expr::Kind::Rational;
  const bool suite = passed(find_check(r, "S9.1")) && passed(find_check(r, "S9.2")) &&
                     has(find_check(r, "S9.2"), "top coefficient pi");
  verdict(4, exact && suite, "half-torsion a ^ da has the exact coefficient pi",
          "top coefficient " + v.top.str() + (v.symbolic ? ", symbolic" : ", sampled"));
}

void criterion5(const SuiteReport& r) {
  const auto* blow = find_check(r, "S10.4");
  const auto* div = find_check(r, "S10.1");
  const auto* fix = find_check(r, "S10.3");
  const bool ok = passed(blow) && has(blow, "Equal") && passed(div) && has(div, "equal (canonical forms coincide)") &&
                  passed(fix) && has(fix, "108/108 on-locus, 1728/1728 off-locus");
  verdict(5, ok, "blow-down pullback, dividing-set scalar, fixed points",
          std::string(blow ? blow->evidence : "missing") + "; " + (fix ? fix->evidence : "missing"));
}

void criterion6(const SuiteReport& r) {
  const auto* flat = find_check(r, "S7.1");
  const auto* parab = find_check(r, "S7.2");
  const bool ok = passed(flat) && passed(parab) && has(flat, "pullback of sum dp^dq = w_st") &&
                  has(parab, "pullback of sum dp^dq = w_st") && has(flat, "h = 0") && has(parab, "h = y1^2");
  verdict(6, ok, "straightening brackets for h = 0 and h = y1^2", ok ? "both tables canonical, pullback Equal" : "see report");
}

void criterion7(const SuiteReport& r) {
  const auto* k10 = find_check(r, "S8.11");
  const auto* k20 = find_check(r, "S8.12");
  const std::string count = std::to_string(kContactSamples) + " samples";
  const bool sampled = has(k10, count) && has(k20, count);
  const bool same = k10 && k20 && k10->verdict == k20->verdict;
  const bool ok = sampled && same && passed(k10) && passed(k20);
  std::ostringstream d;
  d << "K=10 " << (k10 ? to_string(k10->verdict) : "missing") << ", K=20 " << (k20 ? to_string(k20->verdict) : "missing")
    << (same ? ", verdict preserved" : ", verdict changed");
  if (k10) d << "; K=10: " << k10->evidence.substr(0, k10->evidence.find("; SA"));
  if (k20) d << "; K=20: " << k20->evidence.substr(0, k20->evidence.find("; SA"));
  verdict(7, ok, "contact sweep of K aN - proj*aZ on both sphere charts", d.str());
}

void criterion8(const std::string& cli) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / ("nsx_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const fs::path a = dir / "a.json", b = dir / "b.json";
  const auto run = [&](const fs::path& out) {
    const std::string cmd = "\"" + cli + "\" paper-suite --json \"" + out.string() + "\" > /dev/null 2>&1";
    return std::system(cmd.c_str());
  };
  run(a);
  run(b);
  const std::string ja = read_file(a), jb = read_file(b);
  const bool ok = !ja.empty() && ja == jb;
  verdict(8, ok, "two paper-suite --json runs are byte-identical",
          std::to_string(ja.size()) + " bytes" + (ok ? ", identical" : ", differ or missing"));
  fs::remove_all(dir);
}

void criterion9() {
  std::ostringstream d;
  const auto rt = run_property("dsl_round_trip", 200, Rng::kDefaultSeed);
  bool ok = rt.pass && rt.trials == 200;
  d << "round trip " << rt.trials - rt.failures << "/" << rt.trials;
  int builtin = 0;
  for (const auto& ps : paper_scenarios()) {
    auto parsed = dsl::parse(ps.source);
    if (const auto* s = std::get_if<dsl::Scenario>(&parsed)) {
      auto again = dsl::parse(dsl::print(*s));
      if (const auto* s2 = std::get_if<dsl::Scenario>(&again); s2 && *s2 == *s) ++builtin;
    }
  }
  ok &= builtin == 12;
  d << "; built-in " << builtin << "/12";
  Rng rng(Rng::kDefaultSeed);
  int mutants = 0, positioned = 0, crashes = 0;
  for (const auto& ps : paper_scenarios()) {
    for (int i = 0; i < 100; ++i) {
      const std::string text = oracle::mutate(ps.source, rng);
      ++mutants;
      try {
        auto parsed = dsl::parse(text);
        if (const auto* e = std::get_if<dsl::ParseError>(&parsed)) {
          if (e->line >= 1 && e->column >= 1 && !e->message.empty()) ++positioned;
          else ++crashes;
        }
      } catch (...) {
        ++crashes;
      }
    }
  }
  ok &= crashes == 0 && positioned > 0;
  d << "; " << mutants << " mutants, " << positioned << " positioned errors, " << crashes << " crashes";
  verdict(9, ok, "parser round trip and malformed input", d.str());
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : NSX_CLI_PATH;
  const auto t0 = std::chrono::steady_clock::now();
  const SuiteReport suite = run_paper_suite();
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  criterion1(suite, seconds);
  criterion2();
  criterion3();
  criterion4(suite);
  criterion5(suite);
  criterion6(suite);
  criterion7(suite);
  criterion8(cli);
  criterion9();
  std::cout << (failures == 0 ? "all criteria PASS" : std::to_string(failures) + " criteria FAIL") << "\n";
  return failures == 0 ? 0 : 1;
}
