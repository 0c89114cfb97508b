#include <map>
#include <sstream>

#include <gtest/gtest.h>

#include "json.hpp"
#include "nsx/errors.hpp"
#include "nsx/paper_suite.hpp"
#include "nsx/report.hpp"
#include "nsx/runner.hpp"

namespace nsx {
namespace {

const CheckResult* find(const ScenarioReport& r, const std::string& anchor) {
  for (const auto& c : r.checks)
    if (c.anchor == anchor) return &c;
  return nullptr;
}

const ScenarioReport& scenario(const SuiteReport& r, const std::string& id) {
  for (const auto& s : r.scenarios)
    if (s.id == id) return s;
  throw std::runtime_error("no scenario " + id);
}

class PaperSuite : public ::testing::Test {
 protected:
  static void SetUpTestSuite() { report_ = new SuiteReport(run_paper_suite()); }
  static void TearDownTestSuite() {
    delete report_;
    report_ = nullptr;
  }
  static SuiteReport* report_;
};
SuiteReport* PaperSuite::report_ = nullptr;

TEST(Runner, DarbouxPasses) {
  const auto r = run_scenario_text(
      "chart C3 (z1, z2, z3)\n"
      "form a on C3 = d(z3) + z1*d(z2)\n"
      "check contact a expect pass\n",
      {}, "darboux");
  EXPECT_EQ(r.id, "darboux");
  ASSERT_EQ(r.checks.size(), 1u);
  EXPECT_EQ(r.checks[0].anchor, "darboux.1");
  EXPECT_EQ(r.checks[0].verdict, Verdict::Pass);
  EXPECT_TRUE(r.pass());
}

TEST(Runner, ZeroFormRankFourFailsWithCounterexample) {
  const auto r = run_scenario_text(
      "chart R4 (x1, x2, x3, x4)\n"
      "form w on R4 = 0*d(x1) /\\ d(x2)\n"
      "check rank w at (x1 = 1, x2 = 2, x3 = 3, x4 = 4) = 4\n");
  ASSERT_EQ(r.checks.size(), 1u);
  EXPECT_EQ(r.checks[0].verdict, Verdict::Fail);
  EXPECT_NE(r.checks[0].evidence.find("rank 0"), std::string::npos) << r.checks[0].evidence;
  EXPECT_NE(r.checks[0].evidence.find("x1=1"), std::string::npos) << r.checks[0].evidence;
  EXPECT_FALSE(r.pass());
}

TEST(Runner, UndecidedEqualityIsNotPass) {
  const auto r = run_scenario_text(
      "chart L (x)\n"
      "expr a on L = sin(2*x)\n"
      "check equal a = 2*sin(x)*cos(x)\n");
  ASSERT_EQ(r.checks.size(), 1u);
  EXPECT_EQ(r.checks[0].verdict, Verdict::Undecided);
  EXPECT_EQ(verdict_label(r.checks[0]), "undecided");
  EXPECT_FALSE(r.pass());
}

TEST(Runner, ParseErrorBecomesFailedCheck) {
  const auto r = run_scenario_text("chart C (x1\n", {}, "bad");
  ASSERT_EQ(r.checks.size(), 1u);
  EXPECT_EQ(r.checks[0].kind, "parse");
  EXPECT_EQ(r.checks[0].anchor, "bad.parse");
  EXPECT_EQ(r.checks[0].verdict, Verdict::Error);
  EXPECT_EQ(verdict_label(r.checks[0]), "fail");
  EXPECT_NE(r.checks[0].evidence.find("1:"), std::string::npos);
  EXPECT_FALSE(r.pass());
}

TEST(Runner, EvaluationErrorsNeverThrow) {
  ScenarioReport r;
  ASSERT_NO_THROW(r = run_scenario_text(
                      "chart C (x1, x2)\n"
                      "form w on C = d(x1)\n"
                      "check closed nothing\n"
                      "check rank w at (x1 = 0) = 2\n"
                      "check contact w\n"
                      "check property no_such_property\n"));
  ASSERT_EQ(r.checks.size(), 4u);
  for (const auto& c : r.checks) {
    EXPECT_EQ(c.verdict, Verdict::Error) << c.anchor << " " << c.evidence;
    EXPECT_EQ(c.evidence.rfind("error: ", 0), 0u) << c.evidence;
  }
}

TEST(Runner, ExpectFailAndReport) {
  const auto r = run_scenario_text(
      "chart C (x1, x2)\n"
      "form w on C = x1*d(x2)\n"
      "check closed w expect fail\n"
      "check equal w = x2*d(x1) expect report\n"
      "check equal w = x1*d(x2) expect report\n");
  ASSERT_EQ(r.checks.size(), 3u);
  EXPECT_EQ(r.checks[0].verdict, Verdict::Fail);
  EXPECT_TRUE(r.checks[0].ok());
  EXPECT_EQ(verdict_label(r.checks[1]), "report-only");
  EXPECT_EQ(r.checks[1].evidence.rfind("computed fail; ", 0), 0u);
  EXPECT_EQ(r.checks[2].evidence.rfind("computed pass; ", 0), 0u);
  EXPECT_TRUE(r.pass());
}

TEST(Runner, InputsAreCanonicalCheckText) {
  const auto r = run_scenario_text("chart C (x1)\nform w on C = d(x1)\ncheck   closed  w\n");
  EXPECT_EQ(r.checks[0].inputs, "check closed w");
}

TEST_F(PaperSuite, ExpectedStatuses) {
  ASSERT_EQ(report_->scenarios.size(), 12u);
  for (const auto& s : report_->scenarios) {
    if (s.id == "S8") continue;
    EXPECT_TRUE(s.pass()) << s.id;
    for (const auto& c : s.checks) EXPECT_TRUE(c.ok()) << c.anchor << " " << c.evidence;
  }
}

TEST_F(PaperSuite, S8ChecksOtherThanTheContactSweep) {
  // The contact sweep (S8.10-12) is an acceptance criterion of its own.
  const auto& s8 = scenario(*report_, "S8");
  for (const auto& c : s8.checks) {
    if (c.kind == "contact") continue;
    EXPECT_TRUE(c.ok()) << c.anchor << " " << c.evidence;
  }
  const auto* diff = find(s8, "S8.9");
  ASSERT_NE(diff, nullptr);
  EXPECT_EQ(verdict_label(*diff), "report-only");
  EXPECT_NE(diff->evidence.find("lhs = -1 * rhs"), std::string::npos);
}

TEST_F(PaperSuite, ReportOnlyDiscrepanciesCarryEvidence) {
  const auto* k = find(scenario(*report_, "S10"), "S10.2");
  ASSERT_NE(k, nullptr);
  EXPECT_EQ(verdict_label(*k), "report-only");
  EXPECT_NE(k->evidence.find("proportional with factor 10"), std::string::npos);
  const auto* fibre = find(scenario(*report_, "S11"), "S11.2");
  ASSERT_NE(fibre, nullptr);
  EXPECT_EQ(verdict_label(*fibre), "report-only");
}

TEST_F(PaperSuite, S3Counts) {
  const auto& s3 = scenario(*report_, "S3");
  EXPECT_EQ(find(s3, "S3.1")->evidence, "d(w) = 0");
  EXPECT_NE(find(s3, "S3.2")->evidence.find("64/64 on-locus, 4096/4096 off-locus"), std::string::npos);
  EXPECT_NE(find(s3, "S3.3")->evidence.find("10/10 on-locus points pass"), std::string::npos);
}

TEST_F(PaperSuite, S9ExactPi) {
  const auto* c = find(scenario(*report_, "S9"), "S9.2");
  ASSERT_NE(c, nullptr);
  EXPECT_NE(c->evidence.find("top coefficient pi"), std::string::npos);
}

TEST_F(PaperSuite, JsonIsDeterministicAndMatchesText) {
  const std::string json = to_json(*report_);
  EXPECT_EQ(json, to_json(run_paper_suite()));
  ASSERT_FALSE(json.empty());
  EXPECT_EQ(json.back(), '\n');

  const auto j = nlohmann::json::parse(json);
  EXPECT_EQ(j.at("version"), version());
  EXPECT_EQ(j.at("seed"), Rng::kDefaultSeed);
  std::map<std::string, std::string> from_json;
  for (const auto& s : j.at("scenarios")) {
    for (const char* key : {"id", "anchor", "status", "checks"}) EXPECT_TRUE(s.contains(key)) << key;
    for (const auto& c : s.at("checks")) {
      for (const char* key : {"anchor", "kind", "inputs", "expect", "verdict", "evidence"})
        EXPECT_TRUE(c.contains(key)) << key;
      from_json[c.at("anchor").get<std::string>()] = c.at("verdict").get<std::string>();
    }
  }

  std::istringstream text(to_text(*report_));
  std::string line;
  int checked = 0;
  while (std::getline(text, line)) {
    std::istringstream ls(line);
    std::string anchor, kind, label;
    ls >> anchor >> kind >> label;
    const auto it = from_json.find(anchor);
    if (it == from_json.end()) continue;
    std::string expect = it->second;
    for (auto& ch : expect) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    EXPECT_EQ(label, expect) << line;
    ++checked;
  }
  EXPECT_EQ(checked, static_cast<int>(from_json.size()));
}

TEST(PaperSuiteOptions, MinimumSamplesStillPass) {
  RunOptions o;
  o.samples = 4;
  const auto r = run_paper_suite(o);
  for (const auto& s : r.scenarios) {
    for (const auto& c : s.checks) {
      if (s.id == "S8" && c.kind == "contact") continue;
      EXPECT_TRUE(c.ok()) << c.anchor << " " << c.evidence;
    }
  }
}

TEST(PaperSuiteOptions, TamperedS3Fails) {
  const auto& all = paper_scenarios();
  std::string src = all[2].source;
  ASSERT_EQ(all[2].id, "S3");
  const auto at = src.find("- 2*x1");
  ASSERT_NE(at, std::string::npos);
  src.replace(at, 6, "+ 2*x1");
  const auto r = run_scenario_text(src);
  EXPECT_FALSE(r.pass());
  const auto* closed = find(r, "S3.1");
  ASSERT_NE(closed, nullptr);
  EXPECT_EQ(closed->verdict, Verdict::Fail);
  EXPECT_NE(closed->evidence.find("d(w) ="), std::string::npos) << closed->evidence;
}

TEST(PaperSuiteOptions, OnlyFilter) {
  const auto r = run_paper_suite({}, {"S9", "S4"});
  ASSERT_EQ(r.scenarios.size(), 2u);
  EXPECT_EQ(r.scenarios[0].id, "S4");
  EXPECT_EQ(r.scenarios[1].id, "S9");
  EXPECT_THROW(run_paper_suite({}, {"S13"}), DomainError);
}

TEST(Report, TextLayout) {
  SuiteReport r;
  r.seed = 7;
  ScenarioReport s;
  s.id = "T";
  s.anchor = "toy";
  CheckResult c;
  c.kind = "closed";
  c.anchor = "T.1";
  c.verdict = Verdict::Fail;
  c.expect = dsl::Expect::Fail;
  c.evidence = "d(w) = dx";
  s.checks.push_back(c);
  r.scenarios.push_back(s);
  EXPECT_EQ(to_text(r), "nsx " + version() + " seed 7\nT.1 closed FAIL [expected fail] (d(w) = dx)\nT PASS toy\noverall PASS\n");
  EXPECT_TRUE(r.pass());
}

}  // namespace
}  // namespace nsx
