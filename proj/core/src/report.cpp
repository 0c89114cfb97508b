#include "nsx/report.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "json.hpp"

namespace nsx {

std::string version() { return NSX_VERSION; }

bool SuiteReport::pass() const {
  return std::all_of(scenarios.begin(), scenarios.end(), [](const ScenarioReport& s) { return s.pass(); });
}

std::string to_json(const SuiteReport& r) {
  // ordered_json keeps insertion order, so the layout is fixed by this code.
  using json = nlohmann::ordered_json;
  json root;
  root["version"] = r.version;
  root["seed"] = r.seed;
  json scenarios = json::array();
  for (const auto& s : r.scenarios) {
    json js;
    js["id"] = s.id;
    js["anchor"] = s.anchor;
    js["status"] = s.pass() ? "pass" : "fail";
    json checks = json::array();
    for (const auto& c : s.checks) {
      json jc;
      jc["anchor"] = c.anchor;
      jc["kind"] = c.kind;
      jc["inputs"] = c.inputs;
      jc["expect"] = dsl::to_string(c.expect);
      jc["verdict"] = verdict_label(c);
      jc["evidence"] = c.evidence;
      checks.push_back(std::move(jc));
    }
    js["checks"] = std::move(checks);
    scenarios.push_back(std::move(js));
  }
  root["scenarios"] = std::move(scenarios);
  return root.dump(2, ' ', false, json::error_handler_t::replace) + "\n";
}

namespace {

std::string upper(std::string s) {
  for (auto& ch : s) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  return s;
}

}  // namespace

std::string to_text(const SuiteReport& r) {
  std::ostringstream os;
  os << "nsx " << r.version << " seed " << r.seed << "\n";
  for (const auto& s : r.scenarios) {
    for (const auto& c : s.checks) {
      os << c.anchor << " " << c.kind << " " << upper(verdict_label(c));
      if (c.expect == dsl::Expect::Fail) os << " [expected fail]";
      os << " (" << c.evidence << ")\n";
    }
    os << s.id << " " << (s.pass() ? "PASS" : "FAIL");
    if (!s.anchor.empty()) os << " " << s.anchor;
    os << "\n";
  }
  os << "overall " << (r.pass() ? "PASS" : "FAIL") << "\n";
  return os.str();
}

}  // namespace nsx
