// nsx: run scenario files and the built-in paper suite.
//
//   nsx check FILE [--seed N] [--samples N] [--tol X] [--json PATH]
//   nsx paper-suite [--only S3,S8] [--seed N] [--samples N] [--tol X] [--json PATH]
//   nsx print FILE
//   nsx eval FILE --at "x1=1,x2=1/2"
//
// check and paper-suite print the text report and exit 0 iff every
// scenario passes. --json - writes JSON to stdout instead of the text.

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "nsx/environment.hpp"
#include "nsx/errors.hpp"
#include "nsx/paper_suite.hpp"
#include "nsx/report.hpp"

namespace {

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw nsx::DomainError("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void emit(const nsx::SuiteReport& report, const std::string& json_path) {
  if (json_path == "-") {
    std::cout << nsx::to_json(report);
    return;
  }
  std::cout << nsx::to_text(report);
  if (!json_path.empty()) {
    std::ofstream out(json_path, std::ios::binary);
    if (!out) throw nsx::DomainError("cannot write " + json_path);
    out << nsx::to_json(report);
  }
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) {
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

nsx::dsl::Scenario parse_or_throw(const std::string& path) {
  auto parsed = nsx::dsl::parse(read_file(path));
  if (auto* e = std::get_if<nsx::dsl::ParseError>(&parsed)) throw nsx::DomainError(path + ":" + e->str());
  return std::get<nsx::dsl::Scenario>(parsed);
}

// Evaluates every expr/form declaration whose chart is fully bound.
int run_eval(const std::string& path, const std::string& at) {
  const auto scenario = parse_or_throw(path);
  std::vector<std::pair<std::string, nsx::dsl::NodePtr>> bindings;
  for (const auto& item : split(at, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw nsx::DomainError("--at expects name=value, got '" + item + "'");
    auto value = nsx::dsl::parse_expression(item.substr(eq + 1));
    if (auto* e = std::get_if<nsx::dsl::ParseError>(&value)) throw nsx::DomainError("--at: " + e->str());
    bindings.emplace_back(trim(item.substr(0, eq)), std::get<nsx::dsl::NodePtr>(value));
  }
  nsx::Environment env;
  int printed = 0;
  for (const auto& st : scenario.statements) {
    env.declare(st);
    const auto* v = std::get_if<nsx::dsl::ValueDecl>(&st);
    if (!v) continue;
    const nsx::Chart& chart = env.chart(v->chart);
    std::vector<std::pair<std::string, nsx::dsl::NodePtr>> mine;
    for (const auto& b : bindings) {
      if (chart.has(b.first)) mine.push_back(b);
    }
    if (static_cast<int>(mine.size()) != chart.dim()) continue;
    const nsx::Point p = env.point(chart, mine);
    if (!v->is_form) {
      std::cout << v->name << " = " << nsx::evaluate(env.scalar(v->name).value, p).to_string() << "\n";
    } else {
      const auto& w = env.form(v->name);
      std::cout << v->name << " =";
      bool any = false;
      for (const auto& [mask, c] : w.terms()) {
        const auto value = nsx::evaluate(c, p);
        if (value.sign() == 0) continue;
        std::cout << (any ? " + " : " ") << "(" << value.to_string() << ")";
        if (mask) std::cout << " " << nsx::DifferentialForm::basis(chart, nsx::mask_indices(mask)).str();
        any = true;
      }
      std::cout << (any ? "\n" : " 0\n");
    }
    ++printed;
  }
  if (printed == 0) std::cerr << "nsx eval: no expr/form declaration has all its coordinates bound\n";
  return printed ? 0 : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nsx " + nsx::version() + ": near-symplectic and contact form checker"};
  app.require_subcommand(1);

  nsx::RunOptions options;
  std::string file, json_path, only, at;

  auto add_run_flags = [&](CLI::App* sub) {
    sub->add_option("--seed", options.seed, "Sampling seed");
    sub->add_option("--samples", options.samples, "Random samples per region (floored at 8)")->check(CLI::NonNegativeNumber);
    sub->add_option("--tol", options.tol, "Numeric tolerance")->check(CLI::PositiveNumber);
    sub->add_option("--json", json_path, "Write the JSON report to PATH ('-' for stdout)");
  };

  auto* check = app.add_subcommand("check", "Run a scenario file");
  check->add_option("FILE", file, "Scenario file")->required();
  add_run_flags(check);

  auto* suite = app.add_subcommand("paper-suite", "Run the built-in scenarios S1-S12");
  suite->add_option("--only", only, "Comma-separated scenario ids");
  add_run_flags(suite);

  auto* print = app.add_subcommand("print", "Print a scenario in canonical form");
  print->add_option("FILE", file, "Scenario file")->required();

  auto* eval = app.add_subcommand("eval", "Evaluate declared expressions and forms at a point");
  eval->add_option("FILE", file, "Scenario file")->required();
  eval->add_option("--at", at, "Point, e.g. \"x1=1,x2=1/2\"")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*check) {
      nsx::SuiteReport report;
      report.seed = options.seed;
      report.scenarios.push_back(nsx::run_scenario_text(read_file(file), options, "scenario"));
      emit(report, json_path);
      return report.pass() ? 0 : kExitFail;
    }
    if (*suite) {
      const auto report = nsx::run_paper_suite(options, split(only, ','));
      emit(report, json_path);
      return report.pass() ? 0 : kExitFail;
    }
    if (*print) {
      std::cout << nsx::dsl::print(parse_or_throw(file));
      return 0;
    }
    if (*eval) return run_eval(file, at);
  } catch (const std::exception& e) {
    std::cerr << "nsx: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
