#pragma once

// The .nsx scenario language.
//
//   document  := stmt*
//   stmt      := "scenario" NAME STRING
//              | "chart" NAME "(" NAME {"," NAME} ")"
//              | "opaque" NAME
//              | "metric" NAME "on" NAME "=" ("euclidean" | "(" row {"," row} ")")
//              | "expr" NAME "on" NAME "=" expr
//              | "form" NAME "on" NAME "=" expr
//              | "vfield" NAME "on" NAME "=" "(" expr {"," expr} ")"
//              | "map" NAME ":" NAME "->" NAME "=" "(" expr {"," expr} ")"
//              | "region" NAME "on" NAME "=" axis {"x" axis} ["random" INT] ["centered"] ["via" NAME]
//              | "locus" NAME "on" NAME "=" component {"|" component}
//              | "check" KIND NAME* clause* ["expect" ("pass" | "fail" | "report")]
//   row       := "(" expr {"," expr} ")"
//   axis      := "[" expr "," expr "]" ":" (INT | "*")
//   component := "{" NAME "=" expr {"," NAME "=" expr} "}" | "{" "}" | "param" NAME "over" NAME
//   clause    := "at" "(" NAME "=" expr {"," NAME "=" expr} ")" | ("on" | "off") NAME
//              | "in" NAME {"," NAME} | "=" expr | OPTION (NAME | INT)
//   OPTION    := "sign" | "count" | "kmax" | "regular" | "singular" | "witness" | "power" | "of"
//   expr      := term {("+" | "-") term}
//   term      := unary {("*" | "/" | "/\" | "wedge") unary}
//   unary     := "-" unary | power
//   power     := atom ["^" ["-"] INT]
//   atom      := INT | "pi" | NAME | NAME "(" args ")" | "(" expr ")"
//
// Calls: d(e), exp/sin/cos(e), i_X(e), pullback(f, e), restrict(P, e),
// star(g, e), and declared opaque functions chi(t), chi'(t), ...
// Unicode synonyms: ∧ for /\, π for pi, ι_X for i_X, ∗ for star, × for x,
// → for ->. Comments run from '#' to end of line.

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace nsx::dsl {

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  enum class Op { Number, Name, Add, Sub, Mul, Div, Wedge, Neg, Pow, Call };
  Op op = Op::Number;
  /// Number: decimal digits; Name: identifier; Call: function name
  /// ("d", "exp", "i_X", "pullback", "chi'", ...).
  std::string text;
  long exponent = 0;
  std::vector<NodePtr> args;

  friend bool operator==(const Node& a, const Node& b);
};

bool same(const NodePtr& a, const NodePtr& b);

NodePtr number(std::string digits);
NodePtr name(std::string id);
NodePtr binary(Node::Op op, NodePtr a, NodePtr b);
NodePtr neg(NodePtr a);
NodePtr power(NodePtr base, long exponent);
NodePtr call(std::string fn, std::vector<NodePtr> args);

/// Deterministic, minimally parenthesized expression text.
std::string print(const NodePtr& e);

struct ExprEq {
  bool operator()(const NodePtr& a, const NodePtr& b) const { return same(a, b); }
};

/// Equality helpers for vectors of expression pointers.
bool same(const std::vector<NodePtr>& a, const std::vector<NodePtr>& b);

struct ScenarioHeader {
  std::string id;
  std::string anchor;
  friend bool operator==(const ScenarioHeader&, const ScenarioHeader&) = default;
};

struct ChartDecl {
  std::string name;
  std::vector<std::string> coords;
  friend bool operator==(const ChartDecl&, const ChartDecl&) = default;
};

struct OpaqueDecl {
  std::string name;
  friend bool operator==(const OpaqueDecl&, const OpaqueDecl&) = default;
};

struct MetricDecl {
  std::string name;
  std::string chart;
  bool euclidean = false;
  std::vector<std::vector<NodePtr>> rows;
  friend bool operator==(const MetricDecl& a, const MetricDecl& b);
};

/// expr and form declarations share the expression grammar.
struct ValueDecl {
  bool is_form = false;
  std::string name;
  std::string chart;
  NodePtr value;
  friend bool operator==(const ValueDecl& a, const ValueDecl& b);
};

struct VFieldDecl {
  std::string name;
  std::string chart;
  std::vector<NodePtr> components;
  friend bool operator==(const VFieldDecl& a, const VFieldDecl& b);
};

struct MapDecl {
  std::string name;
  std::string source;
  std::string target;
  std::vector<NodePtr> components;
  friend bool operator==(const MapDecl& a, const MapDecl& b);
};

struct AxisDecl {
  NodePtr lo, hi;
  /// 0 marks a random axis ("*").
  int resolution = 0;
  friend bool operator==(const AxisDecl& a, const AxisDecl& b);
};

struct RegionDecl {
  std::string name;
  std::string chart;
  std::vector<AxisDecl> axes;
  int random = 0;
  bool centered = false;
  std::string via;
  friend bool operator==(const RegionDecl&, const RegionDecl&) = default;
};

struct LocusComponentDecl {
  /// Empty param means an equation component (possibly empty).
  std::vector<std::pair<std::string, NodePtr>> equations;
  std::string param;
  std::string over;
  friend bool operator==(const LocusComponentDecl& a, const LocusComponentDecl& b);
};

struct LocusDecl {
  std::string name;
  std::string chart;
  std::vector<LocusComponentDecl> components;
  friend bool operator==(const LocusDecl&, const LocusDecl&) = default;
};

enum class Expect { Pass, Fail, Report };

std::string to_string(Expect e);

struct CheckDecl {
  std::string kind;
  std::vector<std::string> args;
  std::optional<std::vector<std::pair<std::string, NodePtr>>> at;
  std::string locus;
  bool off = false;
  std::vector<std::string> regions;
  NodePtr value;
  /// Option keyword and its word or integer argument, in source order.
  std::vector<std::pair<std::string, std::string>> options;
  Expect expect = Expect::Pass;

  std::optional<std::string> option(const std::string& key) const;
  friend bool operator==(const CheckDecl& a, const CheckDecl& b);
};

using Statement = std::variant<ScenarioHeader, ChartDecl, OpaqueDecl, MetricDecl, ValueDecl, VFieldDecl, MapDecl,
                               RegionDecl, LocusDecl, CheckDecl>;

struct Scenario {
  std::vector<Statement> statements;

  /// Header fields when a scenario statement is present.
  std::string id() const;
  std::string anchor() const;
  std::vector<const CheckDecl*> checks() const;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

struct ParseError {
  int line = 1;
  int column = 1;
  std::string message;
  std::string token;

  std::string str() const;
};

std::variant<Scenario, ParseError> parse(const std::string& text);
/// Canonical text; parse(print(s)) == s.
std::string print(const Scenario& s);

/// Expression-only entry point (used by the CLI for --at values).
std::variant<NodePtr, ParseError> parse_expression(const std::string& text);

}  // namespace nsx::dsl
