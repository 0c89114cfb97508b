#include <set>
#include <sstream>

#include "dsl_internal.hpp"

namespace nsx::dsl {

// ---------------------------------------------------------------------------
// AST helpers

bool operator==(const Node& a, const Node& b) {
  if (a.op != b.op || a.text != b.text || a.exponent != b.exponent) return false;
  return same(a.args, b.args);
}

bool same(const NodePtr& a, const NodePtr& b) {
  if (!a || !b) return !a && !b;
  return a == b || *a == *b;
}

bool same(const std::vector<NodePtr>& a, const std::vector<NodePtr>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!same(a[i], b[i])) return false;
  }
  return true;
}

namespace {

bool same_pairs(const std::vector<std::pair<std::string, NodePtr>>& a,
                const std::vector<std::pair<std::string, NodePtr>>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].first != b[i].first || !same(a[i].second, b[i].second)) return false;
  }
  return true;
}

}  // namespace

bool operator==(const MetricDecl& a, const MetricDecl& b) {
  if (a.name != b.name || a.chart != b.chart || a.euclidean != b.euclidean || a.rows.size() != b.rows.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.rows.size(); ++i) {
    if (!same(a.rows[i], b.rows[i])) return false;
  }
  return true;
}

bool operator==(const ValueDecl& a, const ValueDecl& b) {
  return a.is_form == b.is_form && a.name == b.name && a.chart == b.chart && same(a.value, b.value);
}

bool operator==(const VFieldDecl& a, const VFieldDecl& b) {
  return a.name == b.name && a.chart == b.chart && same(a.components, b.components);
}

bool operator==(const MapDecl& a, const MapDecl& b) {
  return a.name == b.name && a.source == b.source && a.target == b.target && same(a.components, b.components);
}

bool operator==(const AxisDecl& a, const AxisDecl& b) {
  return same(a.lo, b.lo) && same(a.hi, b.hi) && a.resolution == b.resolution;
}

bool operator==(const LocusComponentDecl& a, const LocusComponentDecl& b) {
  return same_pairs(a.equations, b.equations) && a.param == b.param && a.over == b.over;
}

bool operator==(const CheckDecl& a, const CheckDecl& b) {
  if (a.kind != b.kind || a.args != b.args || a.locus != b.locus || a.off != b.off || a.regions != b.regions ||
      a.options != b.options || a.expect != b.expect || !same(a.value, b.value)) {
    return false;
  }
  if (a.at.has_value() != b.at.has_value()) return false;
  return !a.at || same_pairs(*a.at, *b.at);
}

std::optional<std::string> CheckDecl::option(const std::string& key) const {
  for (const auto& [k, v] : options) {
    if (k == key) return v;
  }
  return std::nullopt;
}

std::string to_string(Expect e) {
  switch (e) {
    case Expect::Pass: return "pass";
    case Expect::Fail: return "fail";
    case Expect::Report: return "report";
  }
  return "pass";
}

std::string Scenario::id() const {
  for (const auto& s : statements) {
    if (auto* h = std::get_if<ScenarioHeader>(&s)) return h->id;
  }
  return "";
}

std::string Scenario::anchor() const {
  for (const auto& s : statements) {
    if (auto* h = std::get_if<ScenarioHeader>(&s)) return h->anchor;
  }
  return "";
}

std::vector<const CheckDecl*> Scenario::checks() const {
  std::vector<const CheckDecl*> out;
  for (const auto& s : statements) {
    if (auto* c = std::get_if<CheckDecl>(&s)) out.push_back(c);
  }
  return out;
}

std::string ParseError::str() const {
  std::ostringstream os;
  os << line << ':' << column << ": " << message;
  return os.str();
}

NodePtr number(std::string digits) {
  auto n = std::make_shared<Node>();
  n->op = Node::Op::Number;
  n->text = std::move(digits);
  return n;
}

NodePtr name(std::string id) {
  auto n = std::make_shared<Node>();
  n->op = Node::Op::Name;
  n->text = std::move(id);
  return n;
}

NodePtr binary(Node::Op op, NodePtr a, NodePtr b) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->args = {std::move(a), std::move(b)};
  return n;
}

NodePtr neg(NodePtr a) {
  auto n = std::make_shared<Node>();
  n->op = Node::Op::Neg;
  n->args = {std::move(a)};
  return n;
}

NodePtr power(NodePtr base, long exponent) {
  auto n = std::make_shared<Node>();
  n->op = Node::Op::Pow;
  n->exponent = exponent;
  n->args = {std::move(base)};
  return n;
}

NodePtr call(std::string fn, std::vector<NodePtr> args) {
  auto n = std::make_shared<Node>();
  n->op = Node::Op::Call;
  n->text = std::move(fn);
  n->args = std::move(args);
  return n;
}

// ---------------------------------------------------------------------------
// Parser

namespace {

using detail::Tok;
using detail::Token;

struct Failure {
  ParseError error;
};

const std::set<std::string> kOptions = {"sign", "count", "kmax", "regular", "singular", "witness", "power", "of"};

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Scenario document() {
    Scenario s;
    while (true) {
      while (at(Tok::Newline)) ++pos_;
      if (at(Tok::End)) break;
      s.statements.push_back(statement());
      end_of_statement();
    }
    return s;
  }

  NodePtr lone_expression() {
    NodePtr e = expr();
    if (!at(Tok::End) && !at(Tok::Newline)) fail(peek(), "unexpected " + detail::describe(peek()) + " after expression");
    return e;
  }

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;

  const Token& peek() const { return toks_[pos_]; }
  bool at(Tok k) const { return peek().kind == k; }
  bool at_word(const char* w) const { return at(Tok::Ident) && peek().text == w; }

  Token next() {
    Token t = toks_[pos_];
    if (t.kind == Tok::Bad) bad(t);
    if (t.kind != Tok::End) ++pos_;
    return t;
  }

  [[noreturn]] void fail(const Token& t, const std::string& message) const {
    if (t.kind == Tok::Bad) bad(t);
    throw Failure{ParseError{t.line, t.column, message, t.text}};
  }

  [[noreturn]] void bad(const Token& t) const {
    if (!t.text.empty() && t.text[0] == '"') {
      throw Failure{ParseError{t.line, t.column, "unterminated string", t.text}};
    }
    throw Failure{ParseError{t.line, t.column, "unexpected character '" + t.text + "'", t.text}};
  }

  Token expect(Tok k, const std::string& what) {
    if (!at(k)) fail(peek(), "expected " + what + " but found " + detail::describe(peek()));
    return next();
  }

  void expect_word(const char* w) {
    if (!at_word(w)) fail(peek(), std::string("expected '") + w + "' but found " + detail::describe(peek()));
    next();
  }

  bool accept(Tok k) {
    if (!at(k)) return false;
    next();
    return true;
  }

  bool accept_word(const char* w) {
    if (!at_word(w)) return false;
    next();
    return true;
  }

  std::string identifier(const std::string& what) {
    if (!at(Tok::Ident)) fail(peek(), "expected " + what + " but found " + detail::describe(peek()));
    if (detail::is_keyword(peek().text)) fail(peek(), "expected " + what + " but found keyword '" + peek().text + "'");
    return next().text;
  }

  void end_of_statement() {
    if (at(Tok::Newline) || at(Tok::End)) return;
    fail(peek(), "expected end of line but found " + detail::describe(peek()));
  }

  int integer(const std::string& what) {
    const Token t = expect(Tok::Int, what);
    if (t.text.size() > 9) fail(t, "integer " + t.text + " is too large");
    return std::stoi(t.text);
  }

  // (e, e, ...)
  std::vector<NodePtr> tuple() {
    const Token open = expect(Tok::LParen, "'('");
    std::vector<NodePtr> items;
    items.push_back(expr());
    while (accept(Tok::Comma)) items.push_back(expr());
    close_paren(open);
    return items;
  }

  void close_paren(const Token& open) {
    if (at(Tok::RParen)) {
      next();
      return;
    }
    fail(peek(), "expected ')' to close '(' at " + std::to_string(open.line) + ":" + std::to_string(open.column) +
                     " but found " + detail::describe(peek()));
  }

  Statement statement() {
    const Token head = peek();
    if (head.kind != Tok::Ident) fail(head, "expected a statement but found " + detail::describe(head));
    const std::string& w = head.text;
    if (w == "scenario") return scenario_header();
    if (w == "chart") return chart();
    if (w == "opaque") {
      next();
      return OpaqueDecl{identifier("function name")};
    }
    if (w == "metric") return metric();
    if (w == "expr" || w == "form") return value();
    if (w == "vfield") return vfield();
    if (w == "map") return map();
    if (w == "region") return region();
    if (w == "locus") return locus();
    if (w == "check") return check();
    fail(head, "unknown statement '" + w + "'");
  }

  ScenarioHeader scenario_header() {
    next();
    ScenarioHeader h;
    h.id = identifier("scenario id");
    h.anchor = expect(Tok::String, "anchor string").text;
    return h;
  }

  ChartDecl chart() {
    next();
    ChartDecl c;
    c.name = identifier("chart name");
    const Token open = expect(Tok::LParen, "'('");
    c.coords.push_back(identifier("coordinate name"));
    while (accept(Tok::Comma)) c.coords.push_back(identifier("coordinate name"));
    close_paren(open);
    return c;
  }

  std::string on_chart() {
    expect_word("on");
    return identifier("chart name");
  }

  MetricDecl metric() {
    next();
    MetricDecl m;
    m.name = identifier("metric name");
    m.chart = on_chart();
    expect(Tok::Equals, "'='");
    if (accept_word("euclidean")) {
      m.euclidean = true;
      return m;
    }
    const Token open = expect(Tok::LParen, "'(' or 'euclidean'");
    m.rows.push_back(tuple());
    while (accept(Tok::Comma)) m.rows.push_back(tuple());
    close_paren(open);
    return m;
  }

  ValueDecl value() {
    ValueDecl v;
    v.is_form = next().text == "form";
    v.name = identifier(v.is_form ? "form name" : "expression name");
    v.chart = on_chart();
    expect(Tok::Equals, "'='");
    v.value = expr();
    return v;
  }

  VFieldDecl vfield() {
    next();
    VFieldDecl v;
    v.name = identifier("vector field name");
    v.chart = on_chart();
    expect(Tok::Equals, "'='");
    v.components = tuple();
    return v;
  }

  MapDecl map() {
    next();
    MapDecl m;
    m.name = identifier("map name");
    expect(Tok::Colon, "':'");
    m.source = identifier("source chart");
    expect(Tok::Arrow, "'->'");
    m.target = identifier("target chart");
    expect(Tok::Equals, "'='");
    m.components = tuple();
    return m;
  }

  AxisDecl axis() {
    AxisDecl a;
    const Token open = expect(Tok::LBracket, "'['");
    a.lo = expr();
    expect(Tok::Comma, "','");
    a.hi = expr();
    if (!accept(Tok::RBracket)) {
      fail(peek(), "expected ']' to close '[' at " + std::to_string(open.line) + ":" + std::to_string(open.column) +
                       " but found " + detail::describe(peek()));
    }
    expect(Tok::Colon, "':'");
    if (accept(Tok::Star)) {
      a.resolution = 0;
    } else {
      a.resolution = integer("resolution or '*'");
      if (a.resolution == 0) fail(toks_[pos_ - 1], "resolution must be positive (use '*' for a random axis)");
    }
    return a;
  }

  RegionDecl region() {
    next();
    RegionDecl r;
    r.name = identifier("region name");
    r.chart = on_chart();
    expect(Tok::Equals, "'='");
    r.axes.push_back(axis());
    while (accept_word("x")) r.axes.push_back(axis());
    if (accept_word("random")) r.random = integer("random sample count");
    if (accept_word("centered")) r.centered = true;
    if (accept_word("via")) r.via = identifier("map name");
    return r;
  }

  LocusComponentDecl component() {
    LocusComponentDecl c;
    if (accept_word("param")) {
      c.param = identifier("map name");
      expect_word("over");
      c.over = identifier("region name");
      return c;
    }
    const Token open = expect(Tok::LBrace, "'{' or 'param'");
    if (accept(Tok::RBrace)) return c;
    do {
      std::string coord = identifier("coordinate name");
      expect(Tok::Equals, "'='");
      c.equations.emplace_back(std::move(coord), expr());
    } while (accept(Tok::Comma));
    if (!accept(Tok::RBrace)) {
      fail(peek(), "expected '}' to close '{' at " + std::to_string(open.line) + ":" + std::to_string(open.column) +
                       " but found " + detail::describe(peek()));
    }
    return c;
  }

  LocusDecl locus() {
    next();
    LocusDecl l;
    l.name = identifier("locus name");
    l.chart = on_chart();
    expect(Tok::Equals, "'='");
    l.components.push_back(component());
    while (accept(Tok::Bar)) l.components.push_back(component());
    return l;
  }

  CheckDecl check() {
    next();
    CheckDecl c;
    c.kind = identifier("check kind");
    while (at(Tok::Ident) && !detail::is_keyword(peek().text)) c.args.push_back(next().text);
    bool seen_locus = false, seen_expect = false;
    while (!at(Tok::Newline) && !at(Tok::End)) {
      const Token t = peek();
      if (t.kind == Tok::Equals) {
        if (c.value) fail(t, "duplicate '=' clause");
        next();
        c.value = expr();
        continue;
      }
      if (t.kind != Tok::Ident) fail(t, "expected a check clause but found " + detail::describe(t));
      const std::string w = t.text;
      if (w == "at") {
        if (c.at) fail(t, "duplicate 'at' clause");
        next();
        const Token open = expect(Tok::LParen, "'('");
        std::vector<std::pair<std::string, NodePtr>> pts;
        do {
          std::string coord = identifier("coordinate name");
          expect(Tok::Equals, "'='");
          pts.emplace_back(std::move(coord), expr());
        } while (accept(Tok::Comma));
        close_paren(open);
        c.at = std::move(pts);
      } else if (w == "on" || w == "off") {
        if (seen_locus) fail(t, "duplicate locus clause");
        next();
        seen_locus = true;
        c.off = w == "off";
        c.locus = identifier("locus name");
      } else if (w == "in") {
        if (!c.regions.empty()) fail(t, "duplicate 'in' clause");
        next();
        c.regions.push_back(identifier("region name"));
        while (accept(Tok::Comma)) c.regions.push_back(identifier("region name"));
      } else if (kOptions.count(w)) {
        if (c.option(w)) fail(t, "duplicate '" + w + "' option");
        next();
        if (at(Tok::Int)) {
          c.options.emplace_back(w, next().text);
        } else {
          c.options.emplace_back(w, identifier("value for '" + w + "'"));
        }
      } else if (w == "expect") {
        if (seen_expect) fail(t, "duplicate 'expect' clause");
        next();
        seen_expect = true;
        const Token o = peek();
        if (accept_word("pass")) {
          c.expect = Expect::Pass;
        } else if (accept_word("fail")) {
          c.expect = Expect::Fail;
        } else if (accept_word("report")) {
          c.expect = Expect::Report;
        } else {
          fail(o, "expected pass, fail or report but found " + detail::describe(o));
        }
      } else {
        fail(t, "unknown check clause '" + w + "'");
      }
    }
    return c;
  }

  // Expressions -------------------------------------------------------------

  NodePtr expr() {
    NodePtr a = term();
    while (at(Tok::Plus) || at(Tok::Minus)) {
      const auto op = next().kind == Tok::Plus ? Node::Op::Add : Node::Op::Sub;
      a = binary(op, a, term());
    }
    return a;
  }

  NodePtr term() {
    NodePtr a = unary();
    while (true) {
      Node::Op op;
      if (at(Tok::Star)) {
        op = Node::Op::Mul;
      } else if (at(Tok::Slash)) {
        op = Node::Op::Div;
      } else if (at(Tok::Wedge) || at_word("wedge")) {
        op = Node::Op::Wedge;
      } else {
        break;
      }
      next();
      a = binary(op, a, unary());
    }
    return a;
  }

  NodePtr unary() {
    if (accept(Tok::Minus)) return neg(unary());
    return pow_expr();
  }

  NodePtr pow_expr() {
    NodePtr base = atom();
    if (!accept(Tok::Caret)) return base;
    bool parens = false;
    Token open;
    if (at(Tok::LParen)) {
      open = next();
      parens = true;
    }
    const bool negative = accept(Tok::Minus);
    const Token t = expect(Tok::Int, "integer exponent");
    if (t.text.size() > 9) fail(t, "exponent " + t.text + " is too large");
    long k = std::stol(t.text);
    if (parens) close_paren(open);
    return power(base, negative ? -k : k);
  }

  NodePtr atom() {
    const Token t = peek();
    switch (t.kind) {
      case Tok::Int:
        next();
        return number(t.text);
      case Tok::LParen: {
        next();
        NodePtr e = expr();
        close_paren(t);
        return e;
      }
      case Tok::Ident:
        break;
      default:
        fail(t, "expected an expression but found " + detail::describe(t));
    }
    if (detail::is_keyword(t.text) || t.text == "wedge") fail(t, "expected an expression but found keyword '" + t.text + "'");
    next();
    if (!at(Tok::LParen)) return name(t.text);
    const Token open = next();
    std::vector<NodePtr> args;
    args.push_back(expr());
    while (accept(Tok::Comma)) args.push_back(expr());
    close_paren(open);
    check_call(t, args);
    return call(t.text, std::move(args));
  }

  void check_call(const Token& fn, const std::vector<NodePtr>& args) const {
    const std::string& f = fn.text;
    auto arity = [&](std::size_t n) {
      if (args.size() != n) {
        fail(fn, f + " takes " + std::to_string(n) + " argument" + (n == 1 ? "" : "s") + ", got " +
                     std::to_string(args.size()));
      }
    };
    if (f == "pullback" || f == "restrict" || f == "star") {
      arity(2);
      if (args[0]->op != Node::Op::Name) fail(fn, "first argument of " + f + " must be a name");
      return;
    }
    arity(1);
    if (f == "d" || f == "exp" || f == "sin" || f == "cos") return;
    if (f.size() > 2 && f.compare(0, 2, "i_") == 0) return;
    // Opaque function application: argument is a coordinate.
    if (args[0]->op != Node::Op::Name) fail(fn, "argument of " + f + " must be a coordinate");
  }
};

}  // namespace

std::variant<Scenario, ParseError> parse(const std::string& text) {
  try {
    Parser p(detail::lex(text));
    return p.document();
  } catch (const Failure& f) {
    return f.error;
  }
}

std::variant<NodePtr, ParseError> parse_expression(const std::string& text) {
  try {
    Parser p(detail::lex(text));
    return p.lone_expression();
  } catch (const Failure& f) {
    return f.error;
  }
}

}  // namespace nsx::dsl
