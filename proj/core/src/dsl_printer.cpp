#include <sstream>

#include "nsx/dsl.hpp"

namespace nsx::dsl {

namespace {

int precedence(const Node& n) {
  switch (n.op) {
    case Node::Op::Add:
    case Node::Op::Sub: return 1;
    case Node::Op::Mul:
    case Node::Op::Div:
    case Node::Op::Wedge: return 2;
    case Node::Op::Neg: return 3;
    case Node::Op::Pow: return 4;
    default: return 5;
  }
}

void emit(std::ostream& os, const Node& n, int min_prec) {
  const int p = precedence(n);
  const bool parens = p < min_prec;
  if (parens) os << '(';
  switch (n.op) {
    case Node::Op::Number:
    case Node::Op::Name: os << n.text; break;
    case Node::Op::Add:
    case Node::Op::Sub:
      emit(os, *n.args[0], 1);
      os << (n.op == Node::Op::Add ? " + " : " - ");
      emit(os, *n.args[1], 2);
      break;
    case Node::Op::Mul:
    case Node::Op::Div:
    case Node::Op::Wedge:
      emit(os, *n.args[0], 2);
      os << (n.op == Node::Op::Mul ? "*" : n.op == Node::Op::Div ? "/" : " /\\ ");
      emit(os, *n.args[1], 3);
      break;
    case Node::Op::Neg:
      os << '-';
      emit(os, *n.args[0], 3);
      break;
    case Node::Op::Pow:
      emit(os, *n.args[0], 5);
      os << '^' << n.exponent;
      break;
    case Node::Op::Call:
      os << n.text << '(';
      for (std::size_t i = 0; i < n.args.size(); ++i) {
        if (i) os << ", ";
        emit(os, *n.args[i], 1);
      }
      os << ')';
      break;
  }
  if (parens) os << ')';
}

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

template <class T, class F>
void join(std::ostream& os, const std::vector<T>& items, F&& each) {
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) os << ", ";
    each(items[i]);
  }
}

void tuple(std::ostream& os, const std::vector<NodePtr>& items) {
  os << '(';
  join(os, items, [&](const NodePtr& e) { os << print(e); });
  os << ')';
}

void bindings(std::ostream& os, const std::vector<std::pair<std::string, NodePtr>>& eqs) {
  join(os, eqs, [&](const auto& kv) { os << kv.first << " = " << print(kv.second); });
}

struct StatementPrinter {
  std::ostream& os;

  void operator()(const ScenarioHeader& h) { os << "scenario " << h.id << ' ' << quoted(h.anchor); }
  void operator()(const ChartDecl& c) {
    os << "chart " << c.name << " (";
    join(os, c.coords, [&](const std::string& s) { os << s; });
    os << ')';
  }
  void operator()(const OpaqueDecl& o) { os << "opaque " << o.name; }
  void operator()(const MetricDecl& m) {
    os << "metric " << m.name << " on " << m.chart << " = ";
    if (m.euclidean) {
      os << "euclidean";
      return;
    }
    os << '(';
    join(os, m.rows, [&](const std::vector<NodePtr>& row) { tuple(os, row); });
    os << ')';
  }
  void operator()(const ValueDecl& v) {
    os << (v.is_form ? "form " : "expr ") << v.name << " on " << v.chart << " = " << print(v.value);
  }
  void operator()(const VFieldDecl& v) {
    os << "vfield " << v.name << " on " << v.chart << " = ";
    tuple(os, v.components);
  }
  void operator()(const MapDecl& m) {
    os << "map " << m.name << " : " << m.source << " -> " << m.target << " = ";
    tuple(os, m.components);
  }
  void operator()(const RegionDecl& r) {
    os << "region " << r.name << " on " << r.chart << " = ";
    for (std::size_t i = 0; i < r.axes.size(); ++i) {
      if (i) os << " x ";
      const auto& a = r.axes[i];
      os << '[' << print(a.lo) << ", " << print(a.hi) << "]:";
      if (a.resolution == 0) {
        os << '*';
      } else {
        os << a.resolution;
      }
    }
    if (r.random) os << " random " << r.random;
    if (r.centered) os << " centered";
    if (!r.via.empty()) os << " via " << r.via;
  }
  void operator()(const LocusDecl& l) {
    os << "locus " << l.name << " on " << l.chart << " = ";
    for (std::size_t i = 0; i < l.components.size(); ++i) {
      if (i) os << " | ";
      const auto& c = l.components[i];
      if (!c.param.empty()) {
        os << "param " << c.param << " over " << c.over;
      } else {
        os << '{';
        bindings(os, c.equations);
        os << '}';
      }
    }
  }
  void operator()(const CheckDecl& c) {
    os << "check " << c.kind;
    for (const auto& a : c.args) os << ' ' << a;
    if (c.at) {
      os << " at (";
      bindings(os, *c.at);
      os << ')';
    }
    if (!c.locus.empty()) os << (c.off ? " off " : " on ") << c.locus;
    if (!c.regions.empty()) {
      os << " in ";
      join(os, c.regions, [&](const std::string& s) { os << s; });
    }
    for (const auto& [k, v] : c.options) os << ' ' << k << ' ' << v;
    if (c.value) os << " = " << print(c.value);
    if (c.expect != Expect::Pass) os << " expect " << to_string(c.expect);
  }
};

}  // namespace

std::string print(const NodePtr& e) {
  std::ostringstream os;
  emit(os, *e, 1);
  return os.str();
}

std::string print(const Scenario& s) {
  std::ostringstream os;
  for (const auto& st : s.statements) {
    std::visit(StatementPrinter{os}, st);
    os << '\n';
  }
  return os.str();
}

}  // namespace nsx::dsl
