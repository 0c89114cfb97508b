#include <utility>

#include "expr_internal.hpp"
#include "nsx/errors.hpp"

namespace nsx {

using detail::Node;
using detail::Poly;
using detail::PolyPtr;

namespace {

Expr make_node(Node n) { return Expr(std::make_shared<const Node>(std::move(n))); }

Expr make_rational(const Rational& q) {
  Node n;
  n.kind = Expr::Kind::Rational;
  n.value = q;
  return make_node(std::move(n));
}

bool both_canonical(const Expr& a, const Expr& b) {
  return a.is_canonical() && b.is_canonical() && a.node().rewrites == b.node().rewrites;
}

Expr make_nary(Expr::Kind kind, const Expr& a, const Expr& b) {
  Node n;
  n.kind = kind;
  for (const Expr* e : {&a, &b}) {
    if (e->kind() == kind) {
      for (const auto& c : e->node().children) n.children.push_back(c);
    } else {
      n.children.push_back(*e);
    }
  }
  return make_node(std::move(n));
}

Expr make_unary(Expr::Kind kind, const Expr& u) {
  Node n;
  n.kind = kind;
  n.children.push_back(u);
  return make_node(std::move(n));
}

}  // namespace

Expr::Expr() : Expr(Rational(0)) {}
Expr::Expr(int v) : Expr(Rational(v)) {}
Expr::Expr(long v) : Expr(Rational(v)) {}
Expr::Expr(const Rational& q) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Rational;
  n->value = q;
  n->value.canonicalize();
  node_ = std::move(n);
}
Expr::Expr(std::shared_ptr<const detail::Node> node) : node_(std::move(node)) {}

Expr Expr::pi() {
  Node n;
  n.kind = Kind::Pi;
  return make_node(std::move(n));
}

Expr Expr::symbol(std::string name) {
  if (name.empty()) throw DomainError("empty symbol name");
  Node n;
  n.kind = Kind::Symbol;
  n.name = std::move(name);
  return make_node(std::move(n));
}

Expr Expr::opaque(std::string name, std::string coord, int order) {
  if (name.empty() || coord.empty()) throw DomainError("opaque function needs a name and an argument");
  if (order < 0) throw DomainError("negative derivative order");
  Node n;
  n.kind = Kind::Opaque;
  n.name = std::move(name);
  n.coord = std::move(coord);
  n.order = order;
  return make_node(std::move(n));
}

Expr operator+(const Expr& a, const Expr& b) {
  if (a.kind() == Expr::Kind::Rational && b.kind() == Expr::Kind::Rational) {
    return make_rational(a.node().value + b.node().value);
  }
  if (both_canonical(a, b)) {
    const auto& rw = a.node().rewrites;
    return detail::from_poly(std::make_shared<const Poly>(detail::poly_add(*a.node().poly, *b.node().poly)), rw);
  }
  return make_nary(Expr::Kind::Sum, a, b);
}

Expr operator-(const Expr& a) {
  if (a.kind() == Expr::Kind::Rational) return make_rational(-a.node().value);
  if (a.is_canonical()) {
    return detail::from_poly(std::make_shared<const Poly>(detail::poly_scale(*a.node().poly, Rational(-1))),
                             a.node().rewrites);
  }
  Node n;
  n.kind = Expr::Kind::Product;
  n.children = {Expr(-1), a};
  return make_node(std::move(n));
}

Expr operator-(const Expr& a, const Expr& b) { return a + (-b); }

Expr operator*(const Expr& a, const Expr& b) {
  if (a.kind() == Expr::Kind::Rational && b.kind() == Expr::Kind::Rational) {
    return make_rational(a.node().value * b.node().value);
  }
  if (both_canonical(a, b)) {
    const auto& rw = a.node().rewrites;
    return detail::from_poly(std::make_shared<const Poly>(detail::poly_mul(*a.node().poly, *b.node().poly, rw)), rw);
  }
  return make_nary(Expr::Kind::Product, a, b);
}

Expr pow(const Expr& base, long exponent) {
  if (base.is_canonical()) {
    const auto& rw = base.node().rewrites;
    return detail::from_poly(std::make_shared<const Poly>(detail::poly_pow(*base.node().poly, exponent, rw)), rw);
  }
  Node n;
  n.kind = Expr::Kind::Power;
  n.exponent = exponent;
  n.children = {base};
  return make_node(std::move(n));
}

Expr exp(const Expr& u) { return make_unary(Expr::Kind::Exp, u); }
Expr sin(const Expr& u) { return make_unary(Expr::Kind::Sin, u); }
Expr cos(const Expr& u) { return make_unary(Expr::Kind::Cos, u); }

Expr::Kind Expr::kind() const { return node_->kind; }
bool Expr::is_canonical() const { return node_->kind == Kind::Canonical; }

bool Expr::is_zero() const {
  if (kind() == Kind::Rational) return node_->value == 0;
  return detail::to_poly(*this, {})->is_zero();
}

std::optional<Rational> Expr::as_rational() const {
  if (kind() == Kind::Rational) return node_->value;
  auto p = detail::to_poly(*this, {});
  if (!p->is_constant()) return std::nullopt;
  return p->constant_value();
}

bool Expr::is_constant() const { return free_symbols(*this).empty(); }

bool operator==(const Expr& a, const Expr& b) {
  return detail::compare(*detail::to_poly(a, {}), *detail::to_poly(b, {})) == 0;
}

Expr canonicalize(const Expr& e, const RewriteSet& rewrites) {
  if (e.is_canonical() && e.node().rewrites == rewrites) return e;
  return detail::from_poly(detail::to_poly(e, rewrites), rewrites);
}

Expr differentiate(const Expr& e, const std::string& var, const RewriteSet& rewrites) {
  auto p = detail::to_poly(e, rewrites);
  return detail::from_poly(std::make_shared<const Poly>(detail::poly_derivative(*p, var, rewrites)), rewrites);
}

Expr substitute(const Expr& e, const std::map<std::string, Expr>& bindings, const RewriteSet& rewrites) {
  std::map<std::string, PolyPtr> polys;
  for (const auto& [name, value] : bindings) polys.emplace(name, detail::to_poly(value, rewrites));
  auto p = detail::to_poly(e, rewrites);
  return detail::from_poly(std::make_shared<const Poly>(detail::poly_substitute(*p, polys, rewrites)), rewrites);
}

std::set<std::string> free_symbols(const Expr& e) {
  std::set<std::string> out;
  detail::collect_symbols(*detail::to_poly(e, RewriteSet::none()), out);
  return out;
}

std::set<std::string> opaque_functions(const Expr& e) {
  std::set<std::string> out;
  detail::collect_opaque(*detail::to_poly(e, RewriteSet::none()), out);
  return out;
}

namespace detail {

PolyPtr to_poly(const Expr& e, const RewriteSet& rw) {
  const Node& n = e.node();
  switch (n.kind) {
    case Expr::Kind::Rational:
      return std::make_shared<const Poly>(poly_constant(n.value));
    case Expr::Kind::Pi: {
      Atom a;
      a.kind = AtomKind::Pi;
      return std::make_shared<const Poly>(poly_atom(a, rw));
    }
    case Expr::Kind::Symbol: {
      Atom a;
      a.kind = AtomKind::Symbol;
      a.name = n.name;
      return std::make_shared<const Poly>(poly_atom(a, rw));
    }
    case Expr::Kind::Opaque: {
      Atom a;
      a.kind = AtomKind::Opaque;
      a.name = n.name;
      a.coord = n.coord;
      a.order = n.order;
      return std::make_shared<const Poly>(poly_atom(a, rw));
    }
    case Expr::Kind::Sum: {
      Poly acc;
      for (const auto& c : n.children) acc = poly_add(acc, *to_poly(c, rw));
      return std::make_shared<const Poly>(std::move(acc));
    }
    case Expr::Kind::Product: {
      Poly acc = poly_constant(Rational(1));
      for (const auto& c : n.children) {
        acc = poly_mul(acc, *to_poly(c, rw), rw);
        if (acc.is_zero()) break;
      }
      return std::make_shared<const Poly>(std::move(acc));
    }
    case Expr::Kind::Power:
      return std::make_shared<const Poly>(poly_pow(*to_poly(n.children.at(0), rw), n.exponent, rw));
    case Expr::Kind::Exp:
      return std::make_shared<const Poly>(make_exp(*to_poly(n.children.at(0), rw), rw));
    case Expr::Kind::Sin:
      return std::make_shared<const Poly>(make_sin(*to_poly(n.children.at(0), rw), rw));
    case Expr::Kind::Cos:
      return std::make_shared<const Poly>(make_cos(*to_poly(n.children.at(0), rw), rw));
    case Expr::Kind::Canonical:
      if (n.rewrites == rw) return n.poly;
      return std::make_shared<const Poly>(poly_renormalize(*n.poly, rw));
  }
  throw DomainError("unknown expression node");
}

Expr from_poly(PolyPtr p, const RewriteSet& rw) {
  Node n;
  n.kind = Expr::Kind::Canonical;
  n.poly = std::move(p);
  n.rewrites = rw;
  return Expr(std::make_shared<const Node>(std::move(n)));
}

}  // namespace detail
}  // namespace nsx
