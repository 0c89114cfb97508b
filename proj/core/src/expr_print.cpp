#include <sstream>

#include "expr_internal.hpp"

namespace nsx {

namespace {

// Binding strength: sums < products < unary minus < powers < atoms.
enum Prec { kSum = 0, kProduct = 1, kUnary = 2, kPower = 3, kAtom = 4 };

int precedence(const Expr& e) {
  const auto& n = e.node();
  switch (e.kind()) {
    case Expr::Kind::Rational:
      if (n.value < 0) return kUnary;
      return n.value.get_den() == 1 ? kAtom : kProduct;
    case Expr::Kind::Sum:
      return kSum;
    case Expr::Kind::Product:
      return kProduct;
    case Expr::Kind::Power:
      return kPower;
    case Expr::Kind::Canonical: {
      const auto& terms = n.poly->terms;
      if (terms.size() > 1) return kSum;
      if (terms.empty()) return kAtom;
      const auto& [m, c] = *terms.begin();
      if (c < 0) return kUnary;
      if (m.empty()) return c.get_den() == 1 ? kAtom : kProduct;
      if (c != 1 || m.size() > 1) return kProduct;
      if (m[0].second != 1) return kPower;
      return kAtom;
    }
    default:
      return kAtom;
  }
}

void print(std::ostream& os, const Expr& e, int min_prec);

void print_wrapped(std::ostream& os, const Expr& e, int min_prec) {
  if (precedence(e) < min_prec) {
    os << '(';
    print(os, e, kSum);
    os << ')';
  } else {
    print(os, e, min_prec);
  }
}

void print(std::ostream& os, const Expr& e, int /*min_prec*/) {
  const auto& n = e.node();
  switch (e.kind()) {
    case Expr::Kind::Rational:
      os << to_string(n.value);
      return;
    case Expr::Kind::Pi:
      os << "pi";
      return;
    case Expr::Kind::Symbol:
      os << n.name;
      return;
    case Expr::Kind::Opaque:
      os << n.name << std::string(static_cast<std::size_t>(n.order), '\'') << '(' << n.coord << ')';
      return;
    case Expr::Kind::Sum:
      for (std::size_t i = 0; i < n.children.size(); ++i) {
        if (i > 0) os << " + ";
        print_wrapped(os, n.children[i], kProduct);
      }
      return;
    case Expr::Kind::Product: {
      std::size_t start = 0;
      if (n.children.size() > 1 && n.children[0].kind() == Expr::Kind::Rational &&
          n.children[0].node().value == -1) {
        os << '-';
        start = 1;
      }
      for (std::size_t i = start; i < n.children.size(); ++i) {
        if (i > start) os << '*';
        print_wrapped(os, n.children[i], kPower);
      }
      return;
    }
    case Expr::Kind::Power:
      print_wrapped(os, n.children[0], kAtom);
      os << '^' << n.exponent;
      return;
    case Expr::Kind::Exp:
    case Expr::Kind::Sin:
    case Expr::Kind::Cos:
      os << (e.kind() == Expr::Kind::Exp ? "exp(" : e.kind() == Expr::Kind::Sin ? "sin(" : "cos(");
      print(os, n.children[0], kSum);
      os << ')';
      return;
    case Expr::Kind::Canonical:
      os << detail::print_poly(*n.poly);
      return;
  }
}

}  // namespace

std::string Expr::str() const {
  std::ostringstream os;
  print(os, *this, kSum);
  return os.str();
}

}  // namespace nsx
