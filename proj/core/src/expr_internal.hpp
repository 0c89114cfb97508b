#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "nsx/expr.hpp"

namespace nsx::detail {

struct Poly;
using PolyPtr = std::shared_ptr<const Poly>;

enum class AtomKind : std::uint8_t { Pi, Symbol, Opaque, Exp, Sin, Cos, Inv };

struct Atom {
  AtomKind kind = AtomKind::Symbol;
  std::string name;   // symbol or opaque function name
  std::string coord;  // opaque argument
  int order = 0;      // opaque derivative order
  PolyPtr arg;        // exp/sin/cos/inv argument
};

using Factor = std::pair<Atom, long>;
using Monomial = std::vector<Factor>;

int compare(const Atom& a, const Atom& b);
int compare(const Monomial& a, const Monomial& b);
int compare(const Poly& a, const Poly& b);

struct MonomialLess {
  bool operator()(const Monomial& a, const Monomial& b) const {
    return compare(a, b) < 0;
  }
};

struct Poly {
  std::map<Monomial, Rational, MonomialLess> terms;

  bool is_zero() const { return terms.empty(); }
  bool is_constant() const {
    return terms.empty() || (terms.size() == 1 && terms.begin()->first.empty());
  }
  Rational constant_value() const;
};

Poly poly_constant(const Rational& q);
Poly poly_atom(const Atom& a, const RewriteSet& rw);
Poly poly_add(const Poly& a, const Poly& b);
Poly poly_scale(const Poly& a, const Rational& q);
Poly poly_mul(const Poly& a, const Poly& b, const RewriteSet& rw);
Poly poly_pow(const Poly& a, long n, const RewriteSet& rw);
Poly poly_derivative(const Poly& p, const std::string& var, const RewriteSet& rw);
Poly poly_renormalize(const Poly& p, const RewriteSet& rw);
/// Substitution of symbols by polys.
Poly poly_substitute(const Poly& p, const std::map<std::string, PolyPtr>& bindings,
                     const RewriteSet& rw);
/// Adds c * m to out, applying the rewrite set to the monomial.
void add_term(Poly& out, Monomial m, Rational c, const RewriteSet& rw);
Monomial monomial_mul(const Monomial& a, const Monomial& b);

Poly make_exp(const Poly& u, const RewriteSet& rw);
Poly make_sin(const Poly& u, const RewriteSet& rw);
Poly make_cos(const Poly& u, const RewriteSet& rw);
/// u^-1: inverts monomials exactly, otherwise introduces an Inv atom.
Poly make_inverse(const Poly& u, const RewriteSet& rw);

void collect_symbols(const Poly& p, std::set<std::string>& out);
void collect_opaque(const Poly& p, std::set<std::string>& out);

std::string print_poly(const Poly& p);

struct Node {
  Expr::Kind kind = Expr::Kind::Rational;
  Rational value;                  // Rational
  std::string name;                // Symbol, Opaque
  std::string coord;               // Opaque
  int order = 0;                   // Opaque
  long exponent = 0;               // Power
  std::vector<Expr> children;      // Sum, Product, Power(1), Exp/Sin/Cos(1)
  PolyPtr poly;                    // Canonical
  RewriteSet rewrites;             // Canonical
};

/// Canonical poly of any expression tree.
PolyPtr to_poly(const Expr& e, const RewriteSet& rw);
Expr from_poly(PolyPtr p, const RewriteSet& rw);

}  // namespace nsx::detail
