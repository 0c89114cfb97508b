#include <algorithm>
#include <cctype>
#include <sstream>

#include "expr_internal.hpp"
#include "nsx/errors.hpp"

namespace nsx::detail {

namespace {

// Natural order: digit runs compare numerically, so x2 < x10.
int natural_compare(const std::string& a, const std::string& b) {
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const bool da = std::isdigit(static_cast<unsigned char>(a[i])) != 0;
    const bool db = std::isdigit(static_cast<unsigned char>(b[j])) != 0;
    if (da && db) {
      std::size_t ie = i, je = j;
      while (ie < a.size() && std::isdigit(static_cast<unsigned char>(a[ie]))) ++ie;
      while (je < b.size() && std::isdigit(static_cast<unsigned char>(b[je]))) ++je;
      std::size_t is = i, js = j;
      while (is + 1 < ie && a[is] == '0') ++is;
      while (js + 1 < je && b[js] == '0') ++js;
      if (ie - is != je - js) return (ie - is) < (je - js) ? -1 : 1;
      const int c = a.compare(is, ie - is, b, js, je - js);
      if (c != 0) return c < 0 ? -1 : 1;
      i = ie;
      j = je;
      continue;
    }
    if (a[i] != b[j]) return a[i] < b[j] ? -1 : 1;
    ++i;
    ++j;
  }
  if (i < a.size()) return 1;
  if (j < b.size()) return -1;
  return a == b ? 0 : (a < b ? -1 : 1);
}

int cmp_int(long a, long b) { return (a > b) - (a < b); }

}  // namespace

int compare(const Atom& a, const Atom& b) {
  if (a.kind != b.kind) return a.kind < b.kind ? -1 : 1;
  switch (a.kind) {
    case AtomKind::Pi:
      return 0;
    case AtomKind::Symbol:
      return natural_compare(a.name, b.name);
    case AtomKind::Opaque: {
      if (int c = natural_compare(a.name, b.name)) return c;
      if (int c = natural_compare(a.coord, b.coord)) return c;
      return cmp_int(a.order, b.order);
    }
    case AtomKind::Exp:
    case AtomKind::Sin:
    case AtomKind::Cos:
    case AtomKind::Inv:
      if (a.arg == b.arg) return 0;
      return compare(*a.arg, *b.arg);
  }
  return 0;
}

int compare(const Monomial& a, const Monomial& b) {
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (int c = compare(a[i].first, b[i].first)) return c;
    if (int c = cmp_int(a[i].second, b[i].second)) return c;
  }
  return cmp_int(static_cast<long>(a.size()), static_cast<long>(b.size()));
}

int compare(const Poly& a, const Poly& b) {
  auto ia = a.terms.begin();
  auto ib = b.terms.begin();
  for (; ia != a.terms.end() && ib != b.terms.end(); ++ia, ++ib) {
    if (int c = compare(ia->first, ib->first)) return c;
    if (ia->second != ib->second) return ia->second < ib->second ? -1 : 1;
  }
  if (ia != a.terms.end()) return 1;
  if (ib != b.terms.end()) return -1;
  return 0;
}

Rational Poly::constant_value() const {
  if (terms.empty()) return Rational(0);
  return terms.begin()->second;
}

Monomial monomial_mul(const Monomial& a, const Monomial& b) {
  Monomial out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size()) {
      out.push_back(a[i++]);
    } else if (i == a.size()) {
      out.push_back(b[j++]);
    } else {
      const int c = compare(a[i].first, b[j].first);
      if (c < 0) {
        out.push_back(a[i++]);
      } else if (c > 0) {
        out.push_back(b[j++]);
      } else {
        const long e = a[i].second + b[j].second;
        if (e != 0) out.emplace_back(a[i].first, e);
        ++i;
        ++j;
      }
    }
  }
  return out;
}

void add_term(Poly& out, Monomial m, Rational c, const RewriteSet& rw) {
  if (c == 0) return;

  if (rw.exp_merge) {
    int exp_count = 0;
    bool needs_merge = false;
    for (const auto& [atom, e] : m) {
      if (atom.kind == AtomKind::Exp) {
        ++exp_count;
        if (e != 1) needs_merge = true;
      }
    }
    if (exp_count > 1) needs_merge = true;
    if (needs_merge) {
      Poly arg;
      Monomial rest;
      for (auto& f : m) {
        if (f.first.kind == AtomKind::Exp) {
          arg = poly_add(arg, poly_scale(*f.first.arg, Rational(f.second)));
        } else {
          rest.push_back(std::move(f));
        }
      }
      if (!arg.is_zero()) {
        Atom merged;
        merged.kind = AtomKind::Exp;
        merged.arg = std::make_shared<const Poly>(std::move(arg));
        rest = monomial_mul(rest, Monomial{{merged, 1}});
      }
      m = std::move(rest);
    }
  }

  if (rw.pythagorean) {
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (m[i].first.kind == AtomKind::Sin && m[i].second >= 2) {
        Atom cos_atom = m[i].first;
        cos_atom.kind = AtomKind::Cos;
        Monomial reduced = m;
        reduced[i].second -= 2;
        if (reduced[i].second == 0) reduced.erase(reduced.begin() + static_cast<long>(i));
        Monomial with_cos = monomial_mul(reduced, Monomial{{cos_atom, 2}});
        add_term(out, std::move(reduced), c, rw);
        add_term(out, std::move(with_cos), Rational(-c), rw);
        return;
      }
    }
  }

  auto [it, inserted] = out.terms.try_emplace(std::move(m), c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) out.terms.erase(it);
  }
}

Poly poly_constant(const Rational& q) {
  Poly p;
  if (q != 0) p.terms.emplace(Monomial{}, q);
  return p;
}

Poly poly_atom(const Atom& a, const RewriteSet& rw) {
  Poly p;
  add_term(p, Monomial{{a, 1}}, Rational(1), rw);
  return p;
}

Poly poly_add(const Poly& a, const Poly& b) {
  Poly out = a;
  for (const auto& [m, c] : b.terms) {
    auto [it, inserted] = out.terms.try_emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) out.terms.erase(it);
    }
  }
  return out;
}

Poly poly_scale(const Poly& a, const Rational& q) {
  if (q == 0) return {};
  Poly out = a;
  for (auto& [m, c] : out.terms) c *= q;
  return out;
}

Poly poly_mul(const Poly& a, const Poly& b, const RewriteSet& rw) {
  Poly out;
  if (a.is_zero() || b.is_zero()) return out;
  for (const auto& [ma, ca] : a.terms) {
    for (const auto& [mb, cb] : b.terms) {
      add_term(out, monomial_mul(ma, mb), Rational(ca * cb), rw);
    }
  }
  return out;
}

Poly make_inverse(const Poly& u, const RewriteSet& rw) {
  if (u.is_zero()) throw DomainError("division by zero in expression");
  if (u.terms.size() == 1) {
    const auto& [m, c] = *u.terms.begin();
    Poly out = poly_constant(Rational(1 / c));
    for (const auto& [atom, e] : m) {
      if (atom.kind == AtomKind::Inv) {
        out = poly_mul(out, poly_pow(*atom.arg, e, rw), rw);
      } else {
        Poly f;
        add_term(f, Monomial{{atom, -e}}, Rational(1), rw);
        out = poly_mul(out, f, rw);
      }
    }
    return out;
  }
  Atom inv;
  inv.kind = AtomKind::Inv;
  inv.arg = std::make_shared<const Poly>(u);
  return poly_atom(inv, rw);
}

Poly poly_pow(const Poly& a, long n, const RewriteSet& rw) {
  if (n < 0) return poly_pow(make_inverse(a, rw), -n, rw);
  Poly result = poly_constant(Rational(1));
  Poly base = a;
  while (n > 0) {
    if (n & 1) result = poly_mul(result, base, rw);
    n >>= 1;
    if (n > 0) base = poly_mul(base, base, rw);
  }
  return result;
}

Poly make_exp(const Poly& u, const RewriteSet& rw) {
  if (u.is_zero()) return poly_constant(Rational(1));
  Atom a;
  a.kind = AtomKind::Exp;
  a.arg = std::make_shared<const Poly>(u);
  return poly_atom(a, rw);
}

Poly make_sin(const Poly& u, const RewriteSet& rw) {
  if (u.is_zero()) return {};
  Atom a;
  a.kind = AtomKind::Sin;
  a.arg = std::make_shared<const Poly>(u);
  return poly_atom(a, rw);
}

Poly make_cos(const Poly& u, const RewriteSet& rw) {
  if (u.is_zero()) return poly_constant(Rational(1));
  Atom a;
  a.kind = AtomKind::Cos;
  a.arg = std::make_shared<const Poly>(u);
  return poly_atom(a, rw);
}

namespace {

Poly atom_derivative(const Atom& a, const std::string& var, const RewriteSet& rw) {
  switch (a.kind) {
    case AtomKind::Pi:
      return {};
    case AtomKind::Symbol:
      return a.name == var ? poly_constant(Rational(1)) : Poly{};
    case AtomKind::Opaque: {
      if (a.coord != var) return {};
      Atom next = a;
      next.order += 1;
      return poly_atom(next, rw);
    }
    case AtomKind::Exp: {
      Poly du = poly_derivative(*a.arg, var, rw);
      if (du.is_zero()) return {};
      return poly_mul(poly_atom(a, rw), du, rw);
    }
    case AtomKind::Sin: {
      Poly du = poly_derivative(*a.arg, var, rw);
      if (du.is_zero()) return {};
      return poly_mul(make_cos(*a.arg, rw), du, rw);
    }
    case AtomKind::Cos: {
      Poly du = poly_derivative(*a.arg, var, rw);
      if (du.is_zero()) return {};
      return poly_scale(poly_mul(make_sin(*a.arg, rw), du, rw), Rational(-1));
    }
    case AtomKind::Inv: {
      Poly du = poly_derivative(*a.arg, var, rw);
      if (du.is_zero()) return {};
      Poly sq;
      add_term(sq, Monomial{{a, 2}}, Rational(-1), rw);
      return poly_mul(sq, du, rw);
    }
  }
  return {};
}

Poly substitute_atom(const Atom& a, const std::map<std::string, PolyPtr>& bindings,
                     const RewriteSet& rw) {
  switch (a.kind) {
    case AtomKind::Pi:
      return poly_atom(a, rw);
    case AtomKind::Symbol: {
      auto it = bindings.find(a.name);
      if (it != bindings.end()) return *it->second;
      return poly_atom(a, rw);
    }
    case AtomKind::Opaque: {
      auto it = bindings.find(a.coord);
      if (it == bindings.end()) return poly_atom(a, rw);
      const Poly& target = *it->second;
      if (target.terms.size() == 1 && target.terms.begin()->second == 1) {
        const Monomial& m = target.terms.begin()->first;
        if (m.size() == 1 && m[0].second == 1 && m[0].first.kind == AtomKind::Symbol) {
          Atom renamed = a;
          renamed.coord = m[0].first.name;
          return poly_atom(renamed, rw);
        }
      }
      throw DomainError("opaque function " + a.name + "(" + a.coord +
                        ") can only be composed with a coordinate renaming");
    }
    case AtomKind::Exp:
      return make_exp(poly_substitute(*a.arg, bindings, rw), rw);
    case AtomKind::Sin:
      return make_sin(poly_substitute(*a.arg, bindings, rw), rw);
    case AtomKind::Cos:
      return make_cos(poly_substitute(*a.arg, bindings, rw), rw);
    case AtomKind::Inv:
      return make_inverse(poly_substitute(*a.arg, bindings, rw), rw);
  }
  return {};
}

}  // namespace

Poly poly_derivative(const Poly& p, const std::string& var, const RewriteSet& rw) {
  Poly out;
  for (const auto& [m, c] : p.terms) {
    for (std::size_t i = 0; i < m.size(); ++i) {
      Poly da = atom_derivative(m[i].first, var, rw);
      if (da.is_zero()) continue;
      Monomial rest = m;
      const long e = rest[i].second;
      rest[i].second -= 1;
      if (rest[i].second == 0) rest.erase(rest.begin() + static_cast<long>(i));
      Poly term;
      add_term(term, std::move(rest), Rational(c * e), rw);
      out = poly_add(out, poly_mul(term, da, rw));
    }
  }
  return out;
}

Poly poly_substitute(const Poly& p, const std::map<std::string, PolyPtr>& bindings,
                     const RewriteSet& rw) {
  Poly out;
  for (const auto& [m, c] : p.terms) {
    Poly term = poly_constant(c);
    for (const auto& [atom, e] : m) {
      term = poly_mul(term, poly_pow(substitute_atom(atom, bindings, rw), e, rw), rw);
    }
    out = poly_add(out, term);
  }
  return out;
}

Poly poly_renormalize(const Poly& p, const RewriteSet& rw) {
  return poly_substitute(p, {}, rw);
}

void collect_symbols(const Poly& p, std::set<std::string>& out) {
  for (const auto& [m, c] : p.terms) {
    for (const auto& [atom, e] : m) {
      switch (atom.kind) {
        case AtomKind::Symbol:
          out.insert(atom.name);
          break;
        case AtomKind::Opaque:
          out.insert(atom.coord);
          break;
        case AtomKind::Exp:
        case AtomKind::Sin:
        case AtomKind::Cos:
        case AtomKind::Inv:
          collect_symbols(*atom.arg, out);
          break;
        case AtomKind::Pi:
          break;
      }
    }
  }
}

void collect_opaque(const Poly& p, std::set<std::string>& out) {
  for (const auto& [m, c] : p.terms) {
    for (const auto& [atom, e] : m) {
      if (atom.kind == AtomKind::Opaque) out.insert(atom.name);
      if (atom.arg) collect_opaque(*atom.arg, out);
    }
  }
}

namespace {

void print_atom(std::ostream& os, const Atom& a) {
  switch (a.kind) {
    case AtomKind::Pi:
      os << "pi";
      return;
    case AtomKind::Symbol:
      os << a.name;
      return;
    case AtomKind::Opaque:
      os << a.name << std::string(static_cast<std::size_t>(a.order), '\'') << '(' << a.coord << ')';
      return;
    case AtomKind::Exp:
      os << "exp(" << print_poly(*a.arg) << ')';
      return;
    case AtomKind::Sin:
      os << "sin(" << print_poly(*a.arg) << ')';
      return;
    case AtomKind::Cos:
      os << "cos(" << print_poly(*a.arg) << ')';
      return;
    case AtomKind::Inv:
      os << '(' << print_poly(*a.arg) << ')';
      return;
  }
}

}  // namespace

std::string print_poly(const Poly& p) {
  if (p.terms.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : p.terms) {
    const bool negative = c < 0;
    const Rational mag = abs(c);
    if (first) {
      if (negative) os << '-';
    } else {
      os << (negative ? " - " : " + ");
    }
    first = false;
    bool need_star = false;
    if (m.empty() || mag != 1) {
      os << to_string(mag);
      need_star = true;
    }
    for (const auto& [atom, e] : m) {
      if (need_star) os << '*';
      need_star = true;
      print_atom(os, atom);
      const long shown = atom.kind == AtomKind::Inv ? -e : e;
      if (shown != 1) os << '^' << shown;
    }
  }
  return os.str();
}

}  // namespace nsx::detail
