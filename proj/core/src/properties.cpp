#include "nsx/properties.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "nsx/errors.hpp"
#include "nsx/sympl.hpp"

namespace nsx {

std::string PropertyResult::summary() const {
  std::ostringstream os;
  os << name << ": " << (trials - failures) << "/" << trials << " instances hold";
  if (!counterexample.empty()) os << "; counterexample " << counterexample;
  return os.str();
}

namespace random {

Chart chart(int n, const std::string& name) {
  std::vector<std::string> coords;
  for (int i = 1; i <= n; ++i) coords.push_back("x" + std::to_string(i));
  return Chart(name, coords);
}

namespace {

long nonzero(Rng& rng, long bound) {
  long v = rng.range(1, bound);
  return rng.range(0, 1) ? v : -v;
}

Expr coordinate(Rng& rng, const Chart& c) {
  return Expr::symbol(c.coords()[static_cast<std::size_t>(rng.range(0, c.dim() - 1))]);
}

Expr monomial(Rng& rng, const Chart& c) {
  Expr m = Expr(nonzero(rng, 3));
  const long factors = rng.range(0, 2);
  for (long i = 0; i < factors; ++i) m *= pow(coordinate(rng, c), rng.range(1, 2));
  return m;
}

Expr atom(Rng& rng, const Chart& c, Flavor flavor) {
  const long pick = rng.range(0, flavor == Flavor::Opaque ? 3 : 2);
  const Expr u = coordinate(rng, c);
  switch (pick) {
    case 0: return exp(u);
    case 1: return sin(u);
    case 2: return cos(u);
    default: return Expr::opaque("chi", c.coords()[static_cast<std::size_t>(rng.range(0, c.dim() - 1))]);
  }
}

}  // namespace

Expr scalar(Rng& rng, const Chart& c, Flavor flavor) {
  Expr s;
  const long terms = rng.range(1, 3);
  for (long i = 0; i < terms; ++i) {
    Expr t = monomial(rng, c);
    if (flavor != Flavor::Polynomial && rng.range(0, 3) == 0) t *= atom(rng, c, flavor);
    s += t;
  }
  return s;
}

DifferentialForm form(Rng& rng, const Chart& c, int degree, Flavor flavor) {
  DifferentialForm w(c, degree);
  if (degree < 0 || degree > c.dim()) throw DomainError("random form degree out of range");
  if (degree == 0) return DifferentialForm::scalar(c, scalar(rng, c, flavor));
  const long terms = rng.range(1, 3);
  for (long i = 0; i < terms; ++i) {
    // Random subset of size `degree`.
    std::vector<int> pool(static_cast<std::size_t>(c.dim()));
    for (int j = 0; j < c.dim(); ++j) pool[static_cast<std::size_t>(j)] = j;
    std::set<int> picked;
    for (int j = 0; j < degree; ++j) {
      const auto k = static_cast<std::size_t>(rng.range(j, c.dim() - 1));
      std::swap(pool[static_cast<std::size_t>(j)], pool[k]);
      picked.insert(pool[static_cast<std::size_t>(j)]);
    }
    w += scalar(rng, c, flavor) * DifferentialForm::basis(c, std::vector<int>(picked.begin(), picked.end()));
  }
  return w;
}

VectorField field(Rng& rng, const Chart& c) {
  std::vector<Expr> comps;
  for (int i = 0; i < c.dim(); ++i) comps.push_back(rng.range(0, 2) ? scalar(rng, c, Flavor::Transcendental) : Expr());
  return VectorField(c, comps);
}

SmoothMap map(Rng& rng, const Chart& source, const Chart& target) {
  std::vector<Expr> comps;
  for (int i = 0; i < target.dim(); ++i) comps.push_back(scalar(rng, source, Flavor::Polynomial));
  return SmoothMap(source, target, comps);
}

PolynomialSample polynomial(Rng& rng, int vars) {
  PolynomialSample s;
  std::vector<Expr> symbols;
  for (int i = 1; i <= vars; ++i) {
    symbols.push_back(Expr::symbol("x" + std::to_string(i)));
    Rational q(nonzero(rng, 9), rng.range(1, 5));
    q.canonicalize();
    s.point.push_back(q);
  }
  // Built as a nested, non-canonical tree; the oracle mirrors every node.
  std::function<std::pair<Expr, Rational>(int)> build = [&](int depth) -> std::pair<Expr, Rational> {
    const long pick = depth == 0 ? rng.range(0, 1) : rng.range(0, 4);
    if (pick == 0) {
      const long v = rng.range(-6, 6);
      return {Expr(v), Rational(v)};
    }
    if (pick == 1) {
      const auto i = static_cast<std::size_t>(rng.range(0, vars - 1));
      return {symbols[i], s.point[i]};
    }
    auto [a, va] = build(depth - 1);
    if (pick == 4) {
      const long k = rng.range(0, 3);
      Rational v(1);
      for (long i = 0; i < k; ++i) v *= va;
      return {pow(a, k), v};
    }
    auto [b, vb] = build(depth - 1);
    if (pick == 2) return {a + b, Rational(va + vb)};
    return {a * b - b, Rational(va * vb - vb)};
  };
  auto [e, v] = build(4);
  s.expr = e;
  s.value = v;
  return s;
}

// Scenario generator ---------------------------------------------------------

namespace {

const std::vector<std::string>& identifiers() {
  static const std::vector<std::string> ids = {"a", "b", "w", "omega", "alpha", "F", "G", "R", "Z",
                                                "t", "x1", "x2", "y3", "chi", "h", "K", "beta2", "e_1"};
  return ids;
}

std::string ident(Rng& rng) {
  const auto& ids = identifiers();
  return ids[static_cast<std::size_t>(rng.range(0, static_cast<long>(ids.size()) - 1))];
}

std::string integer(Rng& rng) { return std::to_string(rng.range(0, 99)); }

dsl::NodePtr expression(Rng& rng, int depth) {
  using Op = dsl::Node::Op;
  const long pick = depth <= 0 ? rng.range(0, 1) : rng.range(0, 11);
  switch (pick) {
    case 0: return dsl::number(integer(rng));
    case 1: return dsl::name(rng.range(0, 5) == 0 ? "pi" : ident(rng));
    case 2: return dsl::binary(Op::Add, expression(rng, depth - 1), expression(rng, depth - 1));
    case 3: return dsl::binary(Op::Sub, expression(rng, depth - 1), expression(rng, depth - 1));
    case 4: return dsl::binary(Op::Mul, expression(rng, depth - 1), expression(rng, depth - 1));
    case 5: return dsl::binary(Op::Div, expression(rng, depth - 1), expression(rng, depth - 1));
    case 6: return dsl::binary(Op::Wedge, expression(rng, depth - 1), expression(rng, depth - 1));
    case 7: return dsl::neg(expression(rng, depth - 1));
    case 8: return dsl::power(expression(rng, depth - 1), rng.range(-3, 5));
    case 9: {
      static const std::vector<std::string> fns = {"d", "exp", "sin", "cos", "i_X"};
      return dsl::call(fns[static_cast<std::size_t>(rng.range(0, 4))], {expression(rng, depth - 1)});
    }
    case 10: {
      static const std::vector<std::string> fns = {"pullback", "restrict", "star"};
      return dsl::call(fns[static_cast<std::size_t>(rng.range(0, 2))],
                       {dsl::name(ident(rng)), expression(rng, depth - 1)});
    }
    default: return dsl::call(rng.range(0, 1) ? "chi" : "chi'", {dsl::name("t")});
  }
}

std::vector<dsl::NodePtr> expressions(Rng& rng, long n) {
  std::vector<dsl::NodePtr> out;
  for (long i = 0; i < n; ++i) out.push_back(expression(rng, 2));
  return out;
}

std::vector<std::pair<std::string, dsl::NodePtr>> bindings(Rng& rng) {
  std::vector<std::pair<std::string, dsl::NodePtr>> out;
  const long n = rng.range(1, 3);
  for (long i = 0; i < n; ++i) out.emplace_back(ident(rng), expression(rng, 1));
  return out;
}

std::string anchor_text(Rng& rng) {
  static const std::vector<std::string> pieces = {"fold", " map", "\"q\"", "\\", "locus", " ", "x=0", "#1"};
  std::string s;
  const long n = rng.range(0, 4);
  for (long i = 0; i < n; ++i) s += pieces[static_cast<std::size_t>(rng.range(0, static_cast<long>(pieces.size()) - 1))];
  return s;
}

dsl::Statement statement(Rng& rng) {
  switch (rng.range(0, 8)) {
    case 0: {
      dsl::ChartDecl d{ident(rng), {}};
      const long n = rng.range(1, 4);
      for (long i = 0; i < n; ++i) d.coords.push_back(ident(rng));
      return d;
    }
    case 1: return dsl::OpaqueDecl{ident(rng)};
    case 2: {
      dsl::MetricDecl m{ident(rng), ident(rng), rng.range(0, 1) == 0, {}};
      if (!m.euclidean) {
        const long n = rng.range(1, 3);
        for (long i = 0; i < n; ++i) m.rows.push_back(expressions(rng, n));
      }
      return m;
    }
    case 3: return dsl::ValueDecl{rng.range(0, 1) == 0, ident(rng), ident(rng), expression(rng, 3)};
    case 4: return dsl::VFieldDecl{ident(rng), ident(rng), expressions(rng, rng.range(1, 3))};
    case 5: return dsl::MapDecl{ident(rng), ident(rng), ident(rng), expressions(rng, rng.range(1, 3))};
    case 6: {
      dsl::RegionDecl r{ident(rng), ident(rng), {}, 0, false, ""};
      const long n = rng.range(1, 3);
      for (long i = 0; i < n; ++i) {
        r.axes.push_back({expression(rng, 1), expression(rng, 1), static_cast<int>(rng.range(0, 8))});
      }
      if (rng.range(0, 1)) r.random = static_cast<int>(rng.range(1, 64));
      r.centered = rng.range(0, 1) == 1;
      if (rng.range(0, 1)) r.via = ident(rng);
      return r;
    }
    case 7: {
      dsl::LocusDecl l{ident(rng), ident(rng), {}};
      const long n = rng.range(1, 3);
      for (long i = 0; i < n; ++i) {
        dsl::LocusComponentDecl c;
        const long kind = rng.range(0, 2);
        if (kind == 0) {
          c.equations = bindings(rng);
        } else if (kind == 1) {
          c.param = ident(rng);
          c.over = ident(rng);
        }
        l.components.push_back(c);
      }
      return l;
    }
    default: {
      static const std::vector<std::string> kinds = {"closed", "rank", "contact", "equal", "stabilize"};
      static const std::vector<std::string> keys = {"sign", "count", "kmax", "regular", "singular",
                                                    "witness", "power", "of"};
      dsl::CheckDecl c;
      c.kind = kinds[static_cast<std::size_t>(rng.range(0, static_cast<long>(kinds.size()) - 1))];
      const long nargs = rng.range(0, 3);
      for (long i = 0; i < nargs; ++i) c.args.push_back(ident(rng));
      if (rng.range(0, 2) == 0) c.at = bindings(rng);
      if (rng.range(0, 1)) {
        c.locus = ident(rng);
        c.off = rng.range(0, 1) == 1;
      }
      const long nregions = rng.range(0, 2);
      for (long i = 0; i < nregions; ++i) c.regions.push_back(ident(rng));
      if (rng.range(0, 1)) c.value = expression(rng, 2);
      std::set<std::string> used;
      const long nopts = rng.range(0, 2);
      for (long i = 0; i < nopts; ++i) {
        const auto& key = keys[static_cast<std::size_t>(rng.range(0, static_cast<long>(keys.size()) - 1))];
        if (!used.insert(key).second) continue;
        c.options.emplace_back(key, rng.range(0, 1) ? integer(rng) : ident(rng));
      }
      c.expect = static_cast<dsl::Expect>(rng.range(0, 2));
      return c;
    }
  }
}

}  // namespace

dsl::Scenario scenario(Rng& rng) {
  dsl::Scenario s;
  if (rng.range(0, 3) != 0) s.statements.push_back(dsl::ScenarioHeader{"S" + integer(rng), anchor_text(rng)});
  const long n = rng.range(0, 8);
  for (long i = 0; i < n; ++i) s.statements.push_back(statement(rng));
  return s;
}

}  // namespace random

// Battery ----------------------------------------------------------------------

namespace {

using random::Flavor;

struct Trial {
  bool ok = true;
  std::string witness;
};

int pick_dim(Rng& rng, int lo, int hi) { return static_cast<int>(rng.range(lo, hi)); }

DifferentialForm iota(const VectorField& X, const DifferentialForm& a) {
  if (a.degree() == 0) return DifferentialForm(a.chart(), 0);
  return interior_product(X, a);
}

// Sum where a zero summand may carry a placeholder degree.
DifferentialForm plus(const DifferentialForm& a, const DifferentialForm& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  return a + b;
}

DifferentialForm sign_times(int sign, const DifferentialForm& a) { return sign < 0 ? -a : a; }

Trial d_squared(Rng& rng) {
  const Chart c = random::chart(pick_dim(rng, 2, 5));
  const auto w = random::form(rng, c, pick_dim(rng, 0, c.dim() - 2));
  const auto dd = exterior_derivative(exterior_derivative(w));
  if (dd.is_zero()) return {};
  return {false, "w = " + w.str() + ", d(d(w)) = " + dd.str()};
}

Trial graded_commutativity(Rng& rng) {
  const Chart c = random::chart(pick_dim(rng, 2, 5));
  const int p = pick_dim(rng, 0, c.dim());
  const int q = pick_dim(rng, 0, c.dim() - p);
  const auto a = random::form(rng, c, p);
  const auto b = random::form(rng, c, q);
  const auto lhs = wedge(a, b);
  const auto rhs = sign_times((p * q) % 2 ? -1 : 1, wedge(b, a));
  if (lhs == rhs) return {};
  return {false, "a = " + a.str() + ", b = " + b.str()};
}

Trial functoriality(Rng& rng) {
  const Chart A = random::chart(pick_dim(rng, 1, 3), "A");
  const Chart B = random::chart(pick_dim(rng, 1, 3), "B");
  const Chart C = random::chart(pick_dim(rng, 1, 3), "C");
  const auto F = random::map(rng, A, B);
  const auto G = random::map(rng, B, C);
  const int k = pick_dim(rng, 0, std::min({A.dim(), B.dim(), C.dim()}));
  const auto w = random::form(rng, C, k, Flavor::Transcendental);
  if (pullback(F, pullback(G, w)) != pullback(compose(G, F), w)) {
    return {false, "(G o F)* != F* G* for w = " + w.str()};
  }
  if (k < std::min({A.dim(), B.dim(), C.dim()}) && pullback(G, exterior_derivative(w)) != exterior_derivative(pullback(G, w))) {
    return {false, "G* d != d G* for w = " + w.str()};
  }
  return {};
}

Trial antiderivation(Rng& rng) {
  const Chart c = random::chart(pick_dim(rng, 2, 5));
  const int p = pick_dim(rng, 0, c.dim());
  const int q = pick_dim(rng, 0, c.dim() - p);
  const auto a = random::form(rng, c, p);
  const auto b = random::form(rng, c, q);
  const auto X = random::field(rng, c);
  const int s = p % 2 ? -1 : 1;
  if (p + q >= 1) {
    const auto lhs = iota(X, wedge(a, b));
    const auto rhs = plus(wedge(iota(X, a), b), sign_times(s, wedge(a, iota(X, b))));
    if (lhs != rhs && !(lhs.is_zero() && rhs.is_zero())) return {false, "i_X(a ^ b) with a = " + a.str() + ", b = " + b.str() + ", X = " + X.str()};
  }
  if (p + q < c.dim()) {
    const auto lhs = exterior_derivative(wedge(a, b));
    const auto rhs = plus(wedge(exterior_derivative(a), b), sign_times(s, wedge(a, exterior_derivative(b))));
    if (lhs != rhs && !(lhs.is_zero() && rhs.is_zero())) return {false, "d(a ^ b) with a = " + a.str() + ", b = " + b.str()};
  }
  return {};
}

Trial interior_twice(Rng& rng) {
  const Chart c = random::chart(pick_dim(rng, 2, 5));
  const auto w = random::form(rng, c, pick_dim(rng, 2, c.dim()));
  const auto X = random::field(rng, c);
  const auto r = interior_product(X, interior_product(X, w));
  if (r.is_zero()) return {};
  return {false, "w = " + w.str() + ", X = " + X.str()};
}

Trial antisymmetry(Rng& rng) {
  const Chart c = random::chart(pick_dim(rng, 1, 3) * 2);
  const auto S = SymplecticChart::standard(c);
  const Expr f = random::scalar(rng, c, Flavor::Transcendental);
  const Expr g = random::scalar(rng, c, Flavor::Transcendental);
  const Expr r = poisson_bracket(f, g, S) + poisson_bracket(g, f, S);
  if (r.is_zero()) return {};
  return {false, "f = " + f.str() + ", g = " + g.str()};
}

Trial jacobi(Rng& rng) {
  const Chart c = random::chart(pick_dim(rng, 1, 2) * 2);
  const auto S = SymplecticChart::standard(c);
  const Expr f = random::scalar(rng, c, Flavor::Polynomial);
  const Expr g = random::scalar(rng, c, Flavor::Polynomial);
  const Expr h = random::scalar(rng, c, Flavor::Transcendental);
  auto pb = [&](const Expr& a, const Expr& b) { return poisson_bracket(a, b, S); };
  const Expr r = pb(f, pb(g, h)) + pb(g, pb(h, f)) + pb(h, pb(f, g));
  if (r.is_zero()) return {};
  return {false, "f = " + f.str() + ", g = " + g.str() + ", h = " + h.str()};
}

Trial canonical_eval(Rng& rng) {
  const int vars = pick_dim(rng, 1, 4);
  const auto s = random::polynomial(rng, vars);
  std::map<std::string, Expr> at;
  for (int i = 0; i < vars; ++i) at["x" + std::to_string(i + 1)] = Expr(s.point[static_cast<std::size_t>(i)]);
  const auto v = substitute(canonicalize(s.expr), at).as_rational();
  if (v && *v == s.value) return {};
  return {false, s.expr.str() + " at the sample gives " + (v ? to_string(*v) : std::string("non-rational")) +
                     ", oracle " + to_string(s.value)};
}

Trial dsl_round_trip(Rng& rng) {
  const auto s = random::scenario(rng);
  const std::string text = dsl::print(s);
  const auto parsed = dsl::parse(text);
  if (const auto* e = std::get_if<dsl::ParseError>(&parsed)) return {false, e->str() + " in:\n" + text};
  if (std::get<dsl::Scenario>(parsed) == s) return {};
  return {false, "reparse differs:\n" + text};
}

PropertyResult double_star() {
  PropertyResult r{"double_star", 0, 0, "", false};
  for (int n = 1; n <= 6; ++n) {
    const Chart c = random::chart(n);
    std::vector<std::vector<Expr>> diag(static_cast<std::size_t>(n), std::vector<Expr>(static_cast<std::size_t>(n)));
    for (int i = 0; i < n; ++i) diag[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = Expr((i + 1) * (i + 1));
    for (const Metric& g : {Metric::euclidean(c), Metric(c, diag)}) {
      for (IndexMask m = 0; m < (1u << n); ++m) {
        const auto w = DifferentialForm::basis(c, mask_indices(m));
        const int k = w.degree();
        const auto lhs = hodge_star(g, hodge_star(g, w));
        ++r.trials;
        if (lhs != sign_times((k * (n - k)) % 2 ? -1 : 1, w)) {
          ++r.failures;
          if (r.counterexample.empty()) r.counterexample = "**(" + w.str() + ") = " + lhs.str();
        }
      }
    }
  }
  r.pass = r.failures == 0;
  return r;
}

const std::map<std::string, std::pair<int, Trial (*)(Rng&)>>& battery() {
  static const std::map<std::string, std::pair<int, Trial (*)(Rng&)>> b = {
      {"d_squared", {1000, d_squared}},
      {"graded_commutativity", {500, graded_commutativity}},
      {"functoriality", {100, functoriality}},
      {"antiderivation", {200, antiderivation}},
      {"interior_twice", {200, interior_twice}},
      {"canonical_eval", {1000, canonical_eval}},
      {"antisymmetry", {100, antisymmetry}},
      {"jacobi", {50, jacobi}},
      {"dsl_round_trip", {200, dsl_round_trip}},
  };
  return b;
}

}  // namespace

const std::vector<std::string>& property_names() {
  static const std::vector<std::string> names = {"d_squared",     "graded_commutativity", "functoriality",
                                                 "antiderivation", "interior_twice",      "double_star",
                                                 "canonical_eval", "antisymmetry",        "jacobi",
                                                 "dsl_round_trip"};
  return names;
}

int default_property_count(const std::string& name) {
  if (name == "double_star") return 0;
  const auto it = battery().find(name);
  if (it == battery().end()) throw DomainError("unknown property '" + name + "'");
  return it->second.first;
}

PropertyResult run_property(const std::string& name, int count, std::uint64_t seed) {
  if (name == "double_star") return double_star();
  const auto it = battery().find(name);
  if (it == battery().end()) throw DomainError("unknown property '" + name + "'");
  PropertyResult r{name, 0, 0, "", false};
  // One stream per property so adding a property never shifts another's instances.
  std::uint64_t key = 0xcbf29ce484222325ull;  // FNV-1a of the name
  for (unsigned char ch : name) key = (key ^ ch) * 0x100000001b3ull;
  const Rng base = Rng(seed).split(key);
  for (int i = 0; i < count; ++i) {
    Rng rng = base.split(static_cast<std::uint64_t>(i));
    Trial t;
    try {
      t = it->second.second(rng);
    } catch (const std::exception& e) {
      t = {false, std::string("exception: ") + e.what()};
    }
    ++r.trials;
    if (!t.ok) {
      ++r.failures;
      if (r.counterexample.empty()) r.counterexample = t.witness;
    }
  }
  r.pass = r.failures == 0 && r.trials > 0;
  return r;
}

}  // namespace nsx
