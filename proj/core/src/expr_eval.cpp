#include <algorithm>
#include <cmath>
#include <sstream>

#include "expr_internal.hpp"
#include "nsx/errors.hpp"
#include "nsx/rng.hpp"

namespace nsx {

using detail::Atom;
using detail::AtomKind;
using detail::Poly;

Point::Point(std::string chart_, std::vector<std::string> coords_, std::vector<Number> values_)
    : chart(std::move(chart_)), coords(std::move(coords_)), values(std::move(values_)) {
  if (coords.size() != values.size()) {
    throw DomainError("point on chart " + chart + " has " + std::to_string(values.size()) +
                      " values for " + std::to_string(coords.size()) + " coordinates");
  }
  for (const auto& v : values) {
    if (!v.is_finite()) throw DomainError("point on chart " + chart + " has a non-finite component");
  }
}

bool Point::is_exact() const {
  return std::all_of(values.begin(), values.end(), [](const Number& v) { return v.is_exact(); });
}

std::vector<double> Point::to_doubles() const {
  std::vector<double> out;
  out.reserve(values.size());
  for (const auto& v : values) out.push_back(v.to_double());
  return out;
}

std::string Point::str() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (i) os << ", ";
    os << coords[i] << '=' << values[i].to_string();
  }
  os << ')';
  return os.str();
}

// ---------------------------------------------------------------------------

namespace {

class Bump {
 public:
  Bump() {
    const Expr t = Expr::symbol("t");
    const Expr g = exp(1 - pow(1 - t * t, -1));
    Expr cur = canonicalize(g);
    for (int k = 0; k <= kPrecomputed; ++k) {
      derivs_.emplace_back(cur, std::vector<std::string>{"t"}, OpaqueRegistry());
      cur = differentiate(cur, "t");
    }
  }

  double operator()(double x, int order) const {
    if (!(std::abs(x) < 1.0)) return 0.0;
    if (order <= kPrecomputed) return derivs_[static_cast<std::size_t>(order)](&x);
    Expr cur = canonicalize(exp(1 - pow(1 - Expr::symbol("t") * Expr::symbol("t"), -1)));
    for (int k = 0; k < order; ++k) cur = differentiate(cur, "t");
    return CompiledExpr(cur, {"t"}, OpaqueRegistry())(&x);
  }

 private:
  static constexpr int kPrecomputed = 4;
  std::vector<CompiledExpr> derivs_;
};

}  // namespace

const OpaqueRegistry& OpaqueRegistry::standard() {
  static const OpaqueRegistry registry = [] {
    OpaqueRegistry r;
    auto bump = std::make_shared<const Bump>();
    r.add("chi", [bump](double x, int order) { return (*bump)(x, order); });
    return r;
  }();
  return registry;
}

void OpaqueRegistry::add(const std::string& name, OpaqueRealization fn) {
  functions_[name] = std::move(fn);
}

bool OpaqueRegistry::contains(const std::string& name) const { return functions_.count(name) > 0; }

double OpaqueRegistry::eval(const std::string& name, double x, int order) const {
  auto it = functions_.find(name);
  if (it == functions_.end()) throw EvaluationError("opaque function '" + name + "' has no registered realization");
  return it->second(x, order);
}

// ---------------------------------------------------------------------------

namespace {

Number pow_number(Number base, long k) {
  if (k < 0) return Number(1) / pow_number(std::move(base), -k);
  Number result(1);
  while (k > 0) {
    if (k & 1) result = result * base;
    k >>= 1;
    if (k > 0) base = base * base;
  }
  return result;
}

struct Evaluator {
  const std::map<std::string, Number>& env;
  const OpaqueRegistry& registry;

  Number atom(const Atom& a) const {
    switch (a.kind) {
      case AtomKind::Pi:
        return Number(M_PI);
      case AtomKind::Symbol: {
        auto it = env.find(a.name);
        if (it == env.end()) throw EvaluationError("unbound symbol '" + a.name + "'");
        return it->second;
      }
      case AtomKind::Opaque: {
        auto it = env.find(a.coord);
        if (it == env.end()) throw EvaluationError("unbound symbol '" + a.coord + "'");
        return Number(registry.eval(a.name, it->second.to_double(), a.order));
      }
      case AtomKind::Exp:
      case AtomKind::Sin:
      case AtomKind::Cos: {
        const Number v = poly(*a.arg);
        if (v.is_exact() && v.exact() == 0) return Number(a.kind == AtomKind::Sin ? 0 : 1);
        const double x = v.to_double();
        return Number(a.kind == AtomKind::Exp ? std::exp(x) : a.kind == AtomKind::Sin ? std::sin(x) : std::cos(x));
      }
      case AtomKind::Inv: {
        Number v = poly(*a.arg);
        if (v.is_exact() && v.exact() == 0) throw EvaluationError("division by zero");
        if (!v.is_exact() && v.to_double() == 0.0) throw EvaluationError("division by zero");
        return Number(1) / v;
      }
    }
    return Number(0);
  }

  Number poly(const Poly& p) const {
    Number acc(0);
    for (const auto& [m, c] : p.terms) {
      Number term(c);
      for (const auto& [a, e] : m) {
        Number v = atom(a);
        if (e < 0 && ((v.is_exact() && v.exact() == 0) || (!v.is_exact() && v.to_double() == 0.0))) {
          throw EvaluationError("division by zero");
        }
        term = term * pow_number(v, e);
      }
      acc = acc + term;
    }
    return acc;
  }
};

}  // namespace

Number evaluate(const Expr& e, const Point& p, const OpaqueRegistry& registry) {
  std::map<std::string, Number> env;
  for (std::size_t i = 0; i < p.coords.size(); ++i) env.emplace(p.coords[i], p.values[i]);
  return Evaluator{env, registry}.poly(*detail::to_poly(e, {}));
}

// ---------------------------------------------------------------------------

struct CompiledExpr::Program {
  struct Slot {
    AtomKind kind;
    int coord = -1;
    int order = 0;
    OpaqueRealization fn;
    std::shared_ptr<const Program> arg;
  };
  struct Term {
    double coef;
    std::vector<std::pair<int, long>> factors;
  };
  std::vector<Slot> slots;
  std::vector<Term> terms;

  double run(const double* values) const {
    double stack_buf[32];
    std::vector<double> heap;
    double* atoms = stack_buf;
    if (slots.size() > 32) {
      heap.resize(slots.size());
      atoms = heap.data();
    }
    for (std::size_t i = 0; i < slots.size(); ++i) {
      const Slot& s = slots[i];
      switch (s.kind) {
        case AtomKind::Pi:
          atoms[i] = M_PI;
          break;
        case AtomKind::Symbol:
          atoms[i] = values[s.coord];
          break;
        case AtomKind::Opaque:
          atoms[i] = s.fn(values[s.coord], s.order);
          break;
        case AtomKind::Exp:
          atoms[i] = std::exp(s.arg->run(values));
          break;
        case AtomKind::Sin:
          atoms[i] = std::sin(s.arg->run(values));
          break;
        case AtomKind::Cos:
          atoms[i] = std::cos(s.arg->run(values));
          break;
        case AtomKind::Inv:
          atoms[i] = 1.0 / s.arg->run(values);
          break;
      }
    }
    double acc = 0.0;
    for (const auto& t : terms) {
      double v = t.coef;
      for (const auto& [slot, e] : t.factors) {
        const double a = atoms[slot];
        long k = e < 0 ? -e : e;
        double p = 1.0;
        for (long j = 0; j < k; ++j) p *= a;
        v *= e < 0 ? 1.0 / p : p;
      }
      acc += v;
    }
    return acc;
  }
};

namespace {

struct AtomLess {
  bool operator()(const Atom& a, const Atom& b) const { return detail::compare(a, b) < 0; }
};

std::shared_ptr<const CompiledExpr::Program> compile(const Poly& p, const std::vector<std::string>& coords,
                                                    const std::shared_ptr<const OpaqueRegistry>& registry) {
  auto prog = std::make_shared<CompiledExpr::Program>();
  std::map<Atom, int, AtomLess> index;
  auto coord_index = [&](const std::string& name) {
    auto it = std::find(coords.begin(), coords.end(), name);
    if (it == coords.end()) throw EvaluationError("unbound symbol '" + name + "'");
    return static_cast<int>(it - coords.begin());
  };
  for (const auto& [m, c] : p.terms) {
    CompiledExpr::Program::Term term{c.get_d(), {}};
    for (const auto& [a, e] : m) {
      auto it = index.find(a);
      int slot;
      if (it == index.end()) {
        CompiledExpr::Program::Slot s{a.kind, -1, a.order, {}, nullptr};
        switch (a.kind) {
          case AtomKind::Symbol:
            s.coord = coord_index(a.name);
            break;
          case AtomKind::Opaque:
            s.coord = coord_index(a.coord);
            if (!registry->contains(a.name)) {
              throw EvaluationError("opaque function '" + a.name + "' has no registered realization");
            }
            s.fn = [registry, name = a.name](double x, int order) { return registry->eval(name, x, order); };
            break;
          case AtomKind::Exp:
          case AtomKind::Sin:
          case AtomKind::Cos:
          case AtomKind::Inv:
            s.arg = compile(*a.arg, coords, registry);
            break;
          case AtomKind::Pi:
            break;
        }
        slot = static_cast<int>(prog->slots.size());
        prog->slots.push_back(std::move(s));
        index.emplace(a, slot);
      } else {
        slot = it->second;
      }
      term.factors.emplace_back(slot, e);
    }
    prog->terms.push_back(std::move(term));
  }
  return prog;
}

}  // namespace

CompiledExpr::CompiledExpr(const Expr& e, const std::vector<std::string>& coords, const OpaqueRegistry& registry)
    : program_(compile(*detail::to_poly(e, {}), coords, std::make_shared<const OpaqueRegistry>(registry))) {}

double CompiledExpr::operator()(const double* values) const {
  if (!program_) return 0.0;
  return program_->run(values);
}

// ---------------------------------------------------------------------------

std::string EqualityVerdict::str() const {
  std::ostringstream os;
  switch (outcome) {
    case Outcome::Equal:
      os << "equal (canonical forms coincide)";
      break;
    case Outcome::NotEqual: {
      os << "not equal at (";
      bool first = true;
      if (witness) {
        for (const auto& [k, v] : *witness) {
          if (!first) os << ", ";
          first = false;
          os << k << '=' << v.to_string();
        }
      }
      os << "): " << (value_a ? value_a->to_string() : "?") << " vs " << (value_b ? value_b->to_string() : "?");
      break;
    }
    case Outcome::Undecided:
      os << "undecided (" << samples << " samples agree, " << disagreements << " disagree)";
      break;
  }
  return os.str();
}

namespace {

bool numbers_agree(const Number& a, const Number& b) {
  if (a.is_exact() && b.is_exact()) return a.exact() == b.exact();
  const double x = a.to_double();
  const double y = b.to_double();
  const double scale = std::max({1.0, std::abs(x), std::abs(y)});
  return std::abs(x - y) <= 1e-9 * scale;
}

}  // namespace

EqualityVerdict semantically_equal(const Expr& a, const Expr& b, std::uint64_t seed, int trials,
                                   const RewriteSet& rewrites, const OpaqueRegistry& registry) {
  EqualityVerdict v;
  auto pa = detail::to_poly(a, rewrites);
  auto pb = detail::to_poly(b, rewrites);
  if (detail::compare(*pa, *pb) == 0) {
    v.outcome = EqualityVerdict::Outcome::Equal;
    return v;
  }

  std::set<std::string> symbols;
  std::set<std::string> opaque_args;
  detail::collect_symbols(*pa, symbols);
  detail::collect_symbols(*pb, symbols);
  // Opaque arguments are kept inside (-1, 1) where the registered bump is
  // not identically zero.
  std::function<void(const Poly&)> scan = [&](const Poly& p) {
    for (const auto& [m, c] : p.terms) {
      for (const auto& [atom, e] : m) {
        if (atom.kind == AtomKind::Opaque) opaque_args.insert(atom.coord);
        if (atom.arg) scan(*atom.arg);
      }
    }
  };
  scan(*pa);
  scan(*pb);

  Rng rng(seed);
  for (int t = 0; t < trials; ++t) {
    std::map<std::string, Number> env;
    for (const auto& s : symbols) {
      Rational q;
      if (opaque_args.count(s)) {
        q = Rational(rng.range(-4, 4), 5);
      } else {
        q = Rational(rng.range(-8, 8), rng.range(1, 4));
      }
      q.canonicalize();
      env.emplace(s, Number(q));
    }
    Number va, vb;
    try {
      va = Evaluator{env, registry}.poly(*pa);
      vb = Evaluator{env, registry}.poly(*pb);
    } catch (const EvaluationError&) {
      continue;
    }
    if (!va.is_finite() || !vb.is_finite()) continue;
    ++v.samples;
    if (!numbers_agree(va, vb)) {
      ++v.disagreements;
      v.outcome = EqualityVerdict::Outcome::NotEqual;
      v.witness = env;
      v.value_a = va;
      v.value_b = vb;
      return v;
    }
  }
  v.outcome = EqualityVerdict::Outcome::Undecided;
  return v;
}

}  // namespace nsx
