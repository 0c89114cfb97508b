#include <algorithm>

#include "nsx/environment.hpp"
#include "nsx/errors.hpp"

namespace nsx {

namespace {

using dsl::Node;

template <class M>
const typename M::mapped_type& lookup(const M& m, const std::string& name, const char* what) {
  auto it = m.find(name);
  if (it == m.end()) throw DomainError(std::string("unknown ") + what + " '" + name + "'");
  return it->second;
}

DifferentialForm as_form(const Value& v, const Chart& chart) {
  if (auto* f = std::get_if<DifferentialForm>(&v)) return *f;
  return DifferentialForm::scalar(chart, std::get<Expr>(v));
}

bool is_scalar(const Value& v) { return std::holds_alternative<Expr>(v); }

// A 0-form behaves like its scalar.
std::optional<Expr> scalar_of(const Value& v) {
  if (auto* e = std::get_if<Expr>(&v)) return *e;
  const auto& f = std::get<DifferentialForm>(v);
  if (f.degree() == 0) return f.coefficient(IndexMask{0});
  return std::nullopt;
}

const Chart& require_context(const Chart* context, const std::string& what) {
  if (!context) throw DomainError(what + " needs a chart context");
  return *context;
}

}  // namespace

void Environment::claim(const std::string& name) {
  if (!names_.insert(name).second) throw DomainError("'" + name + "' is already declared");
}

const Chart& Environment::chart(const std::string& name) const { return lookup(charts_, name, "chart"); }
const Metric& Environment::metric(const std::string& name) const { return lookup(metrics_, name, "metric"); }
const DifferentialForm& Environment::form(const std::string& name) const { return lookup(forms_, name, "form"); }
const ScalarValue& Environment::scalar(const std::string& name) const { return lookup(scalars_, name, "expression"); }
const VectorField& Environment::field(const std::string& name) const { return lookup(fields_, name, "vector field"); }
const SmoothMap& Environment::map(const std::string& name) const { return lookup(maps_, name, "map"); }
const Region& Environment::region(const std::string& name) const { return lookup(regions_, name, "region"); }
const LocusSpec& Environment::locus(const std::string& name) const { return lookup(loci_, name, "locus"); }

DifferentialForm Environment::form_or_scalar(const std::string& name) const {
  if (auto it = forms_.find(name); it != forms_.end()) return it->second;
  if (auto it = scalars_.find(name); it != scalars_.end()) return DifferentialForm::scalar(it->second.chart, it->second.value);
  throw DomainError("unknown form or expression '" + name + "'");
}

const Chart& Environment::chart_of(const std::string& name) const {
  if (auto it = forms_.find(name); it != forms_.end()) return it->second.chart();
  if (auto it = scalars_.find(name); it != scalars_.end()) return it->second.chart;
  if (auto it = fields_.find(name); it != fields_.end()) return it->second.chart();
  if (auto it = maps_.find(name); it != maps_.end()) return it->second.source();
  throw DomainError("unknown name '" + name + "'");
}

void Environment::declare(const dsl::Statement& s) {
  if (auto* c = std::get_if<dsl::ChartDecl>(&s)) {
    Chart chart(c->name, c->coords);
    claim(c->name);
    charts_.emplace(c->name, std::move(chart));
  } else if (auto* o = std::get_if<dsl::OpaqueDecl>(&s)) {
    claim(o->name);
    opaque_.insert(o->name);
  } else if (auto* m = std::get_if<dsl::MetricDecl>(&s)) {
    const Chart& ch = chart(m->chart);
    Metric g;
    if (m->euclidean) {
      g = Metric::euclidean(ch);
    } else {
      std::vector<std::vector<Expr>> rows;
      for (const auto& row : m->rows) {
        std::vector<Expr> r;
        for (const auto& e : row) r.push_back(evaluate_scalar(e, ch));
        rows.push_back(std::move(r));
      }
      g = Metric(ch, std::move(rows));
    }
    claim(m->name);
    metrics_.emplace(m->name, std::move(g));
  } else if (auto* v = std::get_if<dsl::ValueDecl>(&s)) {
    const Chart& ch = chart(v->chart);
    if (v->is_form) {
      DifferentialForm f = evaluate_form(v->value, ch);
      claim(v->name);
      forms_.emplace(v->name, std::move(f));
    } else {
      Expr e = canonicalize(evaluate_scalar(v->value, ch));
      claim(v->name);
      scalars_.emplace(v->name, ScalarValue{ch, std::move(e)});
    }
  } else if (auto* f = std::get_if<dsl::VFieldDecl>(&s)) {
    const Chart& ch = chart(f->chart);
    if (static_cast<int>(f->components.size()) != ch.dim()) {
      throw DomainError("vector field " + f->name + " needs " + std::to_string(ch.dim()) + " components");
    }
    std::vector<Expr> comps;
    for (const auto& e : f->components) comps.push_back(evaluate_scalar(e, ch));
    claim(f->name);
    fields_.emplace(f->name, VectorField(ch, std::move(comps)));
  } else if (auto* mp = std::get_if<dsl::MapDecl>(&s)) {
    const Chart& src = chart(mp->source);
    const Chart& dst = chart(mp->target);
    if (static_cast<int>(mp->components.size()) != dst.dim()) {
      throw DomainError("map " + mp->name + " needs " + std::to_string(dst.dim()) + " components");
    }
    std::vector<Expr> comps;
    for (const auto& e : mp->components) comps.push_back(evaluate_scalar(e, src));
    claim(mp->name);
    maps_.emplace(mp->name, SmoothMap(src, dst, std::move(comps)));
  } else if (auto* r = std::get_if<dsl::RegionDecl>(&s)) {
    const Chart& ch = chart(r->chart);
    std::vector<Axis> axes;
    bool random_axis = false;
    for (const auto& a : r->axes) {
      axes.push_back(Axis{evaluate_constant(a.lo), evaluate_constant(a.hi), a.resolution});
      random_axis = random_axis || a.resolution == 0;
    }
    int random = r->random;
    if (options_.samples > 0 && (random_axis || random > 0)) random = std::max(options_.samples, kMinRandomSamples);
    Region region(ch, std::move(axes), random, r->centered);
    if (!r->via.empty()) region.set_embedding(map(r->via));
    claim(r->name);
    regions_.emplace(r->name, std::move(region));
  } else if (auto* l = std::get_if<dsl::LocusDecl>(&s)) {
    const Chart& ch = chart(l->chart);
    LocusSpec spec(ch);
    for (const auto& c : l->components) {
      if (!c.param.empty()) {
        spec.add_parametrized(map(c.param), region(c.over));
        continue;
      }
      std::vector<std::pair<std::string, Expr>> eqs;
      for (const auto& [coord, e] : c.equations) eqs.emplace_back(coord, evaluate_constant(e));
      // The empty component {} declares the empty locus.
      if (!eqs.empty()) spec.add_equations(std::move(eqs));
    }
    claim(l->name);
    loci_.emplace(l->name, std::move(spec));
  }
}

Value Environment::evaluate(const dsl::NodePtr& e, const Chart& context) const { return eval(*e, &context); }

Expr Environment::evaluate_scalar(const dsl::NodePtr& e, const Chart& context) const {
  auto s = scalar_of(eval(*e, &context));
  if (!s) throw DomainError("expected a scalar, got a form: " + dsl::print(e));
  return *s;
}

DifferentialForm Environment::evaluate_form(const dsl::NodePtr& e, const Chart& context) const {
  return as_form(eval(*e, &context), context);
}

Expr Environment::evaluate_constant(const dsl::NodePtr& e) const {
  auto s = scalar_of(eval(*e, nullptr));
  if (!s || !s->is_constant()) throw DomainError("expected a constant: " + dsl::print(e));
  return *s;
}

Point Environment::point(const Chart& chart, const std::vector<std::pair<std::string, dsl::NodePtr>>& bindings) const {
  std::vector<std::optional<Number>> values(static_cast<std::size_t>(chart.dim()));
  for (const auto& [coord, e] : bindings) {
    const auto i = static_cast<std::size_t>(chart.index_of(coord));
    if (values[i]) throw DomainError("coordinate " + coord + " bound twice");
    const Expr c = evaluate_constant(e);
    if (auto q = c.as_rational()) {
      values[i] = Number(*q);
    } else {
      values[i] = nsx::evaluate(c, Point("", {}, {}));
    }
  }
  std::vector<Number> out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!values[i]) throw DomainError("point misses coordinate " + chart.coords()[i]);
    out.push_back(*values[i]);
  }
  return chart.point(std::move(out));
}

Value Environment::eval(const Node& n, const Chart* context) const {
  switch (n.op) {
    case Node::Op::Number:
      return Expr(Rational(n.text, 10));
    case Node::Op::Name: {
      if (n.text == "pi") return Expr::pi();
      if (context && context->has(n.text)) return Expr::symbol(n.text);
      if (auto it = scalars_.find(n.text); it != scalars_.end()) {
        if (it->second.value.is_constant()) return it->second.value;
        if (!context || !(it->second.chart == *context)) {
          throw ChartMismatch("expression " + n.text + " lives on chart " + it->second.chart.name());
        }
        return it->second.value;
      }
      if (auto it = forms_.find(n.text); it != forms_.end()) {
        if (!context || !(it->second.chart() == *context)) {
          throw ChartMismatch("form " + n.text + " lives on chart " + it->second.chart().name());
        }
        return it->second;
      }
      throw DomainError("unknown identifier '" + n.text + "'" +
                        (context ? " on chart " + context->name() : std::string(" in a constant")));
    }
    case Node::Op::Neg: {
      Value v = eval(*n.args[0], context);
      if (auto* e = std::get_if<Expr>(&v)) return -*e;
      return -std::get<DifferentialForm>(v);
    }
    case Node::Op::Add:
    case Node::Op::Sub: {
      Value a = eval(*n.args[0], context);
      Value b = eval(*n.args[1], context);
      const bool sub = n.op == Node::Op::Sub;
      if (is_scalar(a) && is_scalar(b)) {
        return sub ? std::get<Expr>(a) - std::get<Expr>(b) : std::get<Expr>(a) + std::get<Expr>(b);
      }
      const Chart& ch = require_context(context, "form arithmetic");
      // A zero scalar is the identity for forms of any degree.
      if (is_scalar(a) && std::get<Expr>(a).is_zero()) {
        a = DifferentialForm(ch, std::get<DifferentialForm>(b).degree());
      }
      if (is_scalar(b) && std::get<Expr>(b).is_zero()) {
        b = DifferentialForm(ch, std::get<DifferentialForm>(a).degree());
      }
      DifferentialForm fa = as_form(a, ch), fb = as_form(b, ch);
      if (fa.degree() != fb.degree()) {
        throw DomainError("cannot add forms of degree " + std::to_string(fa.degree()) + " and " +
                          std::to_string(fb.degree()));
      }
      return sub ? fa - fb : fa + fb;
    }
    case Node::Op::Mul: {
      Value a = eval(*n.args[0], context);
      Value b = eval(*n.args[1], context);
      auto sa = scalar_of(a), sb = scalar_of(b);
      if (is_scalar(a) && is_scalar(b)) return std::get<Expr>(a) * std::get<Expr>(b);
      if (sa) return *sa * std::get<DifferentialForm>(b);
      if (sb) return *sb * std::get<DifferentialForm>(a);
      throw DomainError("product of two forms of positive degree; use /\\");
    }
    case Node::Op::Div: {
      Value a = eval(*n.args[0], context);
      auto sb = scalar_of(eval(*n.args[1], context));
      if (!sb) throw DomainError("division by a form");
      if (sb->is_zero()) throw DomainError("division by zero");
      const Expr inv = pow(*sb, -1);
      if (auto* e = std::get_if<Expr>(&a)) return *e * inv;
      return inv * std::get<DifferentialForm>(a);
    }
    case Node::Op::Wedge: {
      const Chart& ch = require_context(context, "wedge");
      return wedge(as_form(eval(*n.args[0], context), ch), as_form(eval(*n.args[1], context), ch));
    }
    case Node::Op::Pow: {
      Value a = eval(*n.args[0], context);
      if (auto* e = std::get_if<Expr>(&a)) return pow(*e, n.exponent);
      const auto& f = std::get<DifferentialForm>(a);
      if (n.exponent < 1) throw DomainError("wedge power needs a positive exponent");
      return wedge_power(f, static_cast<int>(n.exponent));
    }
    case Node::Op::Call:
      break;
  }

  const std::string& fn = n.text;
  if (fn == "d") {
    const Chart& ch = require_context(context, "d");
    return exterior_derivative(as_form(eval(*n.args[0], context), ch));
  }
  if (fn == "exp" || fn == "sin" || fn == "cos") {
    auto s = scalar_of(eval(*n.args[0], context));
    if (!s) throw DomainError(fn + " of a form");
    return fn == "exp" ? exp(*s) : fn == "sin" ? sin(*s) : cos(*s);
  }
  if (fn.compare(0, 2, "i_") == 0) {
    const Chart& ch = require_context(context, "interior product");
    const VectorField& X = field(fn.substr(2));
    if (!(X.chart() == ch)) throw ChartMismatch("vector field " + fn.substr(2) + " lives on chart " + X.chart().name());
    return interior_product(X, as_form(eval(*n.args[0], context), ch));
  }
  if (fn == "pullback" || fn == "restrict") {
    const SmoothMap& F = map(n.args[0]->text);
    if (context && !(F.source() == *context)) {
      throw ChartMismatch("map " + n.args[0]->text + " starts on " + F.source().name() + ", not " + context->name());
    }
    Value v = eval(*n.args[1], &F.target());
    if (auto* e = std::get_if<Expr>(&v)) return F.compose(*e);
    const auto& f = std::get<DifferentialForm>(v);
    return fn == "pullback" ? pullback(F, f) : restrict_to_parametrized(F, f);
  }
  if (fn == "star") {
    const Metric& g = metric(n.args[0]->text);
    if (context && !(g.chart() == *context)) throw ChartMismatch("metric " + n.args[0]->text + " lives on " + g.chart().name());
    return hodge_star(g, as_form(eval(*n.args[1], &g.chart()), g.chart()));
  }
  // Opaque function, possibly with primes for derivatives.
  const auto prime = fn.find('\'');
  const std::string base = fn.substr(0, prime);
  const int order = prime == std::string::npos ? 0 : static_cast<int>(fn.size() - prime);
  if (!opaque_.count(base)) throw DomainError("unknown function '" + fn + "'");
  const std::string& arg = n.args[0]->text;
  if (!context || !context->has(arg)) throw DomainError("argument of " + fn + " must be a coordinate, got " + arg);
  return Expr::opaque(base, arg, order);
}

}  // namespace nsx
