#include "nsx/forms.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <sstream>

#include "expr_internal.hpp"
#include "nsx/errors.hpp"

namespace nsx {

Chart::Chart(std::string name, std::vector<std::string> coords) : name_(std::move(name)), coords_(std::move(coords)) {
  if (coords_.empty()) throw DomainError("chart " + name_ + " has no coordinates");
  if (coords_.size() > static_cast<std::size_t>(kMaxChartDim)) {
    throw DomainError("chart " + name_ + " exceeds the maximum dimension " + std::to_string(kMaxChartDim));
  }
  std::set<std::string> seen;
  for (const auto& c : coords_) {
    if (!seen.insert(c).second) throw DomainError("chart " + name_ + " repeats coordinate " + c);
  }
}

bool Chart::has(const std::string& coord) const {
  return std::find(coords_.begin(), coords_.end(), coord) != coords_.end();
}

int Chart::index_of(const std::string& coord) const {
  auto it = std::find(coords_.begin(), coords_.end(), coord);
  if (it == coords_.end()) throw DomainError("'" + coord + "' is not a coordinate of chart " + name_);
  return static_cast<int>(it - coords_.begin());
}

Point Chart::point(std::vector<Number> values) const {
  if (values.size() != coords_.size()) {
    throw DomainError("chart " + name_ + " expects " + std::to_string(coords_.size()) + " coordinates");
  }
  return Point(name_, coords_, std::move(values));
}

Expr differentiate(const Chart& chart, const Expr& e, const std::string& var) {
  chart.index_of(var);
  return differentiate(e, var);
}

std::vector<int> mask_indices(IndexMask m) {
  std::vector<int> out;
  for (int i = 0; i < 16; ++i) {
    if (m & (1u << i)) out.push_back(i);
  }
  return out;
}

IndexMask indices_mask(const std::vector<int>& indices) {
  IndexMask m = 0;
  int last = -1;
  for (int i : indices) {
    if (i <= last || i < 0 || i >= kMaxChartDim) throw DomainError("index tuple must be strictly increasing");
    m = static_cast<IndexMask>(m | (1u << i));
    last = i;
  }
  return m;
}

namespace {

int popcount(unsigned m) { return std::popcount(m); }

// Sign of merging the sorted tuples a and b into increasing order.
int merge_sign(IndexMask a, IndexMask b) {
  int inversions = 0;
  for (int j = 0; j < 16; ++j) {
    if (b & (1u << j)) inversions += popcount(a & ~((2u << j) - 1u));
  }
  return (inversions & 1) ? -1 : 1;
}

void require_same_chart(const Chart& a, const Chart& b, const char* op) {
  if (!(a == b)) throw ChartMismatch(std::string(op) + ": chart " + a.name() + " vs " + b.name());
}

std::string coefficient_factor(const Expr& c, bool& negative) {
  const auto& poly = *detail::to_poly(c, {});
  negative = false;
  if (poly.terms.size() == 1) {
    const auto& [m, q] = *poly.terms.begin();
    if (q < 0) {
      negative = true;
      std::string s = (-c).str();
      if (s == "1") return "";
      return s + "*";
    }
    std::string s = c.str();
    if (s == "1") return "";
    return s + "*";
  }
  return "(" + c.str() + ")*";
}

}  // namespace

DifferentialForm::DifferentialForm(Chart chart, int degree) : chart_(std::move(chart)), degree_(degree) {
  if (degree < 0 || degree > chart_.dim()) {
    throw DegreeOverflow("degree " + std::to_string(degree) + " on " + std::to_string(chart_.dim()) + "-dim chart");
  }
}

DifferentialForm DifferentialForm::scalar(Chart chart, const Expr& f) {
  DifferentialForm out(std::move(chart), 0);
  out.set(0, f);
  return out;
}

DifferentialForm DifferentialForm::dx(Chart chart, const std::string& coord) {
  const int i = chart.index_of(coord);
  return basis(std::move(chart), {i});
}

DifferentialForm DifferentialForm::basis(Chart chart, const std::vector<int>& indices) {
  for (int i : indices) {
    if (i >= chart.dim()) throw DomainError("basis index out of range for chart " + chart.name());
  }
  const IndexMask m = indices_mask(indices);
  DifferentialForm out(std::move(chart), static_cast<int>(indices.size()));
  out.set(m, Expr(1));
  return out;
}

DifferentialForm DifferentialForm::volume(Chart chart) {
  std::vector<int> all(static_cast<std::size_t>(chart.dim()));
  for (int i = 0; i < chart.dim(); ++i) all[static_cast<std::size_t>(i)] = i;
  return basis(std::move(chart), all);
}

Expr DifferentialForm::coefficient(IndexMask m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? Expr(0) : it->second;
}

Expr DifferentialForm::coefficient(const std::vector<int>& indices) const { return coefficient(indices_mask(indices)); }

Expr DifferentialForm::top_coefficient() const {
  if (degree_ != chart_.dim()) throw DomainError("top coefficient of a non-top-degree form");
  return coefficient(static_cast<IndexMask>((1u << chart_.dim()) - 1u));
}

void DifferentialForm::set(IndexMask m, const Expr& c) {
  if (popcount(m) != degree_ || (m >> chart_.dim()) != 0) throw DomainError("index tuple does not match form degree");
  Expr cc = canonicalize(c);
  if (cc.is_zero()) {
    terms_.erase(m);
  } else {
    terms_[m] = std::move(cc);
  }
}

std::string DifferentialForm::str() const {
  if (terms_.empty()) return "0";
  std::vector<std::pair<std::vector<int>, const Expr*>> sorted;
  for (const auto& [m, c] : terms_) sorted.emplace_back(mask_indices(m), &c);
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::ostringstream os;
  bool first = true;
  for (const auto& [idx, c] : sorted) {
    if (idx.empty()) {
      const std::string s = c->str();
      if (!first) os << (s[0] == '-' ? " - " : " + ") << (s[0] == '-' ? s.substr(1) : s);
      else os << s;
      first = false;
      continue;
    }
    bool negative = false;
    const std::string factor = coefficient_factor(*c, negative);
    if (first) {
      if (negative) os << '-';
    } else {
      os << (negative ? " - " : " + ");
    }
    first = false;
    os << factor;
    for (std::size_t k = 0; k < idx.size(); ++k) {
      if (k) os << "/\\";
      os << "d(" << chart_.coords()[static_cast<std::size_t>(idx[k])] << ')';
    }
  }
  return os.str();
}

DifferentialForm& DifferentialForm::operator+=(const DifferentialForm& o) {
  require_same_chart(chart_, o.chart_, "form sum");
  if (degree_ != o.degree_) throw DomainError("sum of forms of different degree");
  for (const auto& [m, c] : o.terms_) set(m, coefficient(m) + c);
  return *this;
}

DifferentialForm operator-(const DifferentialForm& a) {
  DifferentialForm out(a.chart_, a.degree_);
  for (const auto& [m, c] : a.terms_) out.terms_[m] = -c;
  return out;
}

DifferentialForm operator-(const DifferentialForm& a, const DifferentialForm& b) { return a + (-b); }

DifferentialForm operator*(const Expr& f, const DifferentialForm& a) {
  DifferentialForm out(a.chart_, a.degree_);
  const Expr cf = canonicalize(f);
  if (cf.is_zero()) return out;
  for (const auto& [m, c] : a.terms_) out.set(m, cf * c);
  return out;
}

bool operator==(const DifferentialForm& a, const DifferentialForm& b) {
  if (!(a.chart_ == b.chart_) || a.degree_ != b.degree_ || a.terms_.size() != b.terms_.size()) return false;
  for (const auto& [m, c] : a.terms_) {
    auto it = b.terms_.find(m);
    if (it == b.terms_.end() || !(it->second == c)) return false;
  }
  return true;
}

DifferentialForm wedge(const DifferentialForm& a, const DifferentialForm& b) {
  require_same_chart(a.chart(), b.chart(), "wedge");
  if (a.degree() + b.degree() > a.chart().dim()) {
    throw DegreeOverflow("wedge of degrees " + std::to_string(a.degree()) + " and " + std::to_string(b.degree()) +
                         " exceeds dimension " + std::to_string(a.chart().dim()));
  }
  std::map<IndexMask, Expr> acc;
  for (const auto& [ma, ca] : a.terms()) {
    for (const auto& [mb, cb] : b.terms()) {
      if (ma & mb) continue;
      const Expr term = merge_sign(ma, mb) > 0 ? ca * cb : -(ca * cb);
      auto [it, inserted] = acc.try_emplace(static_cast<IndexMask>(ma | mb), term);
      if (!inserted) it->second = it->second + term;
    }
  }
  DifferentialForm out(a.chart(), a.degree() + b.degree());
  for (const auto& [m, c] : acc) out.set(m, c);
  return out;
}

DifferentialForm wedge_power(const DifferentialForm& a, int k) {
  if (k < 1) throw DomainError("wedge power needs a positive exponent");
  if (static_cast<long>(k) * a.degree() > a.chart().dim()) {
    throw DegreeOverflow("wedge power " + std::to_string(k) + " of a degree-" + std::to_string(a.degree()) +
                         " form exceeds dimension " + std::to_string(a.chart().dim()));
  }
  DifferentialForm out = a;
  for (int i = 1; i < k; ++i) out = wedge(out, a);
  return out;
}

DifferentialForm exterior_derivative(const DifferentialForm& a) {
  const Chart& chart = a.chart();
  if (a.degree() >= chart.dim()) {
    throw DegreeOverflow("d of a top-degree form on chart " + chart.name());
  }
  std::map<IndexMask, Expr> acc;
  for (const auto& [m, c] : a.terms()) {
    for (int k = 0; k < chart.dim(); ++k) {
      if (m & (1u << k)) continue;
      Expr dc = differentiate(c, chart.coords()[static_cast<std::size_t>(k)]);
      if (dc.is_zero()) continue;
      if (popcount(m & ((1u << k) - 1u)) & 1) dc = -dc;
      auto [it, inserted] = acc.try_emplace(static_cast<IndexMask>(m | (1u << k)), dc);
      if (!inserted) it->second = it->second + dc;
    }
  }
  DifferentialForm out(chart, a.degree() + 1);
  for (const auto& [m, c] : acc) out.set(m, c);
  return out;
}

VectorField::VectorField(Chart chart, std::vector<Expr> components)
    : chart_(std::move(chart)), components_(std::move(components)) {
  if (static_cast<int>(components_.size()) != chart_.dim()) {
    throw DomainError("vector field on chart " + chart_.name() + " needs " + std::to_string(chart_.dim()) +
                      " components");
  }
  for (auto& c : components_) c = canonicalize(c);
}

VectorField VectorField::coordinate(Chart chart, const std::string& coord) {
  const int i = chart.index_of(coord);
  std::vector<Expr> comps(static_cast<std::size_t>(chart.dim()), Expr(0));
  comps[static_cast<std::size_t>(i)] = Expr(1);
  return VectorField(std::move(chart), std::move(comps));
}

std::string VectorField::str() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < components_.size(); ++i) {
    if (i) os << ", ";
    os << components_[i].str();
  }
  os << ')';
  return os.str();
}

DifferentialForm interior_product(const VectorField& X, const DifferentialForm& a) {
  require_same_chart(X.chart(), a.chart(), "interior product");
  if (a.degree() < 1) throw DomainError("interior product of a 0-form");
  std::map<IndexMask, Expr> acc;
  for (const auto& [m, c] : a.terms()) {
    int position = 0;
    for (int i = 0; i < a.chart().dim(); ++i) {
      if (!(m & (1u << i))) continue;
      const Expr& xi = X.components()[static_cast<std::size_t>(i)];
      if (!xi.is_zero()) {
        Expr term = xi * c;
        if (position & 1) term = -term;
        auto [it, inserted] = acc.try_emplace(static_cast<IndexMask>(m & ~(1u << i)), term);
        if (!inserted) it->second = it->second + term;
      }
      ++position;
    }
  }
  DifferentialForm out(a.chart(), a.degree() - 1);
  for (const auto& [m, c] : acc) out.set(m, c);
  return out;
}

Expr contract(const DifferentialForm& a, const std::vector<VectorField>& fields) {
  if (static_cast<int>(fields.size()) != a.degree()) throw DomainError("contract needs one field per degree");
  DifferentialForm cur = a;
  for (const auto& X : fields) cur = interior_product(X, cur);
  return cur.coefficient(IndexMask{0});
}

SmoothMap::SmoothMap(Chart source, Chart target, std::vector<Expr> components)
    : source_(std::move(source)), target_(std::move(target)), components_(std::move(components)) {
  if (static_cast<int>(components_.size()) != target_.dim()) {
    throw DomainError("map to chart " + target_.name() + " needs " + std::to_string(target_.dim()) + " components");
  }
  for (auto& c : components_) c = canonicalize(c);
  jacobian_.resize(components_.size());
  for (std::size_t i = 0; i < components_.size(); ++i) {
    for (const auto& v : source_.coords()) jacobian_[i].push_back(differentiate(components_[i], v));
  }
}

SmoothMap SmoothMap::identity(const Chart& chart) {
  std::vector<Expr> comps;
  for (const auto& c : chart.coords()) comps.push_back(Expr::symbol(c));
  return SmoothMap(chart, chart, std::move(comps));
}

Expr SmoothMap::compose(const Expr& f) const {
  std::map<std::string, Expr> bindings;
  for (std::size_t i = 0; i < components_.size(); ++i) bindings.emplace(target_.coords()[i], components_[i]);
  return substitute(f, bindings);
}

SmoothMap compose(const SmoothMap& G, const SmoothMap& F) {
  require_same_chart(F.target(), G.source(), "map composition");
  std::vector<Expr> comps;
  for (const auto& g : G.components()) comps.push_back(F.compose(g));
  return SmoothMap(F.source(), G.target(), std::move(comps));
}

DifferentialForm pullback(const SmoothMap& F, const DifferentialForm& a) {
  require_same_chart(F.target(), a.chart(), "pullback");
  const Chart& src = F.source();
  if (a.degree() > src.dim()) {
    throw DegreeOverflow("pullback of a degree-" + std::to_string(a.degree()) + " form to chart " + src.name());
  }
  std::vector<DifferentialForm> dF;
  dF.reserve(F.components().size());
  for (std::size_t i = 0; i < F.components().size(); ++i) {
    DifferentialForm d(src, 1);
    for (int j = 0; j < src.dim(); ++j) d.set(static_cast<IndexMask>(1u << j), F.jacobian()[i][static_cast<std::size_t>(j)]);
    dF.push_back(std::move(d));
  }
  DifferentialForm out(src, a.degree());
  for (const auto& [m, c] : a.terms()) {
    DifferentialForm piece = DifferentialForm::scalar(src, F.compose(c));
    for (int i : mask_indices(m)) {
      piece = wedge(piece, dF[static_cast<std::size_t>(i)]);
      if (piece.is_zero()) break;
    }
    if (!piece.is_zero()) out += piece;
  }
  return out;
}

DifferentialForm restrict_to_parametrized(const SmoothMap& P, const DifferentialForm& a) {
  if (P.source().dim() > P.target().dim()) throw DomainError("parametrization has larger source than target");
  return pullback(P, a);
}

}  // namespace nsx
