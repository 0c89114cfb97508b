#include "nsx/sympl.hpp"

#include <sstream>

#include "nsx/errors.hpp"

namespace nsx {

SymplecticChart::SymplecticChart(Chart chart, DifferentialForm omega) : chart_(std::move(chart)), omega_(std::move(omega)) {
  if (!(omega_.chart() == chart_)) throw ChartMismatch("symplectic form lives on chart " + omega_.chart().name());
  if (omega_.degree() != 2) throw DomainError("symplectic form must have degree 2");
  const int n = chart_.dim();
  if (n % 2 != 0) throw DomainError("symplectic chart must be even-dimensional");
  matrix_.assign(static_cast<std::size_t>(n), std::vector<Rational>(static_cast<std::size_t>(n), Rational(0)));
  for (const auto& [m, c] : omega_.terms()) {
    const auto q = c.as_rational();
    if (!q) throw Unsupported("only constant-coefficient symplectic forms are supported, got " + c.str());
    const auto idx = mask_indices(m);
    matrix_[static_cast<std::size_t>(idx[0])][static_cast<std::size_t>(idx[1])] = *q;
    matrix_[static_cast<std::size_t>(idx[1])][static_cast<std::size_t>(idx[0])] = -*q;
  }
  auto inv = inverse(matrix_);
  if (!inv) throw DomainError("symplectic form is degenerate");
  inverse_transpose_.assign(static_cast<std::size_t>(n), std::vector<Rational>(static_cast<std::size_t>(n)));
  for (std::size_t i = 0; i < static_cast<std::size_t>(n); ++i) {
    for (std::size_t j = 0; j < static_cast<std::size_t>(n); ++j) inverse_transpose_[i][j] = (*inv)[j][i];
  }
}

SymplecticChart SymplecticChart::standard(const Chart& chart) {
  if (chart.dim() % 2 != 0) throw DomainError("symplectic chart must be even-dimensional");
  DifferentialForm w(chart, 2);
  for (int i = 0; i + 1 < chart.dim(); i += 2) w += DifferentialForm::basis(chart, {i, i + 1});
  return SymplecticChart(chart, std::move(w));
}

// i_X w = sum_j (sum_i X^i Omega_ij) dx_j = dH  <=>  Omega^T X = grad H.
VectorField hamiltonian_vector_field(const Expr& H, const SymplecticChart& S) {
  const auto& coords = S.chart().coords();
  const std::size_t n = coords.size();
  std::vector<Expr> grad;
  for (const auto& c : coords) grad.push_back(differentiate(H, c));
  std::vector<Expr> X(n, Expr(0));
  for (std::size_t i = 0; i < n; ++i) {
    Expr acc(0);
    for (std::size_t j = 0; j < n; ++j) {
      const Rational& a = S.inverse_transpose_[i][j];
      if (a != 0) acc = acc + Expr(a) * grad[j];
    }
    X[i] = acc;
  }
  return VectorField(S.chart(), std::move(X));
}

Expr poisson_bracket(const Expr& f, const Expr& g, const SymplecticChart& S) {
  const VectorField Xf = hamiltonian_vector_field(f, S);
  const VectorField Xg = hamiltonian_vector_field(g, S);
  return contract(S.omega(), {Xf, Xg});
}

Chart straightening_chart(int dim) {
  if (dim < 2 || dim % 2 != 0) throw DomainError("straightening needs an even dimension >= 2");
  std::vector<std::string> coords;
  for (int i = 1; i <= dim; ++i) coords.push_back("y" + std::to_string(i));
  return Chart("Y" + std::to_string(dim), coords);
}

std::string StraighteningResult::table() const {
  std::ostringstream os;
  for (std::size_t a = 0; a < names.size(); ++a) {
    for (std::size_t b = a + 1; b < names.size(); ++b) {
      if (a || b > 1) os << "; ";
      os << '{' << names[a] << ", " << names[b] << "} = " << brackets[a][b].str();
    }
  }
  return os.str();
}

std::string StraighteningResult::summary() const {
  std::ostringstream os;
  os << (pass ? "pass" : "fail") << ": ";
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) os << ", ";
    os << names[i] << " = " << coordinates[i].str();
  }
  os << "; " << table();
  os << "; q1 on graph " << (graph_ok ? "= 0" : "!= 0");
  os << "; pullback of sum dp^dq " << (pullback_ok ? "= w_st" : "!= w_st");
  for (const auto& f : failures) os << "; " << f;
  os << " [convention i_X w = dH]";
  return os.str();
}

StraighteningResult graph_straightening(const Expr& h, int dim) {
  const Chart Y = straightening_chart(dim);
  const int n = dim / 2;
  const std::string top = "y" + std::to_string(dim);
  if (free_symbols(h).count(top)) throw DomainError("graph function must not depend on " + top);
  for (const auto& s : free_symbols(h)) Y.index_of(s);

  auto y = [](int i) { return Expr::symbol("y" + std::to_string(i)); };
  StraighteningResult r;
  r.h = canonicalize(h);
  r.dim = dim;
  r.names = {"p1", "q1"};
  r.coordinates = {canonicalize(y(dim - 1)), canonicalize(y(dim) - h)};
  for (int i = 2; i <= n; ++i) {
    r.names.push_back("p" + std::to_string(i));
    r.names.push_back("q" + std::to_string(i));
    r.coordinates.push_back(canonicalize(y(2 * i - 3)));
    r.coordinates.push_back(canonicalize(y(2 * i - 2)));
  }

  const SymplecticChart S = SymplecticChart::standard(Y);
  const std::size_t m = r.coordinates.size();
  r.brackets.assign(m, std::vector<Expr>(m, Expr(0)));
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = 0; b < m; ++b) {
      if (a == b) continue;
      r.brackets[a][b] = poisson_bracket(r.coordinates[a], r.coordinates[b], S);
    }
  }
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a + 1; b < m; ++b) {
      // Expected: {p_i, q_i} = 1 for the pair (2i, 2i+1), else 0.
      const Expr expected = (a % 2 == 0 && b == a + 1) ? Expr(1) : Expr(0);
      if (!(r.brackets[a][b] == expected)) {
        r.failures.push_back("{" + r.names[a] + ", " + r.names[b] + "} = " + r.brackets[a][b].str() + " (expected " +
                             expected.str() + ")");
      }
    }
  }

  r.graph_ok = substitute(r.coordinates[1], {{top, h}}).is_zero();

  std::vector<std::string> target_coords = r.names;
  const Chart target("PQ" + std::to_string(dim), target_coords);
  const SmoothMap phi(Y, target, r.coordinates);
  const DifferentialForm pulled = pullback(phi, SymplecticChart::standard(target).omega());
  r.pullback_ok = pulled == S.omega();

  r.pass = r.failures.empty() && r.graph_ok && r.pullback_ok;
  return r;
}

}  // namespace nsx
