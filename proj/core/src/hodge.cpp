#include <Eigen/Dense>
#include <bit>
#include <cmath>

#include "nsx/errors.hpp"
#include "nsx/forms.hpp"
#include "nsx/linalg.hpp"

namespace nsx {

Metric::Metric(Chart chart, std::vector<std::vector<Expr>> g) : chart_(std::move(chart)), g_(std::move(g)) {
  const auto n = static_cast<std::size_t>(chart_.dim());
  if (g_.size() != n) throw DomainError("metric on chart " + chart_.name() + " must be " + std::to_string(n) + "x" + std::to_string(n));
  for (auto& row : g_) {
    if (row.size() != n) throw DomainError("metric on chart " + chart_.name() + " is not square");
    for (auto& e : row) e = canonicalize(e);
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!(g_[i][j] == g_[j][i])) throw DomainError("metric on chart " + chart_.name() + " is not symmetric");
    }
  }
}

Metric Metric::euclidean(const Chart& chart) {
  const auto n = static_cast<std::size_t>(chart.dim());
  std::vector<std::vector<Expr>> g(n, std::vector<Expr>(n, Expr(0)));
  for (std::size_t i = 0; i < n; ++i) g[i][i] = Expr(1);
  return Metric(chart, std::move(g));
}

bool Metric::is_constant() const {
  for (const auto& row : g_) {
    for (const auto& e : row) {
      if (!e.as_rational()) return false;
    }
  }
  return true;
}

namespace {

// Sign of the permutation (I, I^c) of (0..n-1).
int complement_sign(IndexMask I, int n) {
  int inversions = 0;
  for (int j = 0; j < n; ++j) {
    if (I & (1u << j)) continue;
    inversions += std::popcount(static_cast<unsigned>(I) & ~((2u << j) - 1u));
  }
  return (inversions & 1) ? -1 : 1;
}

template <typename M>
auto minor_of(const M& m, const std::vector<int>& rows, const std::vector<int>& cols) {
  M out(rows.size(), typename M::value_type(cols.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) {
      out[i][j] = m[static_cast<std::size_t>(rows[i])][static_cast<std::size_t>(cols[j])];
    }
  }
  return out;
}

std::vector<IndexMask> masks_of_degree(int n, int k) {
  std::vector<IndexMask> out;
  for (unsigned m = 0; m < (1u << n); ++m) {
    if (std::popcount(m) == k) out.push_back(static_cast<IndexMask>(m));
  }
  return out;
}

bool perfect_square(const mpz_class& z) { return z >= 0 && mpz_perfect_square_p(z.get_mpz_t()) != 0; }

}  // namespace

// (*a)_{I^c} = sqrt(det g) * sgn(I, I^c) * a^I, where a^I = sum_J det(g^{-1}[I,J]) a_J
// raises indices with the k-th compound of the inverse metric.
DifferentialForm hodge_star(const Metric& g, const DifferentialForm& a) {
  if (!(g.chart() == a.chart())) throw ChartMismatch("hodge star: chart " + g.chart().name() + " vs " + a.chart().name());
  if (!g.is_constant()) {
    throw Unsupported("symbolic Hodge star needs a constant metric; evaluate pointwise instead");
  }
  const int n = g.chart().dim();
  RationalMatrix gm(static_cast<std::size_t>(n), std::vector<Rational>(static_cast<std::size_t>(n)));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) gm[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = *g.matrix()[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].as_rational();
  }
  if (!is_positive_definite(gm)) throw DomainError("metric is not positive-definite");
  const Rational det = determinant(gm);
  if (!perfect_square(det.get_num()) || !perfect_square(det.get_den())) {
    throw Unsupported("det(g) = " + to_string(det) + " has no rational square root; evaluate pointwise instead");
  }
  Rational root(sqrt(det.get_num()), sqrt(det.get_den()));
  root.canonicalize();
  const RationalMatrix ginv = *inverse(gm);
  const int k = a.degree();
  const IndexMask full = static_cast<IndexMask>((1u << n) - 1u);

  DifferentialForm out(a.chart(), n - k);
  for (IndexMask I : masks_of_degree(n, k)) {
    const auto rows = mask_indices(I);
    Expr raised(0);
    for (const auto& [J, c] : a.terms()) {
      const Rational minor = k == 0 ? Rational(1) : determinant(minor_of(ginv, rows, mask_indices(J)));
      if (minor != 0) raised = raised + Expr(minor) * c;
    }
    if (raised.is_zero()) continue;
    out.set(static_cast<IndexMask>(full & ~I), Expr(Rational(root * complement_sign(I, n))) * raised);
  }
  return out;
}

std::map<IndexMask, double> hodge_star_at(const Metric& g, const DifferentialForm& a, const Point& p) {
  if (!(g.chart() == a.chart())) throw ChartMismatch("hodge star: chart " + g.chart().name() + " vs " + a.chart().name());
  const int n = g.chart().dim();
  Eigen::MatrixXd gm(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) gm(i, j) = evaluate(g.matrix()[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)], p).to_double();
  }
  Eigen::LLT<Eigen::MatrixXd> llt(gm);
  if (llt.info() != Eigen::Success) throw DomainError("metric is not positive-definite at " + p.str());
  const double root = std::sqrt(gm.determinant());
  const Eigen::MatrixXd ginv = gm.inverse();
  RealMatrix gi(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n)));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) gi[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = ginv(i, j);
  }
  const int k = a.degree();
  const IndexMask full = static_cast<IndexMask>((1u << n) - 1u);
  std::map<IndexMask, double> out;
  for (IndexMask I : masks_of_degree(n, k)) {
    const auto rows = mask_indices(I);
    double raised = 0.0;
    for (const auto& [J, c] : a.terms()) {
      double minor = 1.0;
      if (k > 0) {
        const RealMatrix sub = minor_of(gi, rows, mask_indices(J));
        Eigen::MatrixXd s(k, k);
        for (int i = 0; i < k; ++i) {
          for (int j = 0; j < k; ++j) s(i, j) = sub[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        }
        minor = s.determinant();
      }
      raised += minor * evaluate(c, p).to_double();
    }
    if (raised != 0.0) out[static_cast<IndexMask>(full & ~I)] = root * complement_sign(I, n) * raised;
  }
  return out;
}

}  // namespace nsx
