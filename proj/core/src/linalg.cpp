#include "nsx/linalg.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "nsx/errors.hpp"

namespace nsx {

std::vector<int> row_reduce(RationalMatrix& m) {
  std::vector<int> pivots;
  if (m.empty()) return pivots;
  const int rows = static_cast<int>(m.size());
  const int cols = static_cast<int>(m[0].size());
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int pivot = -1;
    for (int i = r; i < rows; ++i) {
      if (m[i][c] != 0) {
        pivot = i;
        break;
      }
    }
    if (pivot < 0) continue;
    std::swap(m[r], m[pivot]);
    const Rational inv = 1 / m[r][c];
    for (int j = c; j < cols; ++j) m[r][j] *= inv;
    for (int i = 0; i < rows; ++i) {
      if (i == r || m[i][c] == 0) continue;
      const Rational f = m[i][c];
      for (int j = c; j < cols; ++j) m[i][j] -= f * m[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

int rank(const RationalMatrix& m) {
  RationalMatrix copy = m;
  return static_cast<int>(row_reduce(copy).size());
}

std::vector<std::vector<Rational>> kernel(const RationalMatrix& m, int columns) {
  const int cols = m.empty() ? columns : static_cast<int>(m[0].size());
  if (cols < 0) throw DomainError("kernel of an empty matrix needs a column count");
  RationalMatrix r = m;
  const auto pivots = row_reduce(r);
  std::vector<bool> is_pivot(static_cast<std::size_t>(cols), false);
  for (int p : pivots) is_pivot[static_cast<std::size_t>(p)] = true;
  std::vector<std::vector<Rational>> basis;
  for (int free = 0; free < cols; ++free) {
    if (is_pivot[static_cast<std::size_t>(free)]) continue;
    std::vector<Rational> v(static_cast<std::size_t>(cols), Rational(0));
    v[static_cast<std::size_t>(free)] = 1;
    for (std::size_t k = 0; k < pivots.size(); ++k) {
      v[static_cast<std::size_t>(pivots[k])] = -r[k][static_cast<std::size_t>(free)];
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

Rational determinant(RationalMatrix m) {
  const std::size_t n = m.size();
  Rational det(1);
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t pivot = n;
    for (std::size_t i = c; i < n; ++i) {
      if (m[i][c] != 0) {
        pivot = i;
        break;
      }
    }
    if (pivot == n) return Rational(0);
    if (pivot != c) {
      std::swap(m[c], m[pivot]);
      det = -det;
    }
    det *= m[c][c];
    for (std::size_t i = c + 1; i < n; ++i) {
      if (m[i][c] == 0) continue;
      const Rational f = m[i][c] / m[c][c];
      for (std::size_t j = c; j < n; ++j) m[i][j] -= f * m[c][j];
    }
  }
  return det;
}

std::optional<RationalMatrix> inverse(const RationalMatrix& m) {
  const std::size_t n = m.size();
  RationalMatrix aug(n, std::vector<Rational>(2 * n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug[i][j] = m[i][j];
    aug[i][n + i] = 1;
  }
  const auto pivots = row_reduce(aug);
  if (pivots.size() < n || (n > 0 && pivots[n - 1] != static_cast<int>(n - 1))) return std::nullopt;
  RationalMatrix out(n, std::vector<Rational>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) out[i][j] = aug[i][n + j];
  }
  return out;
}

bool is_positive_definite(const RationalMatrix& m) {
  const std::size_t n = m.size();
  for (std::size_t k = 1; k <= n; ++k) {
    RationalMatrix minor(k, std::vector<Rational>(k));
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) minor[i][j] = m[i][j];
    }
    if (determinant(minor) <= 0) return false;
  }
  return true;
}

namespace {

// Characteristic polynomial det(xI - A) by Faddeev-LeVerrier; coefficients
// c[0..n] with c[n] = 1 (c[k] multiplies x^k).
std::vector<Rational> characteristic_polynomial(const RationalMatrix& a) {
  const std::size_t n = a.size();
  std::vector<Rational> c(n + 1, Rational(0));
  c[n] = 1;
  RationalMatrix m(n, std::vector<Rational>(n, Rational(0)));
  for (std::size_t k = 1; k <= n; ++k) {
    // M_k = A M_{k-1} + c_{n-k+1} I
    RationalMatrix next(n, std::vector<Rational>(n, Rational(0)));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        Rational s(0);
        for (std::size_t l = 0; l < n; ++l) s += a[i][l] * m[l][j];
        next[i][j] = s;
      }
      next[i][i] += c[n - k + 1];
    }
    m = std::move(next);
    Rational trace(0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t l = 0; l < n; ++l) trace += a[i][l] * m[l][i];
    }
    c[n - k] = -trace / Rational(static_cast<long>(k));
  }
  return c;
}

int sign_changes(const std::vector<Rational>& coeffs) {
  int changes = 0;
  int last = 0;
  for (const auto& q : coeffs) {
    const int s = sgn(q);
    if (s == 0) continue;
    if (last != 0 && s != last) ++changes;
    last = s;
  }
  return changes;
}

}  // namespace

Inertia inertia(const RationalMatrix& symmetric) {
  const std::size_t n = symmetric.size();
  Inertia out;
  if (n == 0) return out;
  auto c = characteristic_polynomial(symmetric);
  std::size_t zero = 0;
  while (zero < c.size() && c[zero] == 0) ++zero;
  out.zero = static_cast<int>(zero);
  std::vector<Rational> reduced(c.begin() + static_cast<long>(zero), c.end());
  // With all roots real, Descartes' count is exact: positive roots are the
  // sign changes of p(x), negative roots those of p(-x).
  out.positive = sign_changes(reduced);
  std::vector<Rational> mirrored = reduced;
  for (std::size_t k = 1; k < mirrored.size(); k += 2) mirrored[k] = -mirrored[k];
  out.negative = sign_changes(mirrored);
  return out;
}

namespace {

Eigen::MatrixXd to_eigen(const RealMatrix& m) {
  const auto rows = static_cast<Eigen::Index>(m.size());
  const auto cols = rows == 0 ? 0 : static_cast<Eigen::Index>(m[0].size());
  Eigen::MatrixXd out(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) out(i, j) = m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  return out;
}

}  // namespace

NumericRank numeric_rank(const RealMatrix& m) {
  NumericRank out;
  if (m.empty() || m[0].empty()) return out;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(to_eigen(m));
  const auto& s = svd.singularValues();
  out.singular_values.assign(s.data(), s.data() + s.size());
  const double smax = s.size() ? s(0) : 0.0;
  if (smax == 0.0) return out;
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    const double rel = s(i) / smax;
    if (rel > kRankThreshold) ++out.rank;
    if (rel >= kUndecidedLow && rel <= kRankThreshold) out.undecided = true;
  }
  return out;
}

std::vector<std::vector<double>> numeric_kernel(const RealMatrix& m) {
  std::vector<std::vector<double>> out;
  if (m.empty()) return out;
  const auto cols = static_cast<Eigen::Index>(m[0].size());
  Eigen::MatrixXd a = to_eigen(m);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double smax = s.size() ? s(0) : 0.0;
  for (Eigen::Index j = 0; j < cols; ++j) {
    const double sv = j < s.size() ? s(j) : 0.0;
    if (smax == 0.0 || sv / smax <= kRankThreshold) {
      std::vector<double> v(static_cast<std::size_t>(cols));
      for (Eigen::Index i = 0; i < cols; ++i) v[static_cast<std::size_t>(i)] = svd.matrixV()(i, j);
      out.push_back(std::move(v));
    }
  }
  return out;
}

Inertia numeric_inertia(const RealMatrix& symmetric, bool* undecided) {
  Inertia out;
  if (undecided) *undecided = false;
  if (symmetric.empty()) return out;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(to_eigen(symmetric));
  const auto& ev = es.eigenvalues();
  const double scale = ev.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    const double rel = scale == 0.0 ? 0.0 : std::abs(ev(i)) / scale;
    if (rel >= kUndecidedLow && rel <= kRankThreshold && undecided) *undecided = true;
    if (rel <= kRankThreshold) {
      ++out.zero;
    } else if (ev(i) > 0) {
      ++out.positive;
    } else {
      ++out.negative;
    }
  }
  return out;
}

}  // namespace nsx
