#include "nsx/pointcheck.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <sstream>
#include <type_traits>

#include "expr_internal.hpp"
#include "nsx/errors.hpp"

namespace nsx {

namespace {

ValueMatrix make_matrix(const std::vector<std::vector<Number>>& values, int cols) {
  ValueMatrix m;
  m.rows = static_cast<int>(values.size());
  m.cols = cols;
  for (const auto& row : values) {
    for (const auto& v : row) {
      if (!v.is_exact()) m.exact = false;
    }
  }
  m.entries.assign(values.size(), std::vector<double>(static_cast<std::size_t>(cols), 0.0));
  if (m.exact) m.exact_entries.assign(values.size(), std::vector<Rational>(static_cast<std::size_t>(cols), Rational(0)));
  for (std::size_t i = 0; i < values.size(); ++i) {
    for (std::size_t j = 0; j < values[i].size(); ++j) {
      m.entries[i][j] = values[i][j].to_double();
      if (m.exact) m.exact_entries[i][j] = values[i][j].exact();
    }
  }
  return m;
}

void require_point_on(const Chart& chart, const Point& p) {
  if (p.coords != chart.coords()) {
    throw ChartMismatch("point on chart " + p.chart + " used with chart " + chart.name());
  }
}

std::vector<IndexMask> masks_of_degree(int n, int k) {
  std::vector<std::vector<int>> tuples;
  for (unsigned m = 0; m < (1u << n); ++m) {
    if (std::popcount(m) == k) tuples.push_back(mask_indices(static_cast<IndexMask>(m)));
  }
  std::sort(tuples.begin(), tuples.end());
  std::vector<IndexMask> out;
  for (const auto& t : tuples) out.push_back(indices_mask(t));
  return out;
}

// Dimension of the span of the union of two subspaces given by bases.
int span_rank(const std::vector<std::vector<double>>& a, const std::vector<std::vector<double>>& b) {
  RealMatrix stacked = a;
  stacked.insert(stacked.end(), b.begin(), b.end());
  if (stacked.empty()) return 0;
  return numeric_rank(stacked).rank;
}

std::vector<std::vector<double>> to_real(const std::vector<std::vector<Rational>>& v) {
  std::vector<std::vector<double>> out;
  for (const auto& row : v) {
    std::vector<double> r;
    for (const auto& q : row) r.push_back(q.get_d());
    out.push_back(std::move(r));
  }
  return out;
}

template <typename T>
std::vector<std::vector<T>> transpose(const std::vector<std::vector<T>>& m, int cols) {
  std::vector<std::vector<T>> out(static_cast<std::size_t>(cols), std::vector<T>(m.size()));
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < static_cast<std::size_t>(cols); ++j) out[j][i] = m[i][j];
  }
  return out;
}

// Basis of {v : v^T M = 0} for a gradient matrix (rows = directions).
std::vector<std::vector<double>> left_kernel(const ValueMatrix& m) {
  if (m.exact) {
    return to_real(kernel(transpose(m.exact_entries, m.cols), m.rows));
  }
  if (m.cols == 0) {
    std::vector<std::vector<double>> out;
    for (int i = 0; i < m.rows; ++i) {
      std::vector<double> e(static_cast<std::size_t>(m.rows), 0.0);
      e[static_cast<std::size_t>(i)] = 1.0;
      out.push_back(e);
    }
    return out;
  }
  return numeric_kernel(transpose(m.entries, m.cols));
}

}  // namespace

TwoFormMatrix form_matrix_at(const DifferentialForm& w, const Point& p) {
  if (w.degree() != 2) throw DomainError("form matrix of a degree-" + std::to_string(w.degree()) + " form");
  require_point_on(w.chart(), p);
  const int n = w.chart().dim();
  std::vector<std::vector<Number>> values(static_cast<std::size_t>(n), std::vector<Number>(static_cast<std::size_t>(n), Number(0)));
  for (const auto& [m, c] : w.terms()) {
    const auto idx = mask_indices(m);
    const Number v = evaluate(c, p);
    values[static_cast<std::size_t>(idx[0])][static_cast<std::size_t>(idx[1])] = v;
    values[static_cast<std::size_t>(idx[1])][static_cast<std::size_t>(idx[0])] = -v;
  }
  return TwoFormMatrix{p, make_matrix(values, n)};
}

RankResult matrix_rank(const ValueMatrix& m) {
  RankResult r;
  if (m.rows == 0 || m.cols == 0) return r;
  if (m.exact) {
    r.rank = rank(m.exact_entries);
    return r;
  }
  r.exact = false;
  auto nr = numeric_rank(m.entries);
  r.rank = nr.rank;
  r.undecided = nr.undecided;
  return r;
}

RankResult rank_at(const DifferentialForm& w, const Point& p) { return matrix_rank(form_matrix_at(w, p).matrix); }

std::vector<std::vector<Number>> kernel_at(const DifferentialForm& w, const Point& p) {
  const auto fm = form_matrix_at(w, p);
  std::vector<std::vector<Number>> out;
  if (fm.matrix.exact) {
    for (auto& v : kernel(fm.matrix.exact_entries, fm.matrix.cols)) {
      out.emplace_back(v.begin(), v.end());
    }
  } else {
    for (auto& v : numeric_kernel(fm.matrix.entries)) out.emplace_back(v.begin(), v.end());
  }
  return out;
}

GradientMatrix gradient_at(const DifferentialForm& form, const Point& p) {
  require_point_on(form.chart(), p);
  const Chart& chart = form.chart();
  const int n = chart.dim();
  GradientMatrix g;
  g.columns = masks_of_degree(n, form.degree());
  std::vector<std::vector<Number>> values(static_cast<std::size_t>(n), std::vector<Number>(g.columns.size(), Number(0)));
  for (std::size_t j = 0; j < g.columns.size(); ++j) {
    const Expr c = form.coefficient(g.columns[j]);
    if (c.is_zero()) continue;
    for (int k = 0; k < n; ++k) {
      values[static_cast<std::size_t>(k)][j] = evaluate(differentiate(c, chart.coords()[static_cast<std::size_t>(k)]), p);
    }
  }
  g.matrix = make_matrix(values, static_cast<int>(g.columns.size()));
  g.rank = matrix_rank(g.matrix);
  return g;
}

IntrinsicGradient intrinsic_gradient_at(const DifferentialForm& w, const Point& p, bool with_power) {
  if (w.degree() != 2) throw DomainError("intrinsic gradient of a degree-" + std::to_string(w.degree()) + " form");
  IntrinsicGradient out{p, gradient_at(w, p), std::nullopt};
  if (with_power) {
    const int half = w.chart().dim() / 2;
    if (half >= 2) out.power = gradient_at(wedge_power(w, half - 1), p);
    else out.power = out.nabla;
  }
  return out;
}

std::string NearSymplecticVerdict::summary() const {
  std::ostringstream os;
  if (pass) {
    os << "pass: dim K = " << kernel_dim << ", dim Im(D_K) = " << image_dim << ", signature (" << image_signature.positive
       << "+, " << image_signature.negative << "-, " << image_signature.zero << "0)";
  } else {
    os << (undecided ? "undecided" : "fail") << ": " << reason << " (rank " << rank << ", dim K = " << kernel_dim;
    if (kernel_dim == 4) os << ", dim Im(D_K) = " << image_dim;
    os << ')';
  }
  if (kernel_dim == 4) {
    os << "; ker D_K dim " << dk_kernel_dim << ", rank grad " << nabla_rank
       << ", ker G " << (g_kernel_consistent ? "=" : "!=") << " ker grad";
  }
  os << (exact ? " [exact]" : " [binary64]");
  return os.str();
}

NearSymplecticVerdict near_symplectic_point_test(const DifferentialForm& w, const Point& p) {
  NearSymplecticVerdict v;
  const int n = w.chart().dim();
  if (n % 2 != 0) throw DomainError("near-symplectic test needs an even-dimensional chart");
  const auto fm = form_matrix_at(w, p);
  v.exact = fm.matrix.exact;
  const auto rk = matrix_rank(fm.matrix);
  v.rank = rk.rank;
  v.kernel_dim = n - rk.rank;
  if (rk.undecided) {
    v.undecided = true;
    v.reason = "rank undecided";
    return v;
  }
  if (rk.rank == n) {
    v.reason = "nondegenerate point";
    return v;
  }
  if (v.kernel_dim != 4) {
    v.reason = "kernel not 4-dim";
    return v;
  }

  // Kernel basis, in both representations.
  std::vector<std::vector<double>> K;
  if (v.exact) {
    for (auto& k : kernel(fm.matrix.exact_entries, n)) {
      v.kernel_basis.emplace_back(k.begin(), k.end());
      std::vector<double> d;
      for (const auto& q : k) d.push_back(q.get_d());
      K.push_back(std::move(d));
    }
  } else {
    K = numeric_kernel(fm.matrix.entries);
    for (const auto& k : K) v.kernel_basis.emplace_back(k.begin(), k.end());
  }

  // Directional derivatives of the coefficient matrix along each chart axis.
  const Chart& chart = w.chart();
  std::vector<std::vector<std::vector<Number>>> dM(static_cast<std::size_t>(n),
      std::vector<std::vector<Number>>(static_cast<std::size_t>(n), std::vector<Number>(static_cast<std::size_t>(n), Number(0))));
  bool exact = v.exact;
  for (const auto& [m, c] : w.terms()) {
    const auto idx = mask_indices(m);
    for (int k = 0; k < n; ++k) {
      const Number d = evaluate(differentiate(c, chart.coords()[static_cast<std::size_t>(k)]), p);
      if (!d.is_exact()) exact = false;
      dM[static_cast<std::size_t>(k)][static_cast<std::size_t>(idx[0])][static_cast<std::size_t>(idx[1])] = d;
      dM[static_cast<std::size_t>(k)][static_cast<std::size_t>(idx[1])][static_cast<std::size_t>(idx[0])] = -d;
    }
  }
  v.exact = exact;

  static constexpr int kPairs[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
  std::vector<std::vector<Number>> dk(4, std::vector<Number>(6, Number(0)));
  for (int c = 0; c < 4; ++c) {
    for (int pr = 0; pr < 6; ++pr) {
      const auto& ka = v.kernel_basis[static_cast<std::size_t>(kPairs[pr][0])];
      const auto& kb = v.kernel_basis[static_cast<std::size_t>(kPairs[pr][1])];
      const auto& kc = v.kernel_basis[static_cast<std::size_t>(c)];
      Number acc(0);
      for (int l = 0; l < n; ++l) {
        if (kc[static_cast<std::size_t>(l)].is_exact() && kc[static_cast<std::size_t>(l)].exact() == 0) continue;
        for (int i = 0; i < n; ++i) {
          for (int j = 0; j < n; ++j) {
            const Number& e = dM[static_cast<std::size_t>(l)][static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            if (e.is_exact() && e.exact() == 0) continue;
            acc = acc + kc[static_cast<std::size_t>(l)] * ka[static_cast<std::size_t>(i)] * e * kb[static_cast<std::size_t>(j)];
          }
        }
      }
      dk[static_cast<std::size_t>(c)][static_cast<std::size_t>(pr)] = acc;
    }
  }
  const ValueMatrix dkm = make_matrix(dk, 6);
  v.dk = dkm.entries;
  const auto dk_rank = matrix_rank(dkm);
  v.image_dim = dk_rank.rank;
  v.dk_kernel_dim = 4 - dk_rank.rank;

  // Wedge-square form on Lambda^2 K*: u ^ w = Q(u, w) e1234.
  auto Q = [](const auto& u, const auto& w2) {
    using T = std::decay_t<decltype(u[0])>;
    return T(u[0] * w2[5] + u[5] * w2[0] - u[1] * w2[4] - u[4] * w2[1] + u[2] * w2[3] + u[3] * w2[2]);
  };
  // Signature of Q on the image equals that of H = D Q D^T off its kernel.
  if (dkm.exact) {
    RationalMatrix H(4, std::vector<Rational>(4));
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = 0; j < 4; ++j) H[i][j] = Q(dkm.exact_entries[i], dkm.exact_entries[j]);
    }
    v.image_signature = inertia(H);
  } else {
    RealMatrix H(4, std::vector<double>(4));
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t j = 0; j < 4; ++j) H[i][j] = Q(dkm.entries[i], dkm.entries[j]);
    }
    bool und = false;
    v.image_signature = numeric_inertia(H, &und);
    if (und) v.undecided = true;
  }

  const auto grad = intrinsic_gradient_at(w, p, true);
  v.nabla_rank = grad.nabla.rank.rank;
  {
    const auto kn = left_kernel(grad.nabla.matrix);
    const auto kg = left_kernel(grad.power->matrix);
    const int joint = span_rank(kn, kg);
    v.g_kernel_consistent = kn.size() == kg.size() && joint == static_cast<int>(kn.size());
  }

  if (dk_rank.undecided) v.undecided = true;
  if (v.undecided) {
    v.reason = "threshold undecided";
    return v;
  }
  if (v.image_dim != 3) {
    v.reason = "image rank ≠ 3";
    return v;
  }
  if (v.image_signature.positive > 0 && v.image_signature.negative > 0) {
    v.reason = "indefinite image";
    return v;
  }
  v.pass = true;
  return v;
}

// ---------------------------------------------------------------------------

std::optional<int> provable_sign(const Expr& e) {
  const auto poly = detail::to_poly(e, {});
  if (poly->is_zero()) return std::nullopt;
  int sign = 0;
  bool strictly = false;
  for (const auto& [m, c] : poly->terms) {
    const int s = sgn(c);
    if (sign != 0 && s != sign) return std::nullopt;
    sign = s;
    bool positive_term = true;
    for (const auto& [atom, k] : m) {
      const bool positive_atom = atom.kind == detail::AtomKind::Pi || atom.kind == detail::AtomKind::Exp;
      if (positive_atom) continue;
      if (k % 2 != 0) return std::nullopt;
      positive_term = false;
    }
    if (positive_term) strictly = true;
  }
  if (!strictly) return std::nullopt;
  return sign;
}

std::string ContactVerdict::summary() const {
  std::ostringstream os;
  if (symbolic) {
    os << (pass ? "pass" : "fail") << " symbolic: top coefficient " << top.str();
    if (orientation_reversed) os << " (orientation-reversed)";
    if (samples > 0) os << "; " << samples << " samples";
    if (degenerate > 0) os << ", " << degenerate << " degenerate parametrization";
    return os.str();
  }
  os << (pass ? "pass" : "fail") << ": " << samples << " samples, " << positive << " positive, " << negative
     << " negative, " << zero << " zero";
  if (degenerate > 0) os << ", " << degenerate << " degenerate parametrization";
  os.precision(6);
  os << "; min |value| " << min_abs << ", range [" << min_value << ", " << max_value << "]";
  if (orientation_reversed && pass) os << " (orientation-reversed)";
  if (!pass && worst) os << "; worst at " << worst->str();
  if (!reason.empty()) os << "; " << reason;
  return os.str();
}

ContactVerdict contact_test(const DifferentialForm& alpha, const SmoothMap* P, const std::vector<Point>& samples) {
  if (alpha.degree() != 1) throw DomainError("contact test needs a 1-form");
  const DifferentialForm a = P ? restrict_to_parametrized(*P, alpha) : alpha;
  const Chart& chart = a.chart();
  const int dim = chart.dim();
  if (dim % 2 == 0) throw DomainError("contact test needs an odd-dimensional chart, got " + std::to_string(dim));
  const int m = (dim - 1) / 2;
  const DifferentialForm top_form = m == 0 ? a : wedge(a, wedge_power(exterior_derivative(a), m));

  ContactVerdict v;
  v.top = top_form.top_coefficient();
  const auto sign = provable_sign(v.top);
  if (sign) {
    v.symbolic = true;
    v.orientation_reversed = *sign < 0;
  }

  const CompiledExpr f(v.top, chart.coords());
  std::vector<std::vector<CompiledExpr>> jac;
  if (P) {
    for (const auto& row : P->jacobian()) {
      std::vector<CompiledExpr> r;
      for (const auto& e : row) r.emplace_back(e, chart.coords());
      jac.push_back(std::move(r));
    }
  }
  v.min_abs = std::numeric_limits<double>::infinity();
  v.min_value = std::numeric_limits<double>::infinity();
  v.max_value = -std::numeric_limits<double>::infinity();
  double worst_abs = std::numeric_limits<double>::infinity();
  for (const auto& p : samples) {
    require_point_on(chart, p);
    const auto x = p.to_doubles();
    ++v.samples;
    if (P) {
      RealMatrix J(jac.size(), std::vector<double>(static_cast<std::size_t>(dim)));
      for (std::size_t i = 0; i < jac.size(); ++i) {
        for (std::size_t j = 0; j < static_cast<std::size_t>(dim); ++j) J[i][j] = jac[i][j](x.data());
      }
      const auto r = numeric_rank(J);
      if (r.rank < dim || r.undecided) {
        ++v.degenerate;
        if (!v.worst) v.worst = p;
        continue;
      }
    }
    const double value = f(x.data());
    if (!std::isfinite(value)) {
      ++v.zero;
      continue;
    }
    if (value > 0) ++v.positive;
    else if (value < 0) ++v.negative;
    else ++v.zero;
    v.min_abs = std::min(v.min_abs, std::abs(value));
    v.min_value = std::min(v.min_value, value);
    v.max_value = std::max(v.max_value, value);
    if (std::abs(value) < worst_abs) {
      worst_abs = std::abs(value);
      if (v.degenerate == 0) v.worst = p;
    }
  }
  if (v.samples == 0) {
    v.min_abs = v.min_value = v.max_value = 0.0;
  }
  // When the sweep sees both signs, point at a sample of the minority sign.
  if (v.positive > 0 && v.negative > 0) {
    const bool want_negative = v.negative <= v.positive;
    for (const auto& p : samples) {
      const auto x = p.to_doubles();
      const double value = f(x.data());
      if ((want_negative && value < 0) || (!want_negative && value > 0)) {
        v.worst = p;
        break;
      }
    }
  }

  if (v.degenerate > 0) {
    v.pass = false;
    v.reason = "parametrization degenerate at some samples";
    return v;
  }
  if (v.symbolic) {
    v.pass = true;
    return v;
  }
  if (v.samples == 0) {
    v.reason = "no samples";
    return v;
  }
  if (v.zero == 0 && (v.positive == 0 || v.negative == 0)) {
    v.pass = true;
    v.orientation_reversed = v.negative > 0;
  } else {
    v.reason = v.zero > 0 ? "top coefficient vanishes at some samples" : "top coefficient changes sign";
  }
  return v;
}

// ---------------------------------------------------------------------------

RankResult jacobian_rank_at(const SmoothMap& F, const Point& p) {
  require_point_on(F.source(), p);
  std::vector<std::vector<Number>> values;
  for (const auto& row : F.jacobian()) {
    std::vector<Number> r;
    for (const auto& e : row) r.push_back(evaluate(e, p));
    values.push_back(std::move(r));
  }
  return matrix_rank(make_matrix(values, F.source().dim()));
}

std::string StabilizeResult::summary() const {
  std::ostringstream os;
  if (found) {
    os << "K = " << K << " (" << tried << " dyadic candidates)";
  } else {
    os << "no K up to the limit (" << tried << " candidates)";
    if (worst) os << "; worst sample " << worst->str() << " with rank " << worst_rank;
  }
  return os.str();
}

StabilizeResult stabilizing_constant_search(const DifferentialForm& eta, const DifferentialForm& base,
                                            const std::vector<Point>& samples, long K_max) {
  if (!(eta.chart() == base.chart())) throw ChartMismatch("stabilizing search: forms on different charts");
  if (eta.degree() != 2 || base.degree() != 2) throw DomainError("stabilizing search needs 2-forms");
  const int n = eta.chart().dim();
  StabilizeResult r;
  for (long K = 1; K <= K_max; K *= 2) {
    ++r.tried;
    const DifferentialForm w = eta + Expr(K) * base;
    bool ok = true;
    int worst_rank = n;
    std::optional<Point> worst;
    for (const auto& p : samples) {
      const auto rk = rank_at(w, p);
      if (rk.rank < n || rk.undecided) {
        ok = false;
        if (!worst || rk.rank < worst_rank) {
          worst_rank = rk.rank;
          worst = p;
        }
      }
    }
    if (ok && !samples.empty()) {
      r.found = true;
      r.K = K;
      return r;
    }
    r.worst = worst;
    r.worst_rank = worst_rank;
  }
  return r;
}

}  // namespace nsx
