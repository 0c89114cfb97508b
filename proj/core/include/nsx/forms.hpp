#pragma once

// Differential forms on coordinate charts.
//
// A degree-k form stores its coefficients keyed by the bitmask of a strictly
// increasing index tuple (bit i set <=> dx_i present). Only nonzero,
// canonicalized coefficients are stored, so structural equality of the maps
// is equality of forms. The chart's coordinate order is the positive
// orientation.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "nsx/expr.hpp"

namespace nsx {

inline constexpr int kMaxChartDim = 8;

class Chart {
 public:
  Chart() = default;
  /// Throws DomainError on empty, duplicate, or too many coordinates.
  Chart(std::string name, std::vector<std::string> coords);

  const std::string& name() const { return name_; }
  const std::vector<std::string>& coords() const { return coords_; }
  int dim() const { return static_cast<int>(coords_.size()); }
  bool has(const std::string& coord) const;
  /// Throws DomainError for an unknown coordinate.
  int index_of(const std::string& coord) const;
  Point point(std::vector<Number> values) const;

  friend bool operator==(const Chart&, const Chart&) = default;

 private:
  std::string name_;
  std::vector<std::string> coords_;
};

/// Chart-checked derivative: throws DomainError if var is not a coordinate.
Expr differentiate(const Chart& chart, const Expr& e, const std::string& var);

using IndexMask = std::uint16_t;

std::vector<int> mask_indices(IndexMask m);
IndexMask indices_mask(const std::vector<int>& indices);

class DifferentialForm {
 public:
  using Terms = std::map<IndexMask, Expr>;

  DifferentialForm() = default;
  /// The zero form of the given degree.
  DifferentialForm(Chart chart, int degree);

  static DifferentialForm scalar(Chart chart, const Expr& f);
  /// dx for the named coordinate.
  static DifferentialForm dx(Chart chart, const std::string& coord);
  /// dx_{i1} ^ ... ^ dx_{ik} for strictly increasing 0-based indices.
  static DifferentialForm basis(Chart chart, const std::vector<int>& indices);
  static DifferentialForm volume(Chart chart);

  const Chart& chart() const { return chart_; }
  int degree() const { return degree_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  Expr coefficient(IndexMask m) const;
  Expr coefficient(const std::vector<int>& indices) const;
  /// Coefficient of the chart volume form; requires top degree.
  Expr top_coefficient() const;
  /// Sets (canonicalizing) the coefficient of dx_I; zero removes it.
  void set(IndexMask m, const Expr& c);

  /// Deterministic printer: tuples in lexicographic order, valid form
  /// syntax for the scenario language.
  std::string str() const;

  DifferentialForm& operator+=(const DifferentialForm& o);
  friend DifferentialForm operator+(DifferentialForm a, const DifferentialForm& b) { return a += b; }
  friend DifferentialForm operator-(const DifferentialForm& a, const DifferentialForm& b);
  friend DifferentialForm operator-(const DifferentialForm& a);
  friend DifferentialForm operator*(const Expr& f, const DifferentialForm& a);

  friend bool operator==(const DifferentialForm& a, const DifferentialForm& b);

 private:
  Chart chart_;
  int degree_ = 0;
  Terms terms_;
};

/// Throws ChartMismatch or DegreeOverflow.
DifferentialForm wedge(const DifferentialForm& a, const DifferentialForm& b);
DifferentialForm wedge_power(const DifferentialForm& a, int k);
/// Requires deg a < n (DegreeOverflow otherwise).
DifferentialForm exterior_derivative(const DifferentialForm& a);

class VectorField {
 public:
  VectorField() = default;
  VectorField(Chart chart, std::vector<Expr> components);
  /// The coordinate field d/d(coord).
  static VectorField coordinate(Chart chart, const std::string& coord);

  const Chart& chart() const { return chart_; }
  const std::vector<Expr>& components() const { return components_; }
  std::string str() const;

 private:
  Chart chart_;
  std::vector<Expr> components_;
};

/// Throws ChartMismatch; requires deg a >= 1 (DomainError).
DifferentialForm interior_product(const VectorField& X, const DifferentialForm& a);

class SmoothMap {
 public:
  SmoothMap() = default;
  SmoothMap(Chart source, Chart target, std::vector<Expr> components);
  static SmoothMap identity(const Chart& chart);

  const Chart& source() const { return source_; }
  const Chart& target() const { return target_; }
  const std::vector<Expr>& components() const { return components_; }
  /// jacobian()[i][j] = d component_i / d source_j.
  const std::vector<std::vector<Expr>>& jacobian() const { return jacobian_; }

  /// Pulls a scalar on the target chart back to the source chart.
  Expr compose(const Expr& f) const;

 private:
  Chart source_, target_;
  std::vector<Expr> components_;
  std::vector<std::vector<Expr>> jacobian_;
};

/// (G o F) as a map: F first, then G. Throws ChartMismatch.
SmoothMap compose(const SmoothMap& G, const SmoothMap& F);

DifferentialForm pullback(const SmoothMap& F, const DifferentialForm& a);
/// Pullback along a parametrization of a submanifold.
DifferentialForm restrict_to_parametrized(const SmoothMap& P, const DifferentialForm& a);

class Metric {
 public:
  Metric() = default;
  /// Throws DomainError unless g is square of the chart dimension and
  /// symmetric.
  Metric(Chart chart, std::vector<std::vector<Expr>> g);
  static Metric euclidean(const Chart& chart);

  const Chart& chart() const { return chart_; }
  const std::vector<std::vector<Expr>>& matrix() const { return g_; }
  bool is_constant() const;

 private:
  Chart chart_;
  std::vector<std::vector<Expr>> g_;
};

/// Symbolic Hodge star. Supported for constant rational metrics that are
/// positive-definite with a rational square root of det(g); otherwise
/// Unsupported (use hodge_star_at) or DomainError (not positive-definite).
DifferentialForm hodge_star(const Metric& g, const DifferentialForm& a);

/// Hodge star evaluated at a point, for any metric positive-definite there.
std::map<IndexMask, double> hodge_star_at(const Metric& g, const DifferentialForm& a, const Point& p);

/// a(X_1, ..., X_k) as a scalar.
Expr contract(const DifferentialForm& a, const std::vector<VectorField>& fields);

}  // namespace nsx
