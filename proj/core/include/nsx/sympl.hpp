#pragma once

// Constant-coefficient symplectic charts, Hamiltonian vector fields and
// Poisson brackets.
//
// Convention: the Hamiltonian field of H satisfies i_{X_H} w = dH, and
// {f, g} = w(X_f, X_g). For w = dp ^ dq this gives X_p = -d/dq,
// X_q = d/dp and {p, q} = 1.

#include <string>
#include <vector>

#include "nsx/forms.hpp"
#include "nsx/linalg.hpp"

namespace nsx {

class SymplecticChart {
 public:
  /// Throws Unsupported for non-constant coefficients and DomainError for
  /// a degenerate form or odd dimension.
  SymplecticChart(Chart chart, DifferentialForm omega);
  /// w_st = dy1 ^ dy2 + dy3 ^ dy4 + ... over consecutive coordinate pairs.
  static SymplecticChart standard(const Chart& chart);

  const Chart& chart() const { return chart_; }
  const DifferentialForm& omega() const { return omega_; }
  /// Omega[i][j] = w(d_i, d_j).
  const RationalMatrix& matrix() const { return matrix_; }

 private:
  Chart chart_;
  DifferentialForm omega_;
  RationalMatrix matrix_;
  RationalMatrix inverse_transpose_;

  friend VectorField hamiltonian_vector_field(const Expr& H, const SymplecticChart& S);
};

VectorField hamiltonian_vector_field(const Expr& H, const SymplecticChart& S);
Expr poisson_bracket(const Expr& f, const Expr& g, const SymplecticChart& S);

/// Standard chart (y1, ..., y_{2n}) with w_st.
Chart straightening_chart(int dim);

struct StraighteningResult {
  Expr h;
  int dim = 0;
  /// p1, q1, p2, q2, ...
  std::vector<std::string> names;
  std::vector<Expr> coordinates;
  /// brackets[a][b] = {coordinate_a, coordinate_b}.
  std::vector<std::vector<Expr>> brackets;
  /// Offending entries, e.g. "{p2, q1} = -y2 (expected 0)".
  std::vector<std::string> failures;
  bool graph_ok = false;
  bool pullback_ok = false;
  bool pass = false;

  std::string table() const;
  std::string summary() const;
};

/// p1 = y_{2n-1}, q1 = y_{2n} - h, p_i = y_{2i-3}, q_i = y_{2i-2} (i >= 2),
/// with all pairwise brackets checked against {p_i, q_j} = delta_ij,
/// {p_i, p_j} = {q_i, q_j} = 0. h must not depend on y_{2n}.
StraighteningResult graph_straightening(const Expr& h, int dim);

}  // namespace nsx
