#pragma once

// Pointwise verdicts on forms: 2-form rank and kernel, intrinsic gradient,
// the near-symplectic point test, the contact condition, and the dyadic
// search for a stabilizing constant.
//
// Every matrix is evaluated exactly when the point is rational and the
// entries are free of transcendental atoms; otherwise in binary64 with the
// relative thresholds of linalg.hpp, and results near a threshold are
// reported as undecided.

#include <optional>
#include <string>
#include <vector>

#include "nsx/forms.hpp"
#include "nsx/linalg.hpp"

namespace nsx {

/// A matrix of Numbers that remembers whether every entry is exact.
struct ValueMatrix {
  int rows = 0;
  int cols = 0;
  bool exact = true;
  RationalMatrix exact_entries;  // filled when exact
  RealMatrix entries;            // always filled

  double at(int i, int j) const { return entries[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; }
};

struct TwoFormMatrix {
  Point point;
  ValueMatrix matrix;
};

/// M[i][j] = coefficient of dx_i ^ dx_j at p for i < j, skew-extended.
TwoFormMatrix form_matrix_at(const DifferentialForm& w, const Point& p);

struct RankResult {
  int rank = 0;
  bool exact = true;
  bool undecided = false;
};

RankResult matrix_rank(const ValueMatrix& m);
RankResult rank_at(const DifferentialForm& w, const Point& p);

/// Kernel basis as Numbers (exact rationals when the matrix is exact).
std::vector<std::vector<Number>> kernel_at(const DifferentialForm& w, const Point& p);

/// Rows are chart directions k, columns the degree-k index tuples in
/// lexicographic order; entry (k, I) = d(coefficient_I)/dx_k at p.
struct GradientMatrix {
  std::vector<IndexMask> columns;
  ValueMatrix matrix;
  RankResult rank;
};

GradientMatrix gradient_at(const DifferentialForm& form, const Point& p);

struct IntrinsicGradient {
  Point point;
  GradientMatrix nabla;
  /// Gradient of w^{n/2 - 1} when requested (the symbol G).
  std::optional<GradientMatrix> power;
};

IntrinsicGradient intrinsic_gradient_at(const DifferentialForm& w, const Point& p, bool with_power = false);

struct NearSymplecticVerdict {
  bool pass = false;
  bool undecided = false;
  std::string reason;
  bool exact = true;
  int rank = 0;
  int kernel_dim = 0;
  std::vector<std::vector<Number>> kernel_basis;
  /// Rows: kernel directions; columns: pairs (01, 02, 03, 12, 13, 23) of
  /// the kernel basis.
  RealMatrix dk;
  int image_dim = 0;
  int dk_kernel_dim = 0;
  Inertia image_signature;
  int nabla_rank = 0;
  /// Whether ker G equals ker of the intrinsic gradient.
  bool g_kernel_consistent = false;

  std::string summary() const;
};

NearSymplecticVerdict near_symplectic_point_test(const DifferentialForm& w, const Point& p);

struct ContactVerdict {
  bool pass = false;
  bool symbolic = false;
  bool orientation_reversed = false;
  Expr top;
  int samples = 0;
  int positive = 0;
  int negative = 0;
  int zero = 0;
  int degenerate = 0;
  double min_abs = 0.0;
  double min_value = 0.0;
  double max_value = 0.0;
  std::optional<Point> worst;
  std::string reason;

  std::string summary() const;
};

/// Sign of e if it is provably constant: a nonzero rational, or a sum of
/// same-sign terms whose factors are pi, exp(.) or even powers, with at
/// least one term free of symbols.
std::optional<int> provable_sign(const Expr& e);

/// Checks alpha ^ (d alpha)^m on the (2m+1)-dim source chart of P (or on
/// alpha's chart when P is null). Samples live on that chart.
ContactVerdict contact_test(const DifferentialForm& alpha, const SmoothMap* P, const std::vector<Point>& samples);

struct StabilizeResult {
  bool found = false;
  long K = 0;
  int tried = 0;
  std::optional<Point> worst;
  int worst_rank = 0;

  std::string summary() const;
};

/// Smallest K = 2^j <= K_max with eta + K * base of full rank at every
/// sample.
StabilizeResult stabilizing_constant_search(const DifferentialForm& eta, const DifferentialForm& base,
                                            const std::vector<Point>& samples, long K_max);

/// Jacobian rank of F at a point of its source chart.
RankResult jacobian_rank_at(const SmoothMap& F, const Point& p);

}  // namespace nsx
