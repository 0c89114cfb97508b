#pragma once

// Small dense linear algebra: an exact path over the rationals (fraction
// arithmetic Gaussian elimination) and a binary64 path backed by SVD.

#include <optional>
#include <vector>

#include "nsx/number.hpp"

namespace nsx {

using RationalMatrix = std::vector<std::vector<Rational>>;
using RealMatrix = std::vector<std::vector<double>>;

/// Reduced row echelon form in place; returns pivot columns.
std::vector<int> row_reduce(RationalMatrix& m);

int rank(const RationalMatrix& m);
/// Basis of the right null space {v : m v = 0}, one vector per free column.
std::vector<std::vector<Rational>> kernel(const RationalMatrix& m, int columns = -1);
Rational determinant(RationalMatrix m);
std::optional<RationalMatrix> inverse(const RationalMatrix& m);

/// Sylvester's criterion on leading principal minors.
bool is_positive_definite(const RationalMatrix& m);

/// Number of positive, negative and zero eigenvalues of a symmetric
/// rational matrix, from Descartes' rule on its characteristic polynomial
/// (exact because all roots are real).
struct Inertia {
  int positive = 0;
  int negative = 0;
  int zero = 0;
};
Inertia inertia(const RationalMatrix& symmetric);

inline constexpr double kRankThreshold = 1e-8;
inline constexpr double kUndecidedLow = 1e-10;

struct NumericRank {
  int rank = 0;
  /// Some relative singular value lies in [kUndecidedLow, kRankThreshold].
  bool undecided = false;
  std::vector<double> singular_values;
};

/// Rank counts singular values above kRankThreshold * sigma_max.
NumericRank numeric_rank(const RealMatrix& m);
/// Right singular vectors for the singular values below the threshold.
std::vector<std::vector<double>> numeric_kernel(const RealMatrix& m);
/// Eigenvalue counts of a symmetric matrix with the same relative threshold.
Inertia numeric_inertia(const RealMatrix& symmetric, bool* undecided = nullptr);

}  // namespace nsx
