#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>
#include <Eigen/LU>

namespace rwnet {

using Index = Eigen::Index;
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

namespace linalg {

// Relative pivot threshold for LU: a pivot below kPivotTolerance * max|a_ij|
// is treated as a zero pivot.
inline constexpr double kPivotTolerance = 1e-13;
// Singular values below kRankTolerance * sigma_max * max(rows, cols) are dropped.
inline constexpr double kRankTolerance = 1e-13;

// Throws ValidationError if any entry is NaN or infinite.
void require_finite(const Matrix& a, const char* what);

/// Partial-pivot LU factorization of a square matrix.
///
/// Construction throws SingularMatrixError carrying the index of the first
/// pivot that falls below the relative tolerance.
class LuFactorization {
 public:
  explicit LuFactorization(const Matrix& a);

  Index size() const { return lu_.rows(); }
  Matrix solve(const Matrix& b) const;
  Vector solve(const Vector& b) const;
  Matrix inverse() const;

 private:
  Eigen::PartialPivLU<Matrix> lu_;
};

Matrix solve(const Matrix& a, const Matrix& b);
Matrix inverse(const Matrix& a);

// Moore-Penrose pseudo-inverse via SVD.
Matrix pinv(const Matrix& a);

/// Pseudo-inverse of the singular matrix A = C - u v' from C^{-1}:
///   A+ = (I - x x'/x'x) C^{-1} (I - y y'/y'y),  x = C^{-1} u,  y' = v' C^{-1}.
/// Needs only the regular inverse of C. Throws NumericalError when x'x or
/// y'y underflows (A does not have the assumed rank).
Matrix pinv_from_regular_inverse(const Matrix& c_inv, const Vector& u, const Vector& v);

/// Given M^{-1}, returns the inverse of M with the `drop` rows and columns
/// removed (kept indices in increasing order), using X - Y W^{-1} Z where W is
/// the dropped block of M^{-1}. Throws SingularMatrixError when W is singular.
Matrix submatrix_inverse(const Matrix& m_inv, std::span<const Index> drop);

// Sub-block a[rows, cols].
Matrix gather(const Matrix& a, std::span<const Index> rows, std::span<const Index> cols);

// Indices 0..n-1 not present in `removed` (which need not be sorted).
std::vector<Index> complement(Index n, std::span<const Index> removed);

}  // namespace linalg
}  // namespace rwnet
