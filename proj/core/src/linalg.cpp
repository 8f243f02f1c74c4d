#include "rwnet/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/SVD>

#include "rwnet/error.hpp"

namespace rwnet::linalg {

void require_finite(const Matrix& a, const char* what) {
  if (!a.allFinite()) {
    throw ValidationError("linalg", std::string(what) + " contains NaN or infinite entries");
  }
}

LuFactorization::LuFactorization(const Matrix& a) {
  if (a.rows() != a.cols()) {
    throw ValidationError("linalg", "LU factorization needs a square matrix, got " +
                                        std::to_string(a.rows()) + "x" + std::to_string(a.cols()));
  }
  require_finite(a, "matrix");
  lu_.compute(a);
  const double scale = a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
  const double threshold = kPivotTolerance * scale;
  const auto& packed = lu_.matrixLU();
  for (Index k = 0; k < packed.rows(); ++k) {
    const double pivot = std::abs(packed(k, k));
    if (!(pivot > threshold)) {
      throw SingularMatrixError(static_cast<std::size_t>(k), "matrix is singular to working precision");
    }
  }
}

Matrix LuFactorization::solve(const Matrix& b) const {
  if (b.rows() != size()) {
    throw ValidationError("linalg", "right-hand side has " + std::to_string(b.rows()) +
                                        " rows, expected " + std::to_string(size()));
  }
  if (size() == 0) return Matrix(0, b.cols());
  return lu_.solve(b);
}

Vector LuFactorization::solve(const Vector& b) const {
  if (b.size() != size()) {
    throw ValidationError("linalg", "right-hand side has wrong length");
  }
  if (size() == 0) return Vector(0);
  return lu_.solve(b);
}

Matrix LuFactorization::inverse() const {
  if (size() == 0) return Matrix(0, 0);
  return lu_.inverse();
}

Matrix solve(const Matrix& a, const Matrix& b) {
  require_finite(b, "right-hand side");
  return LuFactorization(a).solve(b);
}

Matrix inverse(const Matrix& a) { return LuFactorization(a).inverse(); }

Matrix pinv(const Matrix& a) {
  require_finite(a, "matrix");
  if (a.size() == 0) return Matrix(a.cols(), a.rows());
  Eigen::BDCSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Vector& sigma = svd.singularValues();
  const double cutoff =
      sigma.size() == 0 ? 0.0
                        : sigma(0) * static_cast<double>(std::max(a.rows(), a.cols())) * kRankTolerance;
  Vector inv_sigma(sigma.size());
  for (Index i = 0; i < sigma.size(); ++i) {
    inv_sigma(i) = sigma(i) > cutoff ? 1.0 / sigma(i) : 0.0;
  }
  return svd.matrixV() * inv_sigma.asDiagonal() * svd.matrixU().transpose();
}

Matrix pinv_from_regular_inverse(const Matrix& c_inv, const Vector& u, const Vector& v) {
  const Index n = c_inv.rows();
  if (c_inv.cols() != n || u.size() != n || v.size() != n) {
    throw ValidationError("linalg", "pinv_from_regular_inverse: dimension mismatch");
  }
  const Vector x = c_inv * u;
  const Vector y = c_inv.transpose() * v;
  const double xx = x.squaredNorm();
  const double yy = y.squaredNorm();
  if (xx < 1e-14 || yy < 1e-14) {
    throw NumericalError("linalg", "degenerate rank: x'x or y'y below 1e-14");
  }
  // (I - x x'/x'x) C^{-1} (I - y y'/y'y) expanded so no n x n projector is formed.
  const Vector cy = c_inv * y;          // C^{-1} y
  const Vector xc = c_inv.transpose() * x;  // (x' C^{-1})'
  const double xcy = x.dot(cy);
  Matrix result = c_inv;
  result.noalias() -= (x / xx) * xc.transpose();
  result.noalias() -= cy * (y / yy).transpose();
  result.noalias() += (xcy / (xx * yy)) * x * y.transpose();
  return result;
}

Matrix gather(const Matrix& a, std::span<const Index> rows, std::span<const Index> cols) {
  Matrix out(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) {
      out(static_cast<Index>(i), static_cast<Index>(j)) = a(rows[i], cols[j]);
    }
  }
  return out;
}

std::vector<Index> complement(Index n, std::span<const Index> removed) {
  std::vector<char> gone(static_cast<std::size_t>(n), 0);
  for (Index r : removed) {
    if (r < 0 || r >= n) throw ValidationError("linalg", "index " + std::to_string(r) + " out of range");
    gone[static_cast<std::size_t>(r)] = 1;
  }
  std::vector<Index> kept;
  kept.reserve(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    if (!gone[static_cast<std::size_t>(i)]) kept.push_back(i);
  }
  return kept;
}

Matrix submatrix_inverse(const Matrix& m_inv, std::span<const Index> drop) {
  const Index n = m_inv.rows();
  if (m_inv.cols() != n) throw ValidationError("linalg", "submatrix_inverse needs a square matrix");
  if (drop.empty()) return m_inv;
  std::vector<Index> dropped(drop.begin(), drop.end());
  std::sort(dropped.begin(), dropped.end());
  if (std::adjacent_find(dropped.begin(), dropped.end()) != dropped.end()) {
    throw ValidationError("linalg", "submatrix_inverse: duplicate index in drop set");
  }
  const std::vector<Index> kept = complement(n, dropped);

  const Matrix w = gather(m_inv, dropped, dropped);
  const Matrix y = gather(m_inv, kept, dropped);
  const Matrix z = gather(m_inv, dropped, kept);
  Matrix x = gather(m_inv, kept, kept);
  x.noalias() -= y * LuFactorization(w).solve(z);
  return x;
}

}  // namespace rwnet::linalg
