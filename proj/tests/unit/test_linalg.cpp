#include <gtest/gtest.h>

#include <random>

#include "bridge.hpp"
#include "oracles.hpp"
#include "rwnet/error.hpp"
#include "rwnet/graph.hpp"
#include "rwnet/linalg.hpp"

namespace {

using rwnet::Index;
using rwnet::Matrix;
using rwnet::Vector;
namespace la = rwnet::linalg;

Matrix random_matrix(Index n, std::mt19937_64& rng, double diag_boost) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Matrix a(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) a(i, j) = u(rng);
    a(i, i) += diag_boost;
  }
  return a;
}

oracle::Dense to_dense(const Matrix& m) {
  oracle::Dense d(static_cast<std::size_t>(m.rows()), std::vector<double>(static_cast<std::size_t>(m.cols())));
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) d[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = m(i, j);
  }
  return d;
}

void expect_penrose(const Matrix& a, const Matrix& ap, double tol) {
  EXPECT_LE((a * ap * a - a).cwiseAbs().maxCoeff(), tol);
  EXPECT_LE((ap * a * ap - ap).cwiseAbs().maxCoeff(), tol);
  const Matrix aap = a * ap;
  const Matrix apa = ap * a;
  EXPECT_LE((aap - aap.transpose()).cwiseAbs().maxCoeff(), tol);
  EXPECT_LE((apa - apa.transpose()).cwiseAbs().maxCoeff(), tol);
}

TEST(Solve, IdentityReturnsRhs) {
  Matrix b(3, 2);
  b << 1, 2, 3, 4, 5, 6;
  EXPECT_EQ(la::solve(Matrix::Identity(3, 3), b), b);
}

TEST(Solve, Diagonal) {
  Matrix a(2, 2);
  a << 2, 0, 0, 4;
  Matrix b(2, 1);
  b << 2, 4;
  const Matrix x = la::solve(a, b);
  EXPECT_NEAR(x(0, 0), 1.0, 1e-15);
  EXPECT_NEAR(x(1, 0), 1.0, 1e-15);
}

TEST(Solve, ReconstructsKnownSolution) {
  std::mt19937_64 rng(7);
  const Matrix a = random_matrix(20, rng, 0.0);
  const Matrix x = random_matrix(20, rng, 0.0).leftCols(1);
  const Matrix got = la::solve(a, a * x);
  EXPECT_LE((got - x).cwiseAbs().maxCoeff(), 1e-9);
  const Matrix b = a * x;
  EXPECT_LE((a * got - b).cwiseAbs().maxCoeff(), 1e-9 * b.cwiseAbs().maxCoeff());
}

TEST(Solve, SingularCarriesPivot) {
  Matrix a(3, 3);
  a << 1, 2, 3, 2, 4, 6, 1, 0, 1;
  try {
    la::solve(a, Matrix::Identity(3, 3));
    FAIL() << "expected SingularMatrixError";
  } catch (const rwnet::SingularMatrixError& e) {
    EXPECT_EQ(e.module(), "linalg");
    EXPECT_LT(e.pivot(), 3u);
  }
}

TEST(Solve, RejectsNonFinite) {
  Matrix a = Matrix::Identity(2, 2);
  a(0, 1) = std::nan("");
  EXPECT_THROW(la::inverse(a), rwnet::ValidationError);
}

TEST(Inverse, Identity) { EXPECT_EQ(la::inverse(Matrix::Identity(4, 4)), Matrix::Identity(4, 4)); }

TEST(Inverse, PathTransientBlockByHand) {
  Matrix a(2, 2);
  a << 1, -1, -0.5, 1;
  Matrix want(2, 2);
  want << 2, 2, 1, 2;
  EXPECT_LE((la::inverse(a) - want).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Inverse, InvolutionAndAgreementWithOracle) {
  std::mt19937_64 rng(9);
  for (int rep = 0; rep < 5; ++rep) {
    const Matrix a = random_matrix(12, rng, 5.0);
    const Matrix inv = la::inverse(a);
    EXPECT_LE((la::inverse(inv) - a).cwiseAbs().maxCoeff(), 1e-8);
    EXPECT_LE(bridge::max_abs_diff(inv, *oracle::gauss_jordan_inverse(to_dense(a))), 1e-10);
    EXPECT_LE((a * inv - Matrix::Identity(12, 12)).cwiseAbs().maxCoeff(), 1e-8);
  }
}

TEST(Inverse, EmptyMatrix) { EXPECT_EQ(la::inverse(Matrix(0, 0)).size(), 0); }

TEST(Pinv, IdentityAndZero) {
  EXPECT_LE((la::pinv(Matrix::Identity(3, 3)) - Matrix::Identity(3, 3)).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_EQ(la::pinv(Matrix::Zero(3, 2)), Matrix::Zero(2, 3));
}

TEST(Pinv, RectangularPenrose) {
  std::mt19937_64 rng(4);
  // 6 x 5 of rank 3.
  const Matrix a = random_matrix(6, rng, 0.0).leftCols(3) * random_matrix(5, rng, 0.0).topRows(3);
  expect_penrose(a, la::pinv(a), 1e-8);
}

TEST(Pinv, PathDigraphLaplacianPenrose) {
  const auto g = bridge::to_graph({{0, 1, 0}, {1, 0, 1}, {0, 1, 0}}, false);
  const auto tm = rwnet::with_stationary(rwnet::transition_matrix(g));
  const Matrix l = tm.stationary->asDiagonal() * (Matrix::Identity(3, 3) - tm.p);
  expect_penrose(l, la::pinv(l), 1e-8);
}

TEST(PinvFromRegularInverse, DiagonalExample) {
  Vector e1 = Vector::Zero(4);
  e1(0) = 1.0;
  const Matrix a = Matrix::Identity(4, 4) - e1 * e1.transpose();
  EXPECT_LE((la::pinv_from_regular_inverse(Matrix::Identity(4, 4), e1, e1) - a).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(PinvFromRegularInverse, RandomRankDeficient) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int rep = 0; rep < 5; ++rep) {
    const Index n = 9;
    // A = C - u v' is singular exactly when v' C^{-1} u = 1.
    const Matrix c = random_matrix(n, rng, 4.0);
    const Matrix c_inv = la::inverse(c);
    Vector uu(n), v(n);
    for (Index i = 0; i < n; ++i) {
      uu(i) = u(rng);
      v(i) = u(rng);
    }
    v /= v.dot(c_inv * uu);
    const Matrix a = c - uu * v.transpose();
    const Matrix ap = la::pinv_from_regular_inverse(c_inv, uu, v);
    expect_penrose(a, ap, 1e-8);
    EXPECT_LE((ap - la::pinv(a)).cwiseAbs().maxCoeff(), 1e-8);
  }
}

TEST(PinvFromRegularInverse, DegenerateRank) {
  EXPECT_THROW(la::pinv_from_regular_inverse(Matrix::Identity(3, 3), Vector::Zero(3), Vector::Ones(3)),
               rwnet::NumericalError);
}

TEST(SubmatrixInverse, EmptyDropIsIdentityMap) {
  std::mt19937_64 rng(2);
  const Matrix m = random_matrix(5, rng, 3.0);
  EXPECT_EQ(la::submatrix_inverse(m, {}), m);
}

TEST(SubmatrixInverse, PathByHand) {
  Matrix f(2, 2);
  f << 2, 2, 1, 2;
  const Index drop[] = {1};
  const Matrix got = la::submatrix_inverse(f, drop);
  ASSERT_EQ(got.rows(), 1);
  EXPECT_NEAR(got(0, 0), 1.0, 1e-15);
}

TEST(SubmatrixInverse, MatchesReducedInverse) {
  std::mt19937_64 rng(5);
  for (int rep = 0; rep < 10; ++rep) {
    const Matrix m = random_matrix(10, rng, 4.0);
    std::vector<Index> drop{7, 2, 4};
    const Matrix got = la::submatrix_inverse(la::inverse(m), drop);
    const auto keep = la::complement(10, drop);
    const auto ref = oracle::gauss_jordan_inverse(to_dense(la::gather(m, keep, keep)));
    EXPECT_LE(bridge::max_abs_diff(got, *ref), 1e-8);
  }
}

TEST(SubmatrixInverse, RejectsDuplicates) {
  const Index drop[] = {1, 1};
  EXPECT_THROW(la::submatrix_inverse(Matrix::Identity(3, 3), drop), rwnet::ValidationError);
}

}  // namespace
