#include <gtest/gtest.h>

#include <random>

#include "latgeo/psd.hpp"

using namespace latgeo;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

MatrixXd m2(double a, double b, double c, double d) {
  MatrixXd m(2, 2);
  m << a, b, c, d;
  return m;
}

MatrixXd diag(std::initializer_list<double> v) {
  VectorXd d(int(v.size()));
  int i = 0;
  for (double x : v) d(i++) = x;
  return d.asDiagonal();
}

Subspace line(std::initializer_list<double> v) {
  VectorXd d(int(v.size()));
  int i = 0;
  for (double x : v) d(i++) = x;
  return Subspace::span(d);
}

PsdMatrix random_psd(std::mt19937_64& rng, int n, int rank) {
  std::normal_distribution<double> g;
  MatrixXd f(n, rank);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < rank; ++j) f(i, j) = g(rng);
  return PsdMatrix(f * f.transpose());
}

Subspace random_subspace(std::mt19937_64& rng, int n, int d) {
  std::normal_distribution<double> g;
  MatrixXd f(n, d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < d; ++j) f(i, j) = g(rng);
  return Subspace::span(f);
}

void expect_near(const MatrixXd& a, const MatrixXd& b, double tol = 1e-10) {
  ASSERT_EQ(a.rows(), b.rows());
  EXPECT_LE((a - b).norm(), tol) << "got\n" << a << "\nexpected\n" << b;
}

}  // namespace

TEST(PseudoInverse, Examples) {
  expect_near(pseudo_inverse(PsdMatrix(diag({2, 0}))).matrix(), diag({0.5, 0}));
  expect_near(pseudo_inverse(PsdMatrix::identity(3)).matrix(), MatrixXd::Identity(3, 3));
  // Rank one: (vvᵀ)⁺ = vvᵀ/‖v‖⁴.
  VectorXd v(2);
  v << 1, 1;
  PsdMatrix x(v * v.transpose());
  MatrixXd p = pseudo_inverse(x).matrix();
  expect_near(p, v * v.transpose() / 4.0);
  expect_near(x.matrix() * p * x.matrix(), x.matrix());
}

TEST(PseudoInverse, PenroseConditions) {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 50; ++t) {
    const int n = 2 + t % 4;
    PsdMatrix x = random_psd(rng, n, 1 + t % n);
    MatrixXd p = pseudo_inverse(x).matrix();
    const double s = 1.0 + x.matrix().norm() * p.norm();
    expect_near(x.matrix() * p * x.matrix(), x.matrix(), 1e-8 * s * x.matrix().norm());
    expect_near(p * x.matrix() * p, p, 1e-8 * s * p.norm());
    expect_near(x.matrix() * p, (x.matrix() * p).transpose(), 1e-8 * s);
  }
}

TEST(MatProject, Examples) {
  expect_near(mat_project(PsdMatrix::identity(2), Subspace::coordinate(2, {0})).matrix(), diag({1, 0}));
  expect_near(mat_project(PsdMatrix(diag({1, 4, 9})), Subspace::coordinate(3, {1, 2})).matrix(), diag({0, 4, 9}));
  // With v = (1,1) unnormalized: π X π = (vᵀXv/‖v‖⁴)·vvᵀ = (3/2)·vvᵀ.
  MatrixXd v = MatrixXd::Constant(2, 1, 1.0);
  expect_near(mat_project(PsdMatrix(m2(2, 1, 1, 2)), line({1, 1})).matrix(), 1.5 * v * v.transpose());
}

TEST(MatSlice, Examples) {
  expect_near(mat_slice(PsdMatrix(m2(2, 1, 1, 2)), Subspace::coordinate(2, {0})).matrix(), diag({1.5, 0}));
  expect_near(mat_slice(PsdMatrix(diag({3, 7})), Subspace::coordinate(2, {0})).matrix(), diag({3, 0}));
  expect_near(mat_slice(PsdMatrix::identity(3), Subspace::coordinate(3, {0, 1})).matrix(), diag({1, 1, 0}));
}

// Property: yᵀX^{∩W}y = min over w ⊥ W of (y+w)ᵀX(y+w), evaluated by a linear solve.
TEST(MatSlice, VariationalCharacterization) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g;
  for (int t = 0; t < 40; ++t) {
    const int n = 2 + t % 4, d = 1 + t % (n - 1);
    PsdMatrix x = random_psd(rng, n, n);
    Subspace w = random_subspace(rng, n, d);
    MatrixXd c = w.complement().basis();
    VectorXd y = w.basis() * VectorXd::NullaryExpr(d, [&] { return g(rng); });
    // Minimize (y + Cz)ᵀX(y + Cz): CᵀXC z = −CᵀXy.
    VectorXd z = (c.transpose() * x.matrix() * c).ldlt().solve(-c.transpose() * x.matrix() * y);
    VectorXd best = y + c * z;
    const double want = best.dot(x.matrix() * best);
    const double got = y.dot(mat_slice(x, w).matrix() * y);
    EXPECT_NEAR(got, want, 1e-8 * (1 + std::abs(want)));
  }
}

TEST(ProjDet, Examples) {
  EXPECT_NEAR(proj_det(PsdMatrix(diag({1, 4, 9})), Subspace::coordinate(3, {0, 1})), 4.0, 1e-12);
  for (const auto& axes : std::vector<std::vector<int>>{{2}, {0, 3}, {0, 1, 3}})
    EXPECT_NEAR(proj_det(PsdMatrix::identity(4), Subspace::coordinate(4, axes)), 1.0, 1e-12);
  EXPECT_NEAR(proj_det(PsdMatrix(m2(2, 1, 1, 2)), line({1, 1})), 3.0, 1e-12);
}

TEST(ProjDet, ProductOfSliceAndProjection) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 40; ++t) {
    const int n = 3 + t % 3, d1 = 1 + t % 2;
    PsdMatrix x = random_psd(rng, n, n);
    Subspace w1 = random_subspace(rng, n, d1);
    Subspace w2 = w1.complement();
    const double lhs = proj_det(x, Subspace::full(n));
    const double rhs = proj_det(mat_slice(x, w1), w1) * proj_det(mat_project(x, w2), w2);
    EXPECT_NEAR(lhs, rhs, 1e-8 * lhs);
  }
}

TEST(ParallelSum, Examples) {
  expect_near(parallel_sum(PsdMatrix::identity(2), PsdMatrix::identity(2)).matrix(), 0.5 * MatrixXd::Identity(2, 2));
  expect_near(parallel_sum(PsdMatrix(diag({1, 0})), PsdMatrix(diag({0, 1}))).matrix(), MatrixXd::Zero(2, 2));
  expect_near(parallel_sum(PsdMatrix(diag({2, 2})), PsdMatrix(diag({2, 2}))).matrix(), diag({1, 1}));
}

TEST(ParallelSum, InvertibleMatchesHarmonicFormula) {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 30; ++t) {
    const int n = 2 + t % 3;
    MatrixXd x = random_psd(rng, n, n).matrix() + 0.1 * MatrixXd::Identity(n, n);
    MatrixXd y = random_psd(rng, n, n).matrix() + 0.1 * MatrixXd::Identity(n, n);
    MatrixXd want = (x.inverse() + y.inverse()).inverse();
    expect_near(parallel_sum(PsdMatrix(x), PsdMatrix(y)).matrix(), want, 1e-8 * (1 + want.norm()));
  }
}

TEST(Ellipsoid, Membership) {
  VectorXd y(2);
  y << 1, 0;
  EXPECT_TRUE(ellipsoid_contains(PsdMatrix::identity(2), y));
  // Acceptance is yᵀX⁺y ≤ 1 + 1e-9.
  y << 2, 0;
  EXPECT_TRUE(ellipsoid_contains(PsdMatrix(diag({4, 1})), y));
  y << 0, 1 + 1e-10;
  EXPECT_TRUE(ellipsoid_contains(PsdMatrix(diag({4, 1})), y));
  y << 0, 1.001;
  EXPECT_FALSE(ellipsoid_contains(PsdMatrix(diag({4, 1})), y));
  y << 0, 1.1;
  EXPECT_FALSE(ellipsoid_contains(PsdMatrix(diag({4, 1})), y));
  y << 0, 0.5;
  EXPECT_FALSE(ellipsoid_contains(PsdMatrix(diag({1, 0})), y));
}

TEST(GramSchmidt, Examples) {
  GramSchmidt a = gram_schmidt(MatrixXd::Identity(2, 2));
  expect_near(a.vectors, MatrixXd::Identity(2, 2));
  // Columns b₁ = (1,0), b₂ = (1,1).
  GramSchmidt b = gram_schmidt(m2(1, 1, 0, 1));
  expect_near(b.vectors, MatrixXd::Identity(2, 2));
  EXPECT_FALSE(b.singular);
  GramSchmidt c = gram_schmidt(m2(1, 2, 1, 2));
  EXPECT_TRUE(c.singular);
  EXPECT_NEAR(c.vectors.col(1).norm(), 0.0, 1e-12);
}

TEST(GramSchmidt, ExactMatchesFloating) {
  RatMatrix b(3, 3);
  const long v[3][3] = {{2, 1, 0}, {0, 3, 1}, {1, 1, 4}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) b(i, j) = v[i][j];
  ExactGramSchmidt e = gram_schmidt(b);
  GramSchmidt f = gram_schmidt(to_double(b));
  Rational prod = 1;
  for (int i = 0; i < 3; ++i) {
    EXPECT_NEAR(e.sq_norms[i].get_d(), f.sq_norms[i], 1e-12);
    prod *= e.sq_norms[i];
  }
  const Rational det = determinant(b);
  EXPECT_EQ(prod, det * det);
}

TEST(Subspace, LatticeOperations) {
  Subspace v = Subspace::coordinate(3, {0, 1}), w = Subspace::coordinate(3, {1, 2});
  EXPECT_TRUE(v.intersect(w).same_as(Subspace::coordinate(3, {1})));
  EXPECT_TRUE(v.sum(w).same_as(Subspace::full(3)));
  EXPECT_EQ(v.complement().dim(), 1);
  EXPECT_TRUE(v.contains(Subspace::coordinate(3, {0})));
  EXPECT_FALSE(v.contains(w));
}
