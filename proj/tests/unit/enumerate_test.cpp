#include <gtest/gtest.h>

#include <random>

#include "latgeo/enumerate.hpp"

using namespace latgeo;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

Lattice basis2(double a, double b, double c, double d) {
  MatrixXd m(2, 2);
  m << a, b, c, d;
  return Lattice::from_real_basis(m);
}

// Every integer combination with |z_i| ≤ box.
template <class F>
void for_box(int n, int box, F&& f) {
  std::vector<long> z(n, -box);
  while (true) {
    f(z);
    int i = 0;
    while (i < n && z[i] == box) z[i++] = -box;
    if (i == n) return;
    ++z[i];
  }
}

VectorXd vec(std::initializer_list<double> v) {
  VectorXd x(int(v.size()));
  int i = 0;
  for (double a : v) x(i++) = a;
  return x;
}

}  // namespace

TEST(Enumerate, Examples) {
  EXPECT_EQ(enumerate_points(Lattice::integer(2), 1.0).points.size(), 5u);
  EXPECT_EQ(enumerate_points(Lattice::integer(2), 1.5).points.size(), 9u);
  PointList p = enumerate_points(Lattice::diagonal({1, 3}), 2.0);
  EXPECT_EQ(p.points.size(), 5u);
  for (const auto& q : p.points) EXPECT_EQ(q.coords[1], 0);
}

// Property: the count matches a brute-force box scan, points are sorted and include 0.
TEST(Enumerate, MatchesBruteForce) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int t = 0; t < 20; ++t) {
    const int n = 2 + t % 2;
    MatrixXd b = MatrixXd::Identity(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) b(i, j) += 0.4 * u(rng);
    Lattice l = Lattice::from_real_basis(b);
    const double r = 1.7;
    std::size_t want = 0;
    for_box(n, 8, [&](const std::vector<long>& z) {
      if (l.point(z).norm() <= r) ++want;
    });
    PointList got = enumerate_points(l, r);
    EXPECT_TRUE(got.complete);
    EXPECT_EQ(got.points.size(), want);
    for (std::size_t i = 1; i < got.points.size(); ++i) EXPECT_LE(got.points[i - 1].norm2, got.points[i].norm2 + 1e-12);
    EXPECT_NEAR(got.points.front().norm2, 0.0, 1e-15);
  }
}

TEST(Enumerate, BudgetIsReported) {
  EXPECT_THROW(enumerate_points(Lattice::integer(4), 5.0, 100), BudgetExceeded);
}

TEST(Cvp, Examples) {
  CvpResult a = cvp(Lattice::integer(2), vec({0.4, 2.7}));
  EXPECT_EQ(a.coords, (IntVec{0, 3}));
  EXPECT_NEAR(a.dist, 0.5, 1e-12);
  EXPECT_NEAR(cvp(Lattice::integer(2), vec({0.5, 0})).dist, 0.5, 1e-12);

  Lattice l = basis2(1, 1, 0, 1);
  VectorXd t = vec({0.6, 0.6});
  double best = 1e9;
  for_box(2, 3, [&](const std::vector<long>& z) { best = std::min(best, (l.point(z) - t).norm()); });
  EXPECT_NEAR(cvp(l, t).dist, best, 1e-12);
}

TEST(Cvp, RandomTargetsMatchBruteForce) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-2, 2);
  Lattice l = basis2(1, 0.3, 0.2, 1.1);
  for (int t = 0; t < 50; ++t) {
    VectorXd x = vec({u(rng), u(rng)});
    double best = 1e9;
    for_box(2, 6, [&](const std::vector<long>& z) { best = std::min(best, (l.point(z) - x).norm()); });
    EXPECT_NEAR(cvp(l, x).dist, best, 1e-12);
  }
}

TEST(Babai, Examples) {
  CvpResult a = babai_nearest_plane(Lattice::integer(3), vec({0.2, -1.7, 2.4}));
  EXPECT_EQ(a.coords, (IntVec{0, -2, 2}));
  CvpResult b = babai_nearest_plane(basis2(1, 1, 0, 1), vec({2, 1}));
  EXPECT_NEAR(b.dist, 0.0, 1e-12);
  // Columns b₁ = (1,0), b₂ = (0.5,0.5): distance ≤ ½√(‖b̃₁‖²+‖b̃₂‖²).
  Lattice kl = basis2(1, 0.5, 0, 0.5);
  CvpResult c = babai_nearest_plane(kl, vec({0.3, 0.3}));
  EXPECT_LE(c.dist, 0.5 * std::sqrt(1 + 0.25) + 1e-12);
  EXPECT_GE(c.dist, cvp(kl, vec({0.3, 0.3})).dist - 1e-12);
}

TEST(SuccessiveMinima, Examples) {
  for (double x : successive_minima(Lattice::integer(4))) EXPECT_NEAR(x, 1.0, 1e-12);
  auto m = successive_minima(Lattice::diagonal({1, 3}));
  EXPECT_NEAR(m[0], 1.0, 1e-12);
  EXPECT_NEAR(m[1], 3.0, 1e-12);
  const int n = 4;
  MatrixXd b = MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) b(i, i) = 1 / std::sqrt(double(i + 1));
  auto k = successive_minima(Lattice::from_real_basis(b));
  for (int i = 0; i < n; ++i) EXPECT_NEAR(k[i], 1 / std::sqrt(double(n - i)), 1e-12);
}

TEST(BallVolume, ClosedForms) {
  EXPECT_NEAR(ball_volume(0, 3.0), 1.0, 1e-15);
  EXPECT_NEAR(ball_volume(1, 2.0), 4.0, 1e-14);
  EXPECT_NEAR(ball_volume(2, 1.0), M_PI, 1e-14);
  EXPECT_NEAR(ball_volume(3, 1.0), 4 * M_PI / 3, 1e-14);
}

TEST(Lll, ReducedBasisSpansSameLattice) {
  MatrixXd b(2, 2);
  b << 1, 100, 0, 1;
  LllResult r = lll_reduce(b);
  EXPECT_NEAR(std::abs(r.transform.cast<double>().determinant()), 1.0, 1e-12);
  EXPECT_LE((b * r.transform.cast<double>() - r.basis).norm(), 1e-9);
  EXPECT_NEAR(r.basis.colwise().norm().minCoeff(), 1.0, 1e-12);
}
