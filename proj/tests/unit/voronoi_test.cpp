#include <gtest/gtest.h>

#include <random>

#include "latgeo/voronoi.hpp"

using namespace latgeo;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

Lattice hexagonal() {
  MatrixXd b(2, 2);
  b << 1, 0.5, 0, std::sqrt(3.0) / 2;
  return Lattice::from_real_basis(b);
}

// Coset minima of Λ/2Λ by brute force: v is strictly relevant iff ±v are the only minima of its coset.
int brute_strict_relevant(const Lattice& l, int box) {
  const int n = l.rank();
  int count = 0;
  for (int mask = 1; mask < (1 << n); ++mask) {
    double best = 1e18;
    int ties = 0;
    std::vector<long> y(n, -box);
    while (true) {
      bool in_coset = true;
      for (int i = 0; i < n; ++i) in_coset = in_coset && (((y[i] % 2) + 2) % 2 == ((mask >> i) & 1));
      if (in_coset) {
        const double q = l.point(y).squaredNorm();
        if (q < best - 1e-9) {
          best = q;
          ties = 1;
        } else if (q < best + 1e-9) {
          ++ties;
        }
      }
      int i = 0;
      while (i < n && y[i] == box) y[i++] = -box;
      if (i == n) break;
      ++y[i];
    }
    if (ties == 2) count += 2;
  }
  return count;
}

}  // namespace

TEST(Relevant, Examples) {
  RelevantVectors z2 = voronoi_relevant_vectors(Lattice::integer(2));
  int strict = 0;
  for (bool s : z2.strict) strict += s;
  EXPECT_EQ(strict, 4);
  for (const auto& f : z2.facets()) EXPECT_NEAR(f.norm2, 1.0, 1e-12);

  RelevantVectors two = voronoi_relevant_vectors(Lattice::diagonal({2}));
  ASSERT_EQ(two.facets().size(), 2u);
  EXPECT_NEAR(two.facets()[0].norm2, 4.0, 1e-12);

  RelevantVectors hex = voronoi_relevant_vectors(hexagonal());
  ASSERT_EQ(hex.facets().size(), 6u);
  for (const auto& f : hex.facets()) EXPECT_NEAR(f.norm2, 1.0, 1e-12);
}

TEST(Relevant, StrictCountMatchesCosetMinima) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-0.4, 0.4);
  for (int t = 0; t < 10; ++t) {
    const int n = 2 + t % 2;
    MatrixXd b = MatrixXd::Identity(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) b(i, j) += u(rng);
    Lattice l = Lattice::from_real_basis(b);
    RelevantVectors r = voronoi_relevant_vectors(l);
    EXPECT_EQ(int(r.facets().size()), brute_strict_relevant(l, 4));
  }
}

TEST(CoveringRadius, ExactExamples) {
  for (int n = 1; n <= 4; ++n) {
    CoveringRadius c = covering_radius_exact(Lattice::integer(n));
    ASSERT_TRUE(c.exact);
    ASSERT_TRUE(c.mu_squared);
    Rational want(n, 4);
    want.canonicalize();
    EXPECT_EQ(*c.mu_squared, want);
    EXPECT_NEAR(c.hi, std::sqrt(double(n)) / 2, 1e-12);
  }
  CoveringRadius r = covering_radius_exact(Lattice::diagonal({1, 10}));
  EXPECT_NEAR(r.hi, std::sqrt(101.0) / 2, 1e-12);
  // Hexagonal: the deep hole sits at circumradius 1/√3.
  EXPECT_NEAR(covering_radius_exact(hexagonal()).hi, 1 / std::sqrt(3.0), 1e-9);
}

// Property: no sampled point is farther from the lattice than μ.
TEST(CoveringRadius, DominatesSampledDistances) {
  Lattice l = hexagonal();
  const double mu = covering_radius_exact(l).hi;
  for (double d : sample_coset_distances(l, 2000, 3)) EXPECT_LE(d, mu + 1e-12);
}

TEST(CoveringRadius, BracketContainsExact) {
  CoveringRadius b = covering_radius_bracket(Lattice::integer(3), 10000, 4);
  EXPECT_LE(b.lo, std::sqrt(3.0) / 2 + 1e-12);
  EXPECT_GE(b.hi, std::sqrt(3.0) / 2 - 1e-12);
}

TEST(AvgMu, ClosedForms) {
  AvgMu a = avg_mu(Lattice::integer(1), 20000, 5);
  EXPECT_NEAR(a.estimate, 1.0 / 12, 3 * a.stderr_);
  AvgMu b = avg_mu(Lattice::integer(2), 20000, 6);
  EXPECT_NEAR(b.estimate, 1.0 / 6, 3 * b.stderr_);
  AvgMu c = avg_mu(Lattice::diagonal({3}), 20000, 5);
  EXPECT_NEAR(c.estimate, 9.0 / 12, 3 * c.stderr_);
}

TEST(CoveringRadius, OrthogonalBasisDetection) {
  EXPECT_TRUE(has_orthogonal_basis(Lattice::diagonal({1, 3})));
  EXPECT_FALSE(has_orthogonal_basis(hexagonal()));
}
