#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "latgeo/lattice.hpp"

using namespace latgeo;
using Eigen::MatrixXd;

namespace {

// Columns are basis vectors.
Lattice basis2(long a, long b, long c, long d) {
  RatMatrix m(2, 2);
  m(0, 0) = a;
  m(0, 1) = b;
  m(1, 0) = c;
  m(1, 1) = d;
  return Lattice::from_basis(m);
}

IntMatrix column(std::initializer_list<long> v) {
  IntMatrix m(int(v.size()), 1);
  int i = 0;
  for (long x : v) m(i++, 0) = x;
  return m;
}

Lattice random_lattice(std::mt19937_64& rng, int n) {
  std::uniform_int_distribution<int> d(-2, 2);
  while (true) {
    RatMatrix b(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) b(i, j) = Rational(d(rng), 1 + (i + j) % 2);
    if (determinant(b) != 0) return Lattice::from_basis(b);
  }
}

}  // namespace

TEST(Lattice, DeterminantExamples) {
  EXPECT_EQ(*Lattice::diagonal({2, 3}).det_squared(), Rational(36));
  EXPECT_NEAR(Lattice::diagonal({2, 3}).det(), 6.0, 1e-12);
  EXPECT_EQ(*basis2(1, 1, 0, 1).det_squared(), Rational(1));
  MatrixXd a = MatrixXd::Identity(2, 2);
  a(1, 1) = 1 / std::sqrt(2.0);
  EXPECT_NEAR(Lattice::integer(2).transformed(a).det(), 1 / std::sqrt(2.0), 1e-12);
}

TEST(Lattice, DualExamples) {
  EXPECT_TRUE(same_lattice(Lattice::integer(3).dual(), Lattice::integer(3)));
  EXPECT_TRUE(same_lattice(Lattice::diagonal({2, 3}).dual(), Lattice::diagonal({Rational(1, 2), Rational(1, 3)})));
  Lattice l = basis2(2, 1, 0, 1);
  EXPECT_EQ(*l.dual().det_squared(), Rational(1, 4));
}

// Properties: det Λ* = 1/det Λ, Λ** = Λ, and BᵀD = I.
TEST(Lattice, DualInvariants) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 30; ++t) {
    Lattice l = random_lattice(rng, 1 + t % 4);
    Lattice d = l.dual();
    EXPECT_EQ(*l.det_squared() * *d.det_squared(), Rational(1));
    EXPECT_TRUE(same_lattice(d.dual(), l));
    MatrixXd g = l.basis().transpose() * d.basis();
    EXPECT_LE((g - MatrixXd::Identity(l.rank(), l.rank())).norm(), 1e-9);
  }
}

TEST(Lattice, DirectSum) {
  EXPECT_TRUE(same_lattice(direct_sum(Lattice::integer(1), Lattice::integer(1)), Lattice::integer(2)));
  EXPECT_NEAR(direct_sum(Lattice::diagonal({2}), Lattice::diagonal({3})).det(), 6.0, 1e-12);
}

TEST(Lattice, RebasedIsSameLattice) {
  IntMatrix u = IntMatrix::identity(2);
  u(0, 1) = 3;
  Lattice l = basis2(2, 1, 0, 1);
  EXPECT_TRUE(same_lattice(l.rebased(u), l));
}

TEST(Lattice, ScalingIsExact) {
  Lattice l = Lattice::integer(2).scaled(Scale::root(2, Rational(1, 2)));
  ASSERT_TRUE(l.det_squared());
  EXPECT_EQ(*l.det_squared(), Rational(4));
}

TEST(LatticeSubspace, SublatticeExamples) {
  Lattice z3 = Lattice::integer(3);
  LatticeSubspace w = intersect_subspace(z3, Subspace::coordinate(3, {0, 1}));
  EXPECT_EQ(w.dim, 2);
  EXPECT_NEAR(w.det, 1.0, 1e-12);
  Lattice sub = sublattice(z3, w);
  EXPECT_EQ(sub.rank(), 2);
  EXPECT_NEAR(sub.det(), 1.0, 1e-12);

  // ℤ² ∩ span(1,2) is generated by (1,2).
  LatticeSubspace line = make_lattice_subspace(Lattice::integer(2), column({2, 4}));
  EXPECT_EQ(*line.det_squared, Rational(5));
  EXPECT_EQ(line.generators(0, 0) * line.generators(0, 0), 1);

  LatticeSubspace e2 = intersect_subspace(Lattice::diagonal({2, 3}), Subspace::coordinate(2, {1}));
  EXPECT_NEAR(e2.det, 3.0, 1e-12);
}

TEST(LatticeSubspace, NotSpannedByLatticeVectors) {
  // Rank-one lattice on the first axis; the second axis holds no lattice vector.
  RatMatrix b(2, 1);
  b(0, 0) = 1;
  EXPECT_THROW(intersect_subspace(Lattice::from_basis(b), Subspace::coordinate(2, {1})), NotLatticeSubspace);
  EXPECT_THROW(intersect_subspace(Lattice::from_basis(b), Subspace::full(2)), NotLatticeSubspace);
}

TEST(LatticeSubspace, ModularIdentity) {
  // dim(V∩W) + dim(V+W) = dim V + dim W for lattice subspaces.
  Lattice z4 = Lattice::integer(4);
  LatticeSubspace v = intersect_subspace(z4, Subspace::coordinate(4, {0, 1, 2}));
  IntMatrix g(4, 2);
  g(0, 0) = 1;
  g(3, 0) = 1;
  g(1, 1) = 1;
  LatticeSubspace w = make_lattice_subspace(z4, g);
  LatticeSubspace meet = subspace_intersection(z4, v, w), join = subspace_sum(z4, v, w);
  EXPECT_EQ(meet.dim + join.dim, v.dim + w.dim);
  EXPECT_TRUE(subspace_contains(v, meet));
  EXPECT_TRUE(subspace_contains(join, w));
  EXPECT_FALSE(subspace_contains(v, w));
}

TEST(Projection, Examples) {
  Lattice z2 = Lattice::integer(2);
  Lattice p = project_lattice(z2, intersect_subspace(z2.dual(), Subspace::coordinate(2, {0})));
  EXPECT_EQ(p.rank(), 1);
  EXPECT_NEAR(p.det(), 1.0, 1e-12);

  Lattice d23 = Lattice::diagonal({2, 3});
  Lattice q = project_lattice(d23, intersect_subspace(d23.dual(), Subspace::coordinate(2, {0})));
  EXPECT_NEAR(q.det(), 2.0, 1e-12);
}

// Property: det(π_W Λ)·det(Λ* ∩ W) = 1.
TEST(Projection, DeterminantDuality) {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 30; ++t) {
    const int n = 2 + t % 3;
    Lattice l = random_lattice(rng, n);
    Lattice d = l.dual();
    IntMatrix c(n, 1);
    std::uniform_int_distribution<int> u(-2, 2);
    for (int i = 0; i < n; ++i) c(i, 0) = u(rng);
    bool zero = true;
    for (int i = 0; i < n; ++i) zero = zero && c(i, 0) == 0;
    if (zero) c(0, 0) = 1;
    LatticeSubspace w = make_lattice_subspace(d, c);
    Lattice p = project_lattice(l, w);
    EXPECT_NEAR(p.det() * w.det, 1.0, 1e-9);
  }
}

TEST(BasisIo, RoundTrip) {
  std::istringstream in("# comment\n2 2\n1 1/2\n0 3/2\n");
  Lattice l = read_basis(in);
  EXPECT_EQ(*l.det_squared(), Rational(9, 4));
  std::istringstream again(write_basis(l));
  EXPECT_TRUE(same_lattice(read_basis(again), l));
}

TEST(BasisIo, ErrorsCarryLineNumbers) {
  auto line_of = [](const std::string& text) {
    std::istringstream in(text);
    try {
      read_basis(in);
    } catch (const ParseError& e) {
      return e.line();
    }
    return -1;
  };
  EXPECT_EQ(line_of("2 2\n1 0\n0 1/0\n"), 3);
  EXPECT_EQ(line_of("2 2\n1 0 4\n0 1\n"), 2);
  EXPECT_EQ(line_of("2 2\n1 0\n"), 3);
  EXPECT_EQ(line_of("2 2\n1 2\n2 4\n"), 3);  // dependent columns
  EXPECT_EQ(line_of("x\n"), 1);
}
