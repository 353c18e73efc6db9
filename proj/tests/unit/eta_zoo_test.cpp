#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "latgeo/families.hpp"
#include "latgeo/eta_zoo.hpp"
#include "latgeo/gaussian.hpp"

using namespace latgeo;
using Eigen::MatrixXd;

namespace {

bool has_subspace(const SubspaceCandidates& c, const Subspace& w) {
  for (const auto& cand : c.list)
    if (cand.w.span.same_as(w)) return true;
  return false;
}

// Minimal determinant of k-dimensional saturated sublattices spanned by coordinate vectors in a box.
double brute_min_det(const Lattice& l, int k, int box) {
  const int n = l.rank();
  std::vector<std::vector<long>> vs;
  std::vector<long> z(n, -box);
  while (true) {
    bool zero = true;
    for (long x : z) zero = zero && x == 0;
    if (!zero) vs.push_back(z);
    int i = 0;
    while (i < n && z[i] == box) z[i++] = -box;
    if (i == n) break;
    ++z[i];
  }
  double best = 1e300;
  std::vector<int> idx(k);
  std::function<void(int, int)> rec = [&](int depth, int from) {
    if (depth == k) {
      IntMatrix g(n, k);
      for (int j = 0; j < k; ++j)
        for (int i = 0; i < n; ++i) g(i, j) = vs[idx[j]][i];
      if (rank(to_rational(g)) < k) return;
      best = std::min(best, make_lattice_subspace(l, g).det);
      return;
    }
    for (int a = from; a < int(vs.size()); ++a) {
      idx[depth] = a;
      rec(depth + 1, a + 1);
    }
  };
  rec(0, 0);
  return best;
}

// 1-dim oracle: sup_x log(Σ_k e^{−πk²/x})/x by golden section, then the square root.
double rho_circ_z1() {
  auto f = [](double x) {
    double s = 0.0;
    for (int k = -200; k <= 200; ++k) s += std::exp(-M_PI * k * k / x);
    return std::log(s) / x;
  };
  double a = 0.05, b = 20.0;
  const double g = (std::sqrt(5.0) - 1) / 2;
  for (int i = 0; i < 200; ++i) {
    const double c = b - g * (b - a), d = a + g * (b - a);
    (f(c) > f(d) ? b : a) = (f(c) > f(d) ? d : c);
  }
  return std::sqrt(f(0.5 * (a + b)));
}

}  // namespace

TEST(Candidates, Examples) {
  SubspaceCandidates z2 = candidate_subspaces(Lattice::integer(2));
  EXPECT_TRUE(has_subspace(z2, Subspace::coordinate(2, {0})));
  EXPECT_TRUE(has_subspace(z2, Subspace::coordinate(2, {1})));
  EXPECT_TRUE(has_subspace(z2, Subspace::full(2)));
  EXPECT_TRUE(z2.all_exhaustive());

  SubspaceCandidates d = candidate_subspaces(Lattice::diagonal({1, 3}));
  EXPECT_TRUE(has_subspace(d, Subspace::coordinate(2, {1})));
  EXPECT_NEAR(d.min_det[1], 1.0 / 3, 1e-12);
}

TEST(Candidates, DirectSumContainsBlockSums) {
  Lattice a = Lattice::diagonal({1, 2}), b = Lattice::diagonal({3});
  SubspaceCandidates c = candidate_subspaces(direct_sum(a, b));
  EXPECT_TRUE(has_subspace(c, Subspace::coordinate(3, {0, 1})));
  EXPECT_TRUE(has_subspace(c, Subspace::coordinate(3, {2})));
}

// Property: when flagged exhaustive, the recorded minimum determinant per dimension
// matches a brute-force scan over small coordinate vectors.
TEST(Candidates, MinimalDeterminantsMatchBruteForce) {
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<int> u(-2, 2);
  for (int t = 0; t < 4; ++t) {
    RatMatrix b(3, 3);
    do {
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) b(i, j) = u(rng) + (i == j ? 3 : 0);
    } while (determinant(b) == 0);
    Lattice l = Lattice::from_basis(b);
    SubspaceCandidates c = lattice_subspaces(l);
    for (int k = 1; k <= 2; ++k) {
      ASSERT_TRUE(c.exhaustive[k]);
      EXPECT_NEAR(c.min_det[k], brute_min_det(l, k, 2), 1e-9 * c.min_det[k]) << "trial " << t << " dim " << k;
    }
  }
}

TEST(EtaDet, Examples) {
  for (int n = 1; n <= 4; ++n) {
    Lattice z = Lattice::integer(n);
    EtaEstimate e = eta_det(z, candidate_subspaces(z));
    EXPECT_NEAR(e.value, 1.0, 1e-12);
    EXPECT_FALSE(e.lower_bound_only);
  }
  Lattice l = Lattice::diagonal({Rational(1, 2), 3});
  EXPECT_NEAR(eta_det(l, candidate_subspaces(l)).value, 3.0, 1e-12);
  Lattice c = l.scaled(Scale::rational(Rational(5, 2)));
  EXPECT_NEAR(eta_det(c, candidate_subspaces(c)).value, 7.5, 1e-12);
}

TEST(EtaRho, OrderingAndScaling) {
  for (int n = 1; n <= 3; ++n) {
    Lattice z = Lattice::integer(n);
    SubspaceCandidates c = candidate_subspaces(z);
    const double r = eta_rho(z, c).value;
    EXPECT_LE(eta_det(z, c).value, 8 * r);
    EXPECT_LE(r, smoothing_parameter(z, 0.5).eta);
    Lattice s = z.scaled(Scale::rational(3));
    EXPECT_NEAR(eta_rho(s, candidate_subspaces(s)).value / (3 * r), 1.0, 1e-6);
  }
}

TEST(EtaMu, Examples) {
  for (int n = 1; n <= 3; ++n) {
    Lattice z = Lattice::integer(n);
    EXPECT_NEAR(eta_mu(z, candidate_subspaces(z)).value, 0.5, 1e-9);
  }
  Lattice d = Lattice::diagonal({1, 10});
  EXPECT_NEAR(eta_mu(d, candidate_subspaces(d)).value, 5.0, 1e-9);
  Lattice s = d.scaled(Scale::rational(Rational(1, 2)));
  EXPECT_NEAR(eta_mu(s, candidate_subspaces(s)).value, 2.5, 1e-9);
}

TEST(EtaRhoCirc, IntegerLineMatchesLineSearch) {
  Lattice z = Lattice::integer(1);
  SubspaceCandidates c = candidate_subspaces(z);
  EtaEstimate e = eta_rho_circ(z, c);
  EXPECT_NEAR(e.value, rho_circ_z1(), 1e-6);
  EXPECT_GE(e.value, eta_rho(z, c).value - 1e-9);
  Lattice s = z.scaled(Scale::rational(2));
  EXPECT_NEAR(eta_rho_circ(s, candidate_subspaces(s)).value, 2 * e.value, 1e-6);
}

TEST(EtaRhoCirc, DominatesSubspaceValue) {
  for (const char* spec : {"zn:2", "rect:1,3", "kl:3"}) {
    Lattice l = FamilySpec::parse(spec).build();
    SubspaceCandidates c = candidate_subspaces(l);
    EXPECT_GE(eta_rho_circ(l, c).value, eta_rho(l, c).value - 1e-9) << spec;
  }
}

TEST(EtaMuCirc, Examples) {
  Lattice z = Lattice::integer(2);
  EXPECT_NEAR(eta_mu_circ_value(z, MatrixXd::Identity(2, 2)), 0.5, 1e-9);
  for (const char* spec : {"zn:2", "rect:1,3"}) {
    Lattice l = FamilySpec::parse(spec).build();
    SubspaceCandidates c = candidate_subspaces(l);
    CircOptions opt;
    EXPECT_GE(eta_mu_circ(l, c, opt).value, eta_mu(l, c).value - 1e-9) << spec;
  }
}

TEST(Sandwich, IntegerAndRectangularRowsPass) {
  for (const char* spec : {"zn:1", "zn:2", "zn:3", "rect:1,2,5"}) {
    Lattice l = FamilySpec::parse(spec).build();
    EtaZoo zoo = compute_eta_zoo(l);
    for (const auto& row : sandwich_report(l, zoo)) EXPECT_TRUE(row.pass) << spec << ": " << row.name;
  }
}
