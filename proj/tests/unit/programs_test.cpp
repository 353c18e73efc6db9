#include <gtest/gtest.h>

#include <cmath>

#include "latgeo/eta_zoo.hpp"
#include "latgeo/families.hpp"
#include "latgeo/gaussian.hpp"
#include "latgeo/programs.hpp"
#include "latgeo/voronoi.hpp"

using namespace latgeo;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

double theta_direct(double a) {
  double s = 0.0;
  for (int k = -400; k <= 400; ++k) s += std::exp(-M_PI * a * k * k);
  return s;
}

// min a₁+a₂ over diagonal A with θ(a₁)·θ(a₂/M²) − 1 ≤ 1/2 (the dual of diag(1,M) is diag(1,1/M)).
double diagonal_oracle(double m) {
  auto a2_for = [&](double a1) {
    double lo = 1e-6, hi = 1e6;
    for (int i = 0; i < 200; ++i) {
      const double mid = std::sqrt(lo * hi);
      (theta_direct(a1) * theta_direct(mid / (m * m)) - 1 > 0.5 ? lo : hi) = mid;
    }
    return hi;
  };
  double a = 0.2, b = 5.0;
  const double g = (std::sqrt(5.0) - 1) / 2;
  auto f = [&](double a1) { return a1 + a2_for(a1); };
  for (int i = 0; i < 100; ++i) {
    const double c = b - g * (b - a), d = a + g * (b - a);
    if (f(c) < f(d))
      b = d;
    else
      a = c;
  }
  return f(0.5 * (a + b));
}

DualAtom atom(const Lattice& dual, const std::vector<int>& axes, const MatrixXd& x) {
  const int n = dual.rank();
  return {intersect_subspace(dual, Subspace::coordinate(n, axes)), PsdMatrix(x)};
}

}  // namespace

TEST(MuSm, IntegerLatticeIsSpherical) {
  for (int n = 1; n <= 3; ++n) {
    Lattice z = Lattice::integer(n);
    const double eta = smoothing_parameter(z, 0.5).eta;
    SmoothProgramSolution s = solve_mu_sm(z);
    EXPECT_TRUE(s.feasible);
    EXPECT_LE(s.constraint_value, 0.5 + 1e-9);
    EXPECT_NEAR(s.objective / (n * eta * eta), 1.0, 1e-4);
    EXPECT_LE((s.a.matrix() - eta * eta * MatrixXd::Identity(n, n)).norm(), 1e-2 * eta * eta);
  }
}

TEST(MuSm, RectangularMatchesDiagonalOracle) {
  Lattice l = Lattice::diagonal({1, 10});
  SmoothProgramSolution s = solve_mu_sm(l);
  const double want = diagonal_oracle(10);
  EXPECT_NEAR(s.objective / want, 1.0, 1e-4);
  EXPECT_NEAR(smooth_constraint(l, s.a.matrix()), 0.5, 1e-6);
}

TEST(MuSm, ScalesQuadratically) {
  Lattice l = FamilySpec::parse("kl:3").build();
  const double a = solve_mu_sm(l).objective;
  const double b = solve_mu_sm(l.scaled(Scale::rational(3))).objective;
  EXPECT_NEAR(b / (9 * a), 1.0, 1e-6);
}

// Property: the covering radius is at most (4/√π)·√tr A for the smooth-program output.
TEST(MuSm, BoundsCoveringRadius) {
  for (const char* spec : {"zn:2", "rect:1,3", "kl:3", "modp:3,10007,2"}) {
    Lattice l = FamilySpec::parse(spec).build();
    const double mu = covering_radius_exact(l).hi;
    EXPECT_LE(mu, 4 / std::sqrt(M_PI) * std::sqrt(solve_mu_sm(l).objective)) << spec;
  }
}

TEST(MuDet, IntegerLatticeOptimumIsIdentity) {
  for (int n = 1; n <= 4; ++n) {
    Lattice z = Lattice::integer(n);
    DetProgramSolution s = solve_mu_det(z, candidate_subspaces(z));
    EXPECT_NEAR(s.objective, double(n), 1e-4 * n);
    EXPECT_GE(det_feasibility(candidate_subspaces(z), s.a.matrix()), 1 - 1e-9);
  }
}

TEST(MuDet, RelationToSmoothProgram) {
  for (const char* spec : {"zn:3", "rect:1,2,5", "kl:4"}) {
    Lattice l = FamilySpec::parse(spec).build();
    SubspaceCandidates c = candidate_subspaces(l);
    DetProgramSolution d = solve_mu_det(l, c);
    SmoothProgramSolution s = solve_mu_sm(l);
    EXPECT_GE(d.objective, s.objective / 4 - 1e-8) << spec;
    EXPECT_GE(det_feasibility(c, 4 * s.a.matrix()), 1 - 1e-9) << spec;
  }
}

TEST(MuDet, ScalesQuadratically) {
  Lattice l = Lattice::diagonal({1, 3});
  Lattice s = l.scaled(Scale::rational(2));
  const double a = solve_mu_det(l, candidate_subspaces(l)).objective;
  const double b = solve_mu_det(s, candidate_subspaces(s)).objective;
  EXPECT_NEAR(b / (4 * a), 1.0, 1e-6);
}

TEST(DualObjective, Examples) {
  for (int n = 1; n <= 4; ++n) {
    Lattice d = Lattice::integer(n).dual();
    DualSolution sol;
    sol.atoms.push_back({full_subspace(d), PsdMatrix::identity(n)});
    EXPECT_NEAR(dual_objective(Lattice::integer(n), sol), double(n), 1e-12);
  }
  Lattice z2 = Lattice::integer(2);
  DualSolution two;
  MatrixXd e1 = MatrixXd::Zero(2, 2), e2 = MatrixXd::Zero(2, 2);
  e1(0, 0) = 1;
  e2(1, 1) = 1;
  two.atoms.push_back(atom(z2.dual(), {0}, e1));
  two.atoms.push_back(atom(z2.dual(), {1}, e2));
  EXPECT_NEAR(dual_objective(z2, two), 2.0, 1e-12);
  EXPECT_TRUE(dual_feasible(two));
  EXPECT_NEAR(dual_load(two), 1.0, 1e-12);
}

TEST(DualObjective, RangeMismatchThrows) {
  Lattice z2 = Lattice::integer(2);
  MatrixXd e2 = MatrixXd::Zero(2, 2);
  e2(1, 1) = 1;
  DualSolution bad;
  bad.atoms.push_back(atom(z2.dual(), {0}, e2));
  EXPECT_ANY_THROW(dual_objective(z2, bad));
}

// Property: weak duality, dual objective ≤ primal trace.
TEST(DualObjective, WeakDuality) {
  for (const char* spec : {"zn:3", "rect:1,2,5", "kl:4", "modp:3,10007,5", "modp:4,1000003,2"}) {
    Lattice l = FamilySpec::parse(spec).build();
    DetProgramSolution p = solve_mu_det(l, candidate_subspaces(l));
    DualSolution d = dual_from_primal(l, p);
    EXPECT_TRUE(dual_feasible(d)) << spec;
    EXPECT_LE(dual_objective(l, d), p.objective + 1e-8) << spec;
  }
}

TEST(DualJson, RoundTrip) {
  Lattice l = FamilySpec::parse("rect:1,2").build();
  DualSolution d = dual_from_primal(l, solve_mu_det(l, candidate_subspaces(l)));
  DualSolution back = dual_from_json(l, dual_to_json(d));
  ASSERT_EQ(back.atoms.size(), d.atoms.size());
  EXPECT_NEAR(dual_objective(l, back), dual_objective(l, d), 1e-12);
}
