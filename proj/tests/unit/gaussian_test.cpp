#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "latgeo/families.hpp"
#include "latgeo/gaussian.hpp"

using namespace latgeo;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

// Σ_{|k|≤K} exp(−π a (k+u)²), summed directly.
double direct_sum(double a, double u = 0.0, int k_max = 60, bool skip_zero = false) {
  double s = 0.0;
  for (int k = -k_max; k <= k_max; ++k)
    if (!(skip_zero && k == 0)) s += std::exp(-M_PI * a * (k + u) * (k + u));
  return s;
}

// η_ε(ℤ) by bisection on Σ_{k≠0} exp(−π s² k²) = ε.
double eta_z1(double eps) {
  double lo = 0.1, hi = 10.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (direct_sum(mid * mid, 0.0, 60, true) > eps ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

VectorXd vec(std::initializer_list<double> v) {
  VectorXd x(int(v.size()));
  int i = 0;
  for (double a : v) x(i++) = a;
  return x;
}

}  // namespace

TEST(Rho, IntegerExamples) {
  const Lattice z = Lattice::integer(1);
  EXPECT_NEAR(rho(z, PsdMatrix::identity(1)).value, direct_sum(1.0), 1e-13);
  EXPECT_NEAR(rho(z, PsdMatrix::identity(1)).value, 1.0864348112133080, 1e-13);
  // The half-integer coset: Σ e^{−π(k+½)²}.
  EXPECT_NEAR(rho(z, PsdMatrix::identity(1), vec({0.5})).value, direct_sum(1.0, 0.5), 1e-13);
  EXPECT_NEAR(rho(z, PsdMatrix::identity(1), vec({0.5})).value, 0.91357913815611683, 1e-12);
}

TEST(Rho, SeparableProduct) {
  for (int n = 1; n <= 4; ++n)
    for (double s : {0.5, 1.0, 1.7}) {
      const double want = std::pow(direct_sum(1 / (s * s)), n);
      const double got = rho(Lattice::integer(n), PsdMatrix::scalar(n, s * s)).value;
      EXPECT_NEAR(got / want, 1.0, 1e-9);
    }
}

// Property: the separable fast path and generic shell enumeration agree.
TEST(Rho, FastPathMatchesGeneric) {
  Lattice l = Lattice::diagonal({1, Rational(3, 2), 2});
  MatrixXd x = VectorXd(vec({0.7, 1.3, 2.1})).asDiagonal();
  VectorXd t = vec({0.2, -0.4, 0.9});
  const double fast = rho_separable(l, PsdMatrix(x), t, false).value;
  const double slow = rho_generic(l, PsdMatrix(x), t, false).value;
  EXPECT_NEAR(fast / slow, 1.0, 1e-9);
}

// Property: Poisson summation, ρ_{s²}(ℤ) = s·ρ_{1/s²}(ℤ).
TEST(Rho, PoissonIdentity) {
  for (double s : {0.3, 0.8, 1.0, 2.5}) EXPECT_NEAR(theta_1d(1 / (s * s)), s * theta_1d(s * s), 1e-12 * s);
}

TEST(Rho, OutsideRangeHasNoMass) {
  MatrixXd x = VectorXd(vec({1, 0})).asDiagonal();
  const double on = rho(Lattice::integer(2), PsdMatrix(x)).value;
  EXPECT_NEAR(on, direct_sum(1.0), 1e-12);  // only the e₁ axis contributes
}

TEST(Smoothing, MatchesBisectionOracle) {
  EXPECT_NEAR(smoothing_parameter(Lattice::integer(1), 0.5).eta, eta_z1(0.5), 1e-8);
  EXPECT_NEAR(smoothing_parameter(Lattice::integer(1), 0.25).eta, eta_z1(0.25), 1e-8);
  EXPECT_NEAR(eta_z1(0.5), 0.6679, 1e-3);
  EXPECT_NEAR(eta_z1(0.25), 0.8139, 1e-3);
}

TEST(Smoothing, Homogeneity) {
  for (int n = 1; n <= 3; ++n) {
    const double e = smoothing_parameter(Lattice::integer(n), 0.5).eta;
    const double ec = smoothing_parameter(Lattice::integer(n).scaled(2.5), 0.5).eta;
    EXPECT_NEAR(ec / (2.5 * e), 1.0, 1e-8);
  }
}

// Property: for a direct sum η(Λ⊕Λ) ≥ η(Λ).
TEST(Smoothing, DirectSumDominates) {
  Lattice l = Lattice::diagonal({1, 2});
  EXPECT_GE(smoothing_parameter(direct_sum(l, l), 0.5).eta, smoothing_parameter(l, 0.5).eta);
}

TEST(PointCount, IntegerLine) {
  // Dual ℤ: counts 3, 5, 7 at r = 1, 2, 3; the maximum is at r = 1.
  double best = 0.0;
  for (int r = 1; r <= 50; ++r) best = std::max(best, std::sqrt(std::log(2.0 * r + 1) / M_PI) / r);
  EXPECT_NEAR(eta_from_point_counts(Lattice::integer(1)), best, 1e-12);
}

TEST(PointCount, SandwichAndScaling) {
  for (const char* spec : {"zn:2", "zn:3", "rect:1,2,5", "modp:4,1000003,3"}) {
    Lattice l = FamilySpec::parse(spec).build();
    const double eta = smoothing_parameter(l, 0.5).eta;
    const double s = eta_from_point_counts(l);
    EXPECT_LE(eta / std::sqrt(3.0), s * (1 + 1e-6)) << spec;
    EXPECT_LE(s, eta * (1 + 1e-6)) << spec;
    EXPECT_NEAR(eta_from_point_counts(l.scaled(3.0)) / (3 * s), 1.0, 1e-9) << spec;
  }
}

TEST(Mixing, IntegerLineAndScaling) {
  MixingTimes m = mixing_times(Lattice::integer(1));
  EXPECT_NEAR(m.tau_inf, eta_z1(0.25) * eta_z1(0.25), 1e-8);
  EXPECT_NEAR(m.tau_inf, 0.6625, 1e-3);
  EXPECT_NEAR(m.tau_2, eta_z1(1.0 / 16) * eta_z1(1.0 / 16) / 2, 1e-8);
  EXPECT_LE(m.tau_inf, 2 * m.tau_2 + 1e-9);
  MixingTimes c = mixing_times(Lattice::integer(1).scaled(2.0));
  EXPECT_NEAR(c.tau_inf / m.tau_inf, 4.0, 1e-8);
  EXPECT_NEAR(c.tau_2 / m.tau_2, 4.0, 1e-8);
}

TEST(MuLowerBounds, BelowExactCoveringRadius) {
  EXPECT_LE(mu_lower_bound_gauss(Lattice::integer(2), geometric_grid(1.0)), std::sqrt(2.0) / 2);
  EXPECT_LE(mu_lower_bound_gauss(Lattice::integer(1), geometric_grid(1.0)), 0.5);
  EXPECT_GT(mu_lower_bound_gauss(Lattice::integer(1), geometric_grid(1.0)), 0.0);
  // A grid pushed towards s → 0 sees ρ → 1, so the bound collapses to 0.
  EXPECT_NEAR(gauss_scale_bound(Lattice::integer(1), {1e-9}), 0.0, 1e-6);

  EXPECT_NEAR(mu_lb_point_count(Lattice::integer(1)), std::log(3.0) / (2 * M_PI), 1e-12);
  const double a = mu_lb_point_count(Lattice::diagonal({1, 3}));
  EXPECT_LE(a, std::sqrt(10.0) / 2);
  EXPECT_NEAR(mu_lb_point_count(Lattice::diagonal({1, 3}).scaled(2.0)), a / 2, 1e-12);
}

TEST(Theta, BothSidesOfPoisson) {
  for (double a : {0.05, 0.5, 1.0, 4.0}) {
    EXPECT_NEAR(theta(Lattice::integer(2), a), std::pow(direct_sum(a, 0.0, 400), 2), 1e-10 * std::pow(a, -1.0));
    EXPECT_NEAR(theta_1d_nonzero(a), direct_sum(a, 0.0, 400, true), 1e-12 * theta_1d(a));
  }
}
