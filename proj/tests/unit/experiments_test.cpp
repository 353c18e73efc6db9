#include <gtest/gtest.h>

#include <cmath>

#include "latgeo/eta_zoo.hpp"
#include "latgeo/experiments.hpp"
#include "latgeo/gaussian.hpp"

using namespace latgeo;
using Eigen::MatrixXd;
using Eigen::VectorXd;

TEST(SubSeed, DistinctAndDeterministic) {
  EXPECT_EQ(sub_seed(1, 2), sub_seed(1, 2));
  EXPECT_NE(sub_seed(1, 2), sub_seed(1, 3));
  EXPECT_NE(sub_seed(1, 2), sub_seed(2, 2));
}

TEST(DiscreteGaussian, IntegerLineMoments) {
  const double s = 2.0;
  const int count = 20000;
  GaussianSamples g = discrete_gaussian_sample(Lattice::integer(1), VectorXd::Zero(1), s, count, 7);
  ASSERT_EQ(int(g.points.size()), count);
  double w = 0.0, wk2 = 0.0;
  for (int k = -50; k <= 50; ++k) {
    const double e = std::exp(-M_PI * k * k / (s * s));
    w += e;
    wk2 += k * k * e;
  }
  const double var = wk2 / w;
  double mean = 0.0, second = 0.0;
  for (const auto& p : g.points) {
    mean += p(0);
    second += p(0) * p(0);
  }
  mean /= count;
  second /= count;
  EXPECT_LE(std::abs(mean), 4 * std::sqrt(var / count));
  EXPECT_NEAR(second / var, 1.0, 0.05);
}

TEST(DiscreteGaussian, SupportIsTheCoset) {
  MatrixXd b(2, 2);
  b << 1, 0.3, 0, 0.8;
  Lattice l = Lattice::from_real_basis(b);
  VectorXd t(2);
  t << 0.25, -0.6;
  GaussianSamples g = discrete_gaussian_sample(l, t, 1.5, 500, 3);
  for (std::size_t i = 0; i < g.points.size(); ++i) {
    VectorXd z = l.coordinates(g.points[i] - t);
    for (int j = 0; j < 2; ++j) {
      EXPECT_NEAR(z(j), std::round(z(j)), 1e-9);
      EXPECT_EQ(long(std::lround(z(j))), g.coords[i][j]);
    }
  }
}

TEST(Siegel, ModPAverages) {
  SiegelResult r = siegel_check(4, 1000003, 200, 11);
  EXPECT_NEAR(r.target, 1.0 / 16, 1e-15);
  EXPECT_GE(r.mean, r.target / 2);
  EXPECT_LE(r.mean, r.target * 2);
  SiegelResult b = siegel_ball_check(2, 1000003, 1.5, 200, 12);
  EXPECT_NEAR(b.target, M_PI * 2.25, 1e-12);
  EXPECT_NEAR(b.mean, b.target, 4 * b.stderr_ + 0.1 * b.target);
}

TEST(Reduction, HonestYesAccepts) {
  Lattice z4 = Lattice::integer(4);
  const double s = 1.1 * smoothing_parameter(z4, 0.5).eta;
  int accept = 0;
  for (int t = 0; t < 20; ++t) accept += gapspp_reduction_trial(z4, s, 1.0, 100, honest_oracle(s), sub_seed(5, t)).accept;
  EXPECT_GE(accept, 18);
}

TEST(Reduction, MalformedOracleRejects) {
  Lattice z2 = Lattice::integer(2);
  CosetOracle off = [](const Lattice&, const VectorXd& t, int count, std::uint64_t) {
    std::vector<VectorXd> out(count, t);
    out[0](0) += 0.5;
    return out;
  };
  ReductionTrial r = gapspp_reduction_trial(z2, 1.0, 1.0, 100, off, 1);
  EXPECT_FALSE(r.membership_ok);
  EXPECT_FALSE(r.accept);
}

TEST(SubgaussianMoment, HonestSpikeAndZero) {
  const double s = 1.2;
  GaussianSamples g = discrete_gaussian_sample(Lattice::integer(3), VectorXd::Zero(3), s, 400, 9);
  EXPECT_TRUE(subgaussian_moment_check(g.points, s));
  std::vector<VectorXd> spike(400, VectorXd::Zero(3));
  for (auto& v : spike) v(0) = 10 * s;
  EXPECT_FALSE(subgaussian_moment_check(spike, s));
  EXPECT_TRUE(subgaussian_moment_check(std::vector<VectorXd>(400, VectorXd::Zero(3)), s));
}

TEST(Minkowski, Examples) {
  Lattice z2 = Lattice::integer(2);
  SubspaceCandidates c = lattice_subspaces(z2);
  EXPECT_NEAR(minkowski_fn(z2, 1.0, c).value, M_PI, 1e-12);
  EXPECT_NEAR(minkowski_fn(z2, 1e-6, c).value, 1.0, 1e-12);
  EXPECT_EQ(minkowski_fn(z2, 1e-6, c).dim, 0);
  Lattice d = Lattice::diagonal({1, 1000});
  MinkowskiValue m = minkowski_fn(d, 1.0, lattice_subspaces(d));
  EXPECT_NEAR(m.value, 2.0, 1e-12);
  EXPECT_EQ(m.dim, 1);
}

TEST(WeakReverseMinkowski, IntegerPlane) {
  Lattice z2 = Lattice::integer(2);
  auto rows = weak_revmink_check(z2, {1.0}, lattice_subspaces(z2));
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].count, 5);
  EXPECT_NEAR(rows[0].upper, M_PI * 72, 1e-9);
  EXPECT_TRUE(rows[0].upper_holds);
  EXPECT_TRUE(rows[0].lower_holds);
  Lattice z4 = Lattice::integer(4);
  for (const auto& r : weak_revmink_check(z4, {1.0, 2.0}, lattice_subspaces(z4))) {
    EXPECT_TRUE(r.upper_holds);
    EXPECT_TRUE(r.lower_holds);
  }
}

TEST(RevMinkInstance, Structure) {
  RevMinkInstance inst = revmink_lb_instance(4, 0.1, 3);
  const auto& p = inst.points.points;
  EXPECT_EQ(long(p.size()), std::min<long>(inst.requested + (inst.requested % 2), 10000));
  for (std::size_t i = 1; i < p.size(); ++i) EXPECT_LE(p[i - 1].norm2, p[i].norm2 + 1e-12);
  for (const auto& a : p) {
    bool found = false;
    for (const auto& b : p) found = found || (a.vec + b.vec).norm() < 1e-12;
    EXPECT_TRUE(found);
    EXPECT_LE(std::sqrt(a.norm2), inst.points.radius + 1e-12);
  }
}

TEST(GaussNorm, IntegerLineClosedForm) {
  GaussNorm g = gaussian_norm_expectation(Lattice::integer(1), 100000, 4);
  const double want = 2 * std::sqrt(2 / M_PI);
  EXPECT_NEAR(g.estimate, want, 4 * g.stderr_);
  EXPECT_NEAR(g.ratio, want / smoothing_parameter(Lattice::integer(1), 0.5).eta, 0.02);
  GaussNorm c = gaussian_norm_expectation(Lattice::integer(1).scaled(Scale::rational(3)), 100000, 4);
  EXPECT_NEAR(c.ratio / g.ratio, 1.0, 0.03);
}

TEST(TvSmoothing, ShiftedGaussianIsNearlyUniform) {
  Lattice z2 = Lattice::integer(2);
  const double s = smoothing_parameter(z2, 0.5).eta;
  TvCheck c = tv_smoothing_check(z2, s * s * MatrixXd::Identity(2, 2), 100000, 16, 6);
  EXPECT_TRUE(c.holds);
  EXPECT_NEAR(c.eps, 0.5, 1e-6);
}
