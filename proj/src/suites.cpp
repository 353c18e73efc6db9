#include "latgeo/suites.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iomanip>
#include <map>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include <unsupported/Eigen/MatrixFunctions>

#include "latgeo/eta_zoo.hpp"
#include "latgeo/experiments.hpp"
#include "latgeo/gaussian.hpp"
#include "latgeo/programs.hpp"
#include "latgeo/reduce.hpp"
#include "latgeo/rounding.hpp"
#include "latgeo/voronoi.hpp"

namespace latgeo {

namespace {

constexpr double kPi = 3.14159265358979323846;

using Rng = std::mt19937_64;

// Accumulates one CheckRow.
class Tally {
 public:
  Tally(std::string suite, std::string name, std::string detail) {
    row_.suite = std::move(suite);
    row_.name = std::move(name);
    row_.detail = std::move(detail);
  }
  void record(bool ok, double metric = 0.0) {
    ++row_.trials;
    if (!ok) ++row_.failures;
    if (std::isfinite(metric)) row_.worst = std::max(row_.worst, metric);
  }
  // Instances whose evaluation itself failed count as failures.
  template <class F>
  void guard(F&& f) {
    try {
      f();
    } catch (const std::exception& e) {
      ++row_.trials;
      ++row_.failures;
      if (errors_++ == 0) row_.detail += " [error: " + std::string(e.what()) + "]";
    }
  }
  void note(const std::string& s) { row_.detail += " " + s; }
  CheckRow done() const { return row_; }

 private:
  CheckRow row_;
  int errors_ = 0;
};

double rel_err(double a, double b) { return std::fabs(a - b) / std::max({std::fabs(a), std::fabs(b), 1e-300}); }

Eigen::MatrixXd gaussian_matrix(Rng& rng, int r, int c) {
  std::normal_distribution<double> nd(0.0, 1.0);
  Eigen::MatrixXd m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = nd(rng);
  return m;
}

Eigen::VectorXd gaussian_vector(Rng& rng, int n) { return gaussian_matrix(rng, n, 1).col(0); }

// Positive definite with eigenvalues roughly in [floor, floor + 3].
Eigen::MatrixXd random_pd(Rng& rng, int n, double floor = 0.3) {
  Eigen::MatrixXd g = gaussian_matrix(rng, n, n);
  return g * g.transpose() / n + floor * Eigen::MatrixXd::Identity(n, n);
}

Subspace random_subspace(Rng& rng, int n, int d) { return Subspace::span(gaussian_matrix(rng, n, d)); }

// PSD with range exactly w.
Eigen::MatrixXd random_psd_on(Rng& rng, const Subspace& w) {
  if (w.dim() == 0) return Eigen::MatrixXd::Zero(w.ambient_dim(), w.ambient_dim());
  const Eigen::MatrixXd& o = w.basis();
  return o * random_pd(rng, w.dim(), 0.2) * o.transpose();
}

int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
double uniform_real(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

// Exact integer basis with small entries and |det| in [1, 6].
Lattice random_lattice(Rng& rng, int n) {
  for (;;) {
    RatMatrix b(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) b(i, j) = uniform_int(rng, -2, 2);
    for (int i = 0; i < n; ++i) b(i, i) += 2;
    Rational d = determinant(b);
    if (d != 0 && abs(d) <= 6) return Lattice::from_basis(b);
  }
}

// Exact basis of rank d inside ℝⁿ.
Lattice random_partial_lattice(Rng& rng, int n, int d) {
  for (;;) {
    RatMatrix b(n, d);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < d; ++j) b(i, j) = uniform_int(rng, -2, 2);
    if (rank(b) == d) return Lattice::from_basis(b);
  }
}

LatticeSubspace random_lattice_subspace(Rng& rng, const Lattice& l, int k) {
  for (;;) {
    IntMatrix c(l.rank(), k);
    for (int i = 0; i < l.rank(); ++i)
      for (int j = 0; j < k; ++j) c(i, j) = uniform_int(rng, -2, 2);
    LatticeSubspace w = make_lattice_subspace(l, c);
    if (w.dim == k) return w;
  }
}

// Independent oracle: bisection on 2Σ_{k≥1} e^{−πs²k²} = ε by plain summation.
double eta_z1_direct(double eps) {
  auto f = [](double s) {
    double acc = 0.0;
    for (int k = 200; k >= 1; --k) acc += std::exp(-kPi * s * s * double(k) * double(k));
    return 2.0 * acc;
  };
  double lo = 0.05, hi = 10.0;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    (f(mid) > eps ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

std::vector<FamilySpec> test_families() {
  std::vector<std::string> specs = {"zn:1",
                                    "zn:2",
                                    "zn:3",
                                    "zn:4",
                                    "rect:1,3",
                                    "rect:1/2,3",
                                    "rect:1,10",
                                    "rect:2,3,5",
                                    "rect:1,2,3,7",
                                    "modp:4,1000003,1",
                                    "modp:4,1000003,2",
                                    "modp:4,1000003,3",
                                    "modp:4,1000003,4",
                                    "modp:4,1000003,5",
                                    "modp:2,101,1",
                                    "modp:3,10007,2",
                                    "kl:3",
                                    "kl:4",
                                    "sum[zn:1|rect:2]",
                                    "hkz[modp:3,1009,3]"};
  std::vector<FamilySpec> out;
  for (const auto& s : specs) out.push_back(FamilySpec::parse(s));
  return out;
}

// ---------------------------------------------------------------------------- psd

CheckRow check_pinv(int trials, std::uint64_t seed) {
  Tally t("psd", "pseudo-inverse", "max of ‖XX⁺ − π_range‖, ‖(X⁺)⁺ − X‖ relative");
  Rng rng(seed);
  for (int i = 0; i < trials; ++i) {
    t.guard([&] {
      const int n = uniform_int(rng, 1, 5), d = uniform_int(rng, 0, n);
      Subspace w = random_subspace(rng, n, d);
      PsdMatrix x(random_psd_on(rng, w));
      PsdMatrix xp = pseudo_inverse(x);
      const double scale = 1.0 + x.matrix().norm();
      double e1 = (x.matrix() * xp.matrix() - w.projector()).norm();
      double e2 = (pseudo_inverse(xp).matrix() - x.matrix()).norm() / scale;
      double e = std::max(e1, e2);
      t.record(e <= 1e-9, e);
    });
  }
  return t.done();
}

CheckRow check_slice_variational(int trials, std::uint64_t seed) {
  Tally t("psd", "slice-variational", "relative gap between yᵀX^{∩W}y and min_{w⊥W}(y+w)ᵀX(y+w)");
  Rng rng(seed);
  for (int i = 0; i < trials; ++i) {
    t.guard([&] {
      const int n = uniform_int(rng, 2, 5), d = uniform_int(rng, 1, n - 1);
      Eigen::MatrixXd x = random_pd(rng, n);
      Subspace w = random_subspace(rng, n, d);
      Eigen::MatrixXd s = mat_slice(PsdMatrix(x), w).matrix();
      Eigen::MatrixXd c = w.complement().basis();
      Eigen::VectorXd y = w.basis() * gaussian_vector(rng, d);
      // Unconstrained quadratic minimization over the complement coordinates.
      Eigen::VectorXd a = -(c.transpose() * x * c).ldlt().solve(c.transpose() * x * y);
      Eigen::VectorXd v = y + c * a;
      double oracle = v.dot(x * v);
      double got = y.dot(s * y);
      double e = rel_err(got, oracle);
      t.record(e <= 1e-9, e);
    });
  }
  return t.done();
}

CheckRow check_slice_pinv_duality(int trials, std::uint64_t seed) {
  Tally t("psd", "slice-pinv-duality", "‖(X^{∩W})⁺ − (X⁺)^{↓W}‖/(1+‖X⁺‖)");
  Rng rng(seed);
  for (int i = 0; i < trials; ++i) {
    t.guard([&] {
      const int n = uniform_int(rng, 2, 5), d = uniform_int(rng, 1, n);
      PsdMatrix x(random_pd(rng, n));
      Subspace w = random_subspace(rng, n, d);
      Eigen::MatrixXd lhs = pseudo_inverse(mat_slice(x, w)).matrix();
      PsdMatrix xp = pseudo_inverse(x);
      Eigen::MatrixXd rhs = mat_project(xp, w).matrix();
      double e = (lhs - rhs).norm() / (1.0 + xp.matrix().norm());
      t.record(e <= 1e-8, e);
    });
  }
  return t.done();
}

CheckRow check_slice_superadditive(int trials, std::uint64_t seed) {
  Tally t("psd", "slice-superadditive", "−λ_min((X+Y)^{∩W} − X^{∩W} − Y^{∩W})/(1+‖X+Y‖)");
  Rng rng(seed);
  for (int i = 0; i < trials; ++i) {
    t.guard([&] {
      const int n = uniform_int(rng, 2, 5), d = uniform_int(rng, 1, n);
      PsdMatrix x(random_psd_on(rng, random_subspace(rng, n, uniform_int(rng, 1, n))));
      PsdMatrix y(random_psd_on(rng, random_subspace(rng, n, uniform_int(rng, 1, n))));
      Subspace w = random_subspace(rng, n, d);
      Eigen::MatrixXd diff = mat_slice(x + y, w).matrix() - mat_slice(x, w).matrix() - mat_slice(y, w).matrix();
      double v = -min_eigenvalue(diff) / (1.0 + (x.matrix() + y.matrix()).norm());
      t.record(v <= 1e-9, std::max(0.0, v));
    });
  }
  return t.done();
}

CheckRow check_det_lemma(int trials, std::uint64_t seed) {
  Tally t("psd", "det-lemma", "relative gap det_{W1+W2}(X) vs det_{W1}(X^{∩W1})·det_{W2}(X^{↓W2})");
  Rng rng(seed);
  for (int i = 0; i < trials; ++i) {
    t.guard([&] {
      const int n = uniform_int(rng, 2, 5), dv = uniform_int(rng, 2, n), d1 = uniform_int(rng, 1, dv - 1);
      Subspace v = random_subspace(rng, n, dv);
      Eigen::MatrixXd q = v.basis() * Subspace::span(gaussian_matrix(rng, dv, dv)).basis();
      Subspace w1 = Subspace::span(q.leftCols(d1)), w2 = Subspace::span(q.rightCols(dv - d1));
      PsdMatrix x(random_psd_on(rng, v));
      double lhs = proj_det(x, v);
      double rhs = proj_det(mat_slice(x, w1), w1) * proj_det(mat_project(x, w2), w2);
      double e = rel_err(lhs, rhs);
      t.record(e <= 1e-8, e);
    });
  }
  return t.done();
}

CheckRow check_det_concavity(int trials, std::uint64_t seed) {
  Tally t("psd", "det-concavity", "violation of concavity of det_W(·)^{1/d}");
  Rng rng(seed);
  for (int i = 0; i < trials; ++i) {
    t.guard([&] {
      const int n = uniform_int(rng, 1, 5), d = uniform_int(rng, 1, n);
      Subspace w = random_subspace(rng, n, d);
      Eigen::MatrixXd x = random_psd_on(rng, random_subspace(rng, n, uniform_int(rng, 1, n)));
      Eigen::MatrixXd y = random_psd_on(rng, random_subspace(rng, n, uniform_int(rng, 1, n)));
      const double s = uniform_real(rng, 0.0, 1.0);
      // A numerically singular restriction is exactly singular here: its d-th root would amplify roundoff.
      auto f = [&](const Eigen::MatrixXd& m) {
        Eigen::MatrixXd r = w.basis().transpose() * m * w.basis();
        if (min_eigenvalue(r) <= 1e-12 * std::max(1.0, max_eigenvalue(r))) return 0.0;
        return std::pow(std::max(0.0, det_on(m, w)), 1.0 / d);
      };
      double v = s * f(x) + (1 - s) * f(y) - f(s * x + (1 - s) * y);
      t.record(v <= 1e-9, std::max(0.0, v));
    });
  }
  return t.done();
}

CheckRow check_det_derivative(int trials, std::uint64_t seed) {
  Tally t("psd", "det-derivative", "relative gap of the closed-form derivative vs central differences");
  Rng rng(seed);
  for (int i = 0; i < trials; ++i) {
    t.guard([&] {
      const int n = uniform_int(rng, 1, 5), d = uniform_int(rng, 1, n);
      Subspace w = random_subspace(rng, n, d);
      Eigen::MatrixXd x = random_pd(rng, n);
      Eigen::MatrixXd g = gaussian_matrix(rng, n, n);
      Eigen::MatrixXd delta = (g + g.transpose()) / 2.0;
      auto f = [&](double h) { return std::pow(det_on(x + h * delta, w), 1.0 / d); };
      const double step = 1e-5;
      double fd = (f(step) - f(-step)) / (2 * step);
      PsdMatrix proj = mat_project(PsdMatrix(x), w);
      double closed = f(0.0) / d * (pseudo_inverse(proj).matrix() * delta).trace();
      double e = std::fabs(fd - closed) / std::max(std::fabs(closed), 1e-3 * f(0.0));
      t.record(e <= 1e-4, e);
    });
  }
  return t.done();
}

CheckRow check_det_product(int trials, std::uint64_t seed) {
  Tally t("psd", "det-product", "|det_W(X)·det_W((X^{↓W})⁺) − 1|");
  Rng rng(seed);
  for (int i = 0; i < trials; ++i) {
    t.guard([&] {
      const int n = uniform_int(rng, 1, 5), d = uniform_int(rng, 1, n);
      Subspace w = random_subspace(rng, n, d);
      PsdMatrix x(random_pd(rng, n));
      double v = proj_det(x, w) * proj_det(pseudo_inverse(mat_project(x, w)), w);
      double e = std::fabs(v - 1.0);
      t.record(e <= 1e-8, e);
    });
  }
  return t.done();
}

CheckRow check_parallel_sum_limit(int trials, std::uint64_t seed) {
  Tally t("psd", "parallel-sum-limit",
          "‖X:Y − lim_{ε→0}((X+εI)⁻¹+(Y+εI)⁻¹)⁻¹‖/(1+‖X‖+‖Y‖), Richardson at ε = 1e-5, 1e-6 in long double");
  using LMat = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  Rng rng(seed);
  for (int i = 0; i < trials; ++i) {
    t.guard([&] {
      const int n = uniform_int(rng, 1, 4);
      // The ε-limit converges like ε/θ² in the smallest angle θ between the ranges; keep θ away from 0.
      Eigen::MatrixXd x, y;
      for (;;) {
        x = random_psd_on(rng, random_subspace(rng, n, uniform_int(rng, 1, n)));
        y = random_psd_on(rng, random_subspace(rng, n, uniform_int(rng, 1, n)));
        PsdMatrix sum(Eigen::MatrixXd(x + y));
        if (sum.eigenvalues()(sum.rank() - 1) >= 1e-2 * sum.max_eigenvalue()) break;
      }
      const LMat lx = x.cast<long double>(), ly = y.cast<long double>();
      const LMat id = LMat::Identity(n, n);
      auto reg = [&](long double eps) {
        return LMat(((lx + eps * id).inverse() + (ly + eps * id).inverse()).inverse());
      };
      // The regularized value is analytic in ε; eliminating the linear term leaves O(ε²).
      const LMat lim = (10.0L * reg(1e-6L) - reg(1e-5L)) / 9.0L;
      Eigen::MatrixXd got = parallel_sum(PsdMatrix(x), PsdMatrix(y)).matrix();
      double e = (got - lim.cast<double>()).norm() / (1.0 + x.norm() + y.norm());
      t.record(e <= 1e-5, e);
    });
  }
  return t.done();
}

CheckRow check_mat_max(int trials, std::uint64_t seed) {
  Tally t("psd", "mat-max", "(det_W(X)det_W(Y) − det_W(A/2)²)/det_W(A/2)²");
  Rng rng(seed);
  for (int i = 0; i < trials; ++i) {
    t.guard([&] {
      const int n = uniform_int(rng, 1, 5), d = uniform_int(rng, 1, n);
      Subspace w = random_subspace(rng, n, d);
      Eigen::MatrixXd a = random_psd_on(rng, w);
      // X = A^{1/2} P A^{1/2} with 0 ⪯ P ⪯ I keeps Y = A − X ⪰ 0.
      Eigen::MatrixXd root = PsdMatrix(a).sqrt();
      Eigen::MatrixXd p = random_pd(rng, n, 0.0);
      p /= max_eigenvalue(p) * uniform_real(rng, 1.0, 1.5);
      Eigen::MatrixXd x = root * p * root, y = a - x;
      const double half = det_on(a / 2.0, w);
      double v = (det_on(x, w) * det_on(y, w) - half * half) / (half * half);
      t.record(v <= 1e-9, std::max(0.0, v));
    });
  }
  return t.done();
}

// ---------------------------------------------------------------------------- gaussian

CheckRow check_smoothing_oracle() {
  Tally t("gaussian", "smoothing-oracle", "|η_ε(ℤ) − direct-summation bisection|, ε ∈ {1/2, 1/4}");
  for (double eps : {0.5, 0.25}) {
    t.guard([&] {
      double got = smoothing_parameter(Lattice::integer(1), eps).eta;
      double e = std::fabs(got - eta_z1_direct(eps));
      t.record(e <= 1e-6, e);
    });
  }
  return t.done();
}

CheckRow check_separable_generic() {
  Tally t("gaussian", "separable-vs-generic", "relative gap of product fast path vs shell enumeration");
  for (int n = 1; n <= 4; ++n) {
    for (double s : {0.5, 1.0, 1.7}) {
      t.guard([&] {
        Lattice l = Lattice::integer(n);
        Eigen::VectorXd diag(n);
        for (int i = 0; i < n; ++i) diag(i) = s * s * (1.0 + 0.25 * i);
        PsdMatrix x(Eigen::MatrixXd(diag.asDiagonal()));
        Eigen::VectorXd zero = Eigen::VectorXd::Zero(n);
        for (bool excl : {false, true}) {
          double a = rho_separable(l, x, zero, excl).value;
          double b = rho_generic(l, x, zero, excl).value;
          double e = rel_err(a, b);
          t.record(e <= 1e-9, e);
        }
      });
    }
  }
  return t.done();
}

CheckRow check_pointcount_sandwich(const std::vector<FamilySpec>& families) {
  Tally t("gaussian", "pointcount-sandwich", "worst relative violation of η/√3 ≤ s̃ ≤ η");
  for (const auto& f : families) {
    if (f.n > 4) continue;
    t.guard([&] {
      Lattice l = f.build();
      double eta = smoothing_parameter(l, 0.5).eta;
      double s = eta_from_point_counts(l);
      double lo = eta / std::sqrt(3.0) - s, hi = s - eta;
      double v = std::max(lo, hi) / eta;
      t.record(v <= 1e-6, std::max(0.0, v));
    });
  }
  return t.done();
}

CheckRow check_coset_mass(int trials, std::uint64_t seed) {
  Tally t("gaussian", "coset-mass", "relative gap ρ_A(Λ) vs (det_W(A^{∩W})^{1/2}/det Λ)·ρ_{(A^{∩W})⁺}(Λ*)");
  Rng rng(seed);
  for (int i = 0; i < trials; ++i) {
    t.guard([&] {
      const int n = uniform_int(rng, 1, 4), d = uniform_int(rng, 1, n);
      Lattice l = random_partial_lattice(rng, n, d);
      PsdMatrix a(random_pd(rng, n, 0.5) * uniform_real(rng, 0.5, 2.0));
      Subspace w = Subspace::span(l.basis());
      PsdMatrix s = mat_slice(a, w);
      double lhs = rho(l, a).value;
      double rhs = std::sqrt(proj_det(s, w)) / l.det() * rho(l.dual(), pseudo_inverse(s)).value;
      double e = rel_err(lhs, rhs);
      t.record(e <= 1e-7, e);
    });
  }
  return t.done();
}

CheckRow check_central_coset(int trials, std::uint64_t seed) {
  Tally t("gaussian", "central-coset-heaviest", "(ρ_A(Λ+t) − ρ_A(Λ))/ρ_A(Λ)");
  Rng rng(seed);
  for (int i = 0; i < trials; ++i) {
    t.guard([&] {
      const int n = uniform_int(rng, 1, 4);
      Lattice l = random_lattice(rng, n);
      PsdMatrix a(random_pd(rng, n, 0.3));
      Eigen::VectorXd tv = l.basis() * (gaussian_vector(rng, n) * 0.7);
      double c = rho(l, a).value;
      double v = (rho(l, a, tv).value - c) / c;
      t.record(v <= 1e-9, std::max(0.0, v));
    });
  }
  return t.done();
}

CheckRow check_banacosh(int trials, std::uint64_t seed) {
  Tally t("gaussian", "banaszczyk-cosh", "(ρ(t)ρ(Λ) − ρ(Λ+t))/ρ(Λ)");
  Rng rng(seed);
  for (int i = 0; i < trials; ++i) {
    t.guard([&] {
      const int n = uniform_int(rng, 1, 4);
      Lattice l = random_lattice(rng, n).scaled(Scale::rational(Rational(uniform_int(rng, 1, 4), 3)));
      PsdMatrix id = PsdMatrix::identity(n);
      Eigen::VectorXd tv = gaussian_vector(rng, n) * 0.6;
      double base = rho(l, id).value;
      double v = (std::exp(-kPi * tv.squaredNorm()) * base - rho(l, id, tv).value) / base;
      t.record(v <= 1e-9, std::max(0.0, v));
    });
  }
  return t.done();
}

CheckRow check_mass_decrease(int trials, std::uint64_t seed) {
  Tally t("gaussian", "mass-decrease", "worst relative excess over min-side bounds ρ^{t²} and ρ/⌊t⌋");
  Rng rng(seed);
  for (int i = 0; i < trials; ++i) {
    t.guard([&] {
      const int n = uniform_int(rng, 1, 4);
      Lattice l = random_lattice(rng, n);
      PsdMatrix a(random_pd(rng, n, 0.2) * uniform_real(rng, 0.3, 3.0));
      const double s = uniform_real(rng, 1.0, 3.0);
      double base = rho_nonzero(l, a).value;
      double shrunk = rho_nonzero(l, a.scaled(1.0 / (s * s))).value;
      double b1 = std::pow(base, s * s), b2 = base / std::floor(s);
      double v = std::max((shrunk - b1) / std::max(b1, 1e-300), (shrunk - b2) / std::max(b2, 1e-300));
      if (shrunk == 0.0) v = 0.0;
      t.record(v <= 1e-6, std::max(0.0, v));
    });
  }
  return t.done();
}

CheckRow check_gaussian_parallel_sum(int trials, std::uint64_t seed) {
  Tally t("gaussian", "gaussian-parallel-sum", "ρ_X(Λ)ρ_Y(Λ)/(ρ_{X:Y}(Λ)ρ_{X+Y}(Λ)) − 1");
  Rng rng(seed);
  for (int i = 0; i < trials; ++i) {
    t.guard([&] {
      const int n = uniform_int(rng, 1, 4);
      Lattice l = random_lattice(rng, n);
      // Ranges are lattice subspaces (spanned by lattice vectors) or everything.
      auto make = [&]() -> PsdMatrix {
        int d = uniform_int(rng, 1, n);
        if (uniform_int(rng, 0, 2) == 0 || d == n) return PsdMatrix(random_pd(rng, n, 0.2) * uniform_real(rng, 0.3, 2.5));
        LatticeSubspace w = random_lattice_subspace(rng, l, d);
        return PsdMatrix(random_psd_on(rng, w.span) * uniform_real(rng, 0.3, 2.5));
      };
      PsdMatrix x = make(), y = make();
      double lhs = rho(l, x).value * rho(l, y).value;
      double rhs = rho(l, parallel_sum(x, y)).value * rho(l, x + y).value;
      double v = lhs / rhs - 1.0;
      t.record(v <= 1e-6, std::max(0.0, v));
    });
  }
  return t.done();
}

CheckRow check_asymptotic_mass() {
  Tally t("gaussian", "asymptotic-mass", "relative gap of s^{−d/2}ρ_{sX}(Λ) to √det_V(X)/det(Λ∩V) at s = 1e2, 1e4");
  Rng rng(5);
  // Full-rank cases and one singular X on a coordinate plane of ℤ³.
  std::vector<std::pair<Lattice, Eigen::MatrixXd>> cases;
  cases.push_back({Lattice::integer(1), Eigen::MatrixXd::Constant(1, 1, 0.7)});
  cases.push_back({random_lattice(rng, 2), random_pd(rng, 2)});
  cases.push_back({Lattice::diagonal({Rational(1, 2), Rational(3)}), random_pd(rng, 2)});
  {
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(3, 3);
    x.topLeftCorner(2, 2) = random_pd(rng, 2);
    cases.push_back({Lattice::integer(3), x});
  }
  for (const auto& [l, x] : cases) {
    t.guard([&] {
      PsdMatrix px(x);
      Subspace v = px.range();
      LatticeSubspace lv = intersect_subspace(l, v);
      const double limit = std::sqrt(proj_det(px, v)) / lv.det;
      for (double s : {1e2, 1e4}) {
        double val = std::pow(s, -0.5 * v.dim()) * rho(l, px.scaled(s)).value;
        double e = rel_err(val, limit);
        t.record(e <= 1e-3, e);
      }
    });
  }
  return t.done();
}

CheckRow check_tv_smoothing(int samples, std::uint64_t seed) {
  Tally t("gaussian", "tv-smoothing", "binned TV − (ε/2 + 3·noise)");
  std::vector<std::pair<Lattice, Eigen::MatrixXd>> cases;
  cases.push_back({Lattice::integer(1), Eigen::MatrixXd::Constant(1, 1, 0.8)});
  cases.push_back({Lattice::integer(1), Eigen::MatrixXd::Constant(1, 1, 2.0)});
  cases.push_back({Lattice::integer(2), 1.2 * Eigen::MatrixXd::Identity(2, 2)});
  {
    Eigen::MatrixXd a(2, 2);
    a << 2.0, 0.4, 0.4, 1.0;
    cases.push_back({Lattice::diagonal({Rational(1), Rational(1, 2)}), a});
  }
  int k = 0;
  for (const auto& [l, a] : cases) {
    t.guard([&] {
      TvCheck c = tv_smoothing_check(l, a, samples, l.rank() == 1 ? 20 : 8, sub_seed(seed, k++));
      t.record(c.holds, c.tv - (c.eps / 2 + 3 * c.noise));
    });
  }
  return t.done();
}

CheckRow check_eta_homogeneity(const std::vector<FamilySpec>& families) {
  Tally t("gaussian", "eta-homogeneity", "relative gap η(cΛ) vs c·η(Λ), c = 7/3");
  for (const auto& f : families) {
    if (f.n > 4) continue;
    t.guard([&] {
      Lattice l = f.build();
      const Rational c(7, 3);
      double a = smoothing_parameter(l.scaled(Scale::rational(c)), 0.5).eta;
      double b = c.get_d() * smoothing_parameter(l, 0.5).eta;
      double e = rel_err(a, b);
      t.record(e <= 1e-9, e);
    });
  }
  return t.done();
}

// ---------------------------------------------------------------------------- uncrossing

CheckRow check_uncrossing(int trials, std::uint64_t seed) {
  Tally t("uncrossing", "uncrossing", "max of (lhs/rhs − 1) and sum-preservation error; potential must rise");
  Rng rng(seed);
  for (int i = 0; i < trials; ++i) {
    t.guard([&] {
      const int n = uniform_int(rng, 2, 5);
      Lattice l = random_lattice(rng, n);
      Lattice dual = l.dual();
      LatticeSubspace v, w;
      do {
        v = random_lattice_subspace(rng, dual, uniform_int(rng, 1, n - 1));
        w = random_lattice_subspace(rng, dual, uniform_int(rng, 1, n - 1));
      } while (subspace_contains(v, w) || subspace_contains(w, v));
      DualAtom a{v, PsdMatrix(random_psd_on(rng, v.span) * uniform_real(rng, 0.2, 3.0))};
      DualAtom b{w, PsdMatrix(random_psd_on(rng, w.span) * uniform_real(rng, 0.2, 3.0))};
      UncrossResult u = uncross_pair(dual, a, b);
      const double ratio = u.lhs / u.rhs - 1.0;
      const double sum_err = (u.meet.x.matrix() + u.join.x.matrix() - a.x.matrix() - b.x.matrix()).norm() /
                             (1.0 + (a.x.matrix() + b.x.matrix()).norm());
      const int before = v.dim * v.dim + w.dim * w.dim;
      const int after = u.meet.w.dim * u.meet.w.dim + u.join.w.dim * u.join.w.dim;
      const bool dims_ok = u.meet.w.dim + u.join.w.dim == v.dim + w.dim;
      const bool ok = ratio <= 1e-7 && sum_err <= 1e-9 && after >= before + 1 && dims_ok;
      t.record(ok, std::max(ratio, sum_err));
    });
  }
  return t.done();
}

CheckRow check_detformula(int trials, std::uint64_t seed) {
  Tally t("uncrossing", "detformula", "relative gap det_V(X)det_W(Y) vs det_{V+W}((T⁺)ᵀT⁺)·det_{V+W}(X+Y)");
  Rng rng(seed);
  for (int i = 0; i < trials; ++i) {
    t.guard([&] {
      const int n = uniform_int(rng, 2, 5), dv = uniform_int(rng, 1, n - 1), dw = uniform_int(rng, 1, n - dv);
      Eigen::MatrixXd g = gaussian_matrix(rng, n, dv + dw);
      Subspace v = Subspace::span(g.leftCols(dv)), w = Subspace::span(g.rightCols(dw));
      Subspace vw = Subspace::span(g);
      Eigen::MatrixXd x = random_psd_on(rng, v), y = random_psd_on(rng, w);
      Eigen::MatrixXd tm(n, dv + dw);
      tm << v.basis(), w.basis();
      Eigen::MatrixXd tp = tm.completeOrthogonalDecomposition().pseudoInverse();
      double lhs = det_on(x, v) * det_on(y, w);
      double rhs = det_on(tp.transpose() * tp, vw) * det_on(x + y, vw);
      double e = rel_err(lhs, rhs);
      t.record(e <= 1e-7, e);
    });
  }
  return t.done();
}

CheckRow check_rev_am_gm(int trials, std::uint64_t seed) {
  Tally t("uncrossing", "reverse-am-gm", "Σd_i a_i/(4k·value) − 1");
  Rng rng(seed);
  for (int i = 0; i < trials; ++i) {
    t.guard([&] {
      const int m = uniform_int(rng, 1, 12);
      std::vector<double> a(m);
      std::vector<int> d(m);
      for (int j = 0; j < m; ++j) {
        a[j] = uniform_int(rng, 0, 5) == 0 ? 0.0 : std::exp(uniform_real(rng, -6.0, 3.0));
        d[j] = uniform_int(rng, 1, 5);
      }
      RevAmGm r = reverse_am_gm(a, d);
      double v = r.value > 0 ? r.lhs / (r.bound_factor * r.value) - 1.0 : (r.lhs > 0 ? 1.0 : -1.0);
      t.record(r.certified, std::max(0.0, v));
    });
  }
  return t.done();
}

CheckRow check_rounding(int trials, std::uint64_t seed) {
  Tally t("uncrossing", "subspace-rounding", "certified_ratio/bound; also m ≤ n² after Step 1 and steps ≤ |S*|n²");
  Rng rng(seed);
  for (int i = 0; i < trials; ++i) {
    t.guard([&] {
      const int n = uniform_int(rng, 2, 5);
      Lattice l = random_lattice(rng, n);
      Lattice dual = l.dual();
      const int m = uniform_int(rng, 1, 8);
      DualSolution sol;
      Eigen::MatrixXd total = Eigen::MatrixXd::Zero(n, n);
      for (int j = 0; j < m; ++j) {
        LatticeSubspace w = random_lattice_subspace(rng, dual, uniform_int(rng, 1, n));
        Eigen::MatrixXd x = random_psd_on(rng, w.span);
        total += x;
        sol.atoms.push_back({w, PsdMatrix(x)});
      }
      const double load = max_eigenvalue(total);
      for (auto& a : sol.atoms) a.x = a.x.scaled(1.0 / load);
      RoundingResult r = subspace_round(l, sol);
      const bool ok = r.certificate_holds && r.support_after_step1 <= n * n && r.uncross_steps <= r.uncross_limit;
      t.record(ok, r.certified_ratio / r.bound);
    });
  }
  return t.done();
}

// ---------------------------------------------------------------------------- kl

CheckRow check_programs(int trials, std::uint64_t seed) {
  Tally t("kl", "convex-programs",
          "worst of μ/((4/√π)√trA_sm), 1 − det-feasibility(4A_sm), dual − tr A_det, ℤⁿ gap to nη²");
  Rng rng(seed);
  for (int i = 0; i < trials; ++i) {
    t.guard([&] {
      const int n = uniform_int(rng, 1, 4);
      Lattice l = random_lattice(rng, n);
      SmoothProgramSolution sm = solve_mu_sm(l);
      CoveringRadius cr = covering_radius_exact(l);
      const double mu_bound = 4.0 / std::sqrt(kPi) * std::sqrt(sm.objective);
      const bool a_ok = sm.feasible && cr.hi <= mu_bound * (1.0 + 1e-9);
      SubspaceCandidates cands = candidate_subspaces(l);
      const double feas = det_feasibility(cands, 4.0 * sm.a.matrix());
      const bool b_ok = feas >= 1.0 - 1e-9;
      DetProgramSolution det = solve_mu_det(l, cands);
      DualSolution dual = dual_from_primal(l, det);
      const double gap = dual_objective(l, dual) - det.objective;
      const bool c_ok = dual_feasible(dual) && gap <= 1e-8;
      t.record(a_ok && b_ok && c_ok, std::max({cr.hi / mu_bound, 1.0 - feas, gap}));
    });
  }
  for (int n = 1; n <= 4; ++n) {
    t.guard([&] {
      Lattice l = Lattice::integer(n);
      SmoothProgramSolution sm = solve_mu_sm(l);
      const double eta = smoothing_parameter(l, 0.5).eta;
      const double e = rel_err(sm.objective, n * eta * eta);
      t.record(e <= 1e-4, e);
    });
  }
  return t.done();
}

CheckRow check_kl_certificates(const std::vector<FamilySpec>& families) {
  Tally t("kl", "kl-certificate-hkz", "ratio/bound for the HKZ witness subspace");
  for (const auto& f : families) {
    if (f.n > 6) continue;
    t.guard([&] {
      KlCertificate c = kl_certificate_hkz(f.build());
      t.record(c.ratio <= c.bound * (1.0 + 1e-9), c.ratio / c.bound);
    });
  }
  return t.done();
}

CheckRow check_gapcrp() {
  Tally t("kl", "gapcrp-verifier", "mismatches against the exact expectations");
  // YES instances ℤⁿ with r² = 2n: μ = √n/2 < r, and no candidate may verify.
  for (int n = 1; n <= 3; ++n) {
    t.guard([&] {
      Lattice l = Lattice::integer(n);
      SubspaceCandidates c = candidate_subspaces(l);
      bool any = false;
      for (const auto& cand : c.list) any = any || gapcrp_verify(l, Rational(2 * n), cand.w);
      t.record(!any && c.all_exhaustive(), any ? 1.0 : 0.0);
    });
  }
  // NO instance: Λ = 4ℤⁿ has μ = 2√n, r² = n: det((Λ/r)*∩ℝⁿ)² = (n/16)ⁿ ≤ nⁿ verifies.
  for (int n = 1; n <= 3; ++n) {
    t.guard([&] {
      Lattice l = Lattice::integer(n).scaled(Scale::rational(4));
      bool ok = gapcrp_verify(l, Rational(n), full_subspace(l.dual()));
      t.record(ok, ok ? 0.0 : 1.0);
    });
  }
  return t.done();
}

CheckRow check_direct_sum_mu(int trials, std::uint64_t seed) {
  Tally t("kl", "direct-sum-mu-additivity", "relative gap μ²(Λ₁⊕Λ₂) vs μ²(Λ₁)+μ²(Λ₂) (0 when compared exactly)");
  Rng rng(seed);
  for (int i = 0; i < trials; ++i) {
    t.guard([&] {
      const int n1 = uniform_int(rng, 1, 2), n2 = uniform_int(rng, 1, 4 - n1);
      Lattice a = random_lattice(rng, n1), b = random_lattice(rng, n2);
      CoveringRadius ca = covering_radius_exact(a), cb = covering_radius_exact(b);
      CoveringRadius cs = covering_radius_exact(direct_sum(a, b));
      if (ca.mu_squared && cb.mu_squared && cs.mu_squared) {
        bool ok = *cs.mu_squared == *ca.mu_squared + *cb.mu_squared;
        t.record(ok, ok ? 0.0 : 1.0);
      } else {
        double e = rel_err(cs.hi * cs.hi, ca.hi * ca.hi + cb.hi * cb.hi);
        t.record(e <= 1e-9, e);
      }
    });
  }
  return t.done();
}

namespace {

double kl_witness_value(const SubspaceCandidates& c) {
  double best = 0.0;
  for (const auto& cand : c.list) best = std::max(best, std::sqrt(double(cand.w.dim)) * std::pow(cand.w.det, -1.0 / cand.w.dim));
  return best;
}

}  // namespace

CheckRow check_kl_cross(int trials, std::uint64_t seed) {
  Tally t("kl", "kl-cross", "μ(⊕Λ_i)/(2√(log₂(k·m)+1)·max_i(μ_i/κ_i)·κ(⊕))");
  Rng rng(seed);
  for (int i = 0; i < trials; ++i) {
    t.guard([&] {
      const int m = uniform_int(rng, 2, 3);
      std::vector<Lattice> parts;
      int total = 0, k = 0;
      while (int(parts.size()) < m) {
        const int d = uniform_int(rng, 1, 2);
        if (total + d > 4) break;
        parts.push_back(random_lattice(rng, d));
        total += d;
        k = std::max(k, d);
      }
      Lattice sum = parts.front();
      double c = 0.0;
      for (std::size_t j = 0; j < parts.size(); ++j) {
        if (j) sum = direct_sum(sum, parts[j]);
        c = std::max(c, covering_radius_exact(parts[j]).hi / kl_witness_value(candidate_subspaces(parts[j])));
      }
      const double mu = covering_radius_exact(sum).hi;
      const double rhs =
          2.0 * std::sqrt(std::log2(double(k * parts.size())) + 1.0) * c * kl_witness_value(candidate_subspaces(sum));
      t.record(mu <= rhs * (1.0 + 1e-9), mu / rhs);
    });
  }
  return t.done();
}

CheckRow check_bar_mu(const std::vector<FamilySpec>& families, int samples, std::uint64_t seed) {
  Tally t("kl", "bar-mu-bracket", "worst relative violation of μ̄ ≤ μ ≤ √8·μ̄ (3-stderr widened)");
  int k = 0;
  for (const auto& f : families) {
    if (f.n > 4) continue;
    t.guard([&] {
      Lattice l = f.build();
      CoveringRadius cr = covering_radius_exact(l);
      AvgMu am = avg_mu(l, samples, sub_seed(seed, k++));
      const double lo = std::sqrt(std::max(0.0, am.estimate - 3 * am.stderr_));
      const double hi = std::sqrt(8.0) * std::sqrt(am.estimate + 3 * am.stderr_);
      double v = std::max((lo - cr.hi) / cr.hi, (cr.hi - hi) / cr.hi);
      t.record(v <= 0.0, std::max(0.0, v));
    });
  }
  return t.done();
}

CheckRow check_covering_sampling(const std::vector<FamilySpec>& families, int samples, std::uint64_t seed) {
  Tally t("kl", "covering-sampling", "1/2 − 3se − fraction of coset samples with dist ≥ μ/2");
  int k = 0;
  for (const auto& f : families) {
    if (f.n > 4) continue;
    t.guard([&] {
      Lattice l = f.build();
      const double mu = covering_radius_exact(l).hi;
      std::vector<double> d = sample_coset_distances(l, samples, sub_seed(seed, k++));
      double frac = 0.0;
      for (double x : d) frac += x >= mu / 2 ? 1.0 : 0.0;
      frac /= double(d.size());
      const double se = std::sqrt(0.25 / double(d.size()));
      double v = 0.5 - 3 * se - frac;
      t.record(v <= 0.0, std::max(0.0, v));
    });
  }
  return t.done();
}

CheckRow check_eta_sandwich(const std::vector<FamilySpec>& families) {
  Tally t("kl", "eta-sandwich", "worst lhs/rhs over the certified-direction rows");
  for (const auto& f : families) {
    if (f.n > 4) continue;
    t.guard([&] {
      Lattice l = f.build();
      EtaZoo z = compute_eta_zoo(l);
      bool ok = true;
      double worst = 0.0;
      for (const auto& r : sandwich_report(l, z)) {
        ok = ok && r.pass;
        if (r.rhs > 0) worst = std::max(worst, r.lhs / r.rhs);
      }
      t.record(ok, worst);
    });
  }
  return t.done();
}

// ---------------------------------------------------------------------------- revmink

namespace {

std::vector<double> test_radii(const Lattice& l) {
  std::vector<double> lam = successive_minima(l);
  return {lam.front(), lam.back(), 2.0 * lam.back()};
}

}  // namespace

CheckRow check_weak_revmink(const std::vector<FamilySpec>& families) {
  Tally t("revmink", "weak-reverse-minkowski", "worst of count/M(6√n r) and M(r/2)/count");
  int skipped = 0;
  for (const auto& f : families) {
    if (f.n > 4) continue;
    t.guard([&] {
      Lattice l = f.build();
      SubspaceCandidates pc = lattice_subspaces(l);
      if (!pc.all_exhaustive()) {
        ++skipped;
        return;
      }
      for (const auto& row : weak_revmink_check(l, test_radii(l), pc)) {
        t.record(row.upper_holds && row.lower_holds,
                 std::max(double(row.count) / row.upper, row.lower / double(row.count)));
      }
    });
  }
  if (skipped) t.note("(" + std::to_string(skipped) + " lattices without exhaustive candidates skipped)");
  return t.done();
}

CheckRow check_minkowski_henk(const std::vector<FamilySpec>& families) {
  Tally t("revmink", "minkowski-henk", "worst ratio over Minkowski first/second and the Henk product bound");
  for (const auto& f : families) {
    if (f.n > 4) continue;
    t.guard([&] {
      Lattice l = f.build();
      const int n = l.rank();
      std::vector<double> lam = successive_minima(l);
      double prod = 1.0;
      for (double x : lam) prod *= x;
      const double second = std::ldexp(1.0, n) / ball_volume(n, 1.0) * l.det();
      t.record(prod <= second * (1.0 + 1e-9), prod / second);
      for (double r : test_radii(l)) {
        const double count = double(enumerate_points(l, r * (1.0 + 1e-12)).points.size());
        const double first = std::ceil(std::ldexp(ball_volume(n, r), -n) / l.det() - 1e-9);
        double henk = std::ldexp(1.0, n - 1);
        for (double x : lam) henk *= std::floor(1.0 + 2.0 * r / x + 1e-12);
        t.record(count >= first && count <= henk, std::max(first / count, count / henk));
      }
    });
  }
  return t.done();
}

CheckRow check_strong_revmink_consistency(const std::vector<FamilySpec>& families) {
  Tally t("revmink", "strong-revmink-consistency", "η(Λ*)/(√3·C_M/√(2πe)) after normalizing all sublattice dets ≥ 1");
  for (const auto& f : families) {
    if (f.n > 4) continue;
    t.guard([&] {
      Lattice l = f.build();
      SubspaceCandidates pc = lattice_subspaces(l);
      if (!pc.all_exhaustive()) return;
      double c = 0.0;
      for (const auto& cand : pc.list) c = std::max(c, std::pow(cand.w.det, -1.0 / cand.w.dim));
      Lattice normal = l.scaled(c);
      // s̃ of Λ* is computed from counts of Λ; C_M is the matching point-count exponent.
      const double s_tilde = eta_from_point_counts(normal.dual());
      const double c_m = s_tilde * std::sqrt(2.0 * kPi * std::exp(1.0));
      const double eta_dual = smoothing_parameter(normal.dual(), 0.5).eta;
      const double rhs = std::sqrt(3.0) * c_m / std::sqrt(2.0 * kPi * std::exp(1.0));
      t.record(eta_dual <= rhs * (1.0 + 1e-6), eta_dual / rhs);
    });
  }
  return t.done();
}

CheckRow check_gauss_vol(int samples, std::uint64_t seed) {
  Tally t("revmink", "gauss-vol-lower-bound", "vol_d(K∩W)^{−1/d}/(4·E‖X‖_K), K = Voronoi cell of Λ*");
  std::vector<std::string> specs = {"zn:2", "zn:3", "rect:1,3", "rect:2,3,5", "kl:3", "modp:3,10007,2"};
  int k = 0;
  for (const auto& s : specs) {
    t.guard([&] {
      Lattice l = FamilySpec::parse(s).build();
      const int n = l.rank();
      GaussNorm g = gaussian_norm_expectation(l, samples, sub_seed(seed, k++));
      RelevantVectors rv = voronoi_relevant_vectors(l.dual());
      const double box = covering_radius(l.dual()).hi * (1.0 + 1e-9);
      Rng rng(sub_seed(seed, 1000 + k));
      for (int mask = 1; mask < (1 << n); ++mask) {
        std::vector<int> axes;
        for (int i = 0; i < n; ++i)
          if (mask & (1 << i)) axes.push_back(i);
        const int d = int(axes.size());
        long hits = 0;
        const int draws = samples;
        Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
        for (int s2 = 0; s2 < draws; ++s2) {
          for (int a : axes) x(a) = uniform_real(rng, -box, box);
          bool in = true;
          for (const auto& v : rv.points)
            if (x.dot(v.vec) > 0.5 * v.norm2) {
              in = false;
              break;
            }
          hits += in;
        }
        const double vol = std::pow(2 * box, d) * double(hits) / draws;
        const double lhs = std::pow(vol, -1.0 / d);
        const double rhs = 4.0 * (g.estimate + 3 * g.stderr_);
        t.record(lhs <= rhs, lhs / rhs);
      }
    });
  }
  return t.done();
}

CheckRow check_gauss_norm(int samples, std::uint64_t seed) {
  Tally t("revmink", "gaussian-voronoi-norm", "ℤ¹ z-score, ℤ² ratio window [1,4], scaling-invariance gap");
  t.guard([&] {
    GaussNorm g = gaussian_norm_expectation(Lattice::integer(1), samples, sub_seed(seed, 0));
    const double z = std::fabs(g.estimate - 2.0 * std::sqrt(2.0 / kPi)) / g.stderr_;
    t.record(z <= 3.0, z);
  });
  t.guard([&] {
    GaussNorm g = gaussian_norm_expectation(Lattice::integer(2), samples, sub_seed(seed, 1));
    t.record(g.ratio >= 1.0 && g.ratio <= 4.0, g.ratio);
  });
  t.guard([&] {
    Lattice l = FamilySpec::parse("modp:3,10007,2").build();
    GaussNorm a = gaussian_norm_expectation(l, samples / 4 + 1, sub_seed(seed, 2));
    GaussNorm b = gaussian_norm_expectation(l.scaled(Scale::rational(3)), samples / 4 + 1, sub_seed(seed, 2));
    const double e = rel_err(a.ratio, b.ratio);
    t.record(e <= 1e-8, e);
  });
  return t.done();
}

CheckRow check_revmink_instance(std::uint64_t seed) {
  Tally t("revmink", "revmink-lb-instance", "structural violations (negation closure, order, count)");
  for (int n : {2, 3, 4}) {
    t.guard([&] {
      RevMinkInstance inst = revmink_lb_instance(n, 0.1, sub_seed(seed, n), 64);
      long target = std::min<long>(inst.requested, 64);
      target += target % 2;
      const auto& pts = inst.points.points;
      bool ok = long(pts.size()) == target;
      for (std::size_t i = 1; i < pts.size(); ++i) ok = ok && pts[i - 1].norm2 <= pts[i].norm2;
      for (const auto& p : pts) {
        IntVec neg = p.coords;
        for (auto& c : neg) c = -c;
        ok = ok && std::any_of(pts.begin(), pts.end(), [&](const LatticePoint& q) { return q.coords == neg; });
        ok = ok && std::sqrt(p.norm2) <= inst.points.radius * (1 + 1e-12);
      }
      t.record(ok, ok ? 0.0 : 1.0);
    });
  }
  return t.done();
}

// ---------------------------------------------------------------------------- reductions

namespace {

constexpr double kAlpha = 1.0;
constexpr int kSampleFactor = 100;

}  // namespace

CheckRow check_reduction_yes(int trials, std::uint64_t seed) {
  Tally t("reductions", "gapspp-yes", "accept rate must be ≥ 0.9 (calibrated); worst = 1 − rate");
  t.guard([&] {
    Lattice l = Lattice::integer(4);
    const double s = 1.1 * smoothing_parameter(l, 0.5).eta;
    int acc = 0;
    for (int i = 0; i < trials; ++i)
      acc += gapspp_reduction_trial(l, s, kAlpha, kSampleFactor, honest_oracle(s), sub_seed(seed, i)).accept;
    const double rate = double(acc) / trials;
    t.note("rate=" + std::to_string(rate));
    t.record(rate >= 0.9, 1.0 - rate);
  });
  return t.done();
}

CheckRow check_reduction_no(int trials, std::uint64_t seed) {
  Tally t("reductions", "gapspp-no", "reject rate must be ≥ 0.4 (calibrated); worst = 1 − rate");
  t.guard([&] {
    Lattice z4 = Lattice::integer(4);
    const double eta = smoothing_parameter(z4, 0.5).eta;
    const double s = 1.1 * eta;
    // K = η/η°_μ measured on ℤ⁴; scaling by c gives η(cℤ⁴) = 8αKs.
    EtaZoo zoo = compute_eta_zoo(z4);
    const double k = eta / zoo.mu_circ.value;
    const double c = 8.0 * kAlpha * k * s / eta;
    Lattice l = z4.scaled(c);
    int rej = 0;
    for (int i = 0; i < trials; ++i)
      rej += !gapspp_reduction_trial(l, s, kAlpha, kSampleFactor, honest_oracle(kAlpha * s), sub_seed(seed, i)).accept;
    const double rate = double(rej) / trials;
    t.note("rate=" + std::to_string(rate) + " K=" + std::to_string(k));
    t.record(rate >= 0.4, 1.0 - rate);
  });
  return t.done();
}

CheckRow check_reduction_malformed(int trials, std::uint64_t seed) {
  Tally t("reductions", "gapspp-malformed", "accepted malformed trials");
  Lattice l = Lattice::integer(4);
  const double s = 1.1 * smoothing_parameter(l, 0.5).eta;
  CosetOracle off = [s](const Lattice& lat, const Eigen::VectorXd& tv, int count, std::uint64_t sd) {
    auto pts = honest_oracle(s)(lat, tv, count, sd);
    pts.back()(0) += 0.5;  // one point leaves the coset
    return pts;
  };
  CosetOracle failing = [](const Lattice&, const Eigen::VectorXd&, int, std::uint64_t) -> std::vector<Eigen::VectorXd> {
    throw std::runtime_error("oracle failure");
  };
  for (int i = 0; i < trials; ++i) {
    t.guard([&] {
      bool a = gapspp_reduction_trial(l, s, kAlpha, kSampleFactor, off, sub_seed(seed, i)).accept;
      bool b = gapspp_reduction_trial(l, s, kAlpha, kSampleFactor, failing, sub_seed(seed, i)).accept;
      t.record(!a && !b, double(a) + double(b));
    });
  }
  return t.done();
}

CheckRow check_moment(std::uint64_t seed) {
  Tally t("reductions", "subgaussian-moment", "mismatches: honest pass, zero pass, spike fail");
  t.guard([&] {
    Lattice l = Lattice::integer(4);
    const double s = 1.1 * smoothing_parameter(l, 0.5).eta;
    auto pts = discrete_gaussian_sample(l, Eigen::VectorXd::Zero(4), s, 400, seed).points;
    bool honest = subgaussian_moment_check(pts, s);
    std::vector<Eigen::VectorXd> zeros(200, Eigen::VectorXd::Zero(4));
    Eigen::VectorXd spike = Eigen::VectorXd::Zero(4);
    spike(0) = 10 * s;
    std::vector<Eigen::VectorXd> spikes(200, spike);
    bool z = subgaussian_moment_check(zeros, s), sp = subgaussian_moment_check(spikes, s);
    t.record(honest, honest ? 0 : 1);
    t.record(z, z ? 0 : 1);
    t.record(!sp, sp ? 1 : 0);
  });
  return t.done();
}

// ---------------------------------------------------------------------------- mixing

CheckRow check_mixing(const std::vector<FamilySpec>& families) {
  Tally t("mixing", "mixing-times", "worst of |τ_∞ − η_{1/4}²|/τ_∞, τ_∞ − 2τ_2, scaling gap");
  for (const auto& f : families) {
    t.guard([&] {
      Lattice l = f.build();
      MixingTimes m = mixing_times(l);
      const double e4 = smoothing_parameter(l, 0.25).eta;
      const double e1 = rel_err(m.tau_inf, e4 * e4);
      const double e2 = m.tau_inf - 2.0 * m.tau_2;
      MixingTimes ms = mixing_times(l.scaled(Scale::rational(Rational(3, 2))));
      const double e3 = std::max(rel_err(ms.tau_inf, 2.25 * m.tau_inf), rel_err(ms.tau_2, 2.25 * m.tau_2));
      t.record(e1 <= 1e-8 && e2 <= 1e-9 && e3 <= 1e-8, std::max({e1, e2, e3}));
    });
  }
  return t.done();
}

// ---------------------------------------------------------------------------- siegel

CheckRow check_siegel(int n, int trials, std::uint64_t seed) {
  Tally t("siegel", "siegel-n" + std::to_string(n), "mean/target of ρ_{1/4}(Λ*\\0), window [1/2, 2]");
  t.guard([&] {
    SiegelResult r = siegel_check(n, Integer(1000003), trials, seed);
    const double q = r.mean / r.target;
    t.note("mean=" + std::to_string(r.mean) + " target=" + std::to_string(r.target));
    t.record(q >= 0.5 && q <= 2.0, q);
  });
  return t.done();
}

CheckRow check_siegel_ball(int trials, std::uint64_t seed) {
  Tally t("siegel", "siegel-ball", "|mean − vol|/(3se + 0.05·vol) for |Λ∩2B \\ 0| at n = 2");
  t.guard([&] {
    SiegelResult r = siegel_ball_check(2, Integer(10007), 2.0, trials, seed);
    const double v = std::fabs(r.mean - r.target) / (3 * r.stderr_ + 0.05 * r.target);
    t.record(v <= 1.0, v);
  });
  return t.done();
}

CheckRow check_modp(std::uint64_t seed) {
  Tally t("siegel", "modp-construction", "det exactness and brute-force membership mismatches");
  for (int i = 0; i < 10; ++i) {
    t.guard([&] {
      const int n = 2 + i % 4;
      Lattice l = random_modp_lattice(n, Integer(1000003), sub_seed(seed, i));
      auto d2 = l.det_squared();
      bool ok = d2 && *d2 == 1;
      t.record(ok, ok ? 0.0 : 1.0);
    });
  }
  t.guard([&] {
    // a = (1,2), p = 5: members of the unscaled kernel in a box match the congruence.
    Lattice l = modp_lattice({Integer(1), Integer(2)}, Integer(5));
    const RatMatrix& b0 = *l.unscaled_basis();
    RatMatrix inv = inverse(b0);
    long bad = 0;
    for (int x = -6; x <= 6; ++x)
      for (int y = -6; y <= 6; ++y) {
        const bool cong = ((x + 2 * y) % 5 + 5) % 5 == 0;
        Rational c0 = inv(0, 0) * x + inv(0, 1) * y, c1 = inv(1, 0) * x + inv(1, 1) * y;
        const bool member = c0.get_den() == 1 && c1.get_den() == 1;
        bad += cong != member;
      }
    t.record(bad == 0, double(bad));
  });
  return t.done();
}

// ---------------------------------------------------------------------------- driver

std::vector<std::string> suite_names() {
  return {"psd", "gaussian", "uncrossing", "kl", "revmink", "reductions", "mixing", "siegel", "all"};
}

std::vector<CheckRow> run_suite(const std::string& name, const SuiteConfig& cfg, std::ostream* progress) {
  const auto names = suite_names();
  if (std::find(names.begin(), names.end(), name) == names.end())
    throw std::invalid_argument("unknown suite '" + name + "'");
  auto tr = [&](int def) { return cfg.trials > 0 ? cfg.trials : def; };
  auto sm = [&](int def) { return cfg.samples > 0 ? cfg.samples : def; };
  const std::uint64_t s = cfg.seed;
  const auto fams = test_families();

  std::vector<std::pair<std::string, std::function<CheckRow()>>> jobs;
  auto add = [&](const std::string& suite, std::function<CheckRow()> f) {
    if (name == "all" || name == suite) jobs.push_back({suite, std::move(f)});
  };
  add("psd", [&] { return check_pinv(tr(200), sub_seed(s, 1)); });
  add("psd", [&] { return check_slice_variational(tr(200), sub_seed(s, 2)); });
  add("psd", [&] { return check_slice_pinv_duality(tr(200), sub_seed(s, 3)); });
  add("psd", [&] { return check_slice_superadditive(tr(200), sub_seed(s, 4)); });
  add("psd", [&] { return check_det_lemma(tr(200), sub_seed(s, 5)); });
  add("psd", [&] { return check_det_concavity(tr(200), sub_seed(s, 6)); });
  add("psd", [&] { return check_det_derivative(tr(200), sub_seed(s, 7)); });
  add("psd", [&] { return check_det_product(tr(200), sub_seed(s, 8)); });
  add("psd", [&] { return check_parallel_sum_limit(tr(200), sub_seed(s, 9)); });
  add("psd", [&] { return check_mat_max(tr(500), sub_seed(s, 10)); });

  add("gaussian", [&] { return check_smoothing_oracle(); });
  add("gaussian", [&] { return check_separable_generic(); });
  add("gaussian", [&] { return check_pointcount_sandwich(fams); });
  add("gaussian", [&] { return check_coset_mass(tr(100), sub_seed(s, 20)); });
  add("gaussian", [&] { return check_central_coset(tr(100), sub_seed(s, 21)); });
  add("gaussian", [&] { return check_banacosh(tr(100), sub_seed(s, 22)); });
  add("gaussian", [&] { return check_mass_decrease(tr(500), sub_seed(s, 23)); });
  add("gaussian", [&] { return check_gaussian_parallel_sum(tr(500), sub_seed(s, 24)); });
  add("gaussian", [&] { return check_asymptotic_mass(); });
  add("gaussian", [&] { return check_tv_smoothing(sm(200000), sub_seed(s, 25)); });
  add("gaussian", [&] { return check_eta_homogeneity(fams); });

  add("uncrossing", [&] { return check_uncrossing(tr(1000), sub_seed(s, 30)); });
  add("uncrossing", [&] { return check_detformula(tr(500), sub_seed(s, 31)); });
  add("uncrossing", [&] { return check_mat_max(tr(500), sub_seed(s, 32)); });
  add("uncrossing", [&] { return check_rev_am_gm(tr(500), sub_seed(s, 33)); });
  add("uncrossing", [&] { return check_rounding(tr(50), sub_seed(s, 34)); });

  add("kl", [&] { return check_programs(tr(50), sub_seed(s, 40)); });
  add("kl", [&] { return check_kl_certificates(fams); });
  add("kl", [&] { return check_gapcrp(); });
  add("kl", [&] { return check_direct_sum_mu(tr(30), sub_seed(s, 41)); });
  add("kl", [&] { return check_kl_cross(tr(20), sub_seed(s, 42)); });
  add("kl", [&] { return check_bar_mu(fams, sm(4000), sub_seed(s, 43)); });
  add("kl", [&] { return check_covering_sampling(fams, sm(4000), sub_seed(s, 44)); });
  add("kl", [&] { return check_eta_sandwich(fams); });

  add("revmink", [&] { return check_weak_revmink(fams); });
  add("revmink", [&] { return check_minkowski_henk(fams); });
  add("revmink", [&] { return check_strong_revmink_consistency(fams); });
  add("revmink", [&] { return check_gauss_vol(sm(20000), sub_seed(s, 50)); });
  add("revmink", [&] { return check_gauss_norm(sm(100000), sub_seed(s, 51)); });
  add("revmink", [&] { return check_revmink_instance(sub_seed(s, 52)); });

  add("reductions", [&] { return check_reduction_yes(tr(50), sub_seed(s, 60)); });
  add("reductions", [&] { return check_reduction_no(tr(50), sub_seed(s, 61)); });
  add("reductions", [&] { return check_reduction_malformed(tr(10), sub_seed(s, 62)); });
  add("reductions", [&] { return check_moment(sub_seed(s, 63)); });

  add("mixing", [&] { return check_mixing(fams); });

  add("siegel", [&] { return check_siegel(4, std::max(tr(200), 30), sub_seed(s, 70)); });
  add("siegel", [&] { return check_siegel(2, std::max(tr(200), 30), sub_seed(s, 71)); });
  add("siegel", [&] { return check_siegel_ball(std::max(tr(200), 30), sub_seed(s, 72)); });
  add("siegel", [&] { return check_modp(sub_seed(s, 73)); });

  std::vector<CheckRow> rows;
  for (auto& [suite, job] : jobs) {
    const auto t0 = std::chrono::steady_clock::now();
    CheckRow r = job();
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (progress) {
      *progress << (r.pass() ? "pass " : "FAIL ") << r.suite << '/' << r.name << " (" << std::fixed
                << std::setprecision(2) << r.seconds << " s)" << std::endl;
      progress->unsetf(std::ios::floatfield);
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

void print_summary(std::ostream& os, const std::vector<CheckRow>& rows) {
  std::size_t w = 10;
  for (const auto& r : rows) w = std::max(w, r.suite.size() + r.name.size() + 1);
  char buf[128];
  os << std::left << std::setw(int(w) + 2) << "check" << "result  trials  fails       worst   seconds\n";
  long fails = 0;
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%-6s  %6ld  %5ld  %10.3e  %8.2f", r.pass() ? "pass" : "FAIL", r.trials,
                  r.failures, r.worst, r.seconds);
    os << std::left << std::setw(int(w) + 2) << (r.suite + "/" + r.name) << buf << "\n";
    fails += !r.pass();
  }
  os << rows.size() - fails << "/" << rows.size() << " checks passed\n";
  for (const auto& r : rows)
    if (!r.pass()) os << "  " << r.suite << "/" << r.name << ": " << r.detail << "\n";
}

}  // namespace latgeo
