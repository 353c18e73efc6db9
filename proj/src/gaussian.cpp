#include "latgeo/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace latgeo {

namespace {

constexpr double kPi = 3.14159265358979323846;

double sum_ascending(std::vector<double>& terms) {
  std::sort(terms.begin(), terms.end());
  double s = 0.0;
  for (double t : terms) s += t;
  return s;
}

// Diagonal X positive definite.
bool diagonal_pd(const PsdMatrix& x) {
  const Eigen::MatrixXd& m = x.matrix();
  const double top = x.max_eigenvalue();
  if (!(top > 0)) return false;
  for (int i = 0; i < m.rows(); ++i) {
    if (!(m(i, i) > 1e-12 * top)) return false;
    for (int j = 0; j < m.cols(); ++j)
      if (i != j && m(i, j) != 0.0) return false;
  }
  return true;
}

}  // namespace

double theta_1d(double a, double u) {
  if (!(a > 0)) throw std::invalid_argument("theta_1d: nonpositive parameter");
  if (a >= 1.0) {
    const long k0 = std::lround(-u);
    double s = 0.0;
    for (long r = 0;; ++r) {
      double t = 0.0;
      double x = double(k0 + r) + u;
      t += std::exp(-kPi * a * x * x);
      if (r > 0) {
        double y = double(k0 - r) + u;
        t += std::exp(-kPi * a * y * y);
      }
      s += t;
      if (r > 1 && t < 1e-20 * s) break;
    }
    return s;
  }
  double s = 1.0;
  for (long m = 1;; ++m) {
    double t = 2.0 * std::exp(-kPi * double(m) * double(m) / a) * std::cos(2.0 * kPi * double(m) * u);
    s += t;
    if (std::exp(-kPi * double(m) * double(m) / a) < 1e-20) break;
  }
  return s / std::sqrt(a);
}

double theta_1d_nonzero(double a) {
  if (a < 0.5) return theta_1d(a) - 1.0;
  double s = 0.0;
  for (long k = 1;; ++k) {
    double t = 2.0 * std::exp(-kPi * a * double(k) * double(k));
    s += t;
    if (t < 1e-20 * s || t == 0.0) break;
  }
  return s;
}

bool is_separable(const Lattice& l, const PsdMatrix& x) {
  return l.is_axis_aligned() && x.dim() == l.ambient_dim() && diagonal_pd(x);
}

GaussianMass rho_separable(const Lattice& l, const PsdMatrix& x, const Eigen::VectorXd& t, bool exclude_zero) {
  if (!is_separable(l, x)) throw std::invalid_argument("rho_separable: lattice/matrix not separable");
  GaussianMass g;
  double log_sum = 0.0;
  bool centered = exclude_zero;
  for (int j = 0; j < l.rank(); ++j) {
    int axis = 0;
    for (int i = 0; i < l.ambient_dim(); ++i)
      if (l.basis()(i, j) != 0.0) axis = i;
    const double c = std::fabs(l.basis()(axis, j));
    const double a = c * c / x.matrix()(axis, axis);
    if (centered) {
      log_sum += std::log1p(theta_1d_nonzero(a));
    } else {
      log_sum += std::log(theta_1d(a, t.size() ? t(axis) / c : 0.0));
    }
  }
  g.value = centered ? std::expm1(log_sum) : std::exp(log_sum);
  return g;
}

// Shell-doubling summation over Λ + t inside ellipsoids yᵀX⁺y ≤ R²; requires span(Λ) ⊆ range(X).
static GaussianMass shell_sum(const Lattice& l, const PsdMatrix& x, const Eigen::VectorXd& t, bool exclude_zero, double tol,
                       std::uint64_t budget, std::vector<WeightedPoint>* out) {
  Eigen::MatrixXd f = x.pinv_sqrt_factor();
  Eigen::MatrixXd m = f * l.basis();
  Eigen::VectorXd c = -(f * t);
  Enumerator e(m);
  IntVec zb = e.babai(c);
  Eigen::VectorXd pb = Eigen::VectorXd::Zero(m.rows());
  for (int j = 0; j < l.rank(); ++j) pb += double(zb[j]) * m.col(j);
  double r = std::max(std::sqrt(double(l.rank())), (pb - c).norm() + 1.0);
  GaussianMass g;
  for (int iter = 0; iter < 60; ++iter) {
    std::vector<double> terms, shell;
    if (out) out->clear();
    const double inner = r * r / 2.0;
    bool ok = e.run(c, r * r, budget, [&](const IntVec& z, const Eigen::VectorXd&, double d2) {
      if (exclude_zero) {
        bool zero = true;
        for (long v : z) zero = zero && v == 0;
        if (zero) return;
      }
      double w = std::exp(-kPi * d2);
      terms.push_back(w);
      if (out) out->push_back({l.point(z) + t, d2, w, z});
      if (d2 > inner) shell.push_back(w);
    });
    g.value = sum_ascending(terms);
    g.tail_estimate = sum_ascending(shell);
    g.truncation_radius = r;
    if (!ok) {
      g.complete = false;
      return g;
    }
    // Outer shell small, and the Gaussian weight at the inner shell edge times the
    // point count is small too (an empty shell alone proves nothing).
    const bool decayed = std::exp(-kPi * inner) * double(terms.size() + 1) <= tol * g.value;
    if ((g.tail_estimate <= tol * g.value && decayed) || (g.value == 0.0 && exclude_zero && r > 40.0)) {
      g.complete = true;
      return g;
    }
    r *= std::sqrt(2.0);
  }
  g.complete = false;
  return g;
}

GaussianMass rho_generic(const Lattice& l, const PsdMatrix& x, const Eigen::VectorXd& t, bool exclude_zero,
                         double tol, std::uint64_t budget) {
  if (x.dim() != l.ambient_dim() || t.size() != l.ambient_dim())
    throw std::invalid_argument("rho: dimension mismatch");
  Subspace sp = Subspace::span(l.basis());
  if (!sp.contains(t, 1e-9)) throw std::invalid_argument("rho: coset shift outside span of the lattice");
  Subspace range = x.range();
  if (!range.contains(sp, 1e-8)) {
    if (t.norm() > 0) throw std::invalid_argument("rho: shifted coset with span(Λ) outside range(X)");
    Subspace common = sp.intersect(range);
    if (common.dim() == 0) return {exclude_zero ? 0.0 : 1.0, 0.0, 0.0, true};
    LatticeSubspace w;
    try {
      w = intersect_subspace(l, common);
    } catch (const NotLatticeSubspace&) {
      throw std::invalid_argument("rho: span(Λ) ∩ range(X) is not a lattice subspace");
    }
    Lattice sub = sublattice(l, w);
    return rho_generic(sub, x, Eigen::VectorXd::Zero(l.ambient_dim()), exclude_zero, tol, budget);
  }
  return shell_sum(l, x, t, exclude_zero, tol, budget, nullptr);
}

GaussianMass gaussian_support(const Lattice& l, const PsdMatrix& x, bool exclude_zero, std::vector<WeightedPoint>& out,
                              double tol, std::uint64_t budget) {
  if (!x.range().contains(Subspace::span(l.basis()), 1e-8))
    throw std::invalid_argument("gaussian_support: span(Λ) outside range(X)");
  return shell_sum(l, x, Eigen::VectorXd::Zero(l.ambient_dim()), exclude_zero, tol, budget, &out);
}

GaussianMass gaussian_support(const Lattice& l, const PsdMatrix& x, const Eigen::VectorXd& t,
                              std::vector<WeightedPoint>& out, double tol, std::uint64_t budget) {
  if (!x.range().contains(Subspace::span(l.basis()), 1e-8))
    throw std::invalid_argument("gaussian_support: span(Λ) outside range(X)");
  if (!Subspace::span(l.basis()).contains(t, 1e-9))
    throw std::invalid_argument("gaussian_support: coset shift outside span of the lattice");
  return shell_sum(l, x, t, false, tol, budget, &out);
}

GaussianMass rho(const Lattice& l, const PsdMatrix& x, const Eigen::VectorXd& t, double tol, std::uint64_t budget) {
  if (is_separable(l, x)) return rho_separable(l, x, t, false);
  return rho_generic(l, x, t, false, tol, budget);
}

GaussianMass rho(const Lattice& l, const PsdMatrix& x, double tol, std::uint64_t budget) {
  return rho(l, x, Eigen::VectorXd::Zero(l.ambient_dim()), tol, budget);
}

GaussianMass rho_nonzero(const Lattice& l, const PsdMatrix& x, double tol, std::uint64_t budget) {
  Eigen::VectorXd t = Eigen::VectorXd::Zero(l.ambient_dim());
  if (is_separable(l, x)) return rho_separable(l, x, t, true);
  return rho_generic(l, x, t, true, tol, budget);
}

double theta(const Lattice& l, double a) {
  if (!(a > 0)) throw std::invalid_argument("theta: nonpositive parameter");
  const int d = l.rank();
  const int n = l.ambient_dim();
  // Rough point counts needed on each side for a 1e-16 cutoff.
  const double cut = 37.0 / kPi;
  const double log_det = l.log_det();
  const double direct = std::log(ball_volume(d, std::sqrt(cut / a))) - log_det;
  const double poisson = std::log(ball_volume(d, std::sqrt(cut * a))) + log_det;
  if (direct <= poisson + 1e-12) return rho(l, PsdMatrix::scalar(n, 1.0 / a)).value;
  Lattice dual = l.dual();
  double s = rho(dual, PsdMatrix::scalar(n, a)).value;
  return s * std::exp(-log_det - 0.5 * d * std::log(a));
}

DualSum::DualSum(const Lattice& l, std::uint64_t budget) : dual_(l.dual()), budget_(budget) {
  if (dual_.is_axis_aligned()) {
    std::vector<double> axes;
    for (int j = 0; j < dual_.rank(); ++j) axes.push_back(dual_.basis().col(j).squaredNorm());
    axes_ = axes;
    lambda1_ = std::sqrt(*std::min_element(axes.begin(), axes.end()));
  } else {
    lambda1_ = shortest_vector_length(dual_.basis(), budget_);
  }
}

void DualSum::rebuild(double s_floor) {
  // Enumerate until the outermost shell is negligible at the smallest requested s.
  double r2 = 30.0 / (kPi * s_floor * s_floor);
  const double ratio = 1.44;
  while (true) {
    PointList pts = enumerate_points(dual_, std::sqrt(r2), budget_);
    std::vector<double> norms;
    double total = 0.0, shell = 0.0;
    for (const auto& p : pts.points) {
      if (p.norm2 == 0.0) continue;
      norms.push_back(p.norm2);
      double w = std::exp(-kPi * s_floor * s_floor * p.norm2);
      total += w;
      if (p.norm2 > r2 / ratio) shell += w;
    }
    if (shell <= 1e-16 * std::max(total, 1e-300) || (total == 0.0 && kPi * s_floor * s_floor * r2 > 745.0)) {
      norms2_ = std::move(norms);
      s_floor_ = s_floor;
      return;
    }
    r2 *= ratio;
  }
}

double DualSum::operator()(double s) {
  if (!(s > 0)) throw std::invalid_argument("DualSum: nonpositive s");
  if (axes_) {
    double log_sum = 0.0;
    for (double a : *axes_) log_sum += std::log1p(theta_1d_nonzero(s * s * a));
    return std::expm1(log_sum);
  }
  if (s_floor_ == 0.0 || s < s_floor_) rebuild(s * 0.9);
  // Descending norms sum the small terms first.
  double acc = 0.0;
  const double k = kPi * s * s;
  for (auto it = norms2_.rbegin(); it != norms2_.rend(); ++it) acc += std::exp(-k * *it);
  return acc;
}

SmoothingResult smoothing_parameter(DualSum& f, double eps, double tol) {
  if (!(eps > 0)) throw std::invalid_argument("smoothing_parameter: eps must be positive");
  if (!(tol > 0)) throw std::invalid_argument("smoothing_parameter: tol must be positive");
  const int n = f.dual().rank();
  double hi = std::sqrt(double(n)) / f.lambda1();
  if (eps < std::pow(2.0, -n)) hi *= 2.0;
  while (f(hi) > eps) hi *= 2.0;
  double lo = hi;
  while (f(lo) <= eps) lo *= 0.8;
  // Bisection far below tol so that homogeneity survives rounding.
  for (int iter = 0; iter < 200 && hi - lo > 1e-4 * tol * hi; ++iter) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (f(mid) > eps) lo = mid;
    else hi = mid;
  }
  SmoothingResult r;
  r.eps = eps;
  r.lo = lo;
  r.hi = hi;
  r.eta = 0.5 * (lo + hi);
  r.dual_sum_at_eta = f(r.eta);
  return r;
}

SmoothingResult smoothing_parameter(const Lattice& l, double eps, double tol) {
  DualSum f(l);
  return smoothing_parameter(f, eps, tol);
}

double eta_from_point_counts(const Lattice& l, double r_max, std::uint64_t budget) {
  Lattice dual = l.dual();
  const double n = l.rank();
  auto scan = [&](double radius, double& best) {
    PointList pts = enumerate_points(dual, radius, budget);
    const auto& p = pts.points;
    for (std::size_t i = 1; i < p.size(); ++i) {
      // Count at radius ‖p_i‖ includes every point tied with it.
      if (i + 1 < p.size() && p[i + 1].norm2 <= p[i].norm2 * (1.0 + 1e-12)) continue;
      double r = std::sqrt(p[i].norm2);
      best = std::max(best, std::sqrt(std::log(double(i + 1)) / kPi) / r);
    }
    return double(p.size());
  };
  double best = 0.0;
  if (r_max > 0) {
    scan(r_max, best);
    return best;
  }
  double r = shortest_vector_length(dual.basis(), budget);
  for (;;) {
    const double count = scan(r, best);
    // Beyond r the quantity is at most √(log(3ⁿ·count)/π)/r, decreasing in the radius.
    if (std::sqrt((n * std::log(3.0) + std::log(count)) / kPi) / r <= best) return best;
    r *= 1.5;
  }
}

MixingTimes mixing_times(const Lattice& l) {
  DualSum f(l);
  MixingTimes m;
  double e4 = smoothing_parameter(f, 0.25).eta;
  double e16 = smoothing_parameter(f, 1.0 / 16.0).eta;
  m.tau_inf = e4 * e4;
  m.tau_2 = e16 * e16 / 2.0;
  return m;
}

double gauss_scale_bound(const Lattice& l, const std::vector<double>& s_grid) {
  double best = 0.0;
  for (double s : s_grid) {
    if (!(s > 0)) continue;
    double th = theta(l, s * s);
    if (th > 1.0) best = std::max(best, s * std::sqrt(std::log(th) / kPi));
  }
  return best;
}

double mu_lower_bound_gauss(const Lattice& l, const std::vector<double>& s_grid) {
  return gauss_scale_bound(l.dual(), s_grid);
}

std::vector<double> geometric_grid(double center, int lo_steps, int hi_steps) {
  std::vector<double> g;
  for (int k = -lo_steps; k <= hi_steps; ++k) g.push_back(center * std::pow(2.0, k / 8.0));
  return g;
}

double mu_lb_point_count(const Lattice& l, double r_max, std::uint64_t budget) {
  if (r_max <= 0) {
    LllResult red = lll_reduce(l.basis());
    double top = 0.0;
    for (int j = 0; j < l.rank(); ++j) top = std::max(top, red.basis.col(j).norm());
    r_max = 4.0 * std::sqrt(double(l.rank())) * top;
  }
  PointList pts = enumerate_points(l, r_max, budget);
  double best = 0.0;
  const auto& p = pts.points;
  for (std::size_t i = 1; i < p.size(); ++i) {
    if (i + 1 < p.size() && p[i + 1].norm2 <= p[i].norm2 * (1.0 + 1e-12)) continue;
    double r = std::sqrt(p[i].norm2);
    best = std::max(best, std::log(double(i + 1)) / (2.0 * kPi * r));
  }
  return best;
}

}  // namespace latgeo
