#include "latgeo/enumerate.hpp"

#include <algorithm>
#include <cmath>

namespace latgeo {

namespace {

using LdMatrix = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;

void gram_schmidt_ld(const LdMatrix& b, LdMatrix& bstar, LdMatrix& mu, std::vector<long double>& nn) {
  const int d = int(b.cols());
  bstar = b;
  mu = LdMatrix::Identity(d, d);
  nn.assign(d, 0.0L);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < i; ++j) {
      mu(i, j) = nn[j] > 0 ? b.col(i).dot(bstar.col(j)) / nn[j] : 0.0L;
      bstar.col(i) -= mu(i, j) * bstar.col(j);
    }
    nn[i] = bstar.col(i).squaredNorm();
  }
}

}  // namespace

LllResult lll_reduce(const Eigen::MatrixXd& basis, double delta) {
  const int d = int(basis.cols());
  LdMatrix b = basis.cast<long double>();
  LongMatrix t = LongMatrix::Identity(d, d);
  LdMatrix bstar, mu;
  std::vector<long double> nn;
  int k = 1;
  long guard = 0;
  gram_schmidt_ld(b, bstar, mu, nn);
  while (k < d && guard++ < 100000) {
    for (int j = k - 1; j >= 0; --j) {
      long double m = mu(k, j);
      if (std::fabs(m) > 0.5L) {
        long q = std::lround(double(m));
        b.col(k) -= (long double)q * b.col(j);
        t.col(k) -= q * t.col(j);
        for (int i = 0; i <= j; ++i) mu(k, i) -= (long double)q * mu(j, i);
      }
    }
    if (nn[k] >= ((long double)delta - mu(k, k - 1) * mu(k, k - 1)) * nn[k - 1]) {
      ++k;
    } else {
      b.col(k).swap(b.col(k - 1));
      t.col(k).swap(t.col(k - 1));
      gram_schmidt_ld(b, bstar, mu, nn);
      k = std::max(k - 1, 1);
    }
  }
  // Recompute the columns from the integer transform to avoid accumulated drift.
  LllResult r;
  r.transform = t;
  r.basis = basis * t.cast<double>();
  return r;
}

Enumerator::Enumerator(const Eigen::MatrixXd& basis) {
  LllResult red = lll_reduce(basis);
  reduced_ = red.basis;
  transform_ = red.transform;
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(reduced_);
  const int n = int(reduced_.rows()), d = int(reduced_.cols());
  q_ = qr.householderQ() * Eigen::MatrixXd::Identity(n, d);
  r_ = qr.matrixQR().topRows(d).triangularView<Eigen::Upper>();
}

IntVec Enumerator::babai(const Eigen::VectorXd& target) const {
  const int d = rank();
  Eigen::VectorXd u = r_.triangularView<Eigen::Upper>().solve(q_.transpose() * target);
  std::vector<long> z(d, 0);
  for (int k = d - 1; k >= 0; --k) {
    double s = 0.0;
    for (int j = k + 1; j < d; ++j) s += r_(k, j) * (double(z[j]) - u(j));
    z[k] = std::lround(u(k) - s / r_(k, k));
  }
  IntVec out(transform_.rows(), 0);
  for (int i = 0; i < int(out.size()); ++i)
    for (int j = 0; j < d; ++j) out[i] += transform_(i, j) * z[j];
  return out;
}

PointList enumerate_points(const Lattice& l, double r, std::uint64_t budget) {
  if (r < 0) throw std::invalid_argument("enumerate_points: negative radius");
  Enumerator e(l.basis());
  PointList out;
  out.radius = r;
  Eigen::VectorXd origin = Eigen::VectorXd::Zero(l.ambient_dim());
  bool ok = e.run(origin, r * r, budget, [&](const IntVec& z, const Eigen::VectorXd& p, double d2) {
    out.points.push_back({z, p, d2});
  });
  if (!ok) throw BudgetExceeded(out.points.size());
  std::sort(out.points.begin(), out.points.end(), [](const LatticePoint& a, const LatticePoint& b) {
    if (a.norm2 != b.norm2) return a.norm2 < b.norm2;
    return a.coords < b.coords;
  });
  return out;
}

CvpResult CvpSolver::closest(const Eigen::VectorXd& t, std::uint64_t budget) const {
  IntVec seed = enumerator_.babai(t);
  Eigen::VectorXd p = Eigen::VectorXd::Zero(enumerator_.ambient_dim());
  // Original-basis columns are reduced · T⁻¹; evaluate through the reduced basis instead.
  Eigen::VectorXd zs(seed.size());
  for (int i = 0; i < int(seed.size()); ++i) zs(i) = double(seed[i]);
  Eigen::VectorXd zr = enumerator_.transform().cast<double>().fullPivLu().solve(zs);
  p = enumerator_.reduced_basis() * zr;
  double best = (p - t).squaredNorm();
  struct Cand { IntVec z; Eigen::VectorXd p; double d2; };
  std::vector<Cand> cands;
  bool ok = enumerator_.run(t, best * (1.0 + 1e-9) + 1e-300, budget,
                            [&](const IntVec& z, const Eigen::VectorXd& q, double d2) {
                              if (d2 < best) best = d2;
                              if (d2 <= best * (1.0 + 1e-10) + 1e-300) cands.push_back({z, q, d2});
                            });
  if (!ok) throw BudgetExceeded(cands.size());
  const Cand* win = nullptr;
  for (const auto& c : cands) {
    if (c.d2 > best * (1.0 + 1e-10) + 1e-300) continue;
    if (!win || c.z < win->z) win = &c;
  }
  if (!win) return {seed, p, std::sqrt(best)};
  return {win->z, win->p, std::sqrt(win->d2)};
}

CvpResult cvp(const Lattice& l, const Eigen::VectorXd& t, std::uint64_t budget) {
  return CvpSolver(l).closest(t, budget);
}

CvpResult babai_nearest_plane(const Lattice& l, const Eigen::VectorXd& t) {
  GramSchmidt gs = gram_schmidt(l.basis());
  const int d = l.rank();
  Eigen::VectorXd rest = t;
  IntVec z(d, 0);
  for (int i = d - 1; i >= 0; --i) {
    double c = rest.dot(gs.vectors.col(i)) / gs.sq_norms[i];
    z[i] = std::lround(c);
    rest -= double(z[i]) * l.basis().col(i);
  }
  Eigen::VectorXd p = l.point(z);
  return {z, p, (t - p).norm()};
}

std::vector<double> successive_minima(const Lattice& l, std::uint64_t budget) {
  Enumerator e(l.basis());
  double r2 = 0.0;
  for (int j = 0; j < e.rank(); ++j) r2 = std::max(r2, e.reduced_basis().col(j).squaredNorm());
  std::vector<LatticePoint> pts;
  Eigen::VectorXd origin = Eigen::VectorXd::Zero(l.ambient_dim());
  bool ok = e.run(origin, r2 * (1.0 + 1e-9), budget, [&](const IntVec& z, const Eigen::VectorXd& p, double d2) {
    if (d2 > 0.0) pts.push_back({z, p, d2});
  });
  if (!ok) throw BudgetExceeded(pts.size());
  std::sort(pts.begin(), pts.end(), [](const LatticePoint& a, const LatticePoint& b) {
    if (a.norm2 != b.norm2) return a.norm2 < b.norm2;
    return a.coords < b.coords;
  });
  const int d = l.rank();
  std::vector<double> minima;
  RatMatrix chosen(d, 0);
  for (const auto& pt : pts) {
    RatMatrix trial(d, chosen.cols() + 1);
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < chosen.cols(); ++j) trial(i, j) = chosen(i, j);
      trial(i, chosen.cols()) = Rational(pt.coords[i]);
    }
    if (rank(trial) == trial.cols()) {
      chosen = trial;
      minima.push_back(std::sqrt(pt.norm2));
      if (int(minima.size()) == d) break;
    }
  }
  return minima;
}

double ball_volume(int d, double r) {
  const double pi = 3.14159265358979323846;
  return std::pow(pi, d / 2.0) / std::tgamma(d / 2.0 + 1.0) * std::pow(r, d);
}

double shortest_vector_length(const Eigen::MatrixXd& basis, std::uint64_t budget) {
  Enumerator e(basis);
  double best = e.reduced_basis().col(0).squaredNorm();
  for (int j = 1; j < e.rank(); ++j) best = std::min(best, e.reduced_basis().col(j).squaredNorm());
  Eigen::VectorXd origin = Eigen::VectorXd::Zero(basis.rows());
  bool ok = e.run(origin, best * (1.0 + 1e-9), budget, [&](const IntVec&, const Eigen::VectorXd&, double d2) {
    if (d2 > 1e-300 && d2 < best) best = d2;
  });
  if (!ok) throw BudgetExceeded(0);
  return std::sqrt(best);
}

}  // namespace latgeo
