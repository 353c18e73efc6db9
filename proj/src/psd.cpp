#include "latgeo/psd.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace latgeo {

namespace {

constexpr double kClamp = 1e-10;

Eigen::MatrixXd orthonormal_complement(const Eigen::MatrixXd& o, int n) {
  Eigen::MatrixXd p = Eigen::MatrixXd::Identity(n, n) - o * o.transpose();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (p + p.transpose()));
  std::vector<int> keep;
  for (int i = 0; i < n; ++i)
    if (es.eigenvalues()(i) > 0.5) keep.push_back(i);
  Eigen::MatrixXd c(n, int(keep.size()));
  for (int j = 0; j < int(keep.size()); ++j) c.col(j) = es.eigenvectors().col(keep[j]);
  return c;
}

Eigen::MatrixXd pinv_symmetric(const Eigen::MatrixXd& m, double abs_threshold) {
  const int n = int(m.rows());
  if (n == 0) return m;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (m + m.transpose()));
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    double l = es.eigenvalues()(i);
    if (l > abs_threshold) out += (1.0 / l) * es.eigenvectors().col(i) * es.eigenvectors().col(i).transpose();
  }
  return out;
}

// Zeroes eigenvalues below `floor`: Schur complements of singular blocks leave O(ε‖X‖) residue.
Eigen::MatrixXd clamp_psd(const Eigen::MatrixXd& m, double floor) {
  const int n = int(m.rows());
  if (n == 0) return m;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (m + m.transpose()));
  Eigen::VectorXd l = es.eigenvalues();
  for (int i = 0; i < n; ++i)
    if (l(i) < floor) l(i) = 0.0;
  return es.eigenvectors() * l.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace

Subspace Subspace::span(const Eigen::MatrixXd& generators, double tol) {
  const int n = int(generators.rows());
  Subspace s(n);
  if (generators.cols() == 0 || n == 0) return s;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(generators, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return s;
  int r = 0;
  while (r < sv.size() && sv(r) > tol * sv(0)) ++r;
  s.basis_ = svd.matrixU().leftCols(r);
  return s;
}

Subspace Subspace::full(int n) {
  Subspace s(n);
  s.basis_ = Eigen::MatrixXd::Identity(n, n);
  return s;
}

Subspace Subspace::coordinate(int n, const std::vector<int>& axes) {
  Subspace s(n);
  s.basis_ = Eigen::MatrixXd::Zero(n, int(axes.size()));
  for (int j = 0; j < int(axes.size()); ++j) s.basis_(axes[j], j) = 1.0;
  return s;
}

Subspace Subspace::complement() const {
  Subspace s(ambient_dim());
  s.basis_ = orthonormal_complement(basis_, ambient_dim());
  return s;
}

Subspace Subspace::intersect(const Subspace& other) const {
  return complement().sum(other.complement()).complement();
}

Subspace Subspace::sum(const Subspace& other) const {
  Eigen::MatrixXd g(ambient_dim(), dim() + other.dim());
  g << basis_, other.basis_;
  return span(g, 1e-9);
}

bool Subspace::contains(const Eigen::VectorXd& v, double tol) const {
  Eigen::VectorXd r = v - basis_ * (basis_.transpose() * v);
  return r.norm() <= tol * std::max(1.0, v.norm());
}

bool Subspace::contains(const Subspace& other, double tol) const {
  for (int j = 0; j < other.dim(); ++j)
    if (!contains(Eigen::VectorXd(other.basis().col(j)), tol)) return false;
  return true;
}

bool Subspace::same_as(const Subspace& other, double tol) const {
  return dim() == other.dim() && contains(other, tol) && other.contains(*this, tol);
}

PsdMatrix::PsdMatrix(const Eigen::MatrixXd& x) {
  if (x.rows() != x.cols()) throw std::invalid_argument("PsdMatrix: not square");
  const int n = int(x.rows());
  double scale = n ? x.cwiseAbs().maxCoeff() : 0.0;
  if (n && (x - x.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw std::domain_error("PsdMatrix: not symmetric");
  Eigen::MatrixXd sym = 0.5 * (x + x.transpose());
  eigenvalues_ = Eigen::VectorXd::Zero(n);
  eigenvectors_ = Eigen::MatrixXd::Identity(n, n);
  matrix_ = Eigen::MatrixXd::Zero(n, n);
  if (n == 0) return;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
  // Ascending from Eigen; stored descending.
  for (int i = 0; i < n; ++i) {
    eigenvalues_(i) = es.eigenvalues()(n - 1 - i);
    eigenvectors_.col(i) = es.eigenvectors().col(n - 1 - i);
  }
  const double top = std::max(eigenvalues_(0), 0.0);
  if (eigenvalues_(n - 1) < -kClamp * top - 1e-300) throw std::domain_error("PsdMatrix: negative eigenvalue");
  rank_ = 0;
  for (int i = 0; i < n; ++i) {
    if (eigenvalues_(i) <= kClamp * top) eigenvalues_(i) = 0.0;
    else ++rank_;
  }
  for (int i = 0; i < rank_; ++i)
    matrix_ += eigenvalues_(i) * eigenvectors_.col(i) * eigenvectors_.col(i).transpose();
  matrix_ = 0.5 * (matrix_ + matrix_.transpose());
}

Subspace PsdMatrix::range() const { return Subspace::span(eigenvectors_.leftCols(rank_)); }

Subspace PsdMatrix::kernel() const {
  Eigen::MatrixXd k = eigenvectors_.rightCols(dim() - rank_);
  return Subspace::span(k);
}

Eigen::MatrixXd PsdMatrix::sqrt() const {
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(dim(), dim());
  for (int i = 0; i < rank_; ++i)
    s += std::sqrt(eigenvalues_(i)) * eigenvectors_.col(i) * eigenvectors_.col(i).transpose();
  return s;
}

Eigen::MatrixXd PsdMatrix::pinv_sqrt_factor() const {
  Eigen::MatrixXd f(rank_, dim());
  for (int i = 0; i < rank_; ++i) f.row(i) = eigenvectors_.col(i).transpose() / std::sqrt(eigenvalues_(i));
  return f;
}

PsdMatrix pseudo_inverse(const PsdMatrix& x) {
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(x.dim(), x.dim());
  for (int i = 0; i < x.rank(); ++i)
    p += (1.0 / x.eigenvalues()(i)) * x.eigenvectors().col(i) * x.eigenvectors().col(i).transpose();
  return PsdMatrix(0.5 * (p + p.transpose()));
}

PsdMatrix mat_project(const PsdMatrix& x, const Subspace& w) {
  Eigen::MatrixXd p = w.projector();
  Eigen::MatrixXd r = p * x.matrix() * p;
  return PsdMatrix(0.5 * (r + r.transpose()));
}

PsdMatrix mat_slice(const PsdMatrix& x, const Subspace& w) {
  const int n = x.dim();
  if (w.dim() == 0) return PsdMatrix::zero(n);
  const Eigen::MatrixXd& o = w.basis();
  Eigen::MatrixXd oc = w.complement().basis();
  Eigen::MatrixXd a = o.transpose() * x.matrix() * o;
  Eigen::MatrixXd s = a;
  if (oc.cols() > 0) {
    Eigen::MatrixXd c = o.transpose() * x.matrix() * oc;
    Eigen::MatrixXd b = oc.transpose() * x.matrix() * oc;
    s = a - c * pinv_symmetric(b, kClamp * x.max_eigenvalue()) * c.transpose();
    s = clamp_psd(s, kClamp * x.max_eigenvalue());
  }
  Eigen::MatrixXd lifted = o * (0.5 * (s + s.transpose())) * o.transpose();
  return PsdMatrix(0.5 * (lifted + lifted.transpose()));
}

double proj_det(const PsdMatrix& x, const Subspace& w) {
  if (w.dim() == 0) return 1.0;
  Eigen::MatrixXd m = w.basis().transpose() * x.matrix() * w.basis();
  return std::max(0.0, m.determinant());
}

PsdMatrix parallel_sum(const PsdMatrix& x, const PsdMatrix& y) {
  const int n = x.dim();
  Eigen::MatrixXd s = x.matrix() + y.matrix();
  double top = std::max(x.max_eigenvalue(), y.max_eigenvalue());
  Eigen::MatrixXd p = x.matrix() * pinv_symmetric(s, kClamp * top) * y.matrix();
  p = 0.5 * (p + p.transpose());
  Subspace common = x.range().intersect(y.range());
  if (common.dim() == 0) return PsdMatrix::zero(n);
  Eigen::MatrixXd pr = common.projector();
  Eigen::MatrixXd r = pr * p * pr;
  return PsdMatrix(0.5 * (r + r.transpose()));
}

bool ellipsoid_contains(const PsdMatrix& x, const Eigen::VectorXd& y) {
  if (!x.range().contains(y, 1e-9)) return false;
  Eigen::VectorXd f = x.pinv_sqrt_factor() * y;
  return f.squaredNorm() <= 1.0 + 1e-9;
}

double min_eigenvalue(const Eigen::MatrixXd& m) {
  if (m.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (m + m.transpose()), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

double max_eigenvalue(const Eigen::MatrixXd& m) {
  if (m.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (m + m.transpose()), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(m.rows() - 1);
}

double loewner_gap(const PsdMatrix& a, const PsdMatrix& b) { return min_eigenvalue(b.matrix() - a.matrix()); }

GramSchmidt gram_schmidt(const Eigen::MatrixXd& b) {
  const int d = int(b.cols());
  GramSchmidt gs;
  gs.vectors = b;
  gs.mu = Eigen::MatrixXd::Identity(d, d);
  gs.sq_norms.assign(d, 0.0);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < i; ++j) {
      if (gs.sq_norms[j] == 0.0) continue;
      double m = b.col(i).dot(gs.vectors.col(j)) / gs.sq_norms[j];
      gs.mu(i, j) = m;
      gs.vectors.col(i) -= m * gs.vectors.col(j);
    }
    double nn = gs.vectors.col(i).squaredNorm();
    if (nn <= 1e-24 * std::max(1.0, b.col(i).squaredNorm())) {
      nn = 0.0;
      gs.vectors.col(i).setZero();
      gs.singular = true;
    }
    gs.sq_norms[i] = nn;
  }
  return gs;
}

ExactGramSchmidt gram_schmidt(const RatMatrix& b) {
  const int n = b.rows(), d = b.cols();
  ExactGramSchmidt gs;
  gs.vectors = b;
  gs.mu = RatMatrix::identity(d);
  gs.sq_norms.assign(d, Rational(0));
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < i; ++j) {
      if (gs.sq_norms[j] == 0) continue;
      Rational dot = 0;
      for (int k = 0; k < n; ++k) dot += b(k, i) * gs.vectors(k, j);
      Rational m = dot / gs.sq_norms[j];
      gs.mu(i, j) = m;
      for (int k = 0; k < n; ++k) gs.vectors(k, i) -= m * gs.vectors(k, j);
    }
    Rational nn = 0;
    for (int k = 0; k < n; ++k) nn += gs.vectors(k, i) * gs.vectors(k, i);
    if (nn == 0) gs.singular = true;
    gs.sq_norms[i] = nn;
  }
  return gs;
}

}  // namespace latgeo
