#pragma once

#include <Eigen/Dense>
#include <vector>

#include "latgeo/rational.hpp"

namespace latgeo {

// Linear subspace of R^n held by an orthonormal basis O_W (n×d).
class Subspace {
 public:
  Subspace() = default;
  explicit Subspace(int ambient_dim) : basis_(ambient_dim, 0) {}

  // Orthonormal basis of the column span; singular values below tol·σ_max are dropped.
  static Subspace span(const Eigen::MatrixXd& generators, double tol = 1e-10);
  static Subspace full(int n);
  static Subspace coordinate(int n, const std::vector<int>& axes);

  int dim() const { return int(basis_.cols()); }
  int ambient_dim() const { return int(basis_.rows()); }
  const Eigen::MatrixXd& basis() const { return basis_; }
  Eigen::MatrixXd projector() const { return basis_ * basis_.transpose(); }

  Subspace complement() const;
  Subspace intersect(const Subspace& other) const;
  Subspace sum(const Subspace& other) const;
  bool contains(const Eigen::VectorXd& v, double tol = 1e-9) const;
  bool contains(const Subspace& other, double tol = 1e-9) const;
  bool same_as(const Subspace& other, double tol = 1e-9) const;

 private:
  Eigen::MatrixXd basis_;
};

// Symmetric positive semidefinite matrix with an eager eigendecomposition.
// Eigenvalues below 1e-10·λ₁ are clamped to zero; below −1e-10·λ₁ is an error.
class PsdMatrix {
 public:
  PsdMatrix() = default;
  explicit PsdMatrix(const Eigen::MatrixXd& x);

  static PsdMatrix identity(int n) { return PsdMatrix(Eigen::MatrixXd::Identity(n, n)); }
  static PsdMatrix zero(int n) { return PsdMatrix(Eigen::MatrixXd::Zero(n, n)); }
  static PsdMatrix scalar(int n, double s) { return PsdMatrix(s * Eigen::MatrixXd::Identity(n, n)); }

  int dim() const { return int(matrix_.rows()); }
  const Eigen::MatrixXd& matrix() const { return matrix_; }
  // Descending.
  const Eigen::VectorXd& eigenvalues() const { return eigenvalues_; }
  const Eigen::MatrixXd& eigenvectors() const { return eigenvectors_; }
  int rank() const { return rank_; }
  double trace() const { return matrix_.trace(); }
  double max_eigenvalue() const { return dim() ? eigenvalues_(0) : 0.0; }

  Subspace range() const;
  Subspace kernel() const;
  Eigen::MatrixXd sqrt() const;
  // F with yᵀX⁺y = ‖F y‖² (rank×n).
  Eigen::MatrixXd pinv_sqrt_factor() const;

  PsdMatrix operator+(const PsdMatrix& o) const { return PsdMatrix(matrix_ + o.matrix_); }
  PsdMatrix scaled(double s) const { return PsdMatrix(s * matrix_); }

 private:
  Eigen::MatrixXd matrix_;
  Eigen::VectorXd eigenvalues_;
  Eigen::MatrixXd eigenvectors_;
  int rank_ = 0;
};

PsdMatrix pseudo_inverse(const PsdMatrix& x);
// π_W X π_W.
PsdMatrix mat_project(const PsdMatrix& x, const Subspace& w);
// Lifted Schur complement: yᵀX^{∩W}y = min over w ⊥ W of (y+w)ᵀX(y+w).
PsdMatrix mat_slice(const PsdMatrix& x, const Subspace& w);
// det(O_Wᵀ X O_W); 1 for the zero subspace.
double proj_det(const PsdMatrix& x, const Subspace& w);
// X(X+Y)⁺Y restricted to range(X) ∩ range(Y).
PsdMatrix parallel_sum(const PsdMatrix& x, const PsdMatrix& y);
bool ellipsoid_contains(const PsdMatrix& x, const Eigen::VectorXd& y);

double min_eigenvalue(const Eigen::MatrixXd& symmetric);
double max_eigenvalue(const Eigen::MatrixXd& symmetric);
// Smallest eigenvalue of B − A.
double loewner_gap(const PsdMatrix& a, const PsdMatrix& b);

struct GramSchmidt {
  Eigen::MatrixXd vectors;  // columns b̃_i
  Eigen::MatrixXd mu;       // b_i = b̃_i + Σ_{j<i} mu(i,j) b̃_j
  std::vector<double> sq_norms;
  bool singular = false;
};

struct ExactGramSchmidt {
  RatMatrix vectors;
  RatMatrix mu;
  std::vector<Rational> sq_norms;
  bool singular = false;
};

GramSchmidt gram_schmidt(const Eigen::MatrixXd& b);
ExactGramSchmidt gram_schmidt(const RatMatrix& b);

}  // namespace latgeo
