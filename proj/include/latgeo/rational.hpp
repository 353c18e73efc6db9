#pragma once

#include <gmpxx.h>

#include <Eigen/Dense>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace latgeo {

using Integer = mpz_class;
using Rational = mpq_class;

// Dense row-major matrix over an exact ring.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols) : rows_(rows), cols_(cols), data_(std::size_t(rows) * cols, T(0)) {}

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1;
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  T& operator()(int i, int j) { return data_[std::size_t(i) * cols_ + j]; }
  const T& operator()(int i, int j) const { return data_[std::size_t(i) * cols_ + j]; }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Matrix column_block(int first, int count) const {
    Matrix b(rows_, count);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < count; ++j) b(i, j) = (*this)(i, first + j);
    return b;
  }

  std::vector<T> column(int j) const {
    std::vector<T> c(rows_);
    for (int i = 0; i < rows_; ++i) c[i] = (*this)(i, j);
    return c;
  }

  bool operator==(const Matrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<T> data_;
};

using RatMatrix = Matrix<Rational>;
using IntMatrix = Matrix<Integer>;

template <class T>
Matrix<T> operator*(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matrix product: shape mismatch");
  Matrix<T> c(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int k = 0; k < a.cols(); ++k) {
      if (a(i, k) == 0) continue;
      for (int j = 0; j < b.cols(); ++j) c(i, j) += a(i, k) * b(k, j);
    }
  return c;
}

template <class T>
Matrix<T> operator+(const Matrix<T>& a, const Matrix<T>& b) {
  Matrix<T> c(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) + b(i, j);
  return c;
}

template <class T>
Matrix<T> operator-(const Matrix<T>& a, const Matrix<T>& b) {
  Matrix<T> c(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) - b(i, j);
  return c;
}

RatMatrix scaled(const RatMatrix& a, const Rational& s);
RatMatrix to_rational(const IntMatrix& m);
Eigen::MatrixXd to_double(const RatMatrix& m);
Eigen::MatrixXd to_double(const IntMatrix& m);

Rational determinant(const RatMatrix& m);
int rank(const RatMatrix& m);
// Throws std::domain_error when singular.
RatMatrix inverse(const RatMatrix& m);
// Columns form a basis of {x : m x = 0}.
RatMatrix kernel(const RatMatrix& m);

// Columns form a Z-basis of Z^c ∩ ker(m).
IntMatrix integer_kernel(const RatMatrix& m);
// Columns form the canonical Z-basis of Z^c ∩ span_Q(columns of gens).
IntMatrix saturate(const IntMatrix& gens);
// Nonzero rows of the row-style Hermite normal form (positive pivots, reduced above).
IntMatrix hnf_rows(const IntMatrix& m);
// Canonical generator matrix (columns) of the lattice spanned by rational columns.
RatMatrix hnf_columns(const RatMatrix& m);
// Unimodular k×k matrix whose first column is the primitive vector z.
IntMatrix complete_to_unimodular(const std::vector<Integer>& z);
bool is_unimodular(const IntMatrix& u);

// Accepts "p", "p/q" and plain decimals; throws std::invalid_argument otherwise.
Rational parse_rational(const std::string& text);
// Best continued-fraction approximation with denominator ≤ max_den.
Rational rationalize(double x, long max_den);
Rational rational_from_double(double x);
std::string to_string(const Rational& q);

}  // namespace latgeo
