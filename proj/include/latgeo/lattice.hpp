#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "latgeo/psd.hpp"
#include "latgeo/rational.hpp"

namespace latgeo {

// Positive real of the form Π base_i^(exponent_i) with rational bases and exponents.
class Scale {
 public:
  Scale() = default;
  static Scale rational(const Rational& q);
  static Scale root(const Rational& base, const Rational& exponent);

  Scale operator*(const Scale& o) const;
  Scale inverse() const;
  double value() const;
  double log() const;
  // Exact value of scale^k when every exponent·k is integral.
  std::optional<Rational> power(long k) const;
  bool is_one() const { return factors_.empty(); }
  std::string to_string() const;
  bool operator==(const Scale& o) const { return factors_ == o.factors_; }

 private:
  void add(const Rational& base, const Rational& exponent);
  std::vector<std::pair<Rational, Rational>> factors_;
};

// Full-column-rank lattice basis. The exact data describe the lattice divided by
// its scale: an exact Gram matrix G0 (and optionally an exact basis B0), so that
// BᵀB = scale²·G0. Lattices built from arbitrary real transforms carry no exact data.
class Lattice {
 public:
  Lattice() = default;

  static Lattice from_basis(const RatMatrix& b, const Scale& s = Scale());
  // embedding is the unscaled real basis with embeddingᵀ·embedding = gram.
  static Lattice from_gram(const RatMatrix& gram, const Eigen::MatrixXd& embedding, const Scale& s = Scale());
  static Lattice from_real_basis(const Eigen::MatrixXd& b);
  static Lattice integer(int n);
  static Lattice diagonal(const std::vector<Rational>& entries);

  int ambient_dim() const { return int(basis_.rows()); }
  int rank() const { return int(basis_.cols()); }
  const Eigen::MatrixXd& basis() const { return basis_; }
  Eigen::MatrixXd gram() const { return basis_.transpose() * basis_; }

  bool exact() const { return gram0_.has_value(); }
  const RatMatrix& unscaled_gram() const;
  const std::optional<RatMatrix>& unscaled_basis() const { return basis0_; }
  const Scale& scale() const { return scale_; }
  // scale²·G0 when scale² is rational.
  std::optional<RatMatrix> exact_gram() const;

  // det(BᵀB), exact when available.
  std::optional<Rational> det_squared() const;
  double det() const;
  double log_det() const;

  Lattice dual() const;
  Lattice scaled(const Scale& c) const;
  Lattice scaled(double c) const;
  Lattice transformed(const Eigen::MatrixXd& a) const;
  // Basis B·U for unimodular U.
  Lattice rebased(const IntMatrix& u) const;

  Eigen::VectorXd point(const std::vector<long>& z) const;
  // Real coordinates of the orthogonal projection of y onto span(Λ).
  Eigen::VectorXd coordinates(const Eigen::VectorXd& y) const;
  // Basis columns are multiples of distinct standard axes and n = d.
  bool is_axis_aligned() const;

 private:
  Eigen::MatrixXd basis_;
  std::optional<RatMatrix> gram0_;
  std::optional<RatMatrix> basis0_;
  Scale scale_;
};

Lattice direct_sum(const Lattice& a, const Lattice& b);
// Canonical equality of the lattices spanned by exact bases.
bool same_lattice(const Lattice& a, const Lattice& b);

class NotLatticeSubspace : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Saturated sublattice L ∩ W, held by integer coordinates relative to L's basis.
struct LatticeSubspace {
  IntMatrix generators;  // d_L × dim, canonical (HNF) basis of L ∩ W
  int dim = 0;
  std::optional<Rational> det_squared;
  double det = 1.0;
  Eigen::MatrixXd vectors;  // n × dim embedded generators
  Subspace span;

  std::string key() const;
};

// L ∩ span(L·coords) with its exact determinant.
LatticeSubspace make_lattice_subspace(const Lattice& l, const IntMatrix& coords);
// L ∩ W for a real subspace W; throws NotLatticeSubspace unless dim(L ∩ W) = dim W.
LatticeSubspace intersect_subspace(const Lattice& l, const Subspace& w);
LatticeSubspace full_subspace(const Lattice& l);
LatticeSubspace subspace_intersection(const Lattice& l, const LatticeSubspace& a, const LatticeSubspace& b);
LatticeSubspace subspace_sum(const Lattice& l, const LatticeSubspace& a, const LatticeSubspace& b);
// b ⊆ a.
bool subspace_contains(const LatticeSubspace& a, const LatticeSubspace& b);
// L ∩ W as a lattice of rank dim W.
Lattice sublattice(const Lattice& l, const LatticeSubspace& w);
// π_W(Λ) for W a lattice subspace of Λ*, i.e. (Λ* ∩ W)*.
Lattice project_lattice(const Lattice& lattice, const LatticeSubspace& w_in_dual);

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, int line)
      : std::runtime_error("line " + std::to_string(line) + ": " + msg), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// Header "n d", then n rows of d exact fractions; column j is basis vector j.
Lattice read_basis(std::istream& in);
Lattice read_basis_file(const std::string& path);
std::string write_basis(const Lattice& l);

}  // namespace latgeo
