#include "latgeo/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

namespace latgeo {

namespace {

Rational rational_pow(const Rational& base, long e) {
  Rational r = 1;
  Rational b = e >= 0 ? base : Rational(1 / base);
  unsigned long k = e >= 0 ? e : -e;
  Integer num, den;
  mpz_pow_ui(num.get_mpz_t(), b.get_num_mpz_t(), k);
  mpz_pow_ui(den.get_mpz_t(), b.get_den_mpz_t(), k);
  r = Rational(num, den);
  r.canonicalize();
  return r;
}

double rational_log(const Rational& q) {
  // log of numerator and denominator separately to avoid overflow in get_d().
  auto log_z = [](const Integer& z) {
    long exp = 0;
    double mant = mpz_get_d_2exp(&exp, z.get_mpz_t());
    return std::log(std::fabs(mant)) + double(exp) * std::log(2.0);
  };
  return log_z(q.get_num()) - log_z(q.get_den());
}

}  // namespace

Scale Scale::rational(const Rational& q) {
  if (q <= 0) throw std::invalid_argument("Scale: nonpositive factor");
  Scale s;
  s.add(q, Rational(1));
  return s;
}

Scale Scale::root(const Rational& base, const Rational& exponent) {
  if (base <= 0) throw std::invalid_argument("Scale: nonpositive base");
  Scale s;
  s.add(base, exponent);
  return s;
}

void Scale::add(const Rational& base, const Rational& exponent) {
  if (base == 1 || exponent == 0) return;
  for (auto it = factors_.begin(); it != factors_.end(); ++it) {
    if (it->first == base) {
      it->second += exponent;
      if (it->second == 0) factors_.erase(it);
      return;
    }
  }
  factors_.emplace_back(base, exponent);
  std::sort(factors_.begin(), factors_.end());
}

Scale Scale::operator*(const Scale& o) const {
  Scale s = *this;
  for (const auto& [b, e] : o.factors_) s.add(b, e);
  return s;
}

Scale Scale::inverse() const {
  Scale s;
  for (const auto& [b, e] : factors_) s.add(b, -e);
  return s;
}

double Scale::log() const {
  double l = 0.0;
  for (const auto& [b, e] : factors_) l += e.get_d() * rational_log(b);
  return l;
}

double Scale::value() const { return std::exp(log()); }

std::optional<Rational> Scale::power(long k) const {
  Rational r = 1;
  for (const auto& [b, e] : factors_) {
    Rational ek = e * k;
    if (ek.get_den() != 1) return std::nullopt;
    r *= rational_pow(b, ek.get_num().get_si());
  }
  return r;
}

std::string Scale::to_string() const {
  if (factors_.empty()) return "1";
  std::string s;
  for (const auto& [b, e] : factors_) {
    if (!s.empty()) s += "*";
    s += "(" + b.get_str() + ")^(" + e.get_str() + ")";
  }
  return s;
}

Lattice Lattice::from_basis(const RatMatrix& b, const Scale& s) {
  if (b.cols() == 0) throw std::invalid_argument("Lattice: empty basis");
  RatMatrix g = b.transpose() * b;
  if (determinant(g) <= 0) throw std::invalid_argument("Lattice: rank-deficient basis");
  Lattice l;
  l.gram0_ = g;
  l.basis0_ = b;
  l.scale_ = s;
  l.basis_ = to_double(b) * s.value();
  return l;
}

Lattice Lattice::from_gram(const RatMatrix& gram, const Eigen::MatrixXd& embedding, const Scale& s) {
  if (gram.rows() != gram.cols() || gram.cols() != embedding.cols())
    throw std::invalid_argument("Lattice: gram/embedding shape mismatch");
  if (determinant(gram) <= 0) throw std::invalid_argument("Lattice: rank-deficient gram matrix");
  Eigen::MatrixXd g = to_double(gram);
  Eigen::MatrixXd diff = embedding.transpose() * embedding - g;
  if (diff.cwiseAbs().maxCoeff() > 1e-9 * std::max(1.0, g.cwiseAbs().maxCoeff()))
    throw std::invalid_argument("Lattice: embedding does not match gram matrix");
  Lattice l;
  l.gram0_ = gram;
  l.scale_ = s;
  l.basis_ = embedding * s.value();
  return l;
}

Lattice Lattice::from_real_basis(const Eigen::MatrixXd& b) {
  if (b.cols() == 0) throw std::invalid_argument("Lattice: empty basis");
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(b);
  const auto& sv = svd.singularValues();
  if (sv(sv.size() - 1) <= 1e-12 * sv(0)) throw std::invalid_argument("Lattice: rank-deficient basis");
  Lattice l;
  l.basis_ = b;
  return l;
}

Lattice Lattice::integer(int n) { return from_basis(RatMatrix::identity(n)); }

Lattice Lattice::diagonal(const std::vector<Rational>& entries) {
  const int n = int(entries.size());
  RatMatrix b(n, n);
  for (int i = 0; i < n; ++i) b(i, i) = entries[i];
  return from_basis(b);
}

const RatMatrix& Lattice::unscaled_gram() const {
  if (!gram0_) throw std::logic_error("Lattice: no exact gram matrix");
  return *gram0_;
}

std::optional<RatMatrix> Lattice::exact_gram() const {
  if (!gram0_) return std::nullopt;
  auto s2 = scale_.power(2);
  if (!s2) return std::nullopt;
  return latgeo::scaled(*gram0_, *s2);
}

std::optional<Rational> Lattice::det_squared() const {
  if (!gram0_) return std::nullopt;
  auto s = scale_.power(2L * rank());
  if (!s) return std::nullopt;
  return determinant(*gram0_) * *s;
}

double Lattice::log_det() const {
  if (gram0_) return 0.5 * rational_log(determinant(*gram0_)) + rank() * scale_.log();
  return 0.5 * std::log(gram().determinant());
}

double Lattice::det() const { return std::exp(log_det()); }

Lattice Lattice::dual() const {
  Lattice d;
  if (gram0_) {
    RatMatrix ginv = inverse(*gram0_);
    d.gram0_ = ginv;
    d.scale_ = scale_.inverse();
    if (basis0_) {
      d.basis0_ = *basis0_ * ginv;
      d.basis_ = to_double(*d.basis0_) * d.scale_.value();
    } else {
      d.basis_ = (basis_ / scale_.value()) * to_double(ginv) * d.scale_.value();
    }
    return d;
  }
  // B(BᵀB)⁻¹ = QR⁻ᵀ, conditioned like B rather than BᵀB.
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(basis_);
  const int k = rank();
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(ambient_dim(), k);
  Eigen::MatrixXd r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  d.basis_ = q * r.inverse().transpose();
  return d;
}

Lattice Lattice::scaled(const Scale& c) const {
  Lattice l = *this;
  l.scale_ = scale_ * c;
  l.basis_ = basis_ * c.value();
  if (!gram0_) l.scale_ = Scale();
  return l;
}

Lattice Lattice::scaled(double c) const {
  if (!(c > 0)) throw std::invalid_argument("Lattice: nonpositive scale");
  // A double is a dyadic rational, so exact lattices stay exact.
  if (gram0_) return scaled(Scale::rational(rational_from_double(c)));
  return from_real_basis(basis_ * c);
}

Lattice Lattice::transformed(const Eigen::MatrixXd& a) const { return from_real_basis(a * basis_); }

Lattice Lattice::rebased(const IntMatrix& u) const {
  if (!is_unimodular(u)) throw std::invalid_argument("Lattice: basis change is not unimodular");
  Lattice l;
  l.scale_ = scale_;
  l.basis_ = basis_ * to_double(u);
  RatMatrix ur = to_rational(u);
  if (gram0_) l.gram0_ = ur.transpose() * *gram0_ * ur;
  if (basis0_) l.basis0_ = *basis0_ * ur;
  return l;
}

Eigen::VectorXd Lattice::point(const std::vector<long>& z) const {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(ambient_dim());
  for (int j = 0; j < rank(); ++j) v += double(z[j]) * basis_.col(j);
  return v;
}

Eigen::VectorXd Lattice::coordinates(const Eigen::VectorXd& y) const {
  return gram().ldlt().solve(basis_.transpose() * y);
}

bool Lattice::is_axis_aligned() const {
  if (ambient_dim() != rank()) return false;
  std::vector<bool> used(ambient_dim(), false);
  for (int j = 0; j < rank(); ++j) {
    int nz = -1;
    for (int i = 0; i < ambient_dim(); ++i) {
      if (basis_(i, j) != 0.0) {
        if (nz >= 0) return false;
        nz = i;
      }
    }
    if (nz < 0 || used[nz]) return false;
    used[nz] = true;
  }
  return true;
}

Lattice direct_sum(const Lattice& a, const Lattice& b) {
  const int n = a.ambient_dim() + b.ambient_dim(), d = a.rank() + b.rank();
  Eigen::MatrixXd e = Eigen::MatrixXd::Zero(n, d);
  e.topLeftCorner(a.ambient_dim(), a.rank()) = a.basis();
  e.bottomRightCorner(b.ambient_dim(), b.rank()) = b.basis();
  auto ga = a.exact_gram(), gb = b.exact_gram();
  if (a.exact() && b.exact() && a.scale() == b.scale()) {
    RatMatrix g(d, d);
    const RatMatrix& g1 = a.unscaled_gram();
    const RatMatrix& g2 = b.unscaled_gram();
    for (int i = 0; i < a.rank(); ++i)
      for (int j = 0; j < a.rank(); ++j) g(i, j) = g1(i, j);
    for (int i = 0; i < b.rank(); ++i)
      for (int j = 0; j < b.rank(); ++j) g(a.rank() + i, a.rank() + j) = g2(i, j);
    if (a.unscaled_basis() && b.unscaled_basis()) {
      RatMatrix bb(n, d);
      const RatMatrix& b1 = *a.unscaled_basis();
      const RatMatrix& b2 = *b.unscaled_basis();
      for (int i = 0; i < b1.rows(); ++i)
        for (int j = 0; j < b1.cols(); ++j) bb(i, j) = b1(i, j);
      for (int i = 0; i < b2.rows(); ++i)
        for (int j = 0; j < b2.cols(); ++j) bb(b1.rows() + i, b1.cols() + j) = b2(i, j);
      return Lattice::from_basis(bb, a.scale());
    }
    return Lattice::from_gram(g, e / a.scale().value(), a.scale());
  }
  if (ga && gb) {
    RatMatrix g(d, d);
    for (int i = 0; i < a.rank(); ++i)
      for (int j = 0; j < a.rank(); ++j) g(i, j) = (*ga)(i, j);
    for (int i = 0; i < b.rank(); ++i)
      for (int j = 0; j < b.rank(); ++j) g(a.rank() + i, a.rank() + j) = (*gb)(i, j);
    return Lattice::from_gram(g, e);
  }
  return Lattice::from_real_basis(e);
}

bool same_lattice(const Lattice& a, const Lattice& b) {
  if (!a.unscaled_basis() || !b.unscaled_basis()) throw std::invalid_argument("same_lattice: exact bases required");
  auto sa = a.scale().power(1), sb = b.scale().power(1);
  if (!sa || !sb) {
    if (!(a.scale() == b.scale())) throw std::invalid_argument("same_lattice: incomparable scales");
    return hnf_columns(*a.unscaled_basis()) == hnf_columns(*b.unscaled_basis());
  }
  return hnf_columns(scaled(*a.unscaled_basis(), *sa)) == hnf_columns(scaled(*b.unscaled_basis(), *sb));
}

std::string LatticeSubspace::key() const {
  std::ostringstream os;
  os << generators.rows() << ':' << dim;
  for (int j = 0; j < generators.cols(); ++j)
    for (int i = 0; i < generators.rows(); ++i) os << ',' << generators(i, j).get_str();
  return os.str();
}

LatticeSubspace make_lattice_subspace(const Lattice& l, const IntMatrix& coords) {
  if (coords.rows() != l.rank()) throw std::invalid_argument("lattice subspace: coordinate length mismatch");
  LatticeSubspace s;
  s.generators = saturate(coords);
  s.dim = s.generators.cols();
  Eigen::MatrixXd k = to_double(s.generators);
  s.vectors = l.basis() * k;
  s.span = s.dim ? Subspace::span(s.vectors) : Subspace(l.ambient_dim());
  if (s.dim == 0) {
    s.det_squared = Rational(1);
    s.det = 1.0;
    return s;
  }
  if (l.exact()) {
    RatMatrix kr = to_rational(s.generators);
    Rational g = determinant(kr.transpose() * l.unscaled_gram() * kr);
    auto sp = l.scale().power(2L * s.dim);
    if (sp) s.det_squared = g * *sp;
    s.det = std::sqrt(g.get_d()) * std::exp(s.dim * l.scale().log());
  } else {
    s.det = std::sqrt((s.vectors.transpose() * s.vectors).determinant());
  }
  return s;
}

LatticeSubspace intersect_subspace(const Lattice& l, const Subspace& w) {
  if (w.ambient_dim() != l.ambient_dim()) throw std::invalid_argument("intersect_subspace: dimension mismatch");
  if (w.dim() == 0) return make_lattice_subspace(l, IntMatrix(l.rank(), 0));
  // Coordinates z with π_{W⊥} B z = 0.
  Eigen::MatrixXd m = (Eigen::MatrixXd::Identity(l.ambient_dim(), l.ambient_dim()) - w.projector()) * l.basis();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double scale = l.basis().norm();
  int r = 0;
  while (r < sv.size() && sv(r) > 1e-9 * scale) ++r;
  const int k = l.rank() - r;
  if (k != w.dim()) throw NotLatticeSubspace("subspace is not spanned by lattice vectors");
  Eigen::MatrixXd null = svd.matrixV().rightCols(k);
  // Reduced form over k pivot columns, then rationalize.
  Eigen::MatrixXd rows = null.transpose();
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(rows);
  Eigen::MatrixXd pivot_block(k, k);
  for (int j = 0; j < k; ++j) pivot_block.col(j) = rows.col(qr.colsPermutation().indices()(j));
  Eigen::MatrixXd reduced = pivot_block.inverse() * rows;
  RatMatrix q(k, l.rank());
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < l.rank(); ++j) q(i, j) = rationalize(reduced(i, j), 1000000);
  IntMatrix coords(l.rank(), k);
  for (int i = 0; i < k; ++i) {
    Integer den = 1;
    for (int j = 0; j < l.rank(); ++j) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), q(i, j).get_den_mpz_t());
    for (int j = 0; j < l.rank(); ++j) coords(j, i) = Rational(q(i, j) * den).get_num();
  }
  LatticeSubspace s = make_lattice_subspace(l, coords);
  if (s.dim != w.dim() || !w.contains(s.span, 1e-7)) throw NotLatticeSubspace("subspace is not spanned by lattice vectors");
  return s;
}

LatticeSubspace full_subspace(const Lattice& l) { return make_lattice_subspace(l, IntMatrix::identity(l.rank())); }

LatticeSubspace subspace_intersection(const Lattice& l, const LatticeSubspace& a, const LatticeSubspace& b) {
  const int d = l.rank();
  RatMatrix m(d, a.dim + b.dim);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < a.dim; ++j) m(i, j) = Rational(a.generators(i, j));
    for (int j = 0; j < b.dim; ++j) m(i, a.dim + j) = Rational(-b.generators(i, j));
  }
  RatMatrix ker = kernel(m);
  RatMatrix ar = to_rational(a.generators);
  RatMatrix common(d, ker.cols());
  for (int c = 0; c < ker.cols(); ++c)
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < a.dim; ++j) common(i, c) += ar(i, j) * ker(j, c);
  IntMatrix coords(d, common.cols());
  for (int c = 0; c < common.cols(); ++c) {
    Integer den = 1;
    for (int i = 0; i < d; ++i) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), common(i, c).get_den_mpz_t());
    for (int i = 0; i < d; ++i) coords(i, c) = Rational(common(i, c) * den).get_num();
  }
  return make_lattice_subspace(l, coords);
}

LatticeSubspace subspace_sum(const Lattice& l, const LatticeSubspace& a, const LatticeSubspace& b) {
  const int d = l.rank();
  IntMatrix coords(d, a.dim + b.dim);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < a.dim; ++j) coords(i, j) = a.generators(i, j);
    for (int j = 0; j < b.dim; ++j) coords(i, a.dim + j) = b.generators(i, j);
  }
  return make_lattice_subspace(l, coords);
}

bool subspace_contains(const LatticeSubspace& a, const LatticeSubspace& b) {
  if (b.dim == 0) return true;
  if (b.dim > a.dim) return false;
  const int d = a.generators.rows();
  RatMatrix m(d, a.dim + b.dim);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < a.dim; ++j) m(i, j) = Rational(a.generators(i, j));
    for (int j = 0; j < b.dim; ++j) m(i, a.dim + j) = Rational(b.generators(i, j));
  }
  return rank(m) == a.dim;
}

Lattice sublattice(const Lattice& l, const LatticeSubspace& w) {
  if (w.dim == 0) throw std::invalid_argument("sublattice: zero-dimensional subspace");
  if (l.exact()) {
    RatMatrix kr = to_rational(w.generators);
    if (l.unscaled_basis()) return Lattice::from_basis(*l.unscaled_basis() * kr, l.scale());
    RatMatrix g = kr.transpose() * l.unscaled_gram() * kr;
    return Lattice::from_gram(g, w.vectors / l.scale().value(), l.scale());
  }
  return Lattice::from_real_basis(w.vectors);
}

Lattice project_lattice(const Lattice& lattice, const LatticeSubspace& w_in_dual) {
  return sublattice(lattice.dual(), w_in_dual).dual();
}

Lattice read_basis(std::istream& in) {
  std::string line;
  int lineno = 0;
  auto next_content_line = [&](std::string& out) {
    while (std::getline(in, out)) {
      ++lineno;
      auto hash = out.find('#');
      if (hash != std::string::npos) out = out.substr(0, hash);
      if (out.find_first_not_of(" \t\r") != std::string::npos) return true;
    }
    return false;
  };
  if (!next_content_line(line)) throw ParseError("missing header 'n d'", lineno + 1);
  std::istringstream hs(line);
  long n = 0, d = 0;
  std::string extra;
  if (!(hs >> n >> d) || (hs >> extra) || n <= 0 || d <= 0 || d > n)
    throw ParseError("header must be two integers 'n d' with 1 <= d <= n", lineno);
  RatMatrix b{int(n), int(d)};
  for (int i = 0; i < n; ++i) {
    if (!next_content_line(line)) throw ParseError("expected " + std::to_string(n) + " basis rows", lineno + 1);
    std::istringstream rs(line);
    std::string tok;
    int j = 0;
    while (rs >> tok) {
      if (j >= d) throw ParseError("too many entries in row", lineno);
      try {
        b(i, j) = parse_rational(tok);
      } catch (const std::invalid_argument& e) {
        throw ParseError(e.what(), lineno);
      }
      ++j;
    }
    if (j != d) throw ParseError("expected " + std::to_string(d) + " entries in row", lineno);
  }
  if (next_content_line(line)) throw ParseError("trailing content after basis", lineno);
  try {
    return Lattice::from_basis(b);
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what(), lineno);
  }
}

Lattice read_basis_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open basis file '" + path + "'");
  return read_basis(f);
}

std::string write_basis(const Lattice& l) {
  if (!l.unscaled_basis() || !l.scale().is_one()) throw std::invalid_argument("write_basis: exact unscaled basis required");
  const RatMatrix& b = *l.unscaled_basis();
  std::ostringstream os;
  os << b.rows() << ' ' << b.cols() << '\n';
  for (int i = 0; i < b.rows(); ++i) {
    for (int j = 0; j < b.cols(); ++j) os << (j ? " " : "") << b(i, j).get_str();
    os << '\n';
  }
  return os.str();
}

}  // namespace latgeo
