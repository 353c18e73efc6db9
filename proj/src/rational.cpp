#include "latgeo/rational.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace latgeo {

namespace {

// Row echelon form in place; returns pivot columns.
std::vector<int> row_echelon(RatMatrix& a, bool reduced) {
  std::vector<int> pivots;
  int row = 0;
  for (int col = 0; col < a.cols() && row < a.rows(); ++col) {
    int p = -1;
    for (int i = row; i < a.rows(); ++i)
      if (a(i, col) != 0) { p = i; break; }
    if (p < 0) continue;
    if (p != row)
      for (int j = 0; j < a.cols(); ++j) std::swap(a(p, j), a(row, j));
    Rational inv = 1 / a(row, col);
    for (int j = col; j < a.cols(); ++j) a(row, j) *= inv;
    for (int i = reduced ? 0 : row + 1; i < a.rows(); ++i) {
      if (i == row || a(i, col) == 0) continue;
      Rational f = a(i, col);
      for (int j = col; j < a.cols(); ++j) a(i, j) -= f * a(row, j);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

Integer lcm_of_denominators(const RatMatrix& m, int row) {
  Integer l = 1;
  for (int j = 0; j < m.cols(); ++j) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), m(row, j).get_den_mpz_t());
  return l;
}

// g = x a + y b with g = gcd(a, b) ≥ 0.
void extended_gcd(const Integer& a, const Integer& b, Integer& g, Integer& x, Integer& y) {
  mpz_gcdext(g.get_mpz_t(), x.get_mpz_t(), y.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
}

// Column operation on columns p, j mapping (a, b) in the pivot row to (g, 0).
template <class Apply>
void gcd_column_step(const Integer& a, const Integer& b, Apply&& apply) {
  Integer g, x, y;
  extended_gcd(a, b, g, x, y);
  Integer bg = b / g, ag = a / g;
  // [cp cj] <- [cp cj] [[x, -bg], [y, ag]], determinant 1.
  apply(x, y, Integer(-bg), ag);
}

}  // namespace

RatMatrix scaled(const RatMatrix& a, const Rational& s) {
  RatMatrix c(a.rows(), a.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) c(i, j) = a(i, j) * s;
  return c;
}

RatMatrix to_rational(const IntMatrix& m) {
  RatMatrix r(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) r(i, j) = Rational(m(i, j));
  return r;
}

Eigen::MatrixXd to_double(const RatMatrix& m) {
  Eigen::MatrixXd d(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) d(i, j) = m(i, j).get_d();
  return d;
}

Eigen::MatrixXd to_double(const IntMatrix& m) {
  Eigen::MatrixXd d(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) d(i, j) = m(i, j).get_d();
  return d;
}

Rational determinant(const RatMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("determinant: not square");
  RatMatrix a = m;
  Rational det = 1;
  const int n = a.rows();
  for (int col = 0; col < n; ++col) {
    int p = -1;
    for (int i = col; i < n; ++i)
      if (a(i, col) != 0) { p = i; break; }
    if (p < 0) return 0;
    if (p != col) {
      for (int j = 0; j < n; ++j) std::swap(a(p, j), a(col, j));
      det = -det;
    }
    det *= a(col, col);
    for (int i = col + 1; i < n; ++i) {
      if (a(i, col) == 0) continue;
      Rational f = a(i, col) / a(col, col);
      for (int j = col; j < n; ++j) a(i, j) -= f * a(col, j);
    }
  }
  return det;
}

int rank(const RatMatrix& m) {
  RatMatrix a = m;
  return int(row_echelon(a, false).size());
}

RatMatrix inverse(const RatMatrix& m) {
  const int n = m.rows();
  if (n != m.cols()) throw std::invalid_argument("inverse: not square");
  RatMatrix a(n, 2 * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a(i, j) = m(i, j);
    a(i, n + i) = 1;
  }
  auto piv = row_echelon(a, true);
  if (int(piv.size()) < n || piv.back() >= n) throw std::domain_error("inverse: singular matrix");
  RatMatrix inv(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) inv(i, j) = a(i, n + j);
  return inv;
}

RatMatrix kernel(const RatMatrix& m) {
  RatMatrix a = m;
  auto piv = row_echelon(a, true);
  std::vector<bool> is_pivot(m.cols(), false);
  for (int p : piv) is_pivot[p] = true;
  std::vector<int> free_cols;
  for (int j = 0; j < m.cols(); ++j)
    if (!is_pivot[j]) free_cols.push_back(j);
  RatMatrix k(m.cols(), int(free_cols.size()));
  for (int f = 0; f < int(free_cols.size()); ++f) {
    k(free_cols[f], f) = 1;
    for (int r = 0; r < int(piv.size()); ++r) k(piv[r], f) = -a(r, free_cols[f]);
  }
  return k;
}

IntMatrix integer_kernel(const RatMatrix& m) {
  const int r = m.rows(), c = m.cols();
  IntMatrix a(r, c);
  for (int i = 0; i < r; ++i) {
    Integer l = lcm_of_denominators(m, i);
    for (int j = 0; j < c; ++j) {
      Rational v = m(i, j) * l;
      a(i, j) = v.get_num();
    }
  }
  IntMatrix u = IntMatrix::identity(c);
  int piv = 0;
  for (int i = 0; i < r && piv < c; ++i) {
    for (int j = piv + 1; j < c; ++j) {
      if (a(i, j) == 0) continue;
      Integer av = a(i, piv), bv = a(i, j);
      gcd_column_step(av, bv, [&](const Integer& x, const Integer& y, const Integer& s, const Integer& t) {
        for (int row = 0; row < r; ++row) {
          Integer p = a(row, piv), q = a(row, j);
          a(row, piv) = x * p + y * q;
          a(row, j) = s * p + t * q;
        }
        for (int row = 0; row < c; ++row) {
          Integer p = u(row, piv), q = u(row, j);
          u(row, piv) = x * p + y * q;
          u(row, j) = s * p + t * q;
        }
      });
    }
    if (a(i, piv) != 0) ++piv;
  }
  IntMatrix k(c, c - piv);
  for (int i = 0; i < c; ++i)
    for (int j = piv; j < c; ++j) k(i, j - piv) = u(i, j);
  if (k.cols() == 0) return k;
  return hnf_rows(k.transpose()).transpose();
}

IntMatrix hnf_rows(const IntMatrix& m) {
  IntMatrix a = m;
  const int k = a.rows(), c = a.cols();
  int row = 0;
  for (int col = 0; col < c && row < k; ++col) {
    for (int i = row + 1; i < k; ++i) {
      if (a(i, col) == 0) continue;
      Integer g, x, y;
      extended_gcd(a(row, col), a(i, col), g, x, y);
      Integer s = -a(i, col) / g, t = a(row, col) / g;
      for (int j = 0; j < c; ++j) {
        Integer p = a(row, j), q = a(i, j);
        a(row, j) = x * p + y * q;
        a(i, j) = s * p + t * q;
      }
    }
    if (a(row, col) == 0) continue;
    if (a(row, col) < 0)
      for (int j = 0; j < c; ++j) a(row, j) = -a(row, j);
    for (int i = 0; i < row; ++i) {
      Integer q;
      mpz_fdiv_q(q.get_mpz_t(), a(i, col).get_mpz_t(), a(row, col).get_mpz_t());
      if (q == 0) continue;
      for (int j = 0; j < c; ++j) a(i, j) -= q * a(row, j);
    }
    ++row;
  }
  IntMatrix h(row, c);
  for (int i = 0; i < row; ++i)
    for (int j = 0; j < c; ++j) h(i, j) = a(i, j);
  return h;
}

IntMatrix saturate(const IntMatrix& gens) {
  const int c = gens.rows();
  if (gens.cols() == 0) return IntMatrix(c, 0);
  RatMatrix complement = kernel(to_rational(gens).transpose());
  if (complement.cols() == 0) return IntMatrix::identity(c);
  return integer_kernel(complement.transpose());
}

RatMatrix hnf_columns(const RatMatrix& m) {
  Integer l = 1;
  for (int i = 0; i < m.rows(); ++i) {
    Integer li = lcm_of_denominators(m, i);
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), li.get_mpz_t());
  }
  IntMatrix a(m.cols(), m.rows());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) a(j, i) = Rational(m(i, j) * l).get_num();
  IntMatrix h = hnf_rows(a);
  RatMatrix out(m.rows(), h.rows());
  for (int i = 0; i < h.rows(); ++i)
    for (int j = 0; j < m.rows(); ++j) out(j, i) = Rational(h(i, j)) / l;
  return out;
}

IntMatrix complete_to_unimodular(const std::vector<Integer>& z) {
  const int k = int(z.size());
  // Column operations U with zᵀU = (±1, 0, …, 0); the completion is U⁻ᵀ.
  std::vector<Integer> row = z;
  IntMatrix uinv = IntMatrix::identity(k);
  for (int j = 1; j < k; ++j) {
    if (row[j] == 0) continue;
    Integer a = row[0], b = row[j];
    gcd_column_step(a, b, [&](const Integer& x, const Integer& y, const Integer& s, const Integer& t) {
      row[0] = x * a + y * b;
      row[j] = s * a + t * b;
      // Inverse of [[x, s], [y, t]] is [[t, -s], [-y, x]], applied to rows 0 and j.
      for (int col = 0; col < k; ++col) {
        Integer p = uinv(0, col), q = uinv(j, col);
        uinv(0, col) = t * p - s * q;
        uinv(j, col) = -y * p + x * q;
      }
    });
  }
  if (row[0] != 1 && row[0] != -1) throw std::invalid_argument("complete_to_unimodular: vector is not primitive");
  IntMatrix w = uinv.transpose();
  if (row[0] == -1)
    for (int i = 0; i < k; ++i) w(i, 0) = -w(i, 0);
  return w;
}

bool is_unimodular(const IntMatrix& u) {
  if (u.rows() != u.cols()) return false;
  Rational d = determinant(to_rational(u));
  return d == 1 || d == -1;
}

Rational parse_rational(const std::string& text) {
  std::string s = text;
  if (s.empty()) throw std::invalid_argument("empty number");
  auto valid_int = [](const std::string& t) {
    if (t.empty()) return false;
    std::size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
    if (i == t.size()) return false;
    for (; i < t.size(); ++i)
      if (!std::isdigit(static_cast<unsigned char>(t[i]))) return false;
    return true;
  };
  auto strip_plus = [](std::string t) { return (!t.empty() && t[0] == '+') ? t.substr(1) : t; };
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    std::string num = s.substr(0, slash), den = s.substr(slash + 1);
    if (!valid_int(num) || !valid_int(den)) throw std::invalid_argument("malformed fraction '" + text + "'");
    Integer n(strip_plus(num)), d(strip_plus(den));
    if (d == 0) throw std::invalid_argument("zero denominator in '" + text + "'");
    Rational q(n, d);
    q.canonicalize();
    return q;
  }
  auto dot = s.find('.');
  if (dot != std::string::npos) {
    std::string ip = s.substr(0, dot), fp = s.substr(dot + 1);
    bool neg = !ip.empty() && ip[0] == '-';
    std::string ip_digits = (!ip.empty() && (ip[0] == '-' || ip[0] == '+')) ? ip.substr(1) : ip;
    if (ip_digits.empty()) ip_digits = "0";
    if (fp.empty() || !valid_int(ip_digits) || !valid_int(fp) || fp[0] == '-' || fp[0] == '+')
      throw std::invalid_argument("malformed decimal '" + text + "'");
    Integer den = 1;
    for (std::size_t i = 0; i < fp.size(); ++i) den *= 10;
    Rational q(Integer(ip_digits) * den + Integer(fp), den);
    q.canonicalize();
    return neg ? Rational(-q) : q;
  }
  if (!valid_int(s)) throw std::invalid_argument("malformed number '" + text + "'");
  return Rational(Integer(strip_plus(s)));
}

Rational rationalize(double x, long max_den) {
  if (!std::isfinite(x)) throw std::invalid_argument("rationalize: non-finite value");
  bool neg = x < 0;
  double v = std::fabs(x);
  Integer p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  double r = v;
  for (int iter = 0; iter < 64; ++iter) {
    double a = std::floor(r);
    Integer ai(a);
    Integer p2 = ai * p1 + p0, q2 = ai * q1 + q0;
    if (q2 > max_den) break;
    p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    double frac = r - a;
    if (frac < 1e-15) break;
    r = 1.0 / frac;
  }
  if (q1 == 0) return Rational(0);
  Rational q(p1, q1);
  q.canonicalize();
  return neg ? Rational(-q) : q;
}

Rational rational_from_double(double x) {
  Rational q;
  mpq_set_d(q.get_mpq_t(), x);
  return q;
}

std::string to_string(const Rational& q) { return q.get_str(); }

}  // namespace latgeo
