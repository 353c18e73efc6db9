#include "latgeo/families.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "latgeo/reduce.hpp"

namespace latgeo {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

// Splits "A|B|C" at top-level bars only.
std::vector<std::string> split_children(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char c : s) {
    if (c == '[') ++depth;
    if (c == ']') --depth;
    if (c == '|' && depth == 0) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

int parse_positive_int(const std::string& s, const std::string& what) {
  std::size_t pos = 0;
  long v = 0;
  try {
    v = std::stol(s, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("family spec: bad " + what + " '" + s + "'");
  }
  if (pos != s.size() || v < 1) throw std::invalid_argument("family spec: bad " + what + " '" + s + "'");
  return int(v);
}

}  // namespace

FamilySpec FamilySpec::parse(const std::string& raw) {
  std::string text;
  for (char c : raw)
    if (!std::isspace(static_cast<unsigned char>(c))) text += c;
  FamilySpec f;
  const auto bracket = text.find('[');
  if (bracket != std::string::npos) {
    if (text.back() != ']') throw std::invalid_argument("family spec: missing ']' in '" + raw + "'");
    const std::string head = text.substr(0, bracket);
    const std::string body = text.substr(bracket + 1, text.size() - bracket - 2);
    for (const auto& c : split_children(body)) f.children.push_back(parse(c));
    if (head == "sum") {
      f.kind = Kind::DirectSum;
      if (f.children.empty()) throw std::invalid_argument("family spec: empty direct sum");
    } else if (head == "hkz") {
      f.kind = Kind::HkzOf;
      if (f.children.size() != 1) throw std::invalid_argument("family spec: hkz takes one child");
    } else {
      throw std::invalid_argument("family spec: unknown kind '" + head + "'");
    }
    f.n = 0;
    for (const auto& c : f.children) f.n += c.n;
    return f;
  }
  const auto colon = text.find(':');
  if (colon == std::string::npos) throw std::invalid_argument("family spec: expected KIND:ARGS in '" + raw + "'");
  const std::string head = text.substr(0, colon);
  const auto args = split(text.substr(colon + 1), ',');
  if (head == "zn") {
    f.kind = Kind::Zn;
    if (args.size() != 1) throw std::invalid_argument("family spec: zn takes one argument");
    f.n = parse_positive_int(args[0], "dimension");
  } else if (head == "rect") {
    f.kind = Kind::Rectangular;
    for (const auto& a : args) {
      Rational q = parse_rational(a);
      if (q <= 0) throw std::invalid_argument("family spec: rectangular entries must be positive");
      f.entries.push_back(q);
    }
    f.n = int(f.entries.size());
  } else if (head == "modp") {
    f.kind = Kind::ModP;
    if (args.size() != 3) throw std::invalid_argument("family spec: modp takes N,P,SEED");
    f.n = parse_positive_int(args[0], "dimension");
    f.p = Integer(args[1]);
    if (f.p < 2) throw std::invalid_argument("family spec: modulus must be at least 2");
    f.seed = std::stoull(args[2]);
  } else if (head == "kl") {
    f.kind = Kind::KlBasis;
    if (args.size() != 1) throw std::invalid_argument("family spec: kl takes one argument");
    f.n = parse_positive_int(args[0], "dimension");
  } else {
    throw std::invalid_argument("family spec: unknown kind '" + head + "'");
  }
  return f;
}

std::string FamilySpec::to_string() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::Zn: os << "zn:" << n; break;
    case Kind::Rectangular:
      os << "rect:";
      for (std::size_t i = 0; i < entries.size(); ++i) os << (i ? "," : "") << latgeo::to_string(entries[i]);
      break;
    case Kind::ModP: os << "modp:" << n << ',' << p.get_str() << ',' << seed; break;
    case Kind::KlBasis: os << "kl:" << n; break;
    case Kind::HkzOf: os << "hkz[" << children.front().to_string() << ']'; break;
    case Kind::DirectSum:
      os << "sum[";
      for (std::size_t i = 0; i < children.size(); ++i) os << (i ? "|" : "") << children[i].to_string();
      os << ']';
      break;
  }
  return os.str();
}

Lattice FamilySpec::build() const {
  switch (kind) {
    case Kind::Zn: return Lattice::integer(n);
    case Kind::Rectangular: return Lattice::diagonal(entries);
    case Kind::ModP: return random_modp_lattice(n, p, seed);
    case Kind::KlBasis: return kl_basis_lattice(n);
    case Kind::HkzOf: return hkz_reduce(children.front().build()).lattice;
    case Kind::DirectSum: {
      Lattice l = children.front().build();
      for (std::size_t i = 1; i < children.size(); ++i) l = direct_sum(l, children[i].build());
      return l;
    }
  }
  throw std::logic_error("FamilySpec::build: unknown kind");
}

Lattice modp_lattice(const std::vector<Integer>& a, const Integer& p) {
  const int n = int(a.size());
  int pivot = -1;
  for (int i = 0; i < n && pivot < 0; ++i)
    if (Integer(a[i] % p) != 0) pivot = i;
  if (pivot < 0) throw std::invalid_argument("modp_lattice: a ≡ 0 (mod p)");
  Integer inv;
  if (mpz_invert(inv.get_mpz_t(), Integer(a[pivot] % p).get_mpz_t(), p.get_mpz_t()) == 0)
    throw std::invalid_argument("modp_lattice: leading coefficient not invertible; p must be prime");
  // Kernel generators: p·e_pivot and e_j − (a_j·a_pivot⁻¹ mod p)·e_pivot.
  RatMatrix b(n, n);
  int col = 0;
  b(pivot, col++) = Rational(p);
  for (int j = 0; j < n; ++j) {
    if (j == pivot) continue;
    Integer c = (a[j] * inv) % p;
    if (c < 0) c += p;
    b(j, col) = 1;
    b(pivot, col) = Rational(-c);
    ++col;
  }
  return Lattice::from_basis(hnf_columns(b), Scale::root(Rational(p), Rational(-1, n)));
}

std::vector<Integer> random_modp_vector(int n, const Integer& p, std::uint64_t seed) {
  if (!p.fits_ulong_p()) throw std::invalid_argument("random_modp_vector: modulus too large");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<unsigned long> dist(0, p.get_ui() - 1);
  for (;;) {
    std::vector<Integer> a(n);
    bool nonzero = false;
    for (auto& v : a) {
      v = Integer(dist(rng));
      nonzero = nonzero || v != 0;
    }
    if (nonzero) return a;
  }
}

Lattice random_modp_lattice(int n, const Integer& p, std::uint64_t seed) {
  return modp_lattice(random_modp_vector(n, p, seed), p);
}

Lattice kl_basis_lattice(int n) {
  RatMatrix g(n, n);
  Eigen::MatrixXd e = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    g(i, i) = Rational(1, i + 1);
    e(i, i) = 1.0 / std::sqrt(double(i + 1));
  }
  return Lattice::from_gram(g, e);
}

}  // namespace latgeo
