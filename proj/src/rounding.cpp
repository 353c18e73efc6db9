#include "latgeo/rounding.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "latgeo/reduce.hpp"
#include "latgeo/voronoi.hpp"

namespace latgeo {

RevAmGm reverse_am_gm(const std::vector<double>& a, const std::vector<int>& d) {
  if (a.size() != d.size()) throw std::invalid_argument("reverse_am_gm: lengths differ");
  RevAmGm out;
  long dsum = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < 0 || d[i] < 1) throw std::invalid_argument("reverse_am_gm: need a_i ≥ 0 and d_i ≥ 1");
    dsum += d[i];
    out.lhs += d[i] * a[i];
  }
  const double r = a.empty() ? 0.0 : *std::max_element(a.begin(), a.end());
  if (r <= 0.0) {
    out.certified = true;
    return out;
  }
  out.k = int(std::ceil(std::log2(2.0 * double(dsum)) - 1e-12));
  out.bound_factor = 4.0 * out.k;
  for (int j = 1; j <= out.k; ++j) {
    const double lo = std::ldexp(r, -j), hi = std::ldexp(r, -j + 1);
    std::vector<int> s;
    long ds = 0;
    double log_prod = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i] > lo && a[i] <= hi) {
        s.push_back(int(i));
        ds += d[i];
        log_prod += d[i] * std::log(a[i]);
      }
    }
    if (s.empty()) continue;
    const double v = double(ds) * std::exp(log_prod / double(ds));
    if (v > out.value) {
      out.value = v;
      out.s = s;
    }
  }
  out.certified = out.lhs <= out.bound_factor * out.value * (1.0 + 1e-12);
  return out;
}

double normalized_det(const DualAtom& atom) {
  if (atom.w.dim == 0) return 1.0;
  return det_on(atom.x.matrix(), atom.w.span) / (atom.w.det * atom.w.det);
}

UncrossResult uncross_pair(const Lattice& dual, const DualAtom& v, const DualAtom& w) {
  if (subspace_contains(v.w, w.w) || subspace_contains(w.w, v.w))
    throw std::invalid_argument("uncross_pair: subspaces already comparable");
  UncrossResult out;
  const Eigen::MatrixXd sum = v.x.matrix() + w.x.matrix();
  out.meet.w = subspace_intersection(dual, v.w, w.w);
  out.join.w = subspace_sum(dual, v.w, w.w);
  const int n = int(sum.rows());
  Eigen::MatrixXd meet = Eigen::MatrixXd::Zero(n, n);
  if (out.meet.w.dim > 0) meet = 0.5 * mat_slice(PsdMatrix(sum), out.meet.w.span).matrix();
  out.meet.x = PsdMatrix(meet);
  out.join.x = PsdMatrix(sum - meet);
  out.lhs = normalized_det(v) * normalized_det(w);
  out.rhs = normalized_det(out.meet) * normalized_det(out.join);
  return out;
}

DualSolution reduce_support(const DualSolution& sol, int n) {
  DualSolution cur = sol;
  const std::size_t cap = std::size_t(n) * std::size_t(n);
  while (cur.atoms.size() > cap) {
    const int m = int(cur.atoms.size());
    RatMatrix vecs(n * n, m);
    for (int i = 0; i < m; ++i) {
      const Eigen::MatrixXd& x = cur.atoms[i].x.matrix();
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) vecs(r * n + c, i) = rational_from_double(x(r, c));
    }
    RatMatrix ker = kernel(vecs);
    if (ker.cols() == 0) throw std::logic_error("reduce_support: no linear dependence");
    std::vector<Rational> lam(m);
    for (int i = 0; i < m; ++i) lam[i] = ker(i, 0);
    std::vector<double> val(m);
    double slope = 0.0, scale = 0.0;
    for (int i = 0; i < m; ++i) {
      val[i] = atom_value(cur.atoms[i]);
      slope += lam[i].get_d() * val[i];
      scale += std::fabs(lam[i].get_d()) * val[i];
    }
    // R = [eps_lo, eps_hi] keeps every 1 + ε·λ_i ≥ 0.
    std::optional<Rational> eps_lo, eps_hi;
    int zero_lo = -1, zero_hi = -1;
    for (int i = 0; i < m; ++i) {
      if (lam[i] < 0) {
        Rational e = -1 / lam[i];
        if (!eps_hi || e < *eps_hi || (e == *eps_hi && val[i] < val[zero_hi])) {
          eps_hi = e;
          zero_hi = i;
        }
      } else if (lam[i] > 0) {
        Rational e = -1 / lam[i];
        if (!eps_lo || e > *eps_lo || (e == *eps_lo && val[i] < val[zero_lo])) {
          eps_lo = e;
          zero_lo = i;
        }
      }
    }
    if (!eps_lo || !eps_hi) throw std::logic_error("reduce_support: one-signed dependence among PSD atoms");
    Rational eps;
    if (std::fabs(slope) <= 1e-12 * scale)
      eps = val[zero_lo] <= val[zero_hi] ? *eps_lo : *eps_hi;
    else
      eps = slope > 0 ? *eps_hi : *eps_lo;
    DualSolution next;
    for (int i = 0; i < m; ++i) {
      Rational f = 1 + eps * lam[i];
      if (f <= 0) continue;
      next.atoms.push_back({cur.atoms[i].w, cur.atoms[i].x.scaled(f.get_d())});
    }
    cur = std::move(next);
  }
  return cur;
}

namespace {

bool chain_less(const DualAtom& a, const DualAtom& b) {
  if (a.w.dim != b.w.dim) return a.w.dim < b.w.dim;
  return a.w.key() < b.w.key();
}

double subspace_value(const LatticeSubspace& w) {
  return w.dim / std::pow(w.det, 2.0 / w.dim);
}

}  // namespace

RoundingResult subspace_round(const Lattice& l, const DualSolution& sol) {
  const int n = l.ambient_dim();
  if (!dual_feasible(sol, 1e-6)) throw std::invalid_argument("subspace_round: infeasible dual solution");
  const Lattice dual = l.dual();
  RoundingResult out;
  out.dual_value = dual_objective(l, sol);
  out.bound = 24.0 * std::pow(std::log2(double(n)) + 1.0, 2);

  // Step 1.
  DualSolution reduced = reduce_support(sol, n);
  out.support_after_step1 = int(reduced.atoms.size());
  std::vector<DualAtom> atoms;
  for (auto& a : reduced.atoms)
    if (a.w.dim > 0 && a.x.rank() > 0) atoms.push_back(a);
  if (atoms.empty()) throw std::invalid_argument("subspace_round: empty dual solution");

  // Step 2: pick S* by reverse AM-GM, then uncross until the subspaces form a chain.
  std::vector<double> a;
  std::vector<int> d;
  for (const auto& atom : atoms) {
    a.push_back(std::pow(std::max(0.0, det_on(atom.x.matrix(), atom.w.span)), 1.0 / atom.w.dim) /
                std::pow(atom.w.det, 2.0 / atom.w.dim));
    d.push_back(atom.w.dim);
  }
  out.selection = reverse_am_gm(a, d);
  std::vector<DualAtom> chain;
  for (int i : out.selection.s) chain.push_back(atoms[i]);
  out.uncross_limit = int(chain.size()) * n * n;
  for (;;) {
    std::sort(chain.begin(), chain.end(), chain_less);
    int pi = -1, pj = -1;
    for (int i = 0; i < int(chain.size()) && pi < 0; ++i)
      for (int j = i + 1; j < int(chain.size()); ++j)
        if (!subspace_contains(chain[j].w, chain[i].w)) {
          pi = i;
          pj = j;
          break;
        }
    if (pi < 0) break;
    if (out.uncross_steps >= out.uncross_limit) throw std::logic_error("subspace_round: uncrossing did not terminate");
    UncrossResult u = uncross_pair(dual, chain[pi], chain[pj]);
    if (u.rhs < u.lhs * (1.0 - 1e-7)) out.monotone = false;
    chain[pi] = u.meet;
    chain[pj] = u.join;
    ++out.uncross_steps;
  }
  out.chain = chain;

  // Step 3: the chain atom with the largest d/det^{2/d}.
  bool found = false;
  for (const auto& atom : chain) {
    if (atom.w.dim == 0) continue;
    const double v = subspace_value(atom.w);
    if (!found || v > out.w_value) {
      out.w_value = v;
      out.w_star = atom.w;
      found = true;
    }
  }
  out.certified_ratio = out.dual_value / out.w_value;
  out.certificate_holds = out.certified_ratio <= out.bound * (1.0 + 1e-6);
  return out;
}

KlCertificate kl_certificate_hkz(const Lattice& l) {
  const int n = l.rank();
  HkzResult h = hkz_reduce(l);
  KlCertificate out;
  out.gs_norms = h.gs_norms;
  out.index = int(std::max_element(h.gs_norms.begin(), h.gs_norms.end()) - h.gs_norms.begin());
  const Lattice dual = l.dual();
  if (out.index == 0) {
    out.w = full_subspace(dual);
  } else {
    // Dual coordinates z with ⟨Dz, B·u_i⟩ = z·u_i = 0 for the prefix columns u_i of the transform.
    IntMatrix prefix = h.transform.column_block(0, out.index);
    out.w = make_lattice_subspace(dual, integer_kernel(to_rational(prefix.transpose())));
  }
  CoveringRadius cr = covering_radius(l);
  out.mu_hi = cr.hi;
  const int d = out.w.dim;
  out.ratio = out.mu_hi / (std::sqrt(double(d)) * std::pow(out.w.det, -1.0 / d));
  out.bound = (cr.exact ? 1.0 : std::sqrt(8.0)) * std::sqrt(double(n)) / 2.0;
  return out;
}

bool gapcrp_verify(const Lattice& l, const Rational& r_squared, const LatticeSubspace& w) {
  (void)l;
  if (w.dim == 0) throw std::invalid_argument("gapcrp_verify: zero-dimensional subspace");
  if (!w.det_squared) throw std::invalid_argument("gapcrp_verify: exact determinant unavailable");
  if (r_squared <= 0) throw std::invalid_argument("gapcrp_verify: r must be positive");
  Rational lhs = *w.det_squared;
  Rational rhs = 1;
  for (int i = 0; i < w.dim; ++i) {
    lhs *= r_squared;
    rhs *= w.dim;
  }
  return lhs <= rhs;
}

}  // namespace latgeo
