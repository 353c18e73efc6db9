#include "latgeo/eta_zoo.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "latgeo/gaussian.hpp"
#include "latgeo/reduce.hpp"
#include "latgeo/voronoi.hpp"

namespace latgeo {

namespace {

constexpr double kPi = 3.14159265358979323846;

IntMatrix coordinate_columns(int n, const std::vector<int>& cols) {
  IntMatrix m(n, int(cols.size()));
  for (int j = 0; j < int(cols.size()); ++j) m(cols[j], j) = 1;
  return m;
}

// Float RREF of the row space spanned by integer coordinate vectors, rounded: a span key.
std::string span_key(const std::vector<const IntVec*>& rows, int d) {
  const int k = int(rows.size());
  Eigen::MatrixXd m(k, d);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = double((*rows[i])[j]);
  int r = 0;
  for (int c = 0; c < d && r < k; ++c) {
    int p = r;
    for (int i = r + 1; i < k; ++i)
      if (std::fabs(m(i, c)) > std::fabs(m(p, c))) p = i;
    if (std::fabs(m(p, c)) < 1e-9) continue;
    m.row(r).swap(m.row(p));
    m.row(r) /= m(r, c);
    for (int i = 0; i < k; ++i)
      if (i != r) m.row(i) -= m(i, c) * m.row(r);
    ++r;
  }
  std::ostringstream os;
  os << r;
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < d; ++j) os << ',' << std::llround(m(i, j) * 1e8);
  return os.str();
}

double gamma_k(int k) { return std::pow(2.0, k) / ball_volume(k, 1.0); }

Eigen::MatrixXd sym_exp_sandwich(const Eigen::MatrixXd& x, const Eigen::MatrixXd& g, double t) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ex(0.5 * (x + x.transpose()));
  Eigen::VectorXd ev = ex.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  Eigen::MatrixXd s = ex.eigenvectors() * ev.asDiagonal() * ex.eigenvectors().transpose();
  Eigen::MatrixXd h = s * g * s;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eh(0.5 * (h + h.transpose()));
  Eigen::VectorXd e = (t * eh.eigenvalues()).array().exp();
  Eigen::MatrixXd expm = eh.eigenvectors() * e.asDiagonal() * eh.eigenvectors().transpose();
  Eigen::MatrixXd out = s * expm * s;
  return 0.5 * (out + out.transpose());
}

Eigen::MatrixXd floor_eigenvalues(const Eigen::MatrixXd& x, double rel) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (x + x.transpose()));
  Eigen::VectorXd ev = es.eigenvalues();
  const double top = ev.maxCoeff();
  for (int i = 0; i < ev.size(); ++i) ev(i) = std::max(ev(i), rel * top);
  return es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().transpose();
}

std::vector<const Candidate*> top_per_dim(const SubspaceCandidates& c, std::size_t per_dim) {
  std::map<int, std::vector<const Candidate*>> by_dim;
  for (const auto& cand : c.list) by_dim[cand.w.dim].push_back(&cand);
  std::vector<const Candidate*> out;
  for (auto& [d, v] : by_dim) {
    (void)d;
    std::stable_sort(v.begin(), v.end(), [](const Candidate* a, const Candidate* b) {
      return eta_det_term(a->w) > eta_det_term(b->w);
    });
    for (std::size_t i = 0; i < v.size() && i < per_dim; ++i) out.push_back(v[i]);
  }
  return out;
}

}  // namespace

std::string to_string(Provenance p) {
  switch (p) {
    case Provenance::Coordinate: return "coordinate";
    case Provenance::HkzPrefix: return "hkz-prefix";
    case Provenance::ShortVectorSpan: return "short-vector-span";
    case Provenance::User: return "user";
  }
  return "user";
}

std::string to_string(EtaKind k) {
  switch (k) {
    case EtaKind::Det: return "det";
    case EtaKind::Rho: return "rho";
    case EtaKind::Mu: return "mu";
    case EtaKind::RhoCirc: return "rho_circ";
    case EtaKind::MuCirc: return "mu_circ";
    case EtaKind::Eta: return "eta";
  }
  return "eta";
}

bool SubspaceCandidates::all_exhaustive() const {
  for (std::size_t k = 1; k < exhaustive.size(); ++k)
    if (!exhaustive[k]) return false;
  return true;
}

bool SubspaceCandidates::add(const LatticeSubspace& w, Provenance from) {
  if (w.dim == 0) return false;
  const std::string key = w.key();
  for (const auto& c : list)
    if (c.w.key() == key) return false;
  list.push_back({w, from});
  if (int(min_det.size()) > w.dim && (min_det[w.dim] == 0.0 || w.det < min_det[w.dim])) min_det[w.dim] = w.det;
  return true;
}

SubspaceCandidates lattice_subspaces(const Lattice& lat, const SubspaceSearch& opt) {
  const int n = lat.rank();
  SubspaceCandidates c;
  c.lattice = lat;
  c.exhaustive.assign(n + 1, false);
  c.min_det.assign(n + 1, 0.0);
  c.exhaustive[0] = true;
  c.exhaustive[n] = true;
  c.add(full_subspace(lat), Provenance::Coordinate);
  if (n <= 10) {
    for (long mask = 1; mask < (1L << n) - 1; ++mask) {
      std::vector<int> cols;
      for (int j = 0; j < n; ++j)
        if (mask >> j & 1) cols.push_back(j);
      c.add(make_lattice_subspace(lat, coordinate_columns(n, cols)), Provenance::Coordinate);
    }
  } else {
    for (int j = 0; j < n; ++j) c.add(make_lattice_subspace(lat, coordinate_columns(n, {j})), Provenance::Coordinate);
  }
  if (n <= 8) {
    try {
      HkzResult h = hkz_reduce(lat, 8, opt.budget);
      for (int j = 1; j < n; ++j) {
        std::vector<int> cols;
        for (int i = 0; i < j; ++i) cols.push_back(i);
        IntMatrix pre = h.transform * coordinate_columns(n, cols);
        c.add(make_lattice_subspace(lat, pre), Provenance::HkzPrefix);
      }
      Lattice other = lat.dual();
      HkzResult hp = hkz_reduce(other, 8, opt.budget);
      Subspace sp = Subspace::span(lat.basis());
      for (int j = 1; j < n; ++j) {
        Subspace pre = Subspace::span(hp.lattice.basis().leftCols(j));
        Subspace w = sp.intersect(pre.complement());
        try {
          c.add(intersect_subspace(lat, w), Provenance::HkzPrefix);
        } catch (const NotLatticeSubspace&) {
        }
      }
    } catch (const BudgetExceeded&) {
    }
  }
  const int kmax = opt.max_dim > 0 ? std::min(opt.max_dim, n - 1) : n - 1;
  if (kmax < 1) return c;

  const double lambda1 = shortest_vector_length(lat.basis(), opt.budget);
  std::vector<double> beta(n + 1, 0.0);
  double bmax = 0.0;
  for (int k = 1; k <= kmax; ++k) {
    beta[k] = gamma_k(k) * c.min_det[k] / std::pow(lambda1, k - 1);
    bmax = std::max(bmax, beta[k]);
  }
  const double bound = opt.norm_bound > 0 ? std::min(opt.norm_bound, bmax) : bmax;
  std::vector<double> prune(n + 1, 0.0);
  for (int j = 1; j <= kmax; ++j)
    for (int k = j; k <= kmax; ++k)
      prune[j] = std::max(prune[j], gamma_k(k) * c.min_det[k] / std::pow(lambda1, k - j));

  PointList pts;
  try {
    pts = enumerate_points(lat, bound * (1.0 + 1e-9), opt.budget);
  } catch (const BudgetExceeded&) {
    return c;
  }
  std::vector<LatticePoint> vecs;
  for (const auto& p : pts.points) {
    int first = 0;
    while (first < n && p.coords[first] == 0) ++first;
    if (first < n && p.coords[first] > 0) vecs.push_back(p);
  }
  // Extension vectors for level j → j+1 need norm ≤ max_{k>j} β_k.
  std::vector<double> ext(n + 1, 0.0);
  for (int j = 0; j <= kmax; ++j)
    for (int k = j + 1; k <= kmax; ++k) ext[j] = std::max(ext[j], std::min(beta[k], bound));

  struct Node {
    LatticeSubspace w;
    std::vector<IntVec> gens;
  };
  std::vector<Node> level;
  bool complete = true;
  std::set<std::string> seen;
  for (const auto& v : vecs) {
    if (std::sqrt(v.norm2) > ext[0] * (1.0 + 1e-9)) continue;
    // det(Λ∩ℝv) = ‖v‖/gcd(coords); only survivors pay for the exact construction.
    Integer g = 0;
    for (long x : v.coords) g = gcd(g, Integer(x));
    if (std::sqrt(v.norm2) / g.get_d() > prune[1] * (1.0 + 1e-7)) continue;
    std::string key = span_key({&v.coords}, n);
    if (!seen.insert(key).second) continue;
    IntMatrix m(n, 1);
    for (int i = 0; i < n; ++i) m(i, 0) = v.coords[i];
    LatticeSubspace w = make_lattice_subspace(lat, m);
    if (w.det <= prune[1] * (1.0 + 1e-9)) level.push_back({w, {v.coords}});
  }
  for (int j = 1; j <= kmax; ++j) {
    std::sort(level.begin(), level.end(), [](const Node& a, const Node& b) {
      if (a.w.det != b.w.det) return a.w.det < b.w.det;
      return a.w.key() < b.w.key();
    });
    for (std::size_t i = 0; i < level.size() && i < opt.keep_per_dim; ++i) c.add(level[i].w, Provenance::ShortVectorSpan);
    c.exhaustive[j] = complete && beta[j] <= bound * (1.0 + 1e-12);
    if (j == kmax) break;
    std::vector<Node> next;
    seen.clear();
    for (const auto& node : level) {
      if (!complete) break;
      // z ↦ Kᵀz maps ℤⁿ onto ℤ^{n−j} with kernel ℤⁿ∩V, so the saturation of V + v has
      // det(V)·‖π_{V⊥}v‖/gcd(Kᵀz) and is determined by ±Kᵀz/gcd.
      IntMatrix k = integer_kernel(to_rational(node.w.generators.transpose()));
      Eigen::MatrixXd perp = Eigen::MatrixXd::Identity(lat.ambient_dim(), lat.ambient_dim()) - node.w.span.projector();
      std::set<std::vector<Integer>> local;
      for (const auto& v : vecs) {
        if (std::sqrt(v.norm2) > ext[j] * (1.0 + 1e-9)) break;
        std::vector<Integer> b(k.cols(), Integer(0));
        Integer g = 0;
        for (int c = 0; c < k.cols(); ++c) {
          for (int i = 0; i < n; ++i) b[c] += k(i, c) * v.coords[i];
          g = gcd(g, b[c]);
        }
        if (g == 0) continue;  // v ∈ V
        const double est = node.w.det * (perp * v.vec).norm() / g.get_d();
        if (est > prune[j + 1] * (1.0 + 1e-7)) continue;
        int lead = 0;
        while (b[lead] == 0) ++lead;
        const bool flip = b[lead] < 0;
        for (auto& x : b) x = (flip ? -x : x) / g;
        if (!local.insert(b).second) continue;
        std::vector<const IntVec*> rows;
        for (const auto& gv : node.gens) rows.push_back(&gv);
        rows.push_back(&v.coords);
        std::string key = span_key(rows, n);
        if (!seen.insert(key).second) continue;
        IntMatrix m(n, j + 1);
        for (int col = 0; col <= j; ++col)
          for (int i = 0; i < n; ++i) m(i, col) = (*rows[col])[i];
        LatticeSubspace w = make_lattice_subspace(lat, m);
        if (w.det > prune[j + 1] * (1.0 + 1e-9)) continue;
        std::vector<IntVec> gens;
        for (const auto* r : rows) gens.push_back(*r);
        next.push_back({w, gens});
        if (next.size() > opt.level_cap) {
          complete = false;
          break;
        }
      }
    }
    level = std::move(next);
  }
  for (int k = kmax + 1; k < n; ++k) c.exhaustive[k] = false;
  return c;
}

SubspaceCandidates candidate_subspaces(const Lattice& l, const SubspaceSearch& opt) {
  return lattice_subspaces(l.dual(), opt);
}

double eta_det_term(const LatticeSubspace& w) {
  if (w.dim == 0) return 0.0;
  return std::pow(w.det, -1.0 / w.dim);
}

double eta_rho_term(const Lattice& sub, double s) {
  double th = theta(sub, s * s);
  if (!(th > 1.0)) return 0.0;
  return s * std::sqrt(std::log(th) / sub.rank());
}

std::pair<double, double> eta_rho_best(const Lattice& sub, const std::vector<double>& s_grid) {
  std::vector<double> grid = s_grid;
  const bool refine = grid.empty();
  if (refine) {
    double c = std::exp(-sub.log_det() / sub.rank());
    for (int k = -16; k <= 12; ++k) grid.push_back(c * std::pow(2.0, k / 4.0));
  }
  double best = -1.0, best_s = grid.front();
  std::size_t bi = 0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double v = eta_rho_term(sub, grid[i]);
    if (v > best) {
      best = v;
      best_s = grid[i];
      bi = i;
    }
  }
  if (!refine) return {best, best_s};
  double a = grid[bi > 0 ? bi - 1 : 0], b = grid[std::min(bi + 1, grid.size() - 1)];
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
  double f1 = eta_rho_term(sub, x1), f2 = eta_rho_term(sub, x2);
  for (int it = 0; it < 40; ++it) {
    if (f1 > f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = eta_rho_term(sub, x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = eta_rho_term(sub, x2);
    }
  }
  if (f1 > best) {
    best = f1;
    best_s = x1;
  }
  if (f2 > best) {
    best = f2;
    best_s = x2;
  }
  return {best, best_s};
}

double eta_rho_circ_value(const Lattice& dual, const Eigen::MatrixXd& x) {
  PsdMatrix px(x);
  double r = rho(dual, px).value;
  if (!(r > 1.0)) return 0.0;
  return std::sqrt(std::log(r) / px.trace());
}

double eta_mu_circ_value(const Lattice& l, const Eigen::MatrixXd& r, int samples, std::uint64_t seed) {
  Lattice image = l.transformed(r);
  CoveringRadius cr = covering_radius(image, samples, seed);
  return cr.lo / r.norm();
}

EtaEstimate eta_det(const Lattice&, const SubspaceCandidates& cands) {
  EtaEstimate e;
  e.kind = EtaKind::Det;
  for (const auto& c : cands.list) {
    double v = eta_det_term(c.w);
    if (v > e.value) {
      e.value = v;
      e.witness_w = c.w;
    }
  }
  e.value_hi = e.value;
  e.lower_bound_only = !cands.all_exhaustive();
  return e;
}

EtaEstimate eta_rho(const Lattice&, const SubspaceCandidates& cands, const std::vector<double>& s_grid,
                    std::size_t per_dim) {
  EtaEstimate e;
  e.kind = EtaKind::Rho;
  for (const Candidate* c : top_per_dim(cands, per_dim)) {
    Lattice sub = sublattice(cands.lattice, c->w);
    auto [v, s] = eta_rho_best(sub, s_grid);
    if (v > e.value) {
      e.value = v;
      e.witness_s = s;
      e.witness_w = c->w;
    }
  }
  e.value_hi = e.value;
  return e;
}

EtaEstimate eta_mu(const Lattice& l, const SubspaceCandidates& cands, int samples, std::uint64_t seed) {
  EtaEstimate e;
  e.kind = EtaKind::Mu;
  bool all_exact = true;
  for (const auto& c : cands.list) {
    Lattice proj = project_lattice(l, c.w);
    CoveringRadius cr = covering_radius(proj, samples, seed);
    all_exact = all_exact && cr.exact;
    const double lo = cr.lo / std::sqrt(double(c.w.dim));
    const double hi = cr.hi / std::sqrt(double(c.w.dim));
    if (lo > e.value) {
      e.value = lo;
      e.witness_w = c.w;
    }
    e.value_hi = std::max(e.value_hi, hi);
  }
  e.lower_bound_only = true;
  return e;
}

namespace {

// Per-evaluation enumeration budget of the ascent; a step that needs more is rejected.
constexpr std::uint64_t kCircBudget = 200000;

struct CircEval {
  double j = 0.0;  // log ρ_X(Λ*) / tr X
  Eigen::MatrixXd grad;
};

CircEval circ_eval(const Lattice& dual, const Eigen::MatrixXd& x) {
  PsdMatrix px(x);
  std::vector<WeightedPoint> pts;
  GaussianMass g = gaussian_support(dual, px, false, pts, kRhoTol, kCircBudget);
  const int n = x.rows();
  Eigen::MatrixXd xinv = x.inverse();
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(n, n);
  for (const auto& p : pts) {
    Eigen::VectorXd u = xinv * p.y;
    acc += p.w * u * u.transpose();
  }
  const double phi = std::log(g.value), psi = x.trace();
  CircEval e;
  e.j = phi / psi;
  e.grad = (kPi / g.value) * acc / psi - (phi / (psi * psi)) * Eigen::MatrixXd::Identity(n, n);
  return e;
}

double circ_objective(const Lattice& dual, const Eigen::MatrixXd& x) {
  double r = rho(dual, PsdMatrix(x), kRhoTol, kCircBudget).value;
  return std::log(r) / x.trace();
}

// Natural-gradient ascent of log ρ_X(Λ*)/tr X on the positive definite cone.
std::pair<double, Eigen::MatrixXd> circ_ascent(const Lattice& dual, Eigen::MatrixXd x, int iterations) {
  CircEval e;
  try {
    e = circ_eval(dual, x);
  } catch (const BudgetExceeded&) {
    return {0.0, x};
  }
  double t = 1.0;
  for (int it = 0; it < iterations; ++it) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (x + x.transpose()));
    Eigen::MatrixXd s = es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() *
                        es.eigenvectors().transpose();
    Eigen::MatrixXd g = s * e.grad * s;
    const double gn = g.norm();
    if (!(gn > 0)) break;
    // Relative step: ‖t·X^{1/2} G X^{1/2}‖ per unit of J.
    double step = t / (gn / std::max(e.j, 1e-300));
    bool improved = false;
    for (int tries = 0; tries < 10; ++tries) {
      Eigen::MatrixXd xn = floor_eigenvalues(sym_exp_sandwich(x, e.grad, step), 1e-12);
      double jn = -1.0;
      CircEval en;
      try {
        jn = circ_objective(dual, xn);
        if (jn > e.j * (1.0 + 1e-13)) en = circ_eval(dual, xn);
      } catch (const BudgetExceeded&) {
        jn = -1.0;
      }
      if (jn > e.j * (1.0 + 1e-13)) {
        x = xn;
        e = en;
        improved = true;
        t = std::min(4.0, t * 1.5);
        break;
      }
      step *= 0.3;
      t *= 0.3;
    }
    if (!improved) break;
  }
  return {e.j, x};
}

}  // namespace

EtaEstimate eta_rho_circ(const Lattice& l, const SubspaceCandidates& cands, const CircOptions& opt) {
  EtaEstimate best;
  best.kind = EtaKind::RhoCirc;
  const Lattice& dual = cands.lattice;
  const int n = l.ambient_dim();
  Subspace span = Subspace::span(dual.basis());
  // Singular seeds s⁻²π_W reproduce the η_ρ witnesses exactly (limit ε → 0).
  double best_s = 1.0;
  for (const Candidate* c : top_per_dim(cands, opt.seeds_per_dim)) {
    Lattice sub = sublattice(dual, c->w);
    auto [v, s] = eta_rho_best(sub);
    Eigen::MatrixXd x = c->w.span.projector() / (s * s);
    if (v > best.value) {
      best.value = v;
      best.witness_matrix = x;
      best.witness_w = c->w;
      best.witness_s = s;
      best_s = s;
    }
    // Regularized start: s⁻²(π_W + ε·π_{W⊥}) within span(Λ*).
    Eigen::MatrixXd perp = span.projector() - c->w.span.projector();
    Eigen::MatrixXd x0 = (c->w.span.projector() + opt.eps * perp) / (s * s);
    if (span.dim() < n) x0 += opt.eps * (Eigen::MatrixXd::Identity(n, n) - span.projector()) / (s * s);
    auto [j, xf] = circ_ascent(dual, x0, opt.iterations);
    double val = std::sqrt(std::max(0.0, j));
    if (val > best.value) {
      best.value = val;
      best.witness_matrix = xf;
      best.witness_w.reset();
    }
  }
  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int r = 0; r < opt.restarts; ++r) {
    Eigen::MatrixXd a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = normal(rng);
    Eigen::MatrixXd x = a * a.transpose() / n + 0.5 * Eigen::MatrixXd::Identity(n, n);
    x *= double(n) / x.trace() / (best_s * best_s);
    auto [j, xf] = circ_ascent(dual, x, opt.iterations);
    double val = std::sqrt(std::max(0.0, j));
    if (val > best.value) {
      best.value = val;
      best.witness_matrix = xf;
      best.witness_w.reset();
    }
  }
  best.value_hi = best.value;
  return best;
}

EtaEstimate eta_mu_circ(const Lattice& l, const SubspaceCandidates& cands, const CircOptions& opt) {
  EtaEstimate best;
  best.kind = EtaKind::MuCirc;
  const int n = l.ambient_dim();
  // R = π_W (limit of π_W + ε·π_{W⊥}): μ(RΛ) = μ(π_W Λ) and ‖R‖_F² = dim W.
  std::vector<std::pair<double, const Candidate*>> ranked;
  for (const auto& c : cands.list) {
    Lattice proj = project_lattice(l, c.w);
    CoveringRadius cr = covering_radius(proj, opt.samples, opt.seed);
    double v = cr.lo / std::sqrt(double(c.w.dim));
    ranked.push_back({v, &c});
    if (v > best.value) {
      best.value = v;
      best.value_hi = cr.hi / std::sqrt(double(c.w.dim));
      best.witness_w = c.w;
      best.witness_matrix = c.w.span.projector();
    }
  }
  std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  // Nonsingular perturbations of the best few seeds.
  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const std::size_t seeds = std::min<std::size_t>(ranked.size(), std::max<std::size_t>(1, opt.seeds_per_dim));
  for (std::size_t si = 0; si < seeds; ++si) {
    const Candidate* c = ranked[si].second;
    Eigen::MatrixXd base = c->w.span.projector() + opt.eps * (Eigen::MatrixXd::Identity(n, n) - c->w.span.projector());
    for (int r = 0; r < opt.restarts; ++r) {
      Eigen::MatrixXd g(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) g(i, j) = normal(rng);
      Eigen::MatrixXd rmat = base + 0.15 * (g + g.transpose()) / 2.0 + 0.1 * Eigen::MatrixXd::Identity(n, n);
      if (std::fabs(rmat.determinant()) < 1e-8) continue;
      double v = eta_mu_circ_value(l, rmat, opt.samples, opt.seed + 17 * r + si);
      if (v > best.value) {
        best.value = v;
        best.value_hi = v;
        best.witness_w.reset();
        best.witness_matrix = rmat;
      }
    }
  }
  {
    Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
    double v = eta_mu_circ_value(l, id, opt.samples, opt.seed);
    if (v > best.value) {
      best.value = v;
      best.value_hi = v;
      best.witness_w.reset();
      best.witness_matrix = id;
    }
  }
  if (best.value_hi < best.value) best.value_hi = best.value;
  return best;
}

EtaZoo compute_eta_zoo(const Lattice& l, const SubspaceCandidates& cands, const CircOptions& opt) {
  EtaZoo z;
  z.eta = smoothing_parameter(l, 0.5).eta;
  z.det = eta_det(l, cands);
  z.rho = eta_rho(l, cands);
  z.mu = eta_mu(l, cands, opt.samples, opt.seed);
  z.rho_circ = eta_rho_circ(l, cands, opt);
  z.mu_circ = eta_mu_circ(l, cands, opt);
  z.exhaustive = cands.all_exhaustive();
  return z;
}

EtaZoo compute_eta_zoo(const Lattice& l, const CircOptions& opt) {
  return compute_eta_zoo(l, candidate_subspaces(l), opt);
}

std::vector<SandwichRow> sandwich_report(const Lattice& l, const EtaZoo& z) {
  std::vector<SandwichRow> rows;
  const double sqrt_pi = std::sqrt(kPi);
  auto row = [&](std::string name, double lhs, double rhs, double slack, std::string note) {
    rows.push_back({std::move(name), lhs, rhs, lhs <= rhs * (1.0 + slack) + 1e-12, std::move(note)});
  };
  row("eta_det <= 8*eta_rho", z.det.value, 8.0 * z.rho.value, 1e-9,
      z.exhaustive ? "rhs is a grid lower bound" : "lhs and rhs are lower bounds");
  // Per-subspace: s·√(log ρ(sΛ*∩W)/d) ≤ √π·μ(π_W Λ)/√d.
  if (z.rho.witness_w) {
    Lattice proj = project_lattice(l, *z.rho.witness_w);
    CoveringRadius cr = covering_radius(proj);
    row("eta_rho <= sqrt(pi)*mu(pi_W L)/sqrt(d) at the eta_rho witness", z.rho.value,
        sqrt_pi * cr.hi / std::sqrt(double(z.rho.witness_w->dim)), 1e-9,
        cr.exact ? "exact covering radius" : "rhs uses the bracket upper end");
  }
  row("eta_rho <= eta_rho_circ", z.rho.value, z.rho_circ.value, 1e-9, "both lower bounds; rhs seeded by lhs witness");
  row("eta_mu <= eta_mu_circ", z.mu.value, z.mu_circ.value, 1e-9, "both lower bounds; rhs seeded by lhs witness");
  row("eta_mu_circ <= (4/sqrt(pi))*sqrt(8)*eta", z.mu_circ.value, 4.0 / sqrt_pi * std::sqrt(8.0) * z.eta, 1e-6,
      "lhs is a certified lower bound");
  return rows;
}

}  // namespace latgeo
