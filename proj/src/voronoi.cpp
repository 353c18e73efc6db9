#include "latgeo/voronoi.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <stdexcept>

namespace latgeo {

namespace {

Rational exact_norm(const RatMatrix& g, const IntVec& z) {
  Rational s = 0;
  const int d = g.rows();
  for (int i = 0; i < d; ++i) {
    if (z[i] == 0) continue;
    for (int j = 0; j < d; ++j)
      if (z[j] != 0) s += g(i, j) * Rational(z[i] * z[j]);
  }
  return s;
}

std::vector<int> next_subset(std::vector<int> idx, int n) {
  const int k = int(idx.size());
  int i = k - 1;
  while (i >= 0 && idx[i] == n - k + i) --i;
  if (i < 0) return {};
  ++idx[i];
  for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  return idx;
}

}  // namespace

PointList RelevantVectors::as_point_list() const {
  PointList p;
  p.points = points;
  for (const auto& v : points) p.radius = std::max(p.radius, std::sqrt(v.norm2));
  return p;
}

std::vector<LatticePoint> RelevantVectors::facets() const {
  std::vector<LatticePoint> f;
  for (std::size_t i = 0; i < points.size(); ++i)
    if (strict[i]) f.push_back(points[i]);
  return f;
}

RelevantVectors voronoi_relevant_vectors(const Lattice& l, int max_dim, std::uint64_t budget) {
  const int d = l.rank();
  if (d > max_dim) throw std::invalid_argument("voronoi_relevant_vectors: dimension too large");
  Enumerator e(l.basis());
  // Every coset has a representative Σ c_i b'_i with c ∈ {0,1}^d.
  double r2 = 0.0;
  for (long mask = 1; mask < (1L << d); ++mask) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(l.ambient_dim());
    for (int j = 0; j < d; ++j)
      if (mask >> j & 1) v += e.reduced_basis().col(j);
    r2 = std::max(r2, v.squaredNorm());
  }
  std::map<long, std::vector<LatticePoint>> cosets;
  Eigen::VectorXd origin = Eigen::VectorXd::Zero(l.ambient_dim());
  bool ok = e.run(origin, r2 * (1.0 + 1e-9), budget, [&](const IntVec& z, const Eigen::VectorXd& p, double n2) {
    long key = 0;
    for (int j = 0; j < d; ++j)
      if (z[j] & 1) key |= 1L << j;
    if (key != 0) cosets[key].push_back({z, p, n2});
  });
  if (!ok) throw BudgetExceeded(0);
  const bool exact = l.exact();
  RelevantVectors out;
  for (auto& [key, pts] : cosets) {
    (void)key;
    std::vector<LatticePoint> best;
    if (exact) {
      const RatMatrix& g = l.unscaled_gram();
      Rational m;
      bool first = true;
      for (const auto& p : pts) {
        Rational n = exact_norm(g, p.coords);
        if (first || n < m) {
          m = n;
          best.clear();
          first = false;
        }
        if (n == m) best.push_back(p);
      }
    } else {
      double m = pts.front().norm2;
      for (const auto& p : pts) m = std::min(m, p.norm2);
      for (const auto& p : pts)
        if (p.norm2 <= m * (1.0 + 1e-9)) best.push_back(p);
    }
    const bool strict = best.size() == 2;
    for (auto& p : best) {
      out.points.push_back(p);
      out.strict.push_back(strict);
    }
  }
  std::vector<std::size_t> order(out.points.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (out.points[a].norm2 != out.points[b].norm2) return out.points[a].norm2 < out.points[b].norm2;
    return out.points[a].coords < out.points[b].coords;
  });
  RelevantVectors sorted;
  for (std::size_t i : order) {
    sorted.points.push_back(out.points[i]);
    sorted.strict.push_back(out.strict[i]);
  }
  return sorted;
}

bool has_orthogonal_basis(const Lattice& l) {
  if (l.exact()) {
    const RatMatrix& g = l.unscaled_gram();
    for (int i = 0; i < g.rows(); ++i)
      for (int j = 0; j < g.cols(); ++j)
        if (i != j && g(i, j) != 0) return false;
    return true;
  }
  Eigen::MatrixXd g = l.gram();
  const double tol = 1e-12 * g.diagonal().maxCoeff();
  for (int i = 0; i < g.rows(); ++i)
    for (int j = 0; j < g.cols(); ++j)
      if (i != j && std::fabs(g(i, j)) > tol) return false;
  return true;
}

CoveringRadius covering_radius_exact(const Lattice& l, int max_dim) {
  const int d = l.rank();
  CoveringRadius cr;
  cr.exact = true;
  if (has_orthogonal_basis(l)) {
    cr.vertex = 0.5 * l.basis().rowwise().sum();
    if (l.exact()) {
      Rational t = 0;
      for (int i = 0; i < d; ++i) t += l.unscaled_gram()(i, i);
      auto s2 = l.scale().power(2);
      if (s2) cr.mu_squared = t * *s2 / 4;
      cr.lo = cr.hi = 0.5 * std::sqrt(t.get_d()) * l.scale().value();
    } else {
      cr.lo = cr.hi = cr.vertex.norm();
    }
    if (cr.mu_squared) cr.lo = cr.hi = std::sqrt(cr.mu_squared->get_d());
    return cr;
  }
  if (d > max_dim) throw std::invalid_argument("covering_radius_exact: dimension too large");
  RelevantVectors rv = voronoi_relevant_vectors(l);
  std::vector<LatticePoint> facets = rv.facets();
  // Work in span coordinates.
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(l.basis());
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(l.ambient_dim(), d);
  const int m = int(facets.size());
  Eigen::MatrixXd a(m, d);
  Eigen::VectorXd b(m);
  for (int i = 0; i < m; ++i) {
    a.row(i) = (q.transpose() * facets[i].vec).transpose();
    b(i) = 0.5 * facets[i].norm2;
  }
  Eigen::MatrixXd all(int(rv.points.size()), d);
  Eigen::VectorXd allb(int(rv.points.size()));
  for (int i = 0; i < int(rv.points.size()); ++i) {
    all.row(i) = (q.transpose() * rv.points[i].vec).transpose();
    allb(i) = 0.5 * rv.points[i].norm2;
  }
  struct Vertex { Eigen::VectorXd x; std::vector<int> rows; double n2; };
  std::vector<Vertex> verts;
  double best = 0.0;
  std::vector<int> idx(d);
  for (int i = 0; i < d; ++i) idx[i] = i;
  for (; !idx.empty() && m >= d; idx = next_subset(idx, m)) {
    Eigen::MatrixXd sa(d, d);
    Eigen::VectorXd sb(d);
    for (int i = 0; i < d; ++i) {
      sa.row(i) = a.row(idx[i]);
      sb(i) = b(idx[i]);
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(sa);
    if (lu.rank() < d) continue;
    Eigen::VectorXd x = lu.solve(sb);
    Eigen::VectorXd slack = allb - all * x;
    if (slack.minCoeff() < -1e-9 * std::max(1.0, allb.maxCoeff())) continue;
    double n2 = x.squaredNorm();
    best = std::max(best, n2);
    verts.push_back({x, idx, n2});
  }
  if (verts.empty()) throw std::runtime_error("covering_radius_exact: no Voronoi vertex found");
  Eigen::VectorXd far;
  for (const auto& v : verts)
    if (v.n2 == best) far = v.x;
  cr.vertex = q * far;
  cr.lo = cr.hi = std::sqrt(best);
  if (!l.exact()) return cr;
  // Re-derive the near-maximal vertices in lattice coordinates: uᵀG0 z_i = ½ z_iᵀG0 z_i.
  const RatMatrix& g = l.unscaled_gram();
  std::optional<Rational> top;
  for (const auto& v : verts) {
    if (v.n2 < best * (1.0 - 1e-6)) continue;
    RatMatrix sys(d, d);
    RatMatrix rhs(d, 1);
    for (int i = 0; i < d; ++i) {
      const IntVec& z = facets[v.rows[i]].coords;
      for (int j = 0; j < d; ++j) {
        Rational s = 0;
        for (int k = 0; k < d; ++k) s += g(j, k) * Rational(z[k]);
        sys(i, j) = s;
      }
      rhs(i, 0) = exact_norm(g, z) / 2;
    }
    RatMatrix u = inverse(sys) * rhs;
    bool feasible = true;
    for (const auto& p : rv.points) {
      Rational lhs = 0;
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) lhs += u(j, 0) * g(j, k) * Rational(p.coords[k]);
      if (lhs > exact_norm(g, p.coords) / 2) {
        feasible = false;
        break;
      }
    }
    if (!feasible) continue;
    Rational n2 = 0;
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k) n2 += u(j, 0) * g(j, k) * u(k, 0);
    if (!top || n2 > *top) top = n2;
  }
  if (!top) return cr;
  auto s2 = l.scale().power(2);
  if (s2) {
    cr.mu_squared = *top * *s2;
    cr.lo = cr.hi = std::sqrt(cr.mu_squared->get_d());
  } else {
    cr.lo = cr.hi = std::sqrt(top->get_d()) * l.scale().value();
  }
  return cr;
}

std::vector<double> sample_coset_distances(const Lattice& l, int samples, std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("sample_coset_distances: samples must be positive");
  CvpSolver solver(l);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> out;
  out.reserve(samples);
  Eigen::VectorXd u(l.rank());
  for (int s = 0; s < samples; ++s) {
    for (int j = 0; j < l.rank(); ++j) u(j) = unif(rng);
    Eigen::VectorXd x = l.basis() * u;
    out.push_back(solver.closest(x).dist);
  }
  return out;
}

AvgMu avg_mu(const Lattice& l, int samples, std::uint64_t seed) {
  std::vector<double> d = sample_coset_distances(l, samples, seed);
  double mean = 0.0;
  for (double x : d) mean += x * x;
  mean /= samples;
  double var = 0.0;
  for (double x : d) var += (x * x - mean) * (x * x - mean);
  var = samples > 1 ? var / (samples - 1) : 0.0;
  return {mean, std::sqrt(var / samples)};
}

CoveringRadius covering_radius_bracket(const Lattice& l, int samples, std::uint64_t seed) {
  AvgMu a = avg_mu(l, samples, seed);
  CoveringRadius cr;
  cr.exact = false;
  cr.avg_sq = a.estimate;
  cr.avg_sq_stderr = a.stderr_;
  cr.samples = samples;
  cr.lo = std::sqrt(std::max(0.0, a.estimate - 3.0 * a.stderr_));
  cr.hi = std::sqrt(8.0) * std::sqrt(a.estimate + 3.0 * a.stderr_);
  return cr;
}

CoveringRadius covering_radius(const Lattice& l, int samples, std::uint64_t seed) {
  if (l.rank() <= 4 || has_orthogonal_basis(l)) return covering_radius_exact(l);
  return covering_radius_bracket(l, samples, seed);
}

}  // namespace latgeo
