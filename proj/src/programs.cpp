#include "latgeo/programs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include <json.hpp>

#include "latgeo/gaussian.hpp"

namespace latgeo {

namespace {

Eigen::MatrixXd sym(const Eigen::MatrixXd& m) { return 0.5 * (m + m.transpose()); }

Eigen::MatrixXd sqrt_psd(const Eigen::MatrixXd& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym(a));
  return es.eigenvectors() * es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() * es.eigenvectors().transpose();
}

Eigen::MatrixXd inv_sqrt_pd(const Eigen::MatrixXd& a) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym(a));
  return es.eigenvectors() * es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() * es.eigenvectors().transpose();
}

// S·exp(−α H)·S for symmetric H.
Eigen::MatrixXd exp_step(const Eigen::MatrixXd& s, const Eigen::MatrixXd& h, double alpha) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym(h));
  Eigen::VectorXd e = (-alpha * es.eigenvalues()).array().exp();
  return sym(s * (es.eigenvectors() * e.asDiagonal() * es.eigenvectors().transpose()) * s);
}

// Shape scaled onto the boundary Σ e^{−πyᵀAy} = 1/2.
Eigen::MatrixXd to_boundary(const Lattice& l, const Eigen::MatrixXd& shape) {
  const double eta = smoothing_parameter(l.transformed(inv_sqrt_pd(shape)), 0.5, 1e-10).eta;
  return eta * eta * shape;
}

SmoothProgramSolution smooth_run(const Lattice& l, const Lattice& dual, Eigen::MatrixXd start,
                                 const SmoothOptions& opt) {
  const int n = l.ambient_dim();
  SmoothProgramSolution out;
  Eigen::MatrixXd a = to_boundary(l, start);
  double obj = a.trace();
  std::vector<double> history{obj};
  double step = 1.0;
  int it = 0;
  try {
    for (; it < opt.max_iter; ++it) {
      std::vector<WeightedPoint> pts;
      gaussian_support(dual, PsdMatrix(a.inverse()), true, pts);
      Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n, n);
      double c = 0.0;
      for (const auto& p : pts) {
        g += p.w * p.y * p.y.transpose();
        c += p.w * p.q;
      }
      if (!(c > 0)) break;
      Eigen::MatrixXd d = Eigen::MatrixXd::Identity(n, n) - (obj / c) * g;
      Eigen::MatrixXd s = sqrt_psd(a);
      Eigen::MatrixXd h = s * d * s / obj;
      if (h.norm() < 1e-11) break;
      bool moved = false;
      double alpha = step;
      for (int tries = 0; tries < 30; ++tries) {
        Eigen::MatrixXd an = to_boundary(l, exp_step(s, h, alpha));
        if (an.trace() < obj * (1.0 - 1e-15)) {
          a = an;
          obj = an.trace();
          moved = true;
          step = std::min(4.0, alpha * 2.0);
          break;
        }
        alpha *= 0.5;
      }
      if (!moved) break;
      history.push_back(obj);
      const int m = int(history.size());
      if (m > opt.window && history[m - 1 - opt.window] - obj < opt.tol * obj) break;
    }
  } catch (const BudgetExceeded&) {
    out.heuristic = true;
  }
  out.a = PsdMatrix(a);
  out.objective = obj;
  out.iterations = it;
  return out;
}

}  // namespace

double smooth_constraint(const Lattice& l, const Eigen::MatrixXd& a) {
  return rho_nonzero(l.dual(), PsdMatrix(a.inverse())).value;
}

SmoothProgramSolution solve_mu_sm(const Lattice& l, const SmoothOptions& opt) {
  if (l.rank() != l.ambient_dim()) throw std::invalid_argument("solve_mu_sm: full-rank lattice required");
  const int n = l.rank();
  const Lattice dual = l.dual();
  SmoothProgramSolution best = smooth_run(l, dual, Eigen::MatrixXd::Identity(n, n), opt);
  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int r = 0; r < opt.restarts; ++r) {
    Eigen::MatrixXd g(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) g(i, j) = normal(rng);
    Eigen::MatrixXd shape = g * g.transpose() / n + 0.5 * Eigen::MatrixXd::Identity(n, n);
    SmoothProgramSolution s = smooth_run(l, dual, shape, opt);
    if (s.objective < best.objective) best = s;
  }
  best.constraint_value = rho_nonzero(dual, PsdMatrix(best.a.matrix().inverse())).value;
  best.feasible = best.constraint_value <= 0.5 * (1.0 + 1e-6);
  return best;
}

double det_on(const Eigen::MatrixXd& a, const Subspace& w) {
  if (w.dim() == 0) return 1.0;
  return (w.basis().transpose() * a * w.basis()).determinant();
}

double det_feasibility(const SubspaceCandidates& cands, const Eigen::MatrixXd& a) {
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& c : cands.list) {
    const double v = std::pow(std::max(0.0, det_on(a, c.w.span)) * c.w.det * c.w.det, 1.0 / c.w.dim);
    worst = std::min(worst, v);
  }
  return worst;
}

namespace {

struct DetTerm {
  Eigen::MatrixXd o;  // orthonormal basis of W
  int d = 0;
  double log_det_lat = 0.0;  // log det(Λ*∩W)
};

// g_W(B) = (log(1/det(Λ*∩W)²) − log det_W(B))/d; the scale τ(B) = exp(max_W g_W).
std::vector<double> det_gaps(const std::vector<DetTerm>& terms, const Eigen::MatrixXd& b) {
  std::vector<double> g(terms.size());
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const double ld = std::log((terms[i].o.transpose() * b * terms[i].o).determinant());
    g[i] = (-2.0 * terms[i].log_det_lat - ld) / terms[i].d;
  }
  return g;
}

double soft_max(const std::vector<double>& g, double beta, std::vector<double>* weights = nullptr) {
  const double top = *std::max_element(g.begin(), g.end());
  double z = 0.0;
  for (double v : g) z += std::exp(beta * (v - top));
  if (weights) {
    weights->resize(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) (*weights)[i] = std::exp(beta * (g[i] - top)) / z;
  }
  return top + std::log(z) / beta;
}

}  // namespace

DetProgramSolution solve_mu_det(const Lattice& l, const SubspaceCandidates& cands, const DetOptions& opt) {
  const int n = l.ambient_dim();
  if (cands.list.empty()) throw std::invalid_argument("solve_mu_det: no candidate subspaces");
  std::vector<DetTerm> terms;
  for (const auto& c : cands.list) terms.push_back({c.w.span.basis(), c.w.dim, std::log(c.w.det)});

  auto true_obj = [&](const Eigen::MatrixXd& b) {
    auto g = det_gaps(terms, b);
    return std::log(b.trace()) + *std::max_element(g.begin(), g.end());
  };

  std::vector<Eigen::MatrixXd> starts{Eigen::MatrixXd::Identity(n, n)};
  for (const auto& s : opt.starts) starts.push_back(sym(s) * (double(n) / s.trace()));

  Eigen::MatrixXd best_b;
  double best_val = std::numeric_limits<double>::infinity();
  std::vector<double> best_w;
  int total_iter = 0;
  for (const auto& start : starts) {
    Eigen::MatrixXd b = start;
    std::vector<double> weights;
    for (double beta0 : opt.temperatures) {
      const double beta = beta0 * n;
      auto smooth = [&](const Eigen::MatrixXd& m, std::vector<double>* w) {
        return std::log(m.trace()) + soft_max(det_gaps(terms, m), beta, w);
      };
      double f = smooth(b, &weights);
      double alpha = 0.5;
      for (int it = 0; it < opt.iterations_per_stage; ++it, ++total_iter) {
        Eigen::MatrixXd grad = Eigen::MatrixXd::Identity(n, n) / b.trace();
        for (std::size_t i = 0; i < terms.size(); ++i) {
          if (weights[i] < 1e-14) continue;
          const auto& t = terms[i];
          grad -= weights[i] / t.d * t.o * (t.o.transpose() * b * t.o).inverse() * t.o.transpose();
        }
        Eigen::MatrixXd s = sqrt_psd(b);
        Eigen::MatrixXd h = s * grad * s;
        if (h.norm() < 1e-12) break;
        bool moved = false;
        for (int tries = 0; tries < 40; ++tries) {
          Eigen::MatrixXd bn = exp_step(s, h, alpha);
          bn *= double(n) / bn.trace();
          std::vector<double> wn;
          const double fn = smooth(bn, &wn);
          if (fn < f - 1e-15 * std::fabs(f)) {
            b = bn;
            f = fn;
            weights = wn;
            moved = true;
            alpha = std::min(4.0, alpha * 1.5);
            break;
          }
          alpha *= 0.5;
        }
        if (!moved) break;
      }
      const double v = true_obj(b);
      if (v < best_val) {
        best_val = v;
        best_b = b;
        best_w = weights;
      }
    }
  }

  auto g = det_gaps(terms, best_b);
  const double tau = std::exp(*std::max_element(g.begin(), g.end())) * (1.0 + 1e-12);
  Eigen::MatrixXd a = tau * best_b;
  DetProgramSolution out;
  out.a = PsdMatrix(a);
  out.objective = a.trace();
  out.iterations = total_iter;
  out.kkt_weights = best_w;
  for (std::size_t i = 0; i < cands.list.size(); ++i) {
    DetConstraint c;
    c.w = cands.list[i].w;
    c.det_w_a = det_on(a, c.w.span);
    c.bound = 1.0 / (c.w.det * c.w.det);
    c.active = std::pow(c.det_w_a / c.bound, 1.0 / c.w.dim) <= 1.0 + opt.active_tol;
    out.constraints.push_back(c);
  }
  return out;
}

double atom_value(const DualAtom& atom) {
  if (atom.w.dim == 0) return 0.0;
  const double dx = std::max(0.0, det_on(atom.x.matrix(), atom.w.span));
  return atom.w.dim * std::pow(dx, 1.0 / atom.w.dim) / std::pow(atom.w.det, 2.0 / atom.w.dim);
}

void check_ranges(const DualSolution& sol, double tol) {
  for (const auto& atom : sol.atoms) {
    if (atom.x.rank() != atom.w.dim || !atom.w.span.contains(atom.x.range(), tol))
      throw std::invalid_argument("dual solution: range(X_i) differs from W_i");
  }
}

double dual_objective(const Lattice& l, const DualSolution& sol) {
  check_ranges(sol);
  double total = 0.0;
  for (const auto& atom : sol.atoms) {
    if (atom.x.dim() != l.ambient_dim()) throw std::invalid_argument("dual solution: dimension mismatch");
    total += atom_value(atom);
  }
  return total;
}

double dual_load(const DualSolution& sol) {
  if (sol.atoms.empty()) return 0.0;
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(sol.atoms.front().x.dim(), sol.atoms.front().x.dim());
  for (const auto& atom : sol.atoms) sum += atom.x.matrix();
  return max_eigenvalue(sum);
}

bool dual_feasible(const DualSolution& sol, double tol) {
  try {
    check_ranges(sol);
  } catch (const std::invalid_argument&) {
    return false;
  }
  return dual_load(sol) <= 1.0 + tol;
}

DualSolution dual_from_primal(const Lattice& l, const DetProgramSolution& primal) {
  const int n = l.ambient_dim();
  const Eigen::MatrixXd& a = primal.a.matrix();
  std::vector<const DetConstraint*> near;
  std::vector<Eigen::MatrixXd> xs;
  for (const auto& c : primal.constraints) {
    if (std::pow(c.det_w_a / c.bound, 1.0 / c.w.dim) > 1.05) continue;
    const Eigen::MatrixXd& o = c.w.span.basis();
    Eigen::MatrixXd x = o * (o.transpose() * a * o).inverse() * o.transpose();
    x *= std::pow(c.det_w_a, 1.0 / c.w.dim);  // det_W(x) = 1
    near.push_back(&c);
    xs.push_back(sym(x));
  }
  DualSolution sol;
  if (near.empty()) return sol;
  // Multiplicative NNLS for I ≈ Σ a_i X_i: a_i ← a_i·tr(X_i)/tr(X_i M).
  std::vector<double> w(xs.size(), 1.0 / xs.size());
  for (int it = 0; it < 2000; ++it) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t i = 0; i < xs.size(); ++i) m += w[i] * xs[i];
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double den = (xs[i] * m).trace();
      if (den > 0) w[i] *= xs[i].trace() / den;
    }
  }
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t i = 0; i < xs.size(); ++i) m += w[i] * xs[i];
  const double load = max_eigenvalue(m);
  const double wmax = *std::max_element(w.begin(), w.end());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (w[i] < 1e-9 * wmax) continue;
    sol.atoms.push_back({near[i]->w, PsdMatrix(xs[i] * (w[i] / load))});
  }
  // Guard against rounding in the eigenvalue scaling.
  const double final_load = dual_load(sol);
  if (final_load > 1.0)
    for (auto& atom : sol.atoms) atom.x = atom.x.scaled(1.0 / final_load);
  return sol;
}

std::string dual_to_json(const DualSolution& sol) {
  nlohmann::json j;
  j["atoms"] = nlohmann::json::array();
  for (const auto& atom : sol.atoms) {
    nlohmann::json w = nlohmann::json::array();
    for (int i = 0; i < atom.w.generators.rows(); ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (int c = 0; c < atom.w.generators.cols(); ++c) row.push_back(atom.w.generators(i, c).get_si());
      w.push_back(row);
    }
    nlohmann::json x = nlohmann::json::array();
    const Eigen::MatrixXd& m = atom.x.matrix();
    for (int r = 0; r < m.rows(); ++r)
      for (int c = 0; c < m.cols(); ++c) x.push_back(m(r, c));
    j["atoms"].push_back({{"W", w}, {"X", x}});
  }
  return j.dump();
}

DualSolution dual_from_json(const Lattice& l, const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  const Lattice dual = l.dual();
  const int n = l.ambient_dim();
  DualSolution sol;
  for (const auto& a : j.at("atoms")) {
    const auto& w = a.at("W");
    if (int(w.size()) != dual.rank()) throw std::invalid_argument("dual json: W has the wrong number of rows");
    const int cols = w.empty() ? 0 : int(w[0].size());
    IntMatrix g(dual.rank(), cols);
    for (int i = 0; i < dual.rank(); ++i)
      for (int c = 0; c < cols; ++c) g(i, c) = w[i].at(c).get<long>();
    const auto& x = a.at("X");
    if (int(x.size()) != n * n) throw std::invalid_argument("dual json: X must have n² entries");
    Eigen::MatrixXd m(n, n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) m(r, c) = x[r * n + c].get<double>();
    sol.atoms.push_back({make_lattice_subspace(dual, g), PsdMatrix(sym(m))});
  }
  return sol;
}

}  // namespace latgeo
