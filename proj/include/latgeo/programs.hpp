#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "latgeo/eta_zoo.hpp"
#include "latgeo/lattice.hpp"
#include "latgeo/psd.hpp"

namespace latgeo {

// Σ_{y∈Λ*\0} exp(−π yᵀAy) for positive definite A.
double smooth_constraint(const Lattice& l, const Eigen::MatrixXd& a);

struct SmoothProgramSolution {
  PsdMatrix a;
  double objective = 0.0;         // tr(A)
  double constraint_value = 0.0;  // ρ at A, ≤ 1/2 when feasible
  bool feasible = false;
  bool heuristic = false;  // dual enumeration hit its budget
  int iterations = 0;
};

struct SmoothOptions {
  int max_iter = 300;
  int restarts = 1;  // random shapes in addition to the spherical start
  std::uint64_t seed = 1;
  double tol = 1e-8;  // relative decrease over `window` iterations that stops a run
  int window = 50;
};

// min tr(A) s.t. Σ_{y∈Λ*\0} e^{−πyᵀAy} ≤ 1/2. Every iterate sits on the constraint boundary:
// a shape B is scaled by τ = η_{1/2}(B^{−1/2}Λ)², and shapes move along the trace-reduction
// direction I − (tr A / Σw yᵀAy)·Σw yyᵀ.
SmoothProgramSolution solve_mu_sm(const Lattice& l, const SmoothOptions& opt = {});

struct DetConstraint {
  LatticeSubspace w;  // lattice subspace of Λ*
  double det_w_a = 0.0;
  double bound = 0.0;  // 1/det(Λ*∩W)²
  bool active = false;
};

struct DetProgramSolution {
  PsdMatrix a;
  double objective = 0.0;
  std::vector<DetConstraint> constraints;
  std::vector<double> kkt_weights;  // smoothed-max weights per constraint at the final shape
  int iterations = 0;
};

struct DetOptions {
  int iterations_per_stage = 150;
  std::vector<double> temperatures = {4, 16, 64, 256, 1024, 4096, 16384};
  double active_tol = 1e-3;  // relative slack under which a constraint is reported active
  std::vector<Eigen::MatrixXd> starts;  // extra start shapes besides the identity
};

// det_W(A) with W given by an orthonormal basis.
double det_on(const Eigen::MatrixXd& a, const Subspace& w);

// min tr(A) s.t. det_W(A) ≥ det(Λ*∩W)⁻² over the candidate subspaces of Λ*.
DetProgramSolution solve_mu_det(const Lattice& l, const SubspaceCandidates& cands, const DetOptions& opt = {});
// Smallest (det_W(A)·det(Λ*∩W)²)^{1/d} over candidates; ≥ 1 means feasible.
double det_feasibility(const SubspaceCandidates& cands, const Eigen::MatrixXd& a);

struct DualAtom {
  LatticeSubspace w;  // lattice subspace of Λ*
  PsdMatrix x;        // range(x) = w.span
};

struct DualSolution {
  std::vector<DualAtom> atoms;
};

// d·det_W(X)^{1/d}/det(Λ*∩W)^{2/d}; 0 for a zero-dimensional atom.
double atom_value(const DualAtom& atom);
// Σ_i d_i det_{W_i}(X_i)^{1/d_i}/det(Λ*∩W_i)^{2/d_i}; throws on a range mismatch.
double dual_objective(const Lattice& l, const DualSolution& sol);
// λ_max(Σ X_i).
double dual_load(const DualSolution& sol);
bool dual_feasible(const DualSolution& sol, double tol = 1e-8);
void check_ranges(const DualSolution& sol, double tol = 1e-6);

// KKT reconstruction from a primal point: X_i ∝ (A^{↓W_i})⁺ on near-active constraints,
// weights fitted to I by multiplicative nonnegative least squares, then scaled so ΣX_i ⪯ I.
DualSolution dual_from_primal(const Lattice& l, const DetProgramSolution& primal);

std::string dual_to_json(const DualSolution& sol);
// Atoms are rebuilt against l.dual().
DualSolution dual_from_json(const Lattice& l, const std::string& text);

}  // namespace latgeo
