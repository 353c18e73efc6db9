#pragma once

#include <vector>

#include "latgeo/lattice.hpp"
#include "latgeo/programs.hpp"

namespace latgeo {

struct RevAmGm {
  std::vector<int> s;  // chosen indices (0-based), ascending
  double value = 0.0;  // d_S·(Π_{i∈S} a_i^{d_i})^{1/d_S}
  int k = 0;           // ⌈log₂(2Σd_i)⌉
  double lhs = 0.0;    // Σ d_i a_i
  double bound_factor = 0.0;  // 4k
  bool certified = false;     // lhs ≤ 4k·value
};

// Dyadic buckets S_j = {i : 2^{−j}r < a_i ≤ 2^{−j+1}r}, j ≤ k; returns the best bucket.
RevAmGm reverse_am_gm(const std::vector<double>& a, const std::vector<int>& d);

// det_W(X)/det(Λ*∩W)²; 1 for the zero subspace.
double normalized_det(const DualAtom& atom);

struct UncrossResult {
  DualAtom meet;  // V∩W with (X+Y)^{∩(V∩W)}/2
  DualAtom join;  // V+W with the remainder
  double lhs = 0.0;  // product of normalized dets before
  double rhs = 0.0;  // after
};

// Subspaces must be lattice subspaces of `dual`; throws when one contains the other.
UncrossResult uncross_pair(const Lattice& dual, const DualAtom& v, const DualAtom& w);

struct RoundingResult {
  LatticeSubspace w_star;
  double dual_value = 0.0;   // objective of the input solution
  double w_value = 0.0;      // dim W*/det(Λ*∩W*)^{2/dim W*}
  double certified_ratio = 0.0;  // dual_value / w_value
  double bound = 0.0;            // 24(log₂n + 1)²
  bool certificate_holds = false;
  int support_after_step1 = 0;
  int uncross_steps = 0;
  int uncross_limit = 0;  // |S*|·n²
  bool monotone = true;   // every uncross step kept the normalized product from decreasing
  RevAmGm selection;
  std::vector<DualAtom> chain;
};

// Atoms are lattice subspaces of l.dual(); throws unless the solution is feasible.
RoundingResult subspace_round(const Lattice& l, const DualSolution& sol);

// Step 1 alone: support reduction to at most n² atoms without lowering the objective.
DualSolution reduce_support(const DualSolution& sol, int n);

struct KlCertificate {
  LatticeSubspace w;  // lattice subspace of Λ*
  int index = 0;      // chosen Gram–Schmidt index (0-based)
  double mu_hi = 0.0;
  double ratio = 0.0;  // μ_hi/(√dim W·det(Λ*∩W)^{−1/dim W})
  double bound = 0.0;  // √n/2 with exact μ, √8·√n/2 otherwise
  std::vector<double> gs_norms;
};

// HKZ-based witness: W = span(b₁..b_{i−1})⊥ for i maximizing ‖b̃_i‖.
KlCertificate kl_certificate_hkz(const Lattice& l);

// det((Λ/r)*∩W) ≤ d^{d/2}, compared exactly on squares; W is a lattice subspace of Λ*.
bool gapcrp_verify(const Lattice& l, const Rational& r_squared, const LatticeSubspace& w);

}  // namespace latgeo
