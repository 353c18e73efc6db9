#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "latgeo/enumerate.hpp"
#include "latgeo/lattice.hpp"

namespace latgeo {

// Minimal vectors of every nonzero coset of Λ/2Λ. A coset whose minimum is
// attained by exactly ±v gives a facet (strict); cosets with more minimizers
// keep all of them, which still cuts out the Voronoi cell.
struct RelevantVectors {
  std::vector<LatticePoint> points;
  std::vector<bool> strict;

  PointList as_point_list() const;
  std::vector<LatticePoint> facets() const;
};

RelevantVectors voronoi_relevant_vectors(const Lattice& l, int max_dim = 6,
                                         std::uint64_t budget = kDefaultNodeBudget);

struct CoveringRadius {
  double lo = 0.0;  // lo = hi in exact mode
  double hi = 0.0;
  bool exact = false;
  std::optional<Rational> mu_squared;  // when the scale permits
  Eigen::VectorXd vertex;              // farthest Voronoi vertex (exact mode)
  double avg_sq = 0.0;                 // bracket mode: μ̄² estimate
  double avg_sq_stderr = 0.0;
  int samples = 0;
};

struct AvgMu {
  double estimate = 0.0;  // of μ̄² = E dist(x, Λ)²
  double stderr_ = 0.0;
};

// Distances from uniform points of the fundamental parallelepiped to Λ.
std::vector<double> sample_coset_distances(const Lattice& l, int samples, std::uint64_t seed);
AvgMu avg_mu(const Lattice& l, int samples, std::uint64_t seed);

// Farthest Voronoi vertex; exact rational re-verification when G0 is exact. Rank ≤ max_dim,
// except for orthogonal bases, which use μ² = ¼ Σ‖b_i‖² at any rank.
CoveringRadius covering_radius_exact(const Lattice& l, int max_dim = 4);
// [√(m − 3se), √8·√(m + 3se)] from the μ̄² estimate m.
CoveringRadius covering_radius_bracket(const Lattice& l, int samples, std::uint64_t seed);
// Exact when possible, bracket otherwise.
CoveringRadius covering_radius(const Lattice& l, int samples = 4000, std::uint64_t seed = 1);

bool has_orthogonal_basis(const Lattice& l);

}  // namespace latgeo
