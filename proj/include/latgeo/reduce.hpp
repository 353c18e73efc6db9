#pragma once

#include <cstdint>
#include <vector>

#include "latgeo/enumerate.hpp"
#include "latgeo/lattice.hpp"

namespace latgeo {

// Coordinates of a shortest nonzero vector of the lattice spanned by the columns;
// among equal lengths the lexicographically smallest coordinates win.
IntVec shortest_vector_coords(const Eigen::MatrixXd& basis, std::uint64_t budget = kDefaultNodeBudget);

struct HkzResult {
  Lattice lattice;           // rebased input
  IntMatrix transform;       // lattice.basis = input.basis · transform
  std::vector<double> gs_norms;
};

// ‖b̃_i‖ = λ₁(π_i(Λ)) at every level, by SVP in each projected lattice.
HkzResult hkz_reduce(const Lattice& l, int max_dim = 8, std::uint64_t budget = kDefaultNodeBudget);

// Orthogonal projection of the columns of b away from the span of the first k columns.
Eigen::MatrixXd project_away(const Eigen::MatrixXd& b, int k);

}  // namespace latgeo
