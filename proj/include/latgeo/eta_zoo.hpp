#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "latgeo/enumerate.hpp"
#include "latgeo/lattice.hpp"

namespace latgeo {

enum class Provenance { Coordinate, HkzPrefix, ShortVectorSpan, User };
std::string to_string(Provenance p);

struct Candidate {
  LatticeSubspace w;
  Provenance from = Provenance::User;
};

// Lattice subspaces of `lattice` (for the η-quantities: of Λ*). exhaustive[k] means every
// k-dimensional subspace of minimal determinant is listed, certified by Minkowski's
// second theorem: such a subspace is spanned by vectors of norm ≤ (2ᵏ/vol_k)·D_k/λ₁^{k−1}.
struct SubspaceCandidates {
  Lattice lattice;
  std::vector<Candidate> list;
  std::vector<bool> exhaustive;  // indexed by dimension 0..rank
  std::vector<double> min_det;   // indexed by dimension; 0 when no candidate
  bool all_exhaustive() const;
  // Adds unless an identical saturated subspace is present; returns whether it was added.
  bool add(const LatticeSubspace& w, Provenance from);
};

struct SubspaceSearch {
  double norm_bound = 0.0;  // ≤ 0: the Minkowski bound
  int max_dim = 0;          // ≤ 0: rank − 1
  std::size_t level_cap = 4000;
  std::size_t keep_per_dim = 12;
  std::uint64_t budget = kDefaultNodeBudget;
};

SubspaceCandidates lattice_subspaces(const Lattice& lattice, const SubspaceSearch& opt = {});
// Candidates over Λ*.
SubspaceCandidates candidate_subspaces(const Lattice& l, const SubspaceSearch& opt = {});

enum class EtaKind { Det, Rho, Mu, RhoCirc, MuCirc, Eta };
std::string to_string(EtaKind k);

struct EtaEstimate {
  EtaKind kind = EtaKind::Eta;
  double value = 0.0;     // certified lower bound unless exact
  double value_hi = 0.0;  // reporting value (bracket upper end for μ-based kinds)
  bool lower_bound_only = true;
  std::optional<LatticeSubspace> witness_w;
  double witness_s = 0.0;
  Eigen::MatrixXd witness_matrix;  // X for RhoCirc, R for MuCirc
};

// Witness evaluations.
double eta_det_term(const LatticeSubspace& w);
double eta_rho_term(const Lattice& dual_sub, double s);  // s·√(log ρ_{1/s²}(L)/dim L)
// Best s for one subspace lattice: grid plus golden-section refinement.
std::pair<double, double> eta_rho_best(const Lattice& dual_sub, const std::vector<double>& s_grid = {});
// √(log ρ_X(Λ*)/tr X).
double eta_rho_circ_value(const Lattice& dual, const Eigen::MatrixXd& x);
// Certified lower bound on μ(RΛ)/‖R‖_F (exact μ up to rank 4).
double eta_mu_circ_value(const Lattice& l, const Eigen::MatrixXd& r, int samples = 4000, std::uint64_t seed = 1);

EtaEstimate eta_det(const Lattice& l, const SubspaceCandidates& cands);
EtaEstimate eta_rho(const Lattice& l, const SubspaceCandidates& cands, const std::vector<double>& s_grid = {},
                    std::size_t per_dim = 4);
EtaEstimate eta_mu(const Lattice& l, const SubspaceCandidates& cands, int samples = 4000, std::uint64_t seed = 1);

struct CircOptions {
  int restarts = 2;
  std::uint64_t seed = 1;
  int iterations = 60;
  double eps = 1e-3;  // regularization of singular seeds before the ascent
  std::size_t seeds_per_dim = 2;
  int samples = 4000;
};
EtaEstimate eta_rho_circ(const Lattice& l, const SubspaceCandidates& cands, const CircOptions& opt = {});
EtaEstimate eta_mu_circ(const Lattice& l, const SubspaceCandidates& cands, const CircOptions& opt = {});

struct SandwichRow {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
  std::string note;  // which side is a heuristic lower bound
};

struct EtaZoo {
  double eta = 0.0;
  EtaEstimate det, rho, mu, rho_circ, mu_circ;
  bool exhaustive = false;
};

EtaZoo compute_eta_zoo(const Lattice& l, const CircOptions& opt = {});
EtaZoo compute_eta_zoo(const Lattice& l, const SubspaceCandidates& cands, const CircOptions& opt = {});
std::vector<SandwichRow> sandwich_report(const Lattice& l, const EtaZoo& zoo);

}  // namespace latgeo
