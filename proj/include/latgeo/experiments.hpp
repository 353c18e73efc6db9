#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "latgeo/enumerate.hpp"
#include "latgeo/eta_zoo.hpp"
#include "latgeo/families.hpp"
#include "latgeo/lattice.hpp"

namespace latgeo {

// Every stochastic routine derives per-task seeds from (seed, index) through this mixer.
std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t index);

struct SiegelResult {
  double mean = 0.0;
  double stderr_ = 0.0;
  double target = 0.0;
  int trials = 0;
};

// Mean of ρ_{1/4}(Λ*\0) over random mod-p lattices against 2⁻ⁿ.
SiegelResult siegel_check(int n, const Integer& p, int trials, std::uint64_t seed);
// Mean of |Λ∩rB \ 0| over random mod-p lattices against vol(rB).
SiegelResult siegel_ball_check(int n, const Integer& p, double r, int trials, std::uint64_t seed);

struct GaussianSamples {
  std::vector<IntVec> coords;  // lattice coordinates of x − t
  std::vector<Eigen::VectorXd> points;
  double truncation_radius = 0.0;  // in units of ‖x‖/s
  double mass = 0.0;               // ρ_s(Λ+t) over the enumerated support
};

// Exact categorical sampling from D_{Λ+t,s} ∝ exp(−π‖x‖²/s²) over the shell-summed support.
GaussianSamples discrete_gaussian_sample(const Lattice& l, const Eigen::VectorXd& t, double s, int count,
                                         std::uint64_t seed);

// Returns `count` points claimed to lie in Λ + t.
using CosetOracle = std::function<std::vector<Eigen::VectorXd>(const Lattice&, const Eigen::VectorXd&, int count,
                                                                std::uint64_t seed)>;
CosetOracle honest_oracle(double s);

struct ReductionTrial {
  int n = 0;
  double s = 0.0;
  double alpha = 0.0;
  int samples = 0;  // N = c·n
  Eigen::VectorXd t;
  double eigen_top = 0.0;
  double threshold = 0.0;  // 5α²s²
  bool membership_ok = true;
  bool accept = false;
};

ReductionTrial gapspp_reduction_trial(const Lattice& l, double s, double alpha, int c, const CosetOracle& oracle,
                                      std::uint64_t seed);

// Top eigenvalue of the empirical second moment ≤ 4s²·(1 + 3√(n/N)).
bool subgaussian_moment_check(const std::vector<Eigen::VectorXd>& samples, double s);

struct MinkowskiValue {
  double value = 1.0;
  int dim = 0;  // dimension of the maximizing candidate (0: the constant term)
  bool lower_bound_only = true;
};

// M(r,Λ) = max over primal lattice subspaces W of vol_d(rB^d)/det(Λ∩W), with 1 for d = 0.
MinkowskiValue minkowski_fn(const Lattice& l, double r, const SubspaceCandidates& primal_cands);

struct RevMinkRow {
  double r = 0.0;
  long count = 0;             // |rB ∩ Λ|
  double upper = 0.0;         // M(6√n·r, Λ)
  double lower = 0.0;         // M(r/2, Λ)
  bool upper_holds = false;   // count ≤ upper
  bool lower_holds = false;   // count ≥ lower
  bool exhaustive = false;
};

std::vector<RevMinkRow> weak_revmink_check(const Lattice& l, const std::vector<double>& radii,
                                           const SubspaceCandidates& primal_cands,
                                           std::uint64_t budget = kDefaultNodeBudget);

struct RevMinkInstance {
  Lattice lattice;
  long requested = 0;  // ⌈2^{n^{1/2+ε}}⌉
  PointList points;    // closed under negation, sorted by norm
};

RevMinkInstance revmink_lb_instance(int n, double eps, std::uint64_t seed, long cap = 10000);

struct GaussNorm {
  double estimate = 0.0;
  double stderr_ = 0.0;
  double eta = 0.0;
  double ratio = 0.0;  // estimate/η
};

// E‖x‖_{𝒱(Λ*)} for x ~ N(0, Iₙ), with ‖x‖_𝒱 = max over relevant v of 2⟨x,v⟩/⟨v,v⟩.
GaussNorm gaussian_norm_expectation(const Lattice& l, int samples, std::uint64_t seed);

struct TvCheck {
  double tv = 0.0;     // binned TV between N(0, A/2π) mod Λ and uniform
  double noise = 0.0;  // √(K/(2πN)): expected binned TV of exact uniform samples
  double eps = 0.0;    // Σ_{y∈Λ*\0} e^{−πyᵀAy}
  bool holds = false;  // tv ≤ ε/2 + 3·noise
};

TvCheck tv_smoothing_check(const Lattice& l, const Eigen::MatrixXd& a, int samples, int bins, std::uint64_t seed);

}  // namespace latgeo
