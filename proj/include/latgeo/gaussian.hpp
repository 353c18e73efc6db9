#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <vector>

#include "latgeo/enumerate.hpp"
#include "latgeo/lattice.hpp"
#include "latgeo/psd.hpp"

namespace latgeo {

struct GaussianMass {
  double value = 0.0;
  double truncation_radius = 0.0;  // in units of √(yᵀX⁺y); 0 on the separable path
  double tail_estimate = 0.0;      // mass of the outermost shell that was summed
  bool complete = true;
};

inline constexpr double kRhoTol = 1e-14;

// ρ_X(Λ + t) = Σ exp(−π yᵀX⁺y). Points outside range(X) carry no mass.
GaussianMass rho(const Lattice& l, const PsdMatrix& x, const Eigen::VectorXd& t, double tol = kRhoTol,
                 std::uint64_t budget = kDefaultNodeBudget);
GaussianMass rho(const Lattice& l, const PsdMatrix& x, double tol = kRhoTol,
                 std::uint64_t budget = kDefaultNodeBudget);
// ρ_X(Λ \ {0}).
GaussianMass rho_nonzero(const Lattice& l, const PsdMatrix& x, double tol = kRhoTol,
                         std::uint64_t budget = kDefaultNodeBudget);
// Always the shell-enumeration path (used to cross-check the separable path).
GaussianMass rho_generic(const Lattice& l, const PsdMatrix& x, const Eigen::VectorXd& t, bool exclude_zero,
                         double tol = kRhoTol, std::uint64_t budget = kDefaultNodeBudget);

struct WeightedPoint {
  Eigen::VectorXd y;
  double q = 0.0;  // yᵀX⁺y
  double w = 0.0;  // exp(−π q)
  IntVec z;        // lattice coordinates of y − t
};
// Support points of the shell-summed ρ_X(Λ) (or Λ\0) with their weights; span(Λ) ⊆ range(X).
GaussianMass gaussian_support(const Lattice& l, const PsdMatrix& x, bool exclude_zero, std::vector<WeightedPoint>& out,
                              double tol = kRhoTol, std::uint64_t budget = kDefaultNodeBudget);
// Support points of ρ_X(Λ + t).
GaussianMass gaussian_support(const Lattice& l, const PsdMatrix& x, const Eigen::VectorXd& t,
                              std::vector<WeightedPoint>& out, double tol = kRhoTol,
                              std::uint64_t budget = kDefaultNodeBudget);

// Axis-aligned lattice with positive diagonal X: product of one-dimensional sums.
bool is_separable(const Lattice& l, const PsdMatrix& x);
GaussianMass rho_separable(const Lattice& l, const PsdMatrix& x, const Eigen::VectorXd& t, bool exclude_zero);

// Σ_k exp(−π a (k + u)²), switching to the Poisson side for a < 1.
double theta_1d(double a, double u = 0.0);
// Σ_{k≠0} exp(−π a k²) with full relative precision.
double theta_1d_nonzero(double a);

// Σ_{v∈Λ} exp(−π a ‖v‖²), from whichever side of Poisson summation is cheaper.
double theta(const Lattice& l, double a);

// s ↦ ρ_{1/s²}(Λ*\0) with cached dual norms; complete for every s ≥ the lowest s seen.
class DualSum {
 public:
  explicit DualSum(const Lattice& l, std::uint64_t budget = kDefaultNodeBudget);
  double operator()(double s);
  const Lattice& dual() const { return dual_; }
  double lambda1() const { return lambda1_; }

 private:
  void rebuild(double s_floor);

  Lattice dual_;
  std::uint64_t budget_;
  std::optional<std::vector<double>> axes_;  // squared dual basis lengths on the separable path
  std::vector<double> norms2_;               // ascending, nonzero
  double s_floor_ = 0.0;
  double lambda1_ = 0.0;
};

struct SmoothingResult {
  double eps = 0.0;
  double eta = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  double dual_sum_at_eta = 0.0;
};

SmoothingResult smoothing_parameter(const Lattice& l, double eps, double tol = 1e-9);
SmoothingResult smoothing_parameter(DualSum& f, double eps, double tol = 1e-9);

// max over dual norms r ≤ r_max of √(log|Λ*∩rB|/π)/r. With r_max ≤ 0 the radius grows until
// |Λ*∩tR·B| ≤ (2t+1)ⁿ|Λ*∩R·B| shows no larger radius can beat the running maximum.
double eta_from_point_counts(const Lattice& l, double r_max = 0.0, std::uint64_t budget = kDefaultNodeBudget);

struct MixingTimes {
  double tau_2 = 0.0;
  double tau_inf = 0.0;
};
MixingTimes mixing_times(const Lattice& l);

// max over the grid of s·√(log ρ(sΛ)/π), with ρ(sΛ) = theta(Λ, s²).
double gauss_scale_bound(const Lattice& l, const std::vector<double>& s_grid);
// Lower bound on μ(Λ): gauss_scale_bound over the dual.
double mu_lower_bound_gauss(const Lattice& l, const std::vector<double>& s_grid);
// Geometric grid center·2^{k/8}, k ∈ [−lo_steps, hi_steps].
std::vector<double> geometric_grid(double center, int lo_steps = 48, int hi_steps = 32);
// max over norms r ≤ r_max of log|Λ∩rB|/(2πr); r_max ≤ 0 picks 4√n·λ_max of a reduced basis.
double mu_lb_point_count(const Lattice& l, double r_max = 0.0, std::uint64_t budget = kDefaultNodeBudget);

}  // namespace latgeo
