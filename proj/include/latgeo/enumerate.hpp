#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "latgeo/lattice.hpp"

namespace latgeo {

using IntVec = std::vector<long>;
using LongMatrix = Eigen::Matrix<long, Eigen::Dynamic, Eigen::Dynamic>;

inline constexpr std::uint64_t kDefaultNodeBudget = 10'000'000;

class BudgetExceeded : public std::runtime_error {
 public:
  explicit BudgetExceeded(std::uint64_t partial)
      : std::runtime_error("enumeration budget exceeded after " + std::to_string(partial) + " points"),
        partial_(partial) {}
  // Points found before the budget ran out; a lower bound on the true count.
  std::uint64_t partial_count() const { return partial_; }

 private:
  std::uint64_t partial_;
};

struct LllResult {
  Eigen::MatrixXd basis;  // input · transform
  LongMatrix transform;   // unimodular
};

LllResult lll_reduce(const Eigen::MatrixXd& basis, double delta = 0.99);

// Fincke–Pohst enumeration over an LLL-reduced copy of a basis. Squared distances
// handed to the visitor are recomputed from the reduced columns.
class Enumerator {
 public:
  explicit Enumerator(const Eigen::MatrixXd& basis);

  int rank() const { return int(reduced_.cols()); }
  int ambient_dim() const { return int(reduced_.rows()); }
  const Eigen::MatrixXd& reduced_basis() const { return reduced_; }
  const LongMatrix& transform() const { return transform_; }
  const Eigen::MatrixXd& r_factor() const { return r_; }

  // Nearest-plane coordinates (original basis) for the target.
  IntVec babai(const Eigen::VectorXd& target) const;

  // Calls visit(z, point, dist2) for every z with ‖Bz − center‖² ≤ r2; z are
  // coordinates in the original basis. Returns false if the node budget ran out.
  template <class Visit>
  bool run(const Eigen::VectorXd& center, double r2, std::uint64_t budget, Visit&& visit) const;

 private:
  Eigen::MatrixXd reduced_;
  LongMatrix transform_;
  Eigen::MatrixXd q_;
  Eigen::MatrixXd r_;
};

struct LatticePoint {
  IntVec coords;
  Eigen::VectorXd vec;
  double norm2 = 0.0;
};

struct PointList {
  std::vector<LatticePoint> points;
  double radius = 0.0;
  bool complete = true;
};

// All lattice points of norm ≤ r, sorted by (norm, coordinates).
PointList enumerate_points(const Lattice& l, double r, std::uint64_t budget = kDefaultNodeBudget);

struct CvpResult {
  IntVec coords;
  Eigen::VectorXd point;
  double dist = 0.0;
};

class CvpSolver {
 public:
  explicit CvpSolver(const Lattice& l) : enumerator_(l.basis()) {}
  // Closest vector; ties go to the lexicographically smallest coordinates.
  CvpResult closest(const Eigen::VectorXd& t, std::uint64_t budget = kDefaultNodeBudget) const;
  const Enumerator& enumerator() const { return enumerator_; }

 private:
  Enumerator enumerator_;
};

CvpResult cvp(const Lattice& l, const Eigen::VectorXd& t, std::uint64_t budget = kDefaultNodeBudget);
// Nearest plane on the basis as given.
CvpResult babai_nearest_plane(const Lattice& l, const Eigen::VectorXd& t);
std::vector<double> successive_minima(const Lattice& l, std::uint64_t budget = kDefaultNodeBudget);
// vol_d(r·B₂ᵈ).
double ball_volume(int d, double r);

// λ₁ of a lattice given by any basis matrix.
double shortest_vector_length(const Eigen::MatrixXd& basis, std::uint64_t budget = kDefaultNodeBudget);

template <class Visit>
bool Enumerator::run(const Eigen::VectorXd& center, double r2, std::uint64_t budget, Visit&& visit) const {
  const int d = rank();
  Eigen::VectorXd qc = q_.transpose() * center;
  double off2 = std::max(0.0, center.squaredNorm() - qc.squaredNorm());
  const double accept = r2 * (1.0 + 1e-12) + 1e-300;
  const double rem = (r2 - off2) * (1.0 + 1e-9) + 1e-300;
  if (rem < 0.0) return true;
  Eigen::VectorXd u = r_.triangularView<Eigen::Upper>().solve(qc);
  std::vector<long> z(d, 0), zmax(d, 0);
  std::vector<double> ctr(d, 0.0), part(d + 1, 0.0);
  IntVec original(transform_.rows(), 0);
  Eigen::VectorXd point(ambient_dim());
  std::uint64_t nodes = 0;

  auto setup = [&](int k) {
    double s = 0.0;
    for (int j = k + 1; j < d; ++j) s += r_(k, j) * (double(z[j]) - u(j));
    ctr[k] = u(k) - s / r_(k, k);
    double avail = rem - part[k + 1];
    if (avail < 0.0) {
      z[k] = 1;
      zmax[k] = 0;
      return;
    }
    double w = std::sqrt(avail) / std::fabs(r_(k, k));
    z[k] = long(std::ceil(ctr[k] - w));
    zmax[k] = long(std::floor(ctr[k] + w));
  };

  int k = d - 1;
  setup(k);
  while (true) {
    if (z[k] > zmax[k]) {
      ++k;
      if (k == d) break;
      ++z[k];
      continue;
    }
    if (++nodes > budget) return false;
    double t = r_(k, k) * (double(z[k]) - ctr[k]);
    part[k] = part[k + 1] + t * t;
    if (part[k] > rem) {
      ++z[k];
      continue;
    }
    if (k == 0) {
      point.setZero();
      for (int j = 0; j < d; ++j)
        if (z[j] != 0) point += double(z[j]) * reduced_.col(j);
      double dist2 = (point - center).squaredNorm();
      if (dist2 <= accept) {
        for (int i = 0; i < int(original.size()); ++i) {
          long s = 0;
          for (int j = 0; j < d; ++j) s += transform_(i, j) * z[j];
          original[i] = s;
        }
        visit(static_cast<const IntVec&>(original), static_cast<const Eigen::VectorXd&>(point), dist2);
      }
      ++z[0];
      continue;
    }
    --k;
    setup(k);
  }
  return true;
}

}  // namespace latgeo
