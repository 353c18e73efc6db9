#include "latgeo/reduce.hpp"

#include <cmath>
#include <stdexcept>

namespace latgeo {

IntVec shortest_vector_coords(const Eigen::MatrixXd& basis, std::uint64_t budget) {
  Enumerator e(basis);
  double r2 = e.reduced_basis().col(0).squaredNorm();
  for (int j = 1; j < e.rank(); ++j) r2 = std::min(r2, e.reduced_basis().col(j).squaredNorm());
  IntVec best;
  double best2 = 0.0;
  Eigen::VectorXd origin = Eigen::VectorXd::Zero(basis.rows());
  bool ok = e.run(origin, r2 * (1.0 + 1e-9), budget, [&](const IntVec& z, const Eigen::VectorXd&, double d2) {
    bool zero = true;
    for (long c : z) zero = zero && c == 0;
    if (zero) return;
    if (best.empty() || d2 < best2 * (1.0 - 1e-10)) {
      best = z;
      best2 = d2;
    } else if (d2 <= best2 * (1.0 + 1e-10) && z < best) {
      best = z;
      best2 = std::min(best2, d2);
    }
  });
  if (!ok) throw BudgetExceeded(0);
  return best;
}

Eigen::MatrixXd project_away(const Eigen::MatrixXd& b, int k) {
  if (k == 0) return b;
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(b.leftCols(k));
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(b.rows(), k);
  return b - q * (q.transpose() * b);
}

HkzResult hkz_reduce(const Lattice& l, int max_dim, std::uint64_t budget) {
  const int d = l.rank();
  if (d > max_dim) throw std::invalid_argument("hkz_reduce: dimension too large");
  HkzResult res;
  res.lattice = l;
  res.transform = IntMatrix::identity(d);
  for (int i = 0; i < d - 1; ++i) {
    Eigen::MatrixXd proj = project_away(res.lattice.basis(), i).rightCols(d - i);
    IntVec z = shortest_vector_coords(proj, budget);
    std::vector<Integer> zi(z.begin(), z.end());
    IntMatrix block = complete_to_unimodular(zi);
    IntMatrix u = IntMatrix::identity(d);
    for (int r = 0; r < d - i; ++r)
      for (int c = 0; c < d - i; ++c) u(i + r, i + c) = block(r, c);
    res.lattice = res.lattice.rebased(u);
    res.transform = res.transform * u;
  }
  GramSchmidt gs = gram_schmidt(res.lattice.basis());
  for (double s : gs.sq_norms) res.gs_norms.push_back(std::sqrt(s));
  return res;
}

}  // namespace latgeo
