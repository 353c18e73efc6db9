#include "latgeo/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "latgeo/gaussian.hpp"
#include "latgeo/voronoi.hpp"

namespace latgeo {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::pair<double, double> mean_stderr(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m += x;
  m /= double(v.size());
  double var = 0.0;
  for (double x : v) var += (x - m) * (x - m);
  var = v.size() > 1 ? var / double(v.size() - 1) : 0.0;
  return {m, std::sqrt(var / double(v.size()))};
}

}  // namespace

std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 finalizer over a golden-ratio stride.
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

SiegelResult siegel_check(int n, const Integer& p, int trials, std::uint64_t seed) {
  if (trials < 30) throw std::invalid_argument("siegel_check: at least 30 trials");
  std::vector<double> masses;
  for (int i = 0; i < trials; ++i) {
    Lattice l = random_modp_lattice(n, p, sub_seed(seed, i));
    masses.push_back(rho_nonzero(l.dual(), PsdMatrix::scalar(n, 0.25)).value);
  }
  auto [m, se] = mean_stderr(masses);
  return {m, se, std::ldexp(1.0, -n), trials};
}

SiegelResult siegel_ball_check(int n, const Integer& p, double r, int trials, std::uint64_t seed) {
  if (trials < 30) throw std::invalid_argument("siegel_ball_check: at least 30 trials");
  std::vector<double> counts;
  for (int i = 0; i < trials; ++i) {
    Lattice l = random_modp_lattice(n, p, sub_seed(seed, i));
    counts.push_back(double(enumerate_points(l, r).points.size()) - 1.0);
  }
  auto [m, se] = mean_stderr(counts);
  return {m, se, ball_volume(n, r), trials};
}

GaussianSamples discrete_gaussian_sample(const Lattice& l, const Eigen::VectorXd& t, double s, int count,
                                         std::uint64_t seed) {
  if (l.rank() > 8) throw std::invalid_argument("discrete_gaussian_sample: dimension above 8");
  if (!(s > 0)) throw std::invalid_argument("discrete_gaussian_sample: s must be positive");
  std::vector<WeightedPoint> support;
  // Relative tail below 2⁻⁶⁴.
  GaussianMass g = gaussian_support(l, PsdMatrix::scalar(l.ambient_dim(), s * s), t, support, 5.4e-20);
  if (!g.complete) throw BudgetExceeded(support.size());
  std::vector<double> w;
  w.reserve(support.size());
  for (const auto& p : support) w.push_back(p.w);
  std::discrete_distribution<std::size_t> pick(w.begin(), w.end());
  std::mt19937_64 rng(seed);
  GaussianSamples out;
  out.truncation_radius = g.truncation_radius;
  out.mass = g.value;
  for (int i = 0; i < count; ++i) {
    const auto& p = support[pick(rng)];
    out.coords.push_back(p.z);
    out.points.push_back(p.y);
  }
  return out;
}

CosetOracle honest_oracle(double s) {
  return [s](const Lattice& l, const Eigen::VectorXd& t, int count, std::uint64_t seed) {
    return discrete_gaussian_sample(l, t, s, count, seed).points;
  };
}

ReductionTrial gapspp_reduction_trial(const Lattice& l, double s, double alpha, int c, const CosetOracle& oracle,
                                      std::uint64_t seed) {
  if (c < 1) throw std::invalid_argument("gapspp_reduction_trial: c must be positive");
  ReductionTrial tr;
  tr.n = l.rank();
  tr.s = s;
  tr.alpha = alpha;
  tr.samples = c * tr.n;
  tr.threshold = 5.0 * alpha * alpha * s * s;
  std::mt19937_64 rng(sub_seed(seed, 0));
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Eigen::VectorXd u(l.rank());
  for (int i = 0; i < l.rank(); ++i) u(i) = unif(rng);
  tr.t = l.basis() * u;
  std::vector<Eigen::VectorXd> xs;
  try {
    xs = oracle(l, tr.t, tr.samples, sub_seed(seed, 1));
  } catch (const std::exception&) {
    tr.membership_ok = false;
    return tr;
  }
  if (int(xs.size()) != tr.samples) {
    tr.membership_ok = false;
    return tr;
  }
  const int n = l.ambient_dim();
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (const auto& x : xs) {
    if (x.size() != n) {
      tr.membership_ok = false;
      return tr;
    }
    Eigen::VectorXd diff = x - tr.t;
    Eigen::VectorXd z = l.coordinates(diff);
    Eigen::VectorXd zr = z.array().round().matrix();
    const double resid = (l.basis() * zr - diff).norm();
    if (resid > 1e-8 * (1.0 + diff.norm())) tr.membership_ok = false;
    m += x * x.transpose();
  }
  m /= double(xs.size());
  tr.eigen_top = max_eigenvalue(m);
  tr.accept = tr.membership_ok && tr.eigen_top <= tr.threshold;
  return tr;
}

bool subgaussian_moment_check(const std::vector<Eigen::VectorXd>& samples, double s) {
  if (samples.size() < 100) throw std::invalid_argument("subgaussian_moment_check: at least 100 samples");
  const int n = int(samples.front().size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (const auto& x : samples) m += x * x.transpose();
  m /= double(samples.size());
  const double slack = 3.0 * std::sqrt(double(n) / double(samples.size()));
  return max_eigenvalue(m) <= 4.0 * s * s * (1.0 + slack);
}

MinkowskiValue minkowski_fn(const Lattice& l, double r, const SubspaceCandidates& primal_cands) {
  (void)l;
  MinkowskiValue out;
  for (const auto& c : primal_cands.list) {
    const double v = ball_volume(c.w.dim, r) / c.w.det;
    if (v > out.value) {
      out.value = v;
      out.dim = c.w.dim;
    }
  }
  out.lower_bound_only = !primal_cands.all_exhaustive();
  return out;
}

std::vector<RevMinkRow> weak_revmink_check(const Lattice& l, const std::vector<double>& radii,
                                           const SubspaceCandidates& primal_cands, std::uint64_t budget) {
  std::vector<RevMinkRow> rows;
  const double n = l.rank();
  for (double r : radii) {
    RevMinkRow row;
    row.r = r;
    row.count = long(enumerate_points(l, r * (1.0 + 1e-12), budget).points.size());
    row.upper = minkowski_fn(l, 6.0 * std::sqrt(n) * r, primal_cands).value;
    row.lower = minkowski_fn(l, r / 2.0, primal_cands).value;
    row.upper_holds = double(row.count) <= row.upper;
    row.lower_holds = double(row.count) >= row.lower;
    row.exhaustive = primal_cands.all_exhaustive();
    rows.push_back(row);
  }
  return rows;
}

RevMinkInstance revmink_lb_instance(int n, double eps, std::uint64_t seed, long cap) {
  if (n > 8) throw std::invalid_argument("revmink_lb_instance: n above 8");
  if (cap < 2) throw std::invalid_argument("revmink_lb_instance: cap below 2");
  RevMinkInstance inst;
  inst.lattice = random_modp_lattice(n, Integer(1000003), seed);
  inst.requested = long(std::ceil(std::exp2(std::pow(double(n), 0.5 + eps))));
  long target = std::min(inst.requested, cap);
  target += target % 2;
  double r = shortest_vector_length(inst.lattice.basis());
  PointList all;
  for (;;) {
    all = enumerate_points(inst.lattice, r * (1.0 + 1e-12));
    if (long(all.points.size()) - 1 >= target) break;
    r *= 1.25;
  }
  for (const auto& p : all.points) {
    if (long(inst.points.points.size()) >= target) break;
    int first = 0;
    while (first < n && p.coords[first] == 0) ++first;
    if (first == n || p.coords[first] < 0) continue;
    LatticePoint neg = p;
    for (auto& c : neg.coords) c = -c;
    neg.vec = -p.vec;
    inst.points.points.push_back(p);
    inst.points.points.push_back(neg);
  }
  std::sort(inst.points.points.begin(), inst.points.points.end(), [](const LatticePoint& a, const LatticePoint& b) {
    if (a.norm2 != b.norm2) return a.norm2 < b.norm2;
    return a.coords < b.coords;
  });
  for (const auto& p : inst.points.points) inst.points.radius = std::max(inst.points.radius, std::sqrt(p.norm2));
  return inst;
}

GaussNorm gaussian_norm_expectation(const Lattice& l, int samples, std::uint64_t seed) {
  if (l.rank() > 5) throw std::invalid_argument("gaussian_norm_expectation: dimension too large");
  RelevantVectors rv = voronoi_relevant_vectors(l.dual(), 6);
  std::vector<Eigen::VectorXd> dirs;
  for (const auto& v : rv.points) dirs.push_back(2.0 * v.vec / v.norm2);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const int n = l.ambient_dim();
  std::vector<double> vals;
  vals.reserve(samples);
  Eigen::VectorXd x(n);
  for (int i = 0; i < samples; ++i) {
    for (int j = 0; j < n; ++j) x(j) = normal(rng);
    double g = 0.0;
    for (const auto& d : dirs) g = std::max(g, d.dot(x));
    vals.push_back(g);
  }
  GaussNorm out;
  auto [m, se] = mean_stderr(vals);
  out.estimate = m;
  out.stderr_ = se;
  out.eta = smoothing_parameter(l, 0.5).eta;
  out.ratio = m / out.eta;
  return out;
}

TvCheck tv_smoothing_check(const Lattice& l, const Eigen::MatrixXd& a, int samples, int bins, std::uint64_t seed) {
  const int n = l.rank();
  if (n > 2 || l.ambient_dim() != n) throw std::invalid_argument("tv_smoothing_check: full-rank lattices of dimension ≤ 2");
  Eigen::LLT<Eigen::MatrixXd> llt(a / (2.0 * kPi));
  if (llt.info() != Eigen::Success) throw std::invalid_argument("tv_smoothing_check: A must be positive definite");
  Eigen::MatrixXd lower = llt.matrixL();
  Eigen::MatrixXd binv = l.basis().inverse();
  long cells = 1;
  for (int i = 0; i < n; ++i) cells *= bins;
  std::vector<long> hist(cells, 0);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd g(n);
  for (int s = 0; s < samples; ++s) {
    for (int j = 0; j < n; ++j) g(j) = normal(rng);
    Eigen::VectorXd u = binv * (lower * g);
    long idx = 0;
    for (int j = 0; j < n; ++j) {
      double f = u(j) - std::floor(u(j));
      int b = std::min(bins - 1, int(f * bins));
      idx = idx * bins + b;
    }
    ++hist[idx];
  }
  TvCheck out;
  for (long c : hist) out.tv += std::fabs(double(c) / samples - 1.0 / double(cells));
  out.tv *= 0.5;
  out.noise = std::sqrt(double(cells) / (2.0 * kPi * samples));
  out.eps = rho_nonzero(l.dual(), PsdMatrix(a.inverse())).value;
  out.holds = out.tv <= out.eps / 2.0 + 3.0 * out.noise;
  return out;
}

}  // namespace latgeo
