// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any criterion fails.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "latgeo/experiments.hpp"
#include "latgeo/families.hpp"
#include "latgeo/gaussian.hpp"
#include "latgeo/suites.hpp"
#include "latgeo/voronoi.hpp"

using namespace latgeo;

namespace {

constexpr std::uint64_t kSeed = 20240611;

struct Outcome {
  bool pass = false;
  std::string detail;
};

// Folds suite rows into one outcome; every row must pass.
Outcome from_rows(const std::vector<CheckRow>& rows) {
  Outcome o{true, ""};
  for (const auto& r : rows) {
    o.pass = o.pass && r.pass();
    std::ostringstream os;
    os << r.name << " " << (r.trials - r.failures) << "/" << r.trials << " worst=" << r.worst;
    if (!r.pass()) os << " [" << r.detail << "]";
    o.detail += (o.detail.empty() ? "" : "; ") + os.str();
  }
  return o;
}

std::vector<FamilySpec> families_where(const std::function<bool(const FamilySpec&)>& keep) {
  std::vector<FamilySpec> out;
  for (const auto& f : test_families())
    if (keep(f)) out.push_back(f);
  return out;
}

// Σ_{k≠0} exp(−π s² k²) summed directly, then bisected for the level ε.
double eta_z1_bisect(double eps) {
  auto f = [](double s) {
    double sum = 0.0;
    for (int k = 1; k <= 100; ++k) sum += 2 * std::exp(-M_PI * s * s * k * k);
    return sum;
  };
  double lo = 0.05, hi = 20.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) > eps ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

Outcome exact_geometry() {
  Outcome o{true, ""};
  for (int n = 1; n <= 4; ++n) {
    CoveringRadius c = covering_radius_exact(Lattice::integer(n));
    Rational want(n, 4);
    want.canonicalize();
    const bool ok = c.exact && c.mu_squared && *c.mu_squared == want;
    o.pass = o.pass && ok;
    o.detail += "mu^2(Z^" + std::to_string(n) + ")=" + (c.mu_squared ? to_string(*c.mu_squared) : "?") + " ";
  }
  // det(Λ)·det(Λ*) = 1, Λ** = Λ and BᵀD = I, all in exact arithmetic.
  int checked = 0;
  for (const auto& f : test_families()) {
    Lattice l = f.build();
    if (!l.exact()) continue;
    Lattice d = l.dual();
    bool ok = l.det_squared() && d.det_squared() && *l.det_squared() * *d.det_squared() == 1;
    Lattice dd = d.dual();
    ok = ok && dd.unscaled_gram() == l.unscaled_gram() && dd.scale() == l.scale();
    if (l.unscaled_basis() && d.unscaled_basis())
      ok = ok && l.unscaled_basis()->transpose() * *d.unscaled_basis() == RatMatrix::identity(l.rank());
    o.pass = o.pass && ok;
    ++checked;
    if (!ok) o.detail += "dual identity failed on " + f.to_string() + " ";
  }
  o.detail += "dual identities on " + std::to_string(checked) + " exact lattices";
  o.pass = o.pass && checked > 0;
  return o;
}

Outcome smoothing() {
  Outcome o{true, ""};
  for (double eps : {0.5, 0.25}) {
    const double got = smoothing_parameter(Lattice::integer(1), eps).eta, want = eta_z1_bisect(eps);
    const double err = std::fabs(got - want);
    o.pass = o.pass && err <= 1e-6;
    std::ostringstream os;
    os << "eta_" << eps << "(Z)=" << got << " oracle=" << want << " err=" << err << "; ";
    o.detail += os.str();
  }
  double worst = 0.0;
  for (int n = 1; n <= 4; ++n) {
    Lattice z = Lattice::integer(n);
    for (double s : {0.6, 1.0, 1.9}) {
      Eigen::VectorXd diag = Eigen::VectorXd::LinSpaced(n, s * s, 1.5 * s * s);
      PsdMatrix x(Eigen::MatrixXd(diag.asDiagonal()));
      Eigen::VectorXd t = Eigen::VectorXd::LinSpaced(n, 0.1, 0.45);
      for (bool excl : {false, true}) {
        const Eigen::VectorXd shift = excl ? Eigen::VectorXd::Zero(n) : t;
        const double a = rho_separable(z, x, shift, excl).value, b = rho_generic(z, x, shift, excl).value;
        worst = std::max(worst, std::fabs(a - b) / b);
      }
    }
  }
  o.pass = o.pass && worst <= 1e-9;
  std::ostringstream os;
  os << "separable vs generic worst rel=" << worst;
  o.detail += os.str();
  return o;
}

Outcome run_cli_suite_all(double& seconds) {
  const auto t0 = std::chrono::steady_clock::now();
  const std::string cmd = std::string(LATGEO_CLI_PATH) + " suite all --seed 1 2>/dev/null";
  std::string out;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return {false, "cannot start " + cmd};
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, got);
  const int status = pclose(p);
  seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::string summary;
  const auto pos = out.find("checks passed");
  if (pos != std::string::npos) {
    const auto start = out.rfind('\n', pos);
    summary = out.substr(start == std::string::npos ? 0 : start + 1, pos - start + 12);
  }
  return {code == 0, "exit " + std::to_string(code) + ", " + summary};
}

struct Criterion {
  int id;
  std::string title;
  std::string tolerance;
  double time_limit;  // seconds; 0 means none
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const auto zn_rect_modp4 = families_where([](const FamilySpec& f) {
    using K = FamilySpec::Kind;
    return (f.kind == K::Zn && f.n <= 4) || f.kind == K::Rectangular || (f.kind == K::ModP && f.n == 4);
  });
  const auto small_families = families_where([](const FamilySpec& f) { return f.build().rank() <= 4; });
  const auto all_families = test_families();

  double suite_seconds = 0.0;
  std::vector<Criterion> criteria = {
      {1, "exact geometry: mu(Z^n) = sqrt(n)/2 (n<=4), det/dual identities", "exact rational", 10,
       exact_geometry},
      {2, "smoothing parameter vs bisection oracle; separable vs generic", "1e-6 abs; 1e-9 rel", 0, smoothing},
      {3, "point-count sandwich eta/sqrt3 <= s~ <= eta", "1e-6 slack", 120,
       [&] { return from_rows({check_pointcount_sandwich(zn_rect_modp4)}); }},
      {4, "coset-mass identity, 100 instances", "1e-7 rel", 0,
       [] { return from_rows({check_coset_mass(100, sub_seed(kSeed, 4))}); }},
      {5, "gaussian parallel-sum and mass-decrease, 500 each", "1e-6 slack", 0,
       [] {
         return from_rows({check_gaussian_parallel_sum(500, sub_seed(kSeed, 51)),
                           check_mass_decrease(500, sub_seed(kSeed, 52))});
       }},
      {6, "uncrossing (1000), detformula, mat-max", "1e-7", 180,
       [] {
         return from_rows({check_uncrossing(1000, sub_seed(kSeed, 61)), check_detformula(500, sub_seed(kSeed, 62)),
                           check_mat_max(500, sub_seed(kSeed, 63))});
       }},
      {7, "convex programs on 50 lattices (a)-(d)", "dual <= primal + 1e-8; Z^n gap 1e-4 rel", 0,
       [] { return from_rows({check_programs(50, sub_seed(kSeed, 7))}); }},
      {8, "subspace rounding on 50 dual solutions", "24(log2 n + 1)^2; m <= n^2; steps <= |S*|n^2", 0,
       [] { return from_rows({check_rounding(50, sub_seed(kSeed, 8))}); }},
      {9, "weak reverse Minkowski and Minkowski-first at 3 radii", "exact counts", 0,
       [&] { return from_rows({check_weak_revmink(small_families)}); }},
      {10, "mixing: tau_inf = eta_{1/4}^2, tau_inf <= 2 tau_2", "1e-8; 1e-9", 0,
       [&] { return from_rows({check_mixing(all_families)}); }},
      {11, "Siegel mean of rho_{1/4}(L*\\0), 200 mod-p lattices n=4", "factor 2 of 2^-4", 120,
       [] { return from_rows({check_siegel(4, 200, sub_seed(kSeed, 11))}); }},
      {12, "GapSPP reduction: YES >= 90%, NO >= 40% (calibrated); moment check", "rates over 50 trials", 0,
       [] {
         return from_rows({check_reduction_yes(50, sub_seed(kSeed, 121)), check_reduction_no(50, sub_seed(kSeed, 122)),
                           check_moment(sub_seed(kSeed, 123))});
       }},
      {13, "average covering radius bracket mu_bar <= mu <= sqrt8 mu_bar", "3 stderr", 0,
       [&] { return from_rows({check_bar_mu(all_families, 4000, sub_seed(kSeed, 13))}); }},
      {14, "`latgeo suite all` at default budgets", "exit 0", 600, [&] { return run_cli_suite_all(suite_seconds); }},
  };

  int failed = 0;
  for (auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = c.time_limit <= 0 || secs <= c.time_limit;
    const bool pass = o.pass && in_time;
    failed += !pass;
    std::printf("%s criterion %2d: %s | tol: %s | %.1f s%s | %s\n", pass ? "PASS" : "FAIL", c.id, c.title.c_str(),
                c.tolerance.c_str(), secs,
                c.time_limit > 0 ? (" (limit " + std::to_string(int(c.time_limit)) + " s)").c_str() : "",
                o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", int(criteria.size()) - failed, criteria.size());
  return failed ? 1 : 0;
}
