#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "latgeo/enumerate.hpp"
#include "latgeo/families.hpp"

namespace latgeo {

// One invariant checked over a batch of instances.
struct CheckRow {
  std::string suite;
  std::string name;
  long trials = 0;
  long failures = 0;
  double worst = 0.0;  // largest error or violation observed, in the units stated in `detail`
  std::string detail;
  double seconds = 0.0;
  bool pass() const { return trials > 0 && failures == 0; }
};

struct SuiteConfig {
  std::uint64_t seed = 1;
  int trials = 0;   // > 0 overrides the instance count of every randomized check
  int samples = 0;  // > 0 overrides Monte-Carlo sample counts
  std::uint64_t enum_budget = kDefaultNodeBudget;
};

// Lattices shared by the family-based checks: ℤ¹..ℤ⁴, five rectangular, five random
// mod-p at n = 4, smaller mod-p, KL bases, a direct sum and an HKZ-reduced basis.
std::vector<FamilySpec> test_families();

// psd
CheckRow check_pinv(int trials, std::uint64_t seed);
CheckRow check_slice_variational(int trials, std::uint64_t seed);
CheckRow check_slice_pinv_duality(int trials, std::uint64_t seed);
CheckRow check_slice_superadditive(int trials, std::uint64_t seed);
CheckRow check_det_lemma(int trials, std::uint64_t seed);
CheckRow check_det_concavity(int trials, std::uint64_t seed);
CheckRow check_det_derivative(int trials, std::uint64_t seed);
CheckRow check_det_product(int trials, std::uint64_t seed);
CheckRow check_parallel_sum_limit(int trials, std::uint64_t seed);
CheckRow check_mat_max(int trials, std::uint64_t seed);

// gaussian
CheckRow check_smoothing_oracle();
CheckRow check_separable_generic();
CheckRow check_pointcount_sandwich(const std::vector<FamilySpec>& families);
CheckRow check_coset_mass(int trials, std::uint64_t seed);
CheckRow check_central_coset(int trials, std::uint64_t seed);
CheckRow check_banacosh(int trials, std::uint64_t seed);
CheckRow check_mass_decrease(int trials, std::uint64_t seed);
CheckRow check_gaussian_parallel_sum(int trials, std::uint64_t seed);
CheckRow check_asymptotic_mass();
CheckRow check_tv_smoothing(int samples, std::uint64_t seed);
CheckRow check_eta_homogeneity(const std::vector<FamilySpec>& families);

// uncrossing
CheckRow check_uncrossing(int trials, std::uint64_t seed);
CheckRow check_detformula(int trials, std::uint64_t seed);
CheckRow check_rev_am_gm(int trials, std::uint64_t seed);
CheckRow check_rounding(int trials, std::uint64_t seed);

// kl
CheckRow check_programs(int trials, std::uint64_t seed);
CheckRow check_kl_certificates(const std::vector<FamilySpec>& families);
CheckRow check_gapcrp();
CheckRow check_direct_sum_mu(int trials, std::uint64_t seed);
CheckRow check_kl_cross(int trials, std::uint64_t seed);
CheckRow check_bar_mu(const std::vector<FamilySpec>& families, int samples, std::uint64_t seed);
CheckRow check_covering_sampling(const std::vector<FamilySpec>& families, int samples, std::uint64_t seed);
CheckRow check_eta_sandwich(const std::vector<FamilySpec>& families);

// revmink
CheckRow check_weak_revmink(const std::vector<FamilySpec>& families);
CheckRow check_minkowski_henk(const std::vector<FamilySpec>& families);
CheckRow check_strong_revmink_consistency(const std::vector<FamilySpec>& families);
CheckRow check_gauss_vol(int samples, std::uint64_t seed);
CheckRow check_gauss_norm(int samples, std::uint64_t seed);
CheckRow check_revmink_instance(std::uint64_t seed);

// reductions (acceptance thresholds 0.9 / 0.4 are calibration choices)
CheckRow check_reduction_yes(int trials, std::uint64_t seed);
CheckRow check_reduction_no(int trials, std::uint64_t seed);
CheckRow check_reduction_malformed(int trials, std::uint64_t seed);
CheckRow check_moment(std::uint64_t seed);

// mixing
CheckRow check_mixing(const std::vector<FamilySpec>& families);

// siegel
CheckRow check_siegel(int n, int trials, std::uint64_t seed);
CheckRow check_siegel_ball(int trials, std::uint64_t seed);
CheckRow check_modp(std::uint64_t seed);

std::vector<std::string> suite_names();
// Throws std::invalid_argument for an unknown suite.
std::vector<CheckRow> run_suite(const std::string& name, const SuiteConfig& cfg, std::ostream* progress = nullptr);
void print_summary(std::ostream& os, const std::vector<CheckRow>& rows);

}  // namespace latgeo
