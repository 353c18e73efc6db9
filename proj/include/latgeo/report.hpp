#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "latgeo/enumerate.hpp"
#include "latgeo/families.hpp"
#include "latgeo/lattice.hpp"

namespace latgeo {

struct ParamConfig {
  std::uint64_t seed = 1;
  std::uint64_t enum_budget = kDefaultNodeBudget;
  int samples = 4000;  // Monte-Carlo points for the covering-radius bracket
  double tol = 1e-9;   // smoothing-parameter bisection tolerance
};

// One lattice's parameters. Quantities that failed carry no value and an entry in `errors`.
struct ParamReport {
  std::string family;
  int n = 0;
  std::uint64_t seed = 0;
  std::optional<double> det, dual_det;
  std::optional<std::vector<double>> lambdas;
  std::optional<double> eta;
  std::optional<double> eta_det;
  bool eta_det_exhaustive = false;
  std::optional<double> mu_lo, mu_hi;
  bool mu_exact = false;
  std::optional<double> c_eta_est;  // η/η_det
  std::optional<double> kl_ratio;   // μ_lo / max_W √d·det(Λ*∩W)^{−1/d}
  std::optional<double> tau_2, tau_inf;
  bool enumeration_complete = true;
  std::vector<std::string> errors;
  nlohmann::ordered_json witnesses = nlohmann::ordered_json::object();
  nlohmann::ordered_json checks = nlohmann::ordered_json::object();  // family-specific inequality rows
};

ParamReport compute_params(const Lattice& l, const std::string& family, const ParamConfig& cfg);
ParamReport compute_params(const FamilySpec& f, const ParamConfig& cfg);

nlohmann::ordered_json to_json(const ParamReport& r);
// One compact JSON object per line.
std::string to_json_line(const ParamReport& r);
std::string csv_header();
std::string to_csv_row(const ParamReport& r);

// One row per family in input order; a failing row is kept with its errors.
std::vector<ParamReport> conjecture_scan(const std::vector<FamilySpec>& families, const ParamConfig& cfg);

// √(log₂(m/ln(3/2))): the growth factor for η over a direct sum of m lattices.
double main_cross_factor(int m);

}  // namespace latgeo
