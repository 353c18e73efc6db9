#include "latgeo/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "latgeo/eta_zoo.hpp"
#include "latgeo/gaussian.hpp"
#include "latgeo/voronoi.hpp"

namespace latgeo {

namespace {

using ojson = nlohmann::ordered_json;

ojson subspace_json(const LatticeSubspace& w) {
  ojson gens = ojson::array();
  for (int j = 0; j < w.generators.cols(); ++j) {
    ojson col = ojson::array();
    for (int i = 0; i < w.generators.rows(); ++i) col.push_back(w.generators(i, j).get_str());
    gens.push_back(col);
  }
  ojson out;
  out["dim"] = w.dim;
  out["det"] = w.det;
  if (w.det_squared) out["det_squared"] = to_string(*w.det_squared);
  out["generators"] = gens;  // dual-basis coordinates, one generator per entry
  return out;
}

ojson opt(const std::optional<double>& v) { return v ? ojson(*v) : ojson(nullptr); }

// Runs f, recording a failure under `field` instead of propagating it.
template <class F>
void guarded(ParamReport& r, const char* field, F&& f) {
  try {
    f();
  } catch (const BudgetExceeded& e) {
    r.enumeration_complete = false;
    r.errors.push_back(std::string(field) + ": " + e.what());
  } catch (const std::exception& e) {
    r.errors.push_back(std::string(field) + ": " + e.what());
  }
}

std::string fmt(const std::optional<double>& v) {
  if (!v) return "";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", *v);
  return buf;
}

}  // namespace

double main_cross_factor(int n) { return std::sqrt(std::log2(double(n) / std::log(1.5))); }

ParamReport compute_params(const Lattice& l, const std::string& family, const ParamConfig& cfg) {
  ParamReport r;
  r.family = family;
  r.n = l.rank();
  r.seed = cfg.seed;
  const double n = r.n;

  guarded(r, "det", [&] {
    r.det = l.det();
    r.dual_det = l.dual().det();
  });
  guarded(r, "lambdas", [&] { r.lambdas = successive_minima(l, cfg.enum_budget); });
  guarded(r, "eta", [&] {
    SmoothingResult s = smoothing_parameter(l, 0.5, cfg.tol);
    r.eta = s.eta;
    r.witnesses["eta"] = {{"eps", 0.5}, {"dual_sum_at_eta", s.dual_sum_at_eta}};
  });
  guarded(r, "mixing", [&] {
    MixingTimes m = mixing_times(l);
    r.tau_2 = m.tau_2;
    r.tau_inf = m.tau_inf;
  });

  std::optional<SubspaceCandidates> cands;
  guarded(r, "candidates", [&] {
    SubspaceSearch opt;
    opt.budget = cfg.enum_budget;
    cands = candidate_subspaces(l, opt);
  });
  if (cands) {
    guarded(r, "eta_det", [&] {
      EtaEstimate e = eta_det(l, *cands);
      r.eta_det = e.value;
      r.eta_det_exhaustive = !e.lower_bound_only;
      if (e.witness_w) r.witnesses["eta_det"] = subspace_json(*e.witness_w);
    });
  }
  guarded(r, "mu", [&] {
    CoveringRadius cr = covering_radius(l, cfg.samples, cfg.seed);
    r.mu_lo = cr.lo;
    r.mu_hi = cr.hi;
    r.mu_exact = cr.exact;
    ojson w;
    w["mode"] = cr.exact ? "exact" : "bracket";
    if (cr.exact) {
      if (cr.mu_squared) w["mu_squared"] = to_string(*cr.mu_squared);
      w["vertex"] = std::vector<double>(cr.vertex.data(), cr.vertex.data() + cr.vertex.size());
    } else {
      w["avg_sq"] = cr.avg_sq;
      w["avg_sq_stderr"] = cr.avg_sq_stderr;
      w["samples"] = cr.samples;
    }
    r.witnesses["mu"] = w;
  });
  if (r.eta && r.eta_det) r.c_eta_est = *r.eta / *r.eta_det;
  if (cands && r.mu_lo) {
    double best = 0.0;
    const LatticeSubspace* arg = nullptr;
    for (const auto& c : cands->list) {
      const double v = std::sqrt(double(c.w.dim)) * std::pow(c.w.det, -1.0 / c.w.dim);
      if (v > best) {
        best = v;
        arg = &c.w;
      }
    }
    if (arg) {
      r.kl_ratio = *r.mu_lo / best;
      r.witnesses["kl"] = subspace_json(*arg);
    }
  }

  // η ≤ √n/λ₁(Λ*) and η_det ≥ 1/λ₁(Λ*) together bound η/η_det by √n.
  if (r.c_eta_est) {
    r.checks["c_eta_sqrt_n"] = {{"lhs", *r.c_eta_est}, {"rhs", std::sqrt(n)},
                                {"holds", *r.c_eta_est <= std::sqrt(n) * (1.0 + 1e-9)}};
  }
  return r;
}

ParamReport compute_params(const FamilySpec& f, const ParamConfig& cfg) {
  ParamReport r;
  Lattice l;
  try {
    l = f.build();
  } catch (const std::exception& e) {
    r.family = f.to_string();
    r.n = f.n;
    r.seed = cfg.seed;
    r.errors.push_back(std::string("build: ") + e.what());
    return r;
  }
  r = compute_params(l, f.to_string(), cfg);
  if (f.kind == FamilySpec::Kind::DirectSum && r.eta) {
    guarded(r, "main_cross", [&] {
      double best = 0.0;
      for (const auto& c : f.children) best = std::max(best, smoothing_parameter(c.build(), 0.5, cfg.tol).eta);
      // The factor grows with the number of summands, not with the total dimension.
      const double rhs = main_cross_factor(int(f.children.size())) * best;
      r.checks["main_cross"] = {{"lhs", *r.eta}, {"rhs", rhs}, {"holds", *r.eta <= rhs * (1.0 + 1e-9)}};
    });
  }
  return r;
}

ojson to_json(const ParamReport& r) {
  ojson j;
  j["family"] = r.family;
  j["n"] = r.n;
  j["seed"] = r.seed;
  j["det"] = opt(r.det);
  j["dual_det"] = opt(r.dual_det);
  j["lambdas"] = r.lambdas ? ojson(*r.lambdas) : ojson(nullptr);
  j["eta"] = opt(r.eta);
  j["eta_det"] = opt(r.eta_det);
  j["mu_lo"] = opt(r.mu_lo);
  j["mu_hi"] = opt(r.mu_hi);
  j["c_eta_est"] = opt(r.c_eta_est);
  j["kl_ratio"] = opt(r.kl_ratio);
  j["tau_2"] = opt(r.tau_2);
  j["tau_inf"] = opt(r.tau_inf);
  j["witnesses"] = r.witnesses;
  j["checks"] = r.checks;
  j["budget_flags"] = {{"enumeration_complete", r.enumeration_complete},
                       {"eta_det_exhaustive", r.eta_det_exhaustive},
                       {"mu_exact", r.mu_exact},
                       {"errors", r.errors}};
  return j;
}

std::string to_json_line(const ParamReport& r) { return to_json(r).dump(); }

std::string csv_header() {
  return "family,n,seed,det,eta,eta_det,eta_det_exhaustive,mu_lo,mu_hi,mu_exact,c_eta_est,kl_ratio,tau_2,tau_inf,"
         "enumeration_complete,errors";
}

std::string to_csv_row(const ParamReport& r) {
  std::ostringstream os;
  std::string errs;
  for (std::size_t i = 0; i < r.errors.size(); ++i) errs += (i ? "; " : "") + r.errors[i];
  std::string quoted = "\"";
  for (char c : errs) quoted += (c == '"') ? std::string("\"\"") : std::string(1, c);
  quoted += "\"";
  std::string family = "\"" + r.family + "\"";
  os << family << ',' << r.n << ',' << r.seed << ',' << fmt(r.det) << ',' << fmt(r.eta) << ',' << fmt(r.eta_det) << ','
     << (r.eta_det_exhaustive ? 1 : 0) << ',' << fmt(r.mu_lo) << ',' << fmt(r.mu_hi) << ',' << (r.mu_exact ? 1 : 0)
     << ',' << fmt(r.c_eta_est) << ',' << fmt(r.kl_ratio) << ',' << fmt(r.tau_2) << ',' << fmt(r.tau_inf) << ','
     << (r.enumeration_complete ? 1 : 0) << ',' << quoted;
  return os.str();
}

std::vector<ParamReport> conjecture_scan(const std::vector<FamilySpec>& families, const ParamConfig& cfg) {
  std::vector<ParamReport> rows;
  rows.reserve(families.size());
  for (const auto& f : families) rows.push_back(compute_params(f, cfg));
  return rows;
}

}  // namespace latgeo
