// latgeo: lattice parameters, invariant suites and subspace rounding from the command line.
// Exit codes: 0 pass, 1 assertion failure, 2 usage or input error.

#include <CLI11.hpp>

#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include "latgeo/eta_zoo.hpp"
#include "latgeo/programs.hpp"
#include "latgeo/report.hpp"
#include "latgeo/rounding.hpp"
#include "latgeo/suites.hpp"

namespace {

using namespace latgeo;

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct Source {
  std::string basis;
  std::vector<std::string> families;
};

struct Job {
  std::string label;
  std::optional<Lattice> lattice;  // set for --basis inputs
  std::optional<FamilySpec> family;
};

// Throws ParseError / std::invalid_argument for bad input.
std::vector<Job> load_jobs(const Source& src) {
  std::vector<Job> jobs;
  if (!src.basis.empty()) {
    Job j;
    j.label = "file:" + src.basis;
    j.lattice = read_basis_file(src.basis);
    jobs.push_back(std::move(j));
  }
  for (const auto& f : src.families) {
    Job j;
    j.family = FamilySpec::parse(f);
    j.label = j.family->to_string();
    jobs.push_back(std::move(j));
  }
  if (jobs.empty()) throw std::invalid_argument("one of --basis or --family is required");
  return jobs;
}

Lattice single_lattice(const Source& src) {
  std::vector<Job> jobs = load_jobs(src);
  if (jobs.size() != 1) throw std::invalid_argument("exactly one input lattice is required");
  return jobs[0].lattice ? *jobs[0].lattice : jobs[0].family->build();
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw std::invalid_argument("cannot open output file " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

int cmd_params(const Source& src, const ParamConfig& cfg, const std::string& format, const std::string& out_path,
               int jobs_n) {
  std::vector<Job> jobs = load_jobs(src);
  Output out(out_path);
  auto run = [&](const Job& j) {
    return j.lattice ? compute_params(*j.lattice, j.label, cfg) : compute_params(*j.family, cfg);
  };
  // Workers compute rows; assembly stays in input order.
  std::vector<ParamReport> rows(jobs.size());
  for (std::size_t first = 0; first < jobs.size(); first += std::size_t(jobs_n)) {
    std::vector<std::future<ParamReport>> batch;
    for (std::size_t i = first; i < jobs.size() && i < first + std::size_t(jobs_n); ++i)
      batch.push_back(std::async(jobs_n > 1 ? std::launch::async : std::launch::deferred, run, std::cref(jobs[i])));
    for (std::size_t k = 0; k < batch.size(); ++k) rows[first + k] = batch[k].get();
  }
  std::ostream& os = out.stream();
  if (format == "csv") os << csv_header() << '\n';
  for (const auto& r : rows) os << (format == "csv" ? to_csv_row(r) : to_json_line(r)) << '\n';
  return 0;
}

int cmd_suite(const std::string& name, const SuiteConfig& cfg, const std::string& out_path) {
  const auto names = suite_names();
  if (std::find(names.begin(), names.end(), name) == names.end()) {
    std::cerr << "error: unknown suite '" << name << "'; expected one of:";
    for (const auto& s : names) std::cerr << ' ' << s;
    std::cerr << '\n';
    return kExitUsage;
  }
  Output out(out_path);
  std::ostream& os = out.stream();
  os << "suite " << name << " seed " << cfg.seed << '\n';
  std::vector<CheckRow> rows = run_suite(name, cfg, &std::cerr);
  print_summary(os, rows);
  for (const auto& r : rows)
    if (!r.pass()) return kExitFail;
  return 0;
}

nlohmann::ordered_json subspace_json(const LatticeSubspace& w) {
  nlohmann::ordered_json j;
  j["dim"] = w.dim;
  j["det"] = w.det;
  if (w.det_squared) j["det_squared"] = to_string(*w.det_squared);
  nlohmann::ordered_json gens = nlohmann::ordered_json::array();
  for (int c = 0; c < w.generators.cols(); ++c) {
    nlohmann::ordered_json col = nlohmann::ordered_json::array();
    for (int i = 0; i < w.generators.rows(); ++i) col.push_back(w.generators(i, c).get_str());
    gens.push_back(col);
  }
  j["generators"] = gens;
  return j;
}

// Rounds a dual solution (from --dual, else from the determinant program) to one subspace.
int cmd_round(const Source& src, const std::string& dual_path, std::uint64_t seed, const std::string& out_path) {
  Lattice l = single_lattice(src);
  DualSolution sol;
  if (!dual_path.empty()) {
    std::ifstream in(dual_path);
    if (!in) throw std::invalid_argument("cannot open dual file " + dual_path);
    std::stringstream ss;
    ss << in.rdbuf();
    sol = dual_from_json(l, ss.str());
  } else {
    SubspaceCandidates cands = candidate_subspaces(l);
    sol = dual_from_primal(l, solve_mu_det(l, cands));
  }
  RoundingResult r = subspace_round(l, sol);
  KlCertificate kl = kl_certificate_hkz(l);
  nlohmann::ordered_json j;
  j["seed"] = seed;
  j["n"] = l.rank();
  j["dual_value"] = r.dual_value;
  j["w_star"] = subspace_json(r.w_star);
  j["w_value"] = r.w_value;
  j["certified_ratio"] = r.certified_ratio;
  j["bound"] = r.bound;
  j["certificate_holds"] = r.certificate_holds;
  j["support_after_step1"] = r.support_after_step1;
  j["uncross_steps"] = r.uncross_steps;
  j["uncross_limit"] = r.uncross_limit;
  j["monotone"] = r.monotone;
  j["hkz_witness"] = {{"subspace", subspace_json(kl.w)}, {"mu_hi", kl.mu_hi}, {"ratio", kl.ratio}, {"bound", kl.bound}};
  Output out(out_path);
  out.stream() << j.dump() << '\n';
  return r.certificate_holds ? 0 : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lattice geometry toolkit: smoothing, covering and subspace-determinant parameters"};
  app.require_subcommand(1);

  Source src;
  ParamConfig pcfg;
  SuiteConfig scfg;
  std::string format = "json", out_path, dual_path, suite_name;
  int jobs_n = 1;

  auto add_source = [&](CLI::App* sub) {
    sub->add_option("--basis", src.basis, "basis file: first line \"n d\", then n rows of d exact fractions");
    sub->add_option("--family", src.families, "family spec, e.g. zn:3, rect:1,2, modp:4,1000003,7, kl:5, hkz[...], sum[A|B]");
  };

  CLI::App* params = app.add_subcommand("params", "compute the parameter report of one or more lattices");
  add_source(params);
  params->add_option("--seed", pcfg.seed, "Monte-Carlo seed, echoed in every row");
  params->add_option("--enum-budget", pcfg.enum_budget, "enumeration node budget")->check(CLI::PositiveNumber);
  params->add_option("--samples", pcfg.samples, "covering-radius samples")->check(CLI::PositiveNumber);
  params->add_option("--tol", pcfg.tol, "smoothing-parameter tolerance")->check(CLI::PositiveNumber);
  params->add_option("--out", out_path, "output path (default stdout)");
  params->add_option("--format", format, "json (one object per line) or csv")->check(CLI::IsMember({"json", "csv"}));
  params->add_option("--jobs", jobs_n, "parallel workers")->check(CLI::PositiveNumber);

  CLI::App* suite = app.add_subcommand("suite", "run an invariant suite");
  suite->add_option("name", suite_name, "psd, gaussian, uncrossing, kl, revmink, reductions, mixing, siegel or all")
      ->required();
  suite->add_option("--seed", scfg.seed, "base seed");
  suite->add_option("--trials", scfg.trials, "override instance counts")->check(CLI::PositiveNumber);
  suite->add_option("--samples", scfg.samples, "override Monte-Carlo sample counts")->check(CLI::PositiveNumber);
  suite->add_option("--enum-budget", scfg.enum_budget, "enumeration node budget")->check(CLI::PositiveNumber);
  suite->add_option("--out", out_path, "output path (default stdout)");

  std::uint64_t round_seed = 1;
  CLI::App* round = app.add_subcommand("round", "round a dual solution to one lattice subspace");
  add_source(round);
  round->add_option("--dual", dual_path, "dual solution JSON (default: solve the determinant program)");
  round->add_option("--seed", round_seed, "seed, echoed in the output");
  round->add_option("--out", out_path, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*params) return cmd_params(src, pcfg, format, out_path, jobs_n);
    if (*suite) return cmd_suite(suite_name, scfg, out_path);
    if (*round) return cmd_round(src, dual_path, round_seed, out_path);
  } catch (const ParseError& e) {
    std::cerr << "error: " << (src.basis.empty() ? "" : src.basis + ": ") << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFail;
  }
  return kExitUsage;
}
