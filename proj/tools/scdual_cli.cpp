// scdual: batch front end for the convex-analysis and singular-control code.

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "scdual/control/instances.hpp"
#include "scdual/control/kkt.hpp"
#include "scdual/control/solver.hpp"
#include "scdual/convex/calculus.hpp"
#include "scdual/functionals/functionals.hpp"
#include "scdual/io/formats.hpp"
#include "scdual/stochastic/projection.hpp"
#include "scdual/stochastic/stopping.hpp"
#include "scdual/util/text.hpp"

using namespace scdual;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitParse = 2;

struct RunConfig {
  std::vector<std::string> inputs;
  std::string demo;
  double tol_gap = 1e-5;
  double tol_kkt = 1e-5;
  std::uint64_t seed = 0;
  std::string out;
  bool parallel = false;
  bool timing = false;
  std::vector<double> at;
  std::string export_path;
};

/// Accumulates `name value tolerance PASS|FAIL` lines.
class Checks {
 public:
  void at_most(const std::string& name, double value, double tol) { add(name, value, "<=", tol, value <= tol); }
  void at_least(const std::string& name, double value, double tol) { add(name, value, ">=", tol, value >= tol); }
  void positive(const std::string& name, double value) { add(name, value, ">", 0.0, value > 0.0); }
  bool ok() const { return ok_; }
  const std::string& text() const { return text_; }

 private:
  void add(const std::string& name, double value, const char* rel, double tol, bool pass) {
    char tol_text[32];
    std::snprintf(tol_text, sizeof tol_text, "%g", tol);
    text_ += "check " + name + " " + format_double(value) + " " + rel + " " + tol_text +
             (pass ? " PASS\n" : " FAIL\n");
    ok_ = ok_ && pass;
  }
  std::string text_;
  bool ok_ = true;
};

std::string solve_header() { return "instance,primal_value,dual_value,gap,kkt1,kkt2,kkt3,kkt4,iterations,wall_ms\n"; }

std::string solve_row(const std::string& name, const SolveResult& r, double ms, bool timing) {
  std::string row = name + "," + format_double(r.primal.value) + "," + format_double(r.dual.value) + "," +
                    format_double(r.gap);
  for (double k : r.kkt.max) row += "," + format_double(k);
  row += "," + std::to_string(r.iterations) + ",";
  if (timing) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", ms);
    row += buf;
  } else {
    row += "-";
  }
  return row + "\n";
}

std::string node_csv(const ControlProblem& prob, const SolveResult& r) {
  std::string out = "node,time,probability,coord,u,s,c,z,zdot,op,Btop,res_density,res_singular,res_state\n";
  const auto& tree = prob.tree;
  for (std::size_t n = 0; n < tree.num_nodes(); ++n) {
    for (std::size_t k = 0; k < prob.dim; ++k) {
      out += std::to_string(n) + "," + std::to_string(tree.node(n).time) + "," + format_double(tree.probability(n)) +
             "," + std::to_string(k);
      for (double v : {r.primal.u(n, k), r.primal.s(n, k), r.primal.c(n, k), r.primal.z(n, k), r.primal.zdot(n, k),
                       r.dual.op(n, k), r.dual.q(n, k), r.kkt.density[n], r.kkt.singular[n], r.kkt.state[n]}) {
        out += "," + format_double(v);
      }
      out += "\n";
    }
  }
  return out;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
}

std::string safe_name(std::string name) {
  for (char& ch : name) {
    if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '-' && ch != '_') ch = '_';
  }
  return name;
}

SolverOptions solver_options(const RunConfig& cfg) {
  SolverOptions opt;
  opt.tol_gap = cfg.tol_gap;
  opt.tol_kkt = cfg.tol_kkt;
  return opt;
}

void add_solve_checks(Checks& checks, const std::string& prefix, const SolveResult& r, const RunConfig& cfg) {
  checks.at_most(prefix + "relative_gap", r.relative_gap, cfg.tol_gap);
  for (std::size_t i = 0; i < 4; ++i) checks.at_most(prefix + "kkt" + std::to_string(i + 1), r.kkt.max[i], cfg.tol_kkt);
  checks.at_most(prefix + "dual_infeasibility", r.dual.infeasibility, 1e-8);
  checks.at_most(prefix + "primal_violation", r.primal_violation, 1e-8);
}

int cmd_conjugate(const RunConfig& cfg) {
  if (cfg.inputs.size() != 1) throw CLI::ValidationError("conjugate takes one PLQ file");
  const PLQFunction f = parse_plq(read_text_file(cfg.inputs[0]));
  std::string out = "conjugate\n" + format_plq(conjugate(f));
  out += "recession\n" + format_plq(recession(f));
  std::vector<double> points = cfg.at;
  if (points.empty()) {
    points = f.breakpoints();
    for (double e : {f.lo(), f.hi()}) {
      if (std::isfinite(e)) points.push_back(e);
    }
    if (points.empty()) points.push_back(0.0);
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
  }
  out += "subdifferential\n";
  for (double x : points) {
    const SubdiffInterval sd = subdifferential(f, x);
    out += format_double(x) + (sd.empty ? std::string(" empty") : " " + format_double(sd.lo) + " " + format_double(sd.hi)) +
           "\n";
  }
  std::cout << out;
  return 0;
}

int cmd_norms(const RunConfig& cfg) {
  if (cfg.inputs.size() != 1) throw CLI::ValidationError("norms takes one instance file");
  const InstanceFile file = read_instance_file(cfg.inputs[0]);
  const ScenarioTree tree = file.tree();
  std::string out;
  const bool have_v = std::any_of(file.values.begin(), file.values.end(), [](const auto& r) { return !r.time; });
  std::optional<AdaptedProcess> v;
  if (have_v) {
    v = file.adapted_process(tree);
    out += "r1_norm " + format_double(r1_norm(tree, *v)) + "\n";
    if (within_enumeration_cap(tree)) out += "r1_norm_enumerated " + format_double(r1_norm_by_enumeration(tree, *v)) + "\n";
  }
  if (file.has_measure()) {
    const RandomMeasure theta = file.measure(tree);
    out += "m_inf_norm " + format_double(m_inf_norm(tree, theta)) + "\n";
    if (v) {
      if (v->dim() != theta.dim()) throw ParseError(0, "process and measure dimensions differ");
      out += "pairing " + format_double(pairing(tree, *v, theta)) + "\n";
    }
  }
  if (!have_v && !file.has_measure()) throw ParseError(0, "no adapted 'val' records and no measure");
  std::cout << out;
  return 0;
}

int cmd_verify(const RunConfig& cfg) {
  if (cfg.inputs.size() != 1) throw CLI::ValidationError("verify takes one instance file");
  const InstanceFile file = read_instance_file(cfg.inputs[0]);
  Checks checks;
  double biconj = 0.0, rec = 0.0;
  for (const auto& in : file.integrands) {
    biconj = std::max(biconj, max_discrepancy(conjugate(conjugate(in.f)), in.f));
    rec = std::max(rec, max_discrepancy(recession(in.f), support_function(conjugate(in.f).domain())));
  }
  checks.at_most("biconjugacy", biconj, 1e-9);
  checks.at_most("recession_identity", rec, 1e-9);

  const FunctionalInstance inst = file.functional();
  const ScenarioTree& tree = inst.tree;
  std::vector<PLQFunction> fs;
  std::vector<double> w;
  for (std::size_t n = 0; n < tree.num_nodes(); ++n) {
    for (std::size_t k = 0; k < inst.dim(); ++k) {
      try {
        (void)minimize(inst.h[n][k]);
      } catch (const std::domain_error&) {
        continue;
      }
      fs.push_back(inst.h[n][k]);
      w.push_back(tree.probability(n) * tree.mu(n));
    }
  }
  if (!fs.empty()) checks.at_most("interchange", interchange_check(fs, w).residual, 1e-12);

  std::mt19937_64 rng(cfg.seed);
  const ZeroGapPair pair = random_zero_gap_pair(rng, inst);
  const FenchelGapReport rep = fenchel_gap(inst, pair.v, pair.theta);
  checks.at_most("zero_gap", std::abs(rep.gap), 1e-6);
  checks.at_most("density_inclusion", rep.worst_density, 1e-6);
  checks.at_most("atom_inclusion", rep.worst_atom, 1e-6);
  double smallest = kInf;
  int moved = 0;
  for (int attempt = 0; attempt < 400 && moved < 20; ++attempt) {
    RandomMeasure theta = pair.theta;
    if (!perturb_outside_inclusions(rng, inst, pair.v, theta, 0.1)) continue;
    smallest = std::min(smallest, fenchel_gap(inst, pair.v, theta).gap);
    ++moved;
  }
  if (moved > 0) checks.positive("perturbed_gap_min", smallest);

  if (within_enumeration_cap(tree)) {
    const RandomMeasure theta = random_finite_measure(rng, inst);
    const double j = EJ(inst, theta);
    const auto coarse = conjugate_bruteforce(inst, theta, GridSpec{200});
    const auto fine = conjugate_bruteforce(inst, theta, GridSpec{800});
    checks.at_most("bruteforce_excess", (j - fine.value) - fine.resolution_bound, 1e-9 * (1.0 + std::abs(j)));
    checks.at_least("bruteforce_bound_shrink", coarse.resolution_bound / fine.resolution_bound, 4.0 * (1.0 - 1e-12));
  }

  if (file.has_measure() && std::any_of(file.values.begin(), file.values.end(), [](const auto& r) { return !r.time; })) {
    const AdaptedProcess v = file.adapted_process(tree);
    const RandomMeasure theta = file.measure(tree);
    const double ei = EI(inst, v), ej = EJ(inst, theta);
    if (std::isfinite(ei) && std::isfinite(ej)) {
      const FenchelGapReport given = fenchel_gap(inst, v, theta);
      std::cout << "supplied_pair gap " << format_double(given.gap) << " density_residual "
                << format_double(given.worst_density) << " atom_residual " << format_double(given.worst_atom) << "\n";
    } else {
      std::cout << "supplied_pair gap inf\n";
    }
  }
  std::cout << checks.text();
  return checks.ok() ? 0 : kExitFailure;
}

struct SolveJob {
  std::string name;
  ControlProblem prob;
  SolveResult result;
  double ms = 0.0;
  std::string error;
};

void run_job(SolveJob& job, const SolverOptions& opt) {
  try {
    const auto t0 = std::chrono::steady_clock::now();
    job.result = solve(job.prob, opt);
    job.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  } catch (const std::exception& e) {
    job.error = e.what();
  }
}

int report_jobs(std::vector<SolveJob>& jobs, const RunConfig& cfg, Checks& checks) {
  std::string summary = solve_header();
  for (const auto& job : jobs) {
    if (!job.error.empty()) throw std::runtime_error(job.name + ": " + job.error);
    summary += solve_row(job.name, job.result, job.ms, cfg.timing);
    add_solve_checks(checks, jobs.size() > 1 ? job.name + "." : std::string(), job.result, cfg);
    for (const auto& note : job.prob.notes) std::cout << "note " << job.name << ": " << note << "\n";
  }
  std::cout << summary;
  if (!cfg.out.empty()) {
    const std::filesystem::path dir(cfg.out);
    std::filesystem::create_directories(dir);
    write_file(dir / "summary.csv", summary);
    for (const auto& job : jobs) write_file(dir / ("nodes_" + safe_name(job.name) + ".csv"), node_csv(job.prob, job.result));
  }
  return 0;
}

int cmd_solve(const RunConfig& cfg) {
  if (cfg.inputs.empty()) throw CLI::ValidationError("solve takes at least one problem file");
  std::vector<SolveJob> jobs;
  for (const auto& path : cfg.inputs) {
    ControlProblem prob = read_instance_file(path).problem();
    std::string name = prob.name;
    jobs.push_back({std::move(name), std::move(prob), {}, 0.0, {}});
  }
  const SolverOptions opt = solver_options(cfg);
  if (cfg.parallel && jobs.size() > 1) {
    const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(jobs.size(), std::thread::hardware_concurrency()));
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&jobs, &opt, w, workers] {
        for (std::size_t i = w; i < jobs.size(); i += workers) run_job(jobs[i], opt);
      });
    }
    for (auto& t : pool) t.join();
  } else {
    for (auto& job : jobs) run_job(job, opt);
  }
  Checks checks;
  report_jobs(jobs, cfg, checks);
  std::cout << checks.text();
  return checks.ok() ? 0 : kExitFailure;
}

int cmd_demo(const RunConfig& cfg) {
  std::vector<SolveJob> jobs(1);
  SolveJob& job = jobs.front();
  if (cfg.demo == "ls") {
    job.name = "lehoczky-shreve";
    job.prob = ls_demo();
  } else {
    job.name = "bank-kauppila";
    job.prob = bk_demo(cfg.seed);
  }
  if (!cfg.export_path.empty()) write_file(cfg.export_path, format_problem(job.prob));
  run_job(job, solver_options(cfg));
  Checks checks;
  report_jobs(jobs, cfg, checks);
  const SolveResult& r = job.result;
  if (cfg.demo == "ls") {
    const double k = 2.0;
    double q_excess = -kInf, off_boundary = 0.0;
    for (std::size_t n = 0; n < job.prob.tree.num_nodes(); ++n) {
      const double q = std::abs(r.dual.q(n, 0));
      q_excess = std::max(q_excess, q - k);
      if (std::abs(r.primal.s(n, 0)) > 1e-9 && q < k - 1e-5) off_boundary = std::max(off_boundary, k - q);
    }
    checks.at_most("dual_bound_excess", q_excess, 1e-8);
    checks.at_most("atoms_off_boundary", off_boundary, 0.0);
  } else {
    const BKResiduals b = bk_conditions_check(job.prob, r.primal, r.dual);
    checks.at_most("op_minus_D", b.feasibility, 1e-6);
    checks.at_least("min_dc", b.min_increment, -1e-12);
    checks.at_most("complementarity", b.complementarity, 1e-6);
    checks.at_most("representation", b.representation, 1e-6);
  }
  std::cout << checks.text();
  std::cout << "summary " << (checks.ok() ? "PASS" : "FAIL") << "\n";
  return checks.ok() ? 0 : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Convex duality and singular stochastic control on scenario trees"};
  app.require_subcommand(1);
  app.fallthrough();
  RunConfig cfg;
  const auto positive = CLI::PositiveNumber;
  app.add_option("--tol-gap", cfg.tol_gap, "Relative duality-gap tolerance")->check(positive);
  app.add_option("--tol-kkt", cfg.tol_kkt, "KKT residual tolerance")->check(positive);
  app.add_option("--seed", cfg.seed, "Seed for randomized checks and generated instances");
  app.add_option("--out", cfg.out, "Directory for CSV reports");
  app.add_flag("--parallel", cfg.parallel, "Solve independent instances concurrently");
  app.add_flag("--timing", cfg.timing, "Report wall-clock times (output is then not reproducible)");

  auto* conj = app.add_subcommand("conjugate", "Conjugate, recession function and subdifferentials of a PLQ file");
  conj->add_option("file", cfg.inputs, "PLQ file")->required();
  conj->add_option("--at", cfg.at, "Points at which to print the subdifferential");
  auto* norms = app.add_subcommand("norms", "R1 and M-infinity norms of a process and measure");
  norms->add_option("file", cfg.inputs, "Instance file with a tree, 'val' records and/or 'den'/'atom' records")->required();
  auto* verify = app.add_subcommand("verify", "Conjugacy, subdifferential and interchange checks on an instance");
  verify->add_option("file", cfg.inputs, "Instance file with a tree and h integrands")->required();
  auto* solve_cmd = app.add_subcommand("solve", "Solve control problems and report duality gap and KKT residuals");
  solve_cmd->add_option("files", cfg.inputs, "Problem files")->required();
  auto* demo = app.add_subcommand("demo", "Build, solve and check a demo instance");
  demo->add_option("name", cfg.demo, "ls or bk")->required()->check(CLI::IsMember({"ls", "bk"}));
  demo->add_option("--export", cfg.export_path, "Also write the demo problem file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }
  try {
    if (conj->parsed()) return cmd_conjugate(cfg);
    if (norms->parsed()) return cmd_norms(cfg);
    if (verify->parsed()) return cmd_verify(cfg);
    if (solve_cmd->parsed()) return cmd_solve(cfg);
    return cmd_demo(cfg);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}
