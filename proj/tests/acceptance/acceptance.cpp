// Runs the eleven acceptance checks and prints one PASS/FAIL line for each.
// Exit status is nonzero when any check fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "scdual/control/dynamics.hpp"
#include "scdual/control/instances.hpp"
#include "scdual/control/kkt.hpp"
#include "scdual/control/solver.hpp"
#include "scdual/convex/calculus.hpp"
#include "scdual/convex/random_plq.hpp"
#include "scdual/functionals/functionals.hpp"
#include "scdual/measures/random_measure.hpp"
#include "scdual/stochastic/projection.hpp"
#include "scdual/stochastic/stopping.hpp"

using namespace scdual;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

std::vector<PLQFunction> plq_batch(std::uint64_t seed, std::size_t count) {
  std::mt19937_64 rng(seed);
  std::vector<PLQFunction> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    RandomPLQOptions opt;
    opt.max_breakpoints = 1 + static_cast<int>(i % 6);
    opt.point_domain_prob = 0.03;
    opt.bounded_domain = i % 7 == 0;
    out.push_back(random_plq(rng, opt));
  }
  return out;
}

Outcome biconjugacy(std::uint64_t seed) {
  const auto batch = plq_batch(seed, 1000);
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (const auto& f : batch) worst = std::max(worst, max_discrepancy(conjugate(conjugate(f)), f));
  const double secs = seconds_since(t0);
  return {worst <= 1e-9 && secs < 5.0, "max |f**-f| = " + num(worst) + ", " + num(secs) + " s"};
}

Outcome recession_identity(std::uint64_t seed) {
  const auto batch = plq_batch(seed, 1000);
  double worst = 0.0;
  for (const auto& f : batch) {
    worst = std::max(worst, max_discrepancy(recession(f), support_function(conjugate(f).domain())));
  }
  return {worst <= 1e-9, "max |f_inf - sigma_dom f*| = " + num(worst)};
}

Outcome interchange(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> count(1, 12);
  std::uniform_real_distribution<double> weight(0.05, 1.0);
  double worst = 0.0;
  for (int inst = 0; inst < 200; ++inst) {
    const int n = count(rng);
    std::vector<PLQFunction> fs;
    std::vector<double> w;
    while (static_cast<int>(fs.size()) < n) {
      RandomPLQOptions opt;
      opt.bounded_domain = inst % 3 == 0;
      opt.strongly_convex = inst % 3 == 1;
      PLQFunction f = random_plq(rng, opt);
      try {
        if (!std::isfinite(minimize(f).value)) continue;
      } catch (const std::domain_error&) {
        continue;  // unbounded below
      }
      fs.push_back(std::move(f));
      w.push_back(weight(rng));
    }
    worst = std::max(worst, interchange_check(fs, w).residual);
  }
  return {worst <= 1e-12, "max residual = " + num(worst)};
}

FunctionalInstance random_functional_instance(std::mt19937_64& rng) {
  RandomTreeOptions topt;
  topt.max_periods = 3;
  topt.max_leaves = 8;
  ScenarioTree tree = random_tree(rng, topt);
  const std::size_t d = std::uniform_int_distribution<std::size_t>(1, 2)(rng);
  std::vector<SeparableIntegrand> h;
  for (std::size_t n = 0; n < tree.num_nodes(); ++n) {
    std::vector<PLQFunction> coords;
    for (std::size_t k = 0; k < d; ++k) coords.push_back(random_plq(rng));
    h.emplace_back(std::move(coords));
  }
  return FunctionalInstance::make(std::move(tree), std::move(h));
}

struct FunctionalOutcomes {
  Outcome duality;
  Outcome subdifferential;
};

FunctionalOutcomes functional_suite(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> step(0.05, 0.5);
  const auto t0 = Clock::now();
  double worst_excess = -std::numeric_limits<double>::infinity(), worst_above = worst_excess;
  double worst_ratio = std::numeric_limits<double>::infinity();
  double worst_inclusion = 0.0, worst_zero_gap = 0.0, smallest_gap = std::numeric_limits<double>::infinity();
  std::size_t bruteforce_failures = 0, perturbations = 0, perturbation_shortfall = 0;
  for (int i = 0; i < 50; ++i) {
    const FunctionalInstance inst = random_functional_instance(rng);
    const RandomMeasure theta = random_finite_measure(rng, inst);
    const double j = EJ(inst, theta);
    const auto coarse = conjugate_bruteforce(inst, theta, GridSpec{200});
    const auto fine = conjugate_bruteforce(inst, theta, GridSpec{800});
    for (const auto* b : {&coarse, &fine}) {
      const double excess = (j - b->value) - b->resolution_bound;
      const double above = b->value - j;
      worst_excess = std::max(worst_excess, excess);
      worst_above = std::max(worst_above, above);
      if (!(excess <= 1e-9 * (1.0 + std::abs(j))) || !(above <= 1e-9 * (1.0 + std::abs(j)))) ++bruteforce_failures;
    }
    if (fine.resolution_bound > 0.0) worst_ratio = std::min(worst_ratio, coarse.resolution_bound / fine.resolution_bound);

    const ZeroGapPair pair = random_zero_gap_pair(rng, inst);
    const FenchelGapReport rep = fenchel_gap(inst, pair.v, pair.theta);
    worst_inclusion = std::max({worst_inclusion, rep.worst_density, rep.worst_atom});
    worst_zero_gap = std::max(worst_zero_gap, std::abs(rep.gap));
    int done = 0;
    for (int attempt = 0; attempt < 400 && done < 20; ++attempt) {
      RandomMeasure moved = pair.theta;
      if (!perturb_outside_inclusions(rng, inst, pair.v, moved, step(rng))) continue;
      smallest_gap = std::min(smallest_gap, fenchel_gap(inst, pair.v, moved).gap);
      ++done;
    }
    perturbations += static_cast<std::size_t>(done);
    if (done < 20) ++perturbation_shortfall;
  }
  const double secs = seconds_since(t0);
  FunctionalOutcomes out;
  out.duality.pass = bruteforce_failures == 0 && worst_ratio >= 4.0 * (1.0 - 1e-12) && secs < 60.0;
  out.duality.detail = "max (EJ - grid) - bound = " + num(worst_excess) + ", max grid - EJ = " + num(worst_above) +
                       ", min bound shrink = " + num(worst_ratio) + "x, " + num(secs) + " s";
  out.subdifferential.pass = worst_inclusion <= 1e-6 && worst_zero_gap <= 1e-6 && perturbation_shortfall == 0 &&
                             smallest_gap > 0.0;
  out.subdifferential.detail = "max inclusion residual = " + num(worst_inclusion) + ", max |zero gap| = " +
                               num(worst_zero_gap) + ", " + std::to_string(perturbations) +
                               " perturbations, min perturbed gap = " + num(smallest_gap);
  return out;
}

AdaptedProcess random_process(std::mt19937_64& rng, std::size_t rows, std::size_t dim, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  AdaptedProcess v(rows, dim);
  for (double& x : v.data()) x = u(rng);
  return v;
}

Outcome r1_norm_check(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  std::size_t stopping_times = 0;
  for (int i = 0; i < 100; ++i) {
    RandomTreeOptions opt;
    opt.max_periods = 4;
    opt.max_branching = 3;
    opt.max_leaves = 16;
    const ScenarioTree tree = random_tree(rng, opt);
    const std::size_t d = std::uniform_int_distribution<std::size_t>(1, 2)(rng);
    const AdaptedProcess v = random_process(rng, tree.num_nodes(), d);
    worst = std::max(worst, std::abs(r1_norm(tree, v) - r1_norm_by_enumeration(tree, v)));
    stopping_times += count_stopping_times(tree);
  }
  return {worst <= 1e-12, "max |snell - enumeration| = " + num(worst) + " over " + std::to_string(stopping_times) +
                              " stopping times"};
}

Outcome dual_norm_check(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution sparse(0.3);
  double worst = 0.0;
  for (int i = 0; i < 20; ++i) {
    RandomTreeOptions opt;
    opt.max_periods = 2 + static_cast<std::size_t>(i % 2);
    opt.max_leaves = 4;
    const ScenarioTree tree = random_tree(rng, opt);
    const std::size_t d = 1 + static_cast<std::size_t>(i % 2);
    RandomMeasure theta{random_process(rng, tree.num_nodes(), d), random_process(rng, tree.num_nodes(), d)};
    for (double& x : theta.atoms.data()) {
      if (sparse(rng)) x = 0.0;
    }
    const auto res = dual_norm_by_extreme_points(tree, theta);
    worst = std::max(worst, std::abs(res.value - m_inf_norm(tree, theta)));
  }
  return {worst <= 1e-9, "max |extreme-point max - m_inf_norm| = " + num(worst)};
}

Outcome pairing_check(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int i = 0; i < 500; ++i) {
    const ControlProblem prob = random_control_instance(rng);
    const std::size_t nodes = prob.tree.num_nodes();
    const AdaptedProcess u = random_process(rng, nodes, prob.dim);
    const AdaptedProcess s = random_process(rng, nodes, prob.dim);
    const AdaptedProcess w = random_process(rng, nodes, prob.dim);
    const LeafValues eta = random_process(rng, prob.tree.num_paths(), prob.dim);
    worst = std::max(worst, pairing_identity_check(prob, u, s, w, eta));
  }
  return {worst <= 1e-10, "max pairing residual = " + num(worst)};
}

struct Solved {
  std::string name;
  ControlProblem prob;
  SolveResult result;
  double seconds = 0.0;
};

Outcome gap_check(const std::vector<Solved>& solved) {
  Outcome out;
  double worst = 0.0, slowest = 0.0;
  std::string worst_name;
  for (const auto& s : solved) {
    const double p = s.result.primal.value;
    const double rel = std::abs(p + s.result.dual.value) / (1.0 + std::abs(p));
    if (!(rel <= 1e-5) || !(s.seconds < 10.0)) out.pass = false;
    if (!(rel <= worst)) {
      worst = rel;
      worst_name = s.name;
    }
    slowest = std::max(slowest, s.seconds);
  }
  out.detail = std::to_string(solved.size()) + " instances, max |p+d|/(1+|p|) = " + num(worst) + " (" + worst_name +
               "), slowest " + num(slowest) + " s";
  return out;
}

Outcome kkt_and_ls_check(const std::vector<Solved>& solved) {
  Outcome out;
  double worst = 0.0;
  std::string worst_name;
  for (const auto& s : solved) {
    const double w = s.result.kkt.worst();
    if (!(w <= 1e-5)) out.pass = false;
    if (!(w <= worst)) {
      worst = w;
      worst_name = s.name;
    }
  }
  const Solved& ls = solved.front();
  const double k = 2.0;
  double q_excess = -std::numeric_limits<double>::infinity(), slack_violation = 0.0;
  std::size_t atoms = 0;
  for (std::size_t n = 0; n < ls.prob.tree.num_nodes(); ++n) {
    const double q = std::abs(ls.result.dual.q(n, 0));
    q_excess = std::max(q_excess, q - k);
    if (std::abs(ls.result.primal.s(n, 0)) > 1e-9) ++atoms;
    if (std::abs(ls.result.primal.s(n, 0)) > 1e-9 && q < k - 1e-5) slack_violation = std::max(slack_violation, k - q);
  }
  if (!(q_excess <= 1e-8) || slack_violation > 0.0) out.pass = false;
  out.detail = "max kkt residual = " + num(worst) + " (" + worst_name + "); ls max |q| - k = " + num(q_excess) +
               ", " + std::to_string(atoms) + " atoms, atoms off the boundary = " + num(slack_violation);
  return out;
}

Outcome bk_check(const Solved& bk) {
  const BKResiduals r = bk_conditions_check(bk.prob, bk.result.primal, bk.result.dual);
  const bool pass = r.feasibility <= 1e-6 && r.min_increment >= -1e-12 && r.complementarity <= 1e-6 &&
                    r.representation <= 1e-6;
  return {pass, "op - D = " + num(r.feasibility) + ", min dc = " + num(r.min_increment) +
                    ", complementarity = " + num(r.complementarity) + ", representation = " + num(r.representation)};
}

Solved run(std::string name, ControlProblem prob) {
  Solved s{std::move(name), std::move(prob), {}, 0.0};
  const auto t0 = Clock::now();
  s.result = solve(s.prob);
  s.seconds = seconds_since(t0);
  return s;
}

}  // namespace

int main(int argc, char** argv) {
  const std::uint64_t seed = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 20240601ULL;
  bool all = true;
  const auto report = [&all](int id, const Outcome& o) {
    std::printf("criterion %2d %s  %s\n", id, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
    all = all && o.pass;
  };
  const auto guarded = [&report](int id, const std::function<Outcome()>& f) {
    try {
      report(id, f());
    } catch (const std::exception& e) {
      report(id, {false, std::string("exception: ") + e.what()});
    }
  };

  guarded(1, [&] { return biconjugacy(seed); });
  guarded(2, [&] { return recession_identity(seed); });
  guarded(3, [&] { return interchange(seed + 3); });
  try {
    const FunctionalOutcomes f = functional_suite(seed + 4);
    report(4, f.duality);
    report(5, f.subdifferential);
  } catch (const std::exception& e) {
    report(4, {false, std::string("exception: ") + e.what()});
    report(5, {false, std::string("exception: ") + e.what()});
  }
  guarded(6, [&] { return r1_norm_check(seed + 6); });
  guarded(7, [&] { return dual_norm_check(seed + 7); });
  guarded(8, [&] { return pairing_check(seed + 8); });

  try {
    std::vector<Solved> solved;
    solved.push_back(run("ls", ls_demo()));
    solved.push_back(run("bk", bk_demo(0)));
    std::mt19937_64 rng(seed + 9);
    for (int i = 0; i < 20; ++i) solved.push_back(run("random" + std::to_string(i), random_control_instance(rng)));
    report(9, gap_check(solved));
    report(10, kkt_and_ls_check(solved));
    report(11, bk_check(solved[1]));
  } catch (const std::exception& e) {
    for (int id : {9, 10, 11}) report(id, {false, std::string("exception: ") + e.what()});
  }
  std::printf("%s\n", all ? "ALL PASS" : "SOME CRITERIA FAILED");
  return all ? 0 : 1;
}
