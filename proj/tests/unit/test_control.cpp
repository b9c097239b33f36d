#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "scdual/control/dynamics.hpp"
#include "scdual/control/instances.hpp"
#include "scdual/control/kkt.hpp"
#include "scdual/control/objectives.hpp"
#include "scdual/control/solver.hpp"
#include "scdual/convex/calculus.hpp"

using namespace scdual;

namespace {

AdaptedProcess random_process(std::mt19937_64& rng, std::size_t rows, std::size_t d) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  AdaptedProcess v(rows, d);
  for (double& x : v.data()) x = u(rng);
  return v;
}

ControlProblem scalar_problem(ScenarioTree tree, double a, const PLQFunction& g, const PLQFunction& h) {
  ControlProblem p;
  p.name = "scalar";
  p.A = Eigen::MatrixXd::Constant(1, 1, a);
  p.B = Eigen::MatrixXd::Identity(1, 1);
  p.W = AdaptedProcess(tree.num_nodes(), 1);
  p.g.assign(tree.num_nodes(), SeparableIntegrand::uniform(1, g));
  p.h.assign(tree.num_nodes(), SeparableIntegrand::uniform(1, h));
  p.e.assign(tree.num_paths(), SeparableIntegrand::uniform(1, PLQFunction()));
  p.tree = std::move(tree);
  return p;
}

// Dynamic programming over a control grid for Lehoczky-Shreve problems with
// A = 0, where ż = c + W. Splitting an increment Δ into a rate and an atom
// costs m·h*(Δ/m) at best because h* is k-Lipschitz, so each node picks its
// cumulative control level directly.
double ls_grid_value(const ControlProblem& p, double r, double k, double radius, std::size_t n) {
  const auto& t = p.tree;
  std::vector<double> grid(n + 1);
  for (std::size_t j = 0; j <= n; ++j) grid[j] = -radius + 2.0 * radius * static_cast<double>(j) / static_cast<double>(n);
  const PLQFunction h_star = ls_cost(k);
  // value[node][j]: optimal cost-to-go at node given the control level grid[j] chosen there.
  std::vector<std::vector<double>> value(t.num_nodes(), std::vector<double>(n + 1, 0.0));
  std::vector<std::vector<double>> from_parent(t.num_nodes(), std::vector<double>(n + 1, 0.0));
  for (std::size_t time = t.periods() + 1; time-- > 0;) {
    for (std::size_t node : t.nodes_at(time)) {
      const double m = t.mu(node);
      for (std::size_t j = 0; j <= n; ++j) {
        const double z = grid[j] + p.W(node, 0);
        double v = m * 0.5 * r * z * z;
        for (std::size_t c : t.node(node).children) v += t.node(c).branch_prob * from_parent[c][j];
        value[node][j] = v;
      }
      for (std::size_t i = 0; i <= n; ++i) {
        double best = kInf;
        for (std::size_t j = 0; j <= n; ++j) best = std::min(best, m * h_star((grid[j] - grid[i]) / m) + value[node][j]);
        from_parent[node][i] = best;
      }
    }
  }
  return from_parent[t.root()][n / 2];
}

ControlProblem ls_with_atoms() {
  const double mu[] = {0.5, 0.5, 0.5, 0.5};
  ScenarioTree tree = ScenarioTree::uniform(3, 2, mu);
  AdaptedProcess W(tree.num_nodes(), 1);
  for (std::size_t n = 0; n < tree.num_nodes(); ++n) {
    const std::size_t parent = tree.node(n).parent;
    if (parent == kNoParent) continue;
    W(n, 0) = W(parent, 0) + (tree.node(parent).children.front() == n ? 3.0 : -3.0);
  }
  return build_ls_instance(4.0, 0.5, std::move(tree), std::move(W));
}

}  // namespace

TEST_CASE("forward dynamics") {
  const double mu1[] = {1.0, 1.0};
  ControlProblem p = scalar_problem(ScenarioTree::uniform(1, 1, mu1), 0.0, PLQFunction(), PLQFunction());
  AdaptedProcess u(2, 1), s(2, 1);
  auto tr = forward_dynamics(p, u, s);
  CHECK(max_abs(tr.z) == 0.0);
  CHECK(max_abs(tr.zdot) == 0.0);
  u(0, 0) = 2.0;
  tr = forward_dynamics(p, u, s);
  CHECK(tr.c(0, 0) == 2.0);
  CHECK(tr.z(1, 0) == 2.0);

  // Hand recursion on the demo tree with a drift term.
  ControlProblem ls = ls_demo();
  ls.A(0, 0) = -0.4;
  std::mt19937_64 rng(41);
  const AdaptedProcess uu = random_process(rng, ls.tree.num_nodes(), 1);
  const AdaptedProcess ss = random_process(rng, ls.tree.num_nodes(), 1);
  tr = forward_dynamics(ls, uu, ss);
  std::vector<double> c(ls.tree.num_nodes()), z(ls.tree.num_nodes()), zd(ls.tree.num_nodes());
  for (std::size_t n = 0; n < ls.tree.num_nodes(); ++n) {  // parents precede children in the demo tree
    const std::size_t par = ls.tree.node(n).parent;
    const double m = ls.tree.mu(n);
    c[n] = (par == kNoParent ? 0.0 : c[par]) + uu(n, 0) * m + ss(n, 0);
    z[n] = par == kNoParent ? 0.0 : z[par] + ls.tree.mu(par) * zd[par];
    zd[n] = -0.4 * z[n] + c[n] + ls.W(n, 0);
    CHECK(tr.c(n, 0) == doctest::Approx(c[n]));
    CHECK(tr.z(n, 0) == doctest::Approx(z[n]));
    CHECK(tr.zdot(n, 0) == doctest::Approx(zd[n]));
  }
}

TEST_CASE("zero-control trajectory and superposition") {
  const double mu[] = {1.0, 0.5};
  ControlProblem p = scalar_problem(ScenarioTree::uniform(1, 2, mu), 0.0, PLQFunction(), PLQFunction());
  auto zc = zero_control_trajectory(p);
  CHECK(max_abs(zc.a) == 0.0);
  CHECK(max_abs(zc.adot) == 0.0);
  for (std::size_t n = 0; n < 3; ++n) p.W(n, 0) = 0.3 * static_cast<double>(n) - 0.1;
  zc = zero_control_trajectory(p);
  for (std::size_t n = 0; n < 3; ++n) CHECK(zc.adot(n, 0) == doctest::Approx(p.W(n, 0)));

  std::mt19937_64 rng(42);
  for (int i = 0; i < 20; ++i) {
    const ControlProblem q = random_control_instance(rng);
    const AdaptedProcess u = random_process(rng, q.tree.num_nodes(), q.dim);
    const AdaptedProcess s = random_process(rng, q.tree.num_nodes(), q.dim);
    const auto full = forward_dynamics(q, u, s);
    const auto lin = forward_dynamics(q, u, s, false);
    const auto zero = zero_control_trajectory(q);
    for (std::size_t j = 0; j < full.zdot.data().size(); ++j) {
      CHECK(full.zdot.data()[j] == doctest::Approx(lin.zdot.data()[j] + zero.adot.data()[j]));
      CHECK(full.z.data()[j] == doctest::Approx(lin.z.data()[j] + zero.a.data()[j]));
    }
  }
}

TEST_CASE("adjoint recursion") {
  const double mu[] = {0.5, 0.25};
  const ControlProblem p = scalar_problem(ScenarioTree::uniform(1, 1, mu), 0.0, PLQFunction(), PLQFunction());
  AdaptedProcess w(2, 1);
  LeafValues eta(1, 1);
  auto adj = adjoint_dynamics(p, w, eta);
  CHECK(adj.p(0, 0, 0) == 0.0);
  CHECK(adj.p(0, 1, 0) == 0.0);
  w(0, 0) = 1.0;
  w(1, 0) = 2.0;
  eta(0, 0) = 3.0;
  adj = adjoint_dynamics(p, w, eta);
  // p_1 = −η − m_1 w_1, p_0 = p_1 − m_0 w_0.
  CHECK(adj.p(0, 1, 0) == doctest::Approx(-3.0 - 0.25 * 2.0));
  CHECK(adj.p(0, 0, 0) == doctest::Approx(-3.5 - 0.5 * 1.0));
  CHECK(adj.terminal(0, 0) == doctest::Approx(-3.0));
  CHECK(adj.q(0, 0) == doctest::Approx(-4.0));
}

TEST_CASE("pairing identity") {
  const double mu[] = {0.5, 0.5};
  const ControlProblem p = scalar_problem(ScenarioTree::uniform(1, 1, mu), 0.0, PLQFunction(), PLQFunction());
  AdaptedProcess zero(2, 1);
  LeafValues eta(1, 1);
  CHECK(pairing_identity_check(p, zero, zero, zero, eta) == 0.0);

  // Atom of 1 at the root against a density dual w_1 = 1 at the leaf:
  // ż⁰ = 1 at both nodes, so the state side is m_1·1 = 0.5, and p_0 = −m_1.
  AdaptedProcess s(2, 1), w(2, 1);
  s(0, 0) = 1.0;
  w(1, 0) = 1.0;
  const auto sides = pairing_sides(p, zero, s, w, eta);
  CHECK(sides.state_side == doctest::Approx(0.5));
  CHECK(sides.control_side == doctest::Approx(0.5));
  CHECK(sides.residual <= 1e-15);

  std::mt19937_64 rng(43);
  for (int i = 0; i < 100; ++i) {
    const ControlProblem q = random_control_instance(rng);
    const std::size_t n = q.tree.num_nodes();
    CHECK(pairing_identity_check(q, random_process(rng, n, q.dim), random_process(rng, n, q.dim),
                                 random_process(rng, n, q.dim), random_process(rng, q.tree.num_paths(), q.dim)) <=
          1e-10);
  }
}

TEST_CASE("Hamiltonian minimizers") {
  const ControlProblem ls = ls_demo();
  const ProblemData data = prepare(ls);
  const double two[] = {2.0}, zero[] = {0.0}, three[] = {3.0};
  auto a = hamiltonian_argmin(ls, data, 0, two);
  CHECK(a.feasible);
  CHECK(a.c[0] == doctest::Approx(1.0));
  a = hamiltonian_argmin(ls, data, 0, zero);
  CHECK(a.c[0] == doctest::Approx(0.0));
  CHECK_FALSE(hamiltonian_argmin(ls, data, 0, three).feasible);
}

TEST_CASE("zero problem") {
  const double mu[] = {1.0, 1.0};
  const ControlProblem p = scalar_problem(ScenarioTree::uniform(1, 2, mu), 0.0, PLQFunction(), PLQFunction::indicator({0, 0}));
  const auto r = solve(p);
  CHECK(r.converged);
  CHECK(r.primal.value == doctest::Approx(0.0));
  CHECK(max_abs(r.primal.c) == 0.0);
  CHECK(r.kkt.worst() == 0.0);
}

TEST_CASE("Lehoczky-Shreve demo matches dynamic programming on a grid") {
  const ControlProblem ls = ls_demo();
  const auto r = solve(ls);
  CHECK(r.converged);
  const double grid = ls_grid_value(ls, 1.0, 2.0, 6.0, 2400);
  CHECK(r.primal.value <= grid + 1e-9);
  CHECK(r.primal.value == doctest::Approx(grid).epsilon(1e-3));
  CHECK(std::abs(r.primal.value + r.dual.value) <= 1e-5 * (1.0 + std::abs(r.primal.value)));
  CHECK(r.kkt.worst() <= 1e-5);
}

TEST_CASE("Lehoczky-Shreve with singular controls") {
  const ControlProblem ls = ls_with_atoms();
  const auto r = solve(ls);
  CHECK(r.converged);
  const double grid = ls_grid_value(ls, 4.0, 0.5, 12.0, 2400);
  CHECK(r.primal.value <= grid + 1e-9);
  CHECK(r.primal.value == doctest::Approx(grid).epsilon(1e-3));
  CHECK(r.kkt.worst() <= 1e-5);
  std::size_t atoms = 0;
  for (std::size_t n = 0; n < ls.tree.num_nodes(); ++n) {
    const double q = std::abs(r.dual.q(n, 0));
    CHECK(q <= 0.5 + 1e-8);
    if (std::abs(r.primal.s(n, 0)) > 1e-9) {
      ++atoms;
      CHECK(q >= 0.5 - 1e-5);
    }
  }
  CHECK(atoms > 0);
}

TEST_CASE("KKT residuals react to a perturbed control") {
  const ControlProblem ls = ls_demo();
  const ProblemData data = prepare(ls);
  const auto r = solve(ls);
  const std::size_t node = ls.tree.nodes_at(2)[0];
  AdaptedProcess u = r.primal.u;
  u(node, 0) += 0.1;
  const PrimalSolution moved = make_primal_solution(ls, data, u, r.primal.s);
  const auto kkt = kkt_check(ls, data, moved, r.dual);
  CHECK(kkt.density[node] > 0.0);
  CHECK(kkt.max[0] > 1e-3);
  // The weighted residuals add up to the duality gap of the pair.
  CHECK(kkt.weighted_sum == doctest::Approx(moved.value + r.dual.value).epsilon(1e-10));
  CHECK(kkt.weighted_sum > 0.0);
}

TEST_CASE("Bank-Kauppila demo") {
  const ControlProblem bk = bk_demo(0);
  const auto r = solve(bk);
  CHECK(r.converged);
  CHECK(r.dual.value == doctest::Approx(-r.primal.value).epsilon(1e-5));
  const auto res = bk_conditions_check(bk, r.primal, r.dual);
  CHECK(res.feasibility <= 1e-6);
  CHECK(res.min_increment >= -1e-12);
  CHECK(res.complementarity <= 1e-6);
  CHECK(res.representation <= 1e-6);

  // No control and a strictly feasible multiplier.
  PrimalSolution idle = r.primal;
  idle.u = AdaptedProcess(bk.tree.num_nodes(), 1);
  idle.s = AdaptedProcess(bk.tree.num_nodes(), 1);
  DualSolution strict = r.dual;
  for (std::size_t n = 0; n < bk.tree.num_nodes(); ++n) strict.op(n, 0) = bk.h[n][0].hi() - 0.1;
  CHECK(bk_conditions_check(bk, idle, strict).complementarity == 0.0);

  DualSolution over = r.dual;
  over.op(3, 0) = bk.h[3][0].hi() + 0.25;
  CHECK(bk_conditions_check(bk, r.primal, over).feasibility == doctest::Approx(0.25));
}

TEST_CASE("random instances close the duality gap") {
  std::mt19937_64 rng(44);
  for (int i = 0; i < 10; ++i) {
    const ControlProblem p = random_control_instance(rng);
    const auto r = solve(p);
    CHECK(r.converged);
    CHECK(std::abs(r.primal.value + r.dual.value) <= 1e-5 * (1.0 + std::abs(r.primal.value)));
    CHECK(r.kkt.worst() <= 1e-5);
    // Weak duality for arbitrary dual-feasible points: the zero dual is feasible
    // when 0 lies in every box D.
    const ProblemData data = prepare(p);
    const DualSolution z = make_dual_solution(p, data, zero_control_trajectory(p), AdaptedProcess(p.tree.num_nodes(), p.dim),
                                              LeafValues(p.tree.num_paths(), p.dim));
    if (z.infeasibility == 0.0) CHECK(r.primal.value + z.value >= -1e-9);
  }
}

TEST_CASE("invalid problems are rejected") {
  ControlProblem p = ls_demo();
  p.g[0] = SeparableIntegrand::uniform(1, PLQFunction::indicator({-1, 1}));
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p = ls_demo();
  p.W = AdaptedProcess(3, 1);
  CHECK_THROWS(p.validate());
}
