#include "scdual/control/instances.hpp"

#include <cmath>
#include <stdexcept>

#include "scdual/convex/calculus.hpp"
#include "scdual/convex/random_plq.hpp"
#include "scdual/functionals/functionals.hpp"

namespace scdual {

PLQFunction ls_cost(double k) {
  if (k < 0.0) throw std::invalid_argument("ls_cost: k must be nonnegative");
  if (k == 0.0) return PLQFunction();
  const double h = k / 2.0;
  return PLQFunction::from_pieces(-kInf, kInf,
                                  {{-kInf, {0.0, -k, -k * k / 4.0}}, {-h, {1.0, 0.0, 0.0}}, {h, {0.0, k, -k * k / 4.0}}});
}

ControlProblem build_ls_instance(double r, double k, ScenarioTree tree, AdaptedProcess W, std::optional<double> A) {
  if (r < 0.0 || k < 0.0) throw std::invalid_argument("Lehoczky-Shreve instance: r and k must be nonnegative");
  ControlProblem prob;
  prob.name = "lehoczky-shreve";
  prob.dim = 1;
  prob.A = Eigen::MatrixXd::Constant(1, 1, A.value_or(0.0));
  prob.B = Eigen::MatrixXd::Identity(1, 1);
  const PLQFunction h = conjugate(ls_cost(k));
  const PLQFunction g = PLQFunction::quadratic(r / 2.0);
  for (std::size_t n = 0; n < tree.num_nodes(); ++n) {
    prob.g.push_back(SeparableIntegrand::uniform(1, g));
    prob.h.push_back(SeparableIntegrand::uniform(1, h));
  }
  for (std::size_t p = 0; p < tree.num_paths(); ++p) prob.e.push_back(SeparableIntegrand::uniform(1, PLQFunction()));
  if (k == 0.0) prob.notes.push_back("k = 0 is degenerate: h is the indicator of {0} and controls cost nothing");
  if (r == 0.0) prob.notes.push_back("r = 0: g vanishes");
  prob.tree = std::move(tree);
  prob.W = std::move(W);
  prob.validate();
  return prob;
}

PLQFunction capped_quadratic_disutility(double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("utility scale must be positive");
  return PLQFunction::from_pieces(-kInf, kInf, {{-kInf, {alpha / 2.0, -alpha, 0.0}}, {1.0, {0.0, 0.0, -alpha / 2.0}}});
}

ControlProblem build_bk_instance(std::vector<PLQFunction> neg_U, std::vector<PLQFunction> neg_UT,
                                 const AdaptedProcess& D, ScenarioTree tree) {
  if (D.rows() != tree.num_nodes() || D.dim() != 1) throw std::invalid_argument("Bank-Kauppila instance: D shape");
  if (neg_U.size() != tree.num_nodes() || neg_UT.size() != tree.num_paths()) {
    throw std::invalid_argument("Bank-Kauppila instance: utility count");
  }
  ControlProblem prob;
  prob.name = "bank-kauppila";
  prob.dim = 1;
  prob.A = Eigen::MatrixXd::Zero(1, 1);
  prob.B = Eigen::MatrixXd::Identity(1, 1);
  prob.W = AdaptedProcess(tree.num_nodes(), 1);
  for (std::size_t n = 0; n < tree.num_nodes(); ++n) {
    const double d = D(n, 0);
    if (!(d >= 0.0) || !std::isfinite(d)) throw std::invalid_argument("Bank-Kauppila instance: D must be finite and nonnegative");
    prob.g.push_back(SeparableIntegrand::uniform(1, neg_U[n]));
    prob.h.push_back(SeparableIntegrand::uniform(1, PLQFunction::indicator({-kInf, d})));
  }
  for (auto& f : neg_UT) prob.e.push_back(SeparableIntegrand::uniform(1, f));
  prob.tree = std::move(tree);
  prob.validate();
  return prob;
}

ScenarioTree default_demo_tree() {
  const double mu[] = {0.25, 0.25, 0.25, 0.25};
  return ScenarioTree::uniform(3, 2, mu);
}

ControlProblem ls_demo() {
  ScenarioTree tree = default_demo_tree();
  AdaptedProcess W(tree.num_nodes(), 1);
  for (std::size_t n = 0; n < tree.num_nodes(); ++n) {
    const std::size_t parent = tree.node(n).parent;
    if (parent == kNoParent) continue;
    const bool up = tree.node(parent).children.front() == n;
    W(n, 0) = W(parent, 0) + (up ? 1.0 : -1.0);
  }
  return build_ls_instance(1.0, 2.0, std::move(tree), std::move(W));
}

ControlProblem bk_demo(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> scale(0.5, 2.0);
  ScenarioTree tree = default_demo_tree();
  AdaptedProcess D(tree.num_nodes(), 1);
  std::vector<PLQFunction> neg_U;
  for (std::size_t n = 0; n < tree.num_nodes(); ++n) {
    D(n, 0) = 1.0 - 0.2 * static_cast<double>(tree.node(n).time);
    neg_U.push_back(capped_quadratic_disutility(scale(rng)));
  }
  std::vector<PLQFunction> neg_UT;
  for (std::size_t p = 0; p < tree.num_paths(); ++p) neg_UT.push_back(capped_quadratic_disutility(scale(rng)));
  return build_bk_instance(std::move(neg_U), std::move(neg_UT), D, std::move(tree));
}

ControlProblem random_control_instance(std::mt19937_64& rng, const RandomControlOptions& options) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  ControlProblem prob;
  prob.name = "random";
  prob.dim = std::uniform_int_distribution<std::size_t>(1, options.max_dim)(rng);
  const auto d = static_cast<Eigen::Index>(prob.dim);
  prob.A = Eigen::MatrixXd::NullaryExpr(d, d, [&]() { return 0.3 * unit(rng); });
  prob.B = Eigen::MatrixXd::Identity(d, d) + Eigen::MatrixXd::NullaryExpr(d, d, [&]() { return 0.2 * unit(rng); });
  RandomTreeOptions topt;
  topt.max_periods = options.max_periods;
  topt.max_branching = options.max_branching;
  topt.max_leaves = options.max_leaves;
  prob.tree = random_tree(rng, topt);
  const auto& tree = prob.tree;
  prob.W = AdaptedProcess(tree.num_nodes(), prob.dim);
  for (double& x : prob.W.data()) x = unit(rng);

  RandomPLQOptions g_opt;
  g_opt.full_domain = true;
  g_opt.strongly_convex = true;
  g_opt.max_breakpoints = 3;
  g_opt.span = 3.0;
  RandomPLQOptions e_opt = g_opt;
  e_opt.strongly_convex = false;
  RandomPLQOptions h_opt;
  h_opt.bounded_domain = true;
  h_opt.max_breakpoints = 3;
  h_opt.span = 3.0;
  const auto random_h = [&]() {
    for (;;) {
      PLQFunction f = random_plq(rng, h_opt);
      if (f.lo() < -0.05 && f.hi() > 0.05) return f;
    }
  };
  for (std::size_t n = 0; n < tree.num_nodes(); ++n) {
    std::vector<PLQFunction> g, h;
    for (std::size_t k = 0; k < prob.dim; ++k) {
      g.push_back(random_plq(rng, g_opt));
      h.push_back(random_h());
    }
    prob.g.emplace_back(std::move(g));
    prob.h.emplace_back(std::move(h));
  }
  for (std::size_t p = 0; p < tree.num_paths(); ++p) {
    std::vector<PLQFunction> e;
    for (std::size_t k = 0; k < prob.dim; ++k) e.push_back(random_plq(rng, e_opt));
    prob.e.emplace_back(std::move(e));
  }
  prob.validate();
  return prob;
}

}  // namespace scdual
