#include "scdual/control/kkt.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "scdual/control/objectives.hpp"
#include "scdual/convex/calculus.hpp"

namespace scdual {

double KKTResiduals::worst() const { return *std::max_element(max.begin(), max.end()); }

namespace {

// f(x) + f*(y) − xy, tolerant at domain ends.
double fenchel_residual(const PLQFunction& f, const PLQFunction& f_star, double x, double y) {
  const double a = evaluate_near(f, x, kBoundaryTol);
  const double b = evaluate_near(f_star, y, kBoundaryTol);
  if (a == kInf || b == kInf) return kInf;
  return std::max(0.0, a + b - x * y);
}

}  // namespace

KKTResiduals kkt_check(const ControlProblem& prob, const ProblemData& data, const PrimalSolution& primal,
                       const DualSolution& dual) {
  const auto& tree = prob.tree;
  KKTResiduals r;
  r.density.assign(tree.num_nodes(), 0.0);
  r.singular.assign(tree.num_nodes(), 0.0);
  r.state.assign(tree.num_nodes(), 0.0);
  r.terminal.assign(tree.num_paths(), 0.0);
  for (std::size_t n = 0; n < tree.num_nodes(); ++n) {
    for (std::size_t k = 0; k < prob.dim; ++k) {
      const double q = dual.q(n, k);
      r.density[n] += fenchel_residual(prob.h[n][k], data.h_star[n][k], q, primal.u(n, k));
      const double s = primal.s(n, k);
      const double sigma = evaluate_near(data.h_star_recession[n][k], s, kBoundaryTol);
      const double in_box = prob.h[n][k].domain().distance(q) <= kBoundaryTol * (1.0 + std::abs(q)) ? 0.0 : kInf;
      r.singular[n] += std::max(0.0, sigma - s * q) + (s != 0.0 ? in_box : 0.0);
      r.state[n] += fenchel_residual(prob.g[n][k], data.g_star[n][k], primal.zdot(n, k), dual.w(n, k));
    }
    const double pm = tree.probability(n);
    r.weighted_sum += pm * (tree.mu(n) * (r.density[n] + r.state[n]) + r.singular[n]);
    r.max[0] = std::max(r.max[0], r.density[n]);
    r.max[1] = std::max(r.max[1], r.singular[n]);
    r.max[2] = std::max(r.max[2], r.state[n]);
  }
  for (std::size_t p = 0; p < tree.num_paths(); ++p) {
    const std::size_t leaf = tree.leaf(p);
    for (std::size_t k = 0; k < prob.dim; ++k) {
      r.terminal[p] += fenchel_residual(prob.e[p][k], data.e_star[p][k], primal.zdot(leaf, k), dual.eta(p, k));
    }
    r.weighted_sum += tree.path_probability(p) * r.terminal[p];
    r.max[3] = std::max(r.max[3], r.terminal[p]);
  }
  return r;
}

HamiltonianEval hamiltonian(const ControlProblem& prob, const ProblemData& data, std::size_t node,
                            std::span<const double> z, std::span<const double> c, std::span<const double> p) {
  const auto d = static_cast<Eigen::Index>(prob.dim);
  const Eigen::Map<const Eigen::VectorXd> zv(z.data(), d);
  const Eigen::Map<const Eigen::VectorXd> cv(c.data(), d);
  const Eigen::Map<const Eigen::VectorXd> pv(p.data(), d);
  const auto w = prob.W.at(node);
  const Eigen::Map<const Eigen::VectorXd> wv(w.data(), d);
  HamiltonianEval ev;
  ev.value = prob.g[node](z) + data.h_star[node](c);
  if (ev.value != kInf) ev.value -= pv.dot(prob.A * zv + prob.B * cv + wv);
  const Eigen::VectorXd q = prob.B.transpose() * pv;
  const HamiltonianArgmin am = hamiltonian_argmin(prob, data, node, std::span<const double>(q.data(), prob.dim));
  ev.argmin_density = am.c;
  ev.feasible = am.feasible;
  for (std::size_t k = 0; k < prob.dim; ++k) {
    ev.argmin_recession.push_back(normal_cone(data.boxes[node][k], q(static_cast<Eigen::Index>(k))));
  }
  return ev;
}

HamiltonianArgmin hamiltonian_argmin(const ControlProblem& prob, const ProblemData& data, std::size_t node,
                                     std::span<const double> q) {
  HamiltonianArgmin am;
  am.feasible = true;
  for (std::size_t k = 0; k < prob.dim; ++k) {
    const SubdiffInterval s = inverse_subdifferential(data.h_star[node][k], q[k]);
    if (s.empty || !data.boxes[node][k].contains(q[k])) {
      am.feasible = false;
      am.c.push_back(std::nan(""));
      continue;
    }
    am.c.push_back(s.min_norm());
  }
  return am;
}

BKResiduals bk_conditions_check(const ControlProblem& prob, const PrimalSolution& primal, const DualSolution& dual) {
  if (prob.dim != 1 || prob.A(0, 0) != 0.0 || prob.B(0, 0) != 1.0) {
    throw std::invalid_argument("bk_conditions_check: needs d = 1, A = 0, B = 1");
  }
  const auto& tree = prob.tree;
  BKResiduals r;
  r.min_increment = kInf;
  for (std::size_t n = 0; n < tree.num_nodes(); ++n) {
    const PLQFunction& h = prob.h[n][0];
    if (std::isfinite(h.lo()) || !std::isfinite(h.hi())) throw std::invalid_argument("bk_conditions_check: h is not δ(−∞, D]");
    const double D = h.hi();
    const double op = dual.op(n, 0);
    const double dc = primal.u(n, 0) * tree.mu(n) + primal.s(n, 0);
    r.feasibility = std::max(r.feasibility, op - D);
    r.min_increment = std::min(r.min_increment, dc);
    r.complementarity += tree.probability(n) * (D - op) * dc;
  }
  r.complementarity = std::abs(r.complementarity);
  for (std::size_t path = 0; path < tree.num_paths(); ++path) {
    const SubdiffInterval te = subdifferential(prob.e[path][0], primal.zdot(tree.leaf(path), 0));
    double lo = -te.hi;
    double hi = -te.lo;
    for (std::size_t t = tree.periods() + 1; t-- > 0;) {
      const std::size_t n = tree.path_node(path, t);
      const SubdiffInterval tg = subdifferential(prob.g[n][0], primal.zdot(n, 0));
      lo -= tree.mu(n) * tg.hi;
      hi -= tree.mu(n) * tg.lo;
      const double p = dual.p(path, t, 0);
      const double dist = p < lo ? lo - p : (p > hi ? p - hi : 0.0);
      r.representation = std::max(r.representation, dist);
    }
  }
  return r;
}

}  // namespace scdual
