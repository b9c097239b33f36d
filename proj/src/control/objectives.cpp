#include "scdual/control/objectives.hpp"

#include <cmath>

#include "scdual/convex/calculus.hpp"

namespace scdual {

namespace {

// Value near the domain with the distance to it folded into `violation`.
double tolerant(const PLQFunction& f, double x, double& violation) {
  const double d = f.domain().distance(x);
  violation = std::max(violation, d);
  return evaluate_near(f, x, kBoundaryTol);
}

}  // namespace

PrimalEvaluation primal_objective(const ControlProblem& prob, const ProblemData& data, const AdaptedProcess& u,
                                  const AdaptedProcess& s) {
  PrimalEvaluation ev;
  ev.trajectory = forward_dynamics(prob, u, s);
  const auto& tree = prob.tree;
  for (std::size_t n = 0; n < tree.num_nodes(); ++n) {
    double term = 0.0;
    const double m = tree.mu(n);
    for (std::size_t k = 0; k < prob.dim; ++k) {
      term += m * prob.g[n][k](ev.trajectory.zdot(n, k));
      term += m * tolerant(data.h_star[n][k], u(n, k), ev.violation);
      term += tolerant(data.h_star_recession[n][k], s(n, k), ev.violation);
    }
    ev.value += tree.probability(n) * term;
  }
  for (std::size_t p = 0; p < tree.num_paths(); ++p) {
    double term = 0.0;
    for (std::size_t k = 0; k < prob.dim; ++k) term += prob.e[p][k](ev.trajectory.zdot(tree.leaf(p), k));
    ev.value += tree.path_probability(p) * term;
  }
  return ev;
}

DualEvaluation dual_objective(const ControlProblem& prob, const ProblemData& data, const ZeroControl& zero,
                              const AdaptedProcess& w, const LeafValues& eta) {
  DualEvaluation ev;
  ev.adjoint = adjoint_dynamics(prob, w, eta);
  const auto& tree = prob.tree;
  double domain_excess = 0.0;
  for (std::size_t n = 0; n < tree.num_nodes(); ++n) {
    double term = 0.0;
    const double m = tree.mu(n);
    for (std::size_t k = 0; k < prob.dim; ++k) {
      const double wk = w(n, k);
      term += m * (tolerant(data.g_star[n][k], wk, domain_excess) - wk * zero.adot(n, k));
      term += m * tolerant(prob.h[n][k], ev.adjoint.q(n, k), ev.infeasibility);
    }
    ev.value += tree.probability(n) * term;
  }
  for (std::size_t p = 0; p < tree.num_paths(); ++p) {
    double term = 0.0;
    for (std::size_t k = 0; k < prob.dim; ++k) {
      const double ek = eta(p, k);
      term += tolerant(data.e_star[p][k], ek, domain_excess) - ek * zero.adot(tree.leaf(p), k);
    }
    ev.value += tree.path_probability(p) * term;
  }
  ev.infeasibility = std::max(ev.infeasibility, domain_excess);
  return ev;
}

PrimalSolution make_primal_solution(const ControlProblem& prob, const ProblemData& data, AdaptedProcess u,
                                    AdaptedProcess s) {
  PrimalEvaluation ev = primal_objective(prob, data, u, s);
  PrimalSolution sol;
  sol.u = std::move(u);
  sol.s = std::move(s);
  sol.c = std::move(ev.trajectory.c);
  sol.z = std::move(ev.trajectory.z);
  sol.zdot = std::move(ev.trajectory.zdot);
  sol.value = ev.value;
  return sol;
}

DualSolution make_dual_solution(const ControlProblem& prob, const ProblemData& data, const ZeroControl& zero,
                                AdaptedProcess w, LeafValues eta) {
  DualEvaluation ev = dual_objective(prob, data, zero, w, eta);
  DualSolution sol;
  sol.w = std::move(w);
  sol.eta = std::move(eta);
  sol.p = std::move(ev.adjoint.p);
  sol.op = std::move(ev.adjoint.op);
  sol.q = std::move(ev.adjoint.q);
  sol.value = ev.value;
  sol.infeasibility = ev.infeasibility;
  return sol;
}

}  // namespace scdual
