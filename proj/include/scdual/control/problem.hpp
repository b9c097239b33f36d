#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <string>
#include <vector>

#include "scdual/convex/separable.hpp"
#include "scdual/stochastic/process.hpp"
#include "scdual/stochastic/tree.hpp"

namespace scdual {

/// Discrete singular control problem on a scenario tree.
///
/// Per node n the control increment is u_n·m_n + s_n (density and atom), the
/// cumulative control c_n includes it, ż_n = A z_n + B c_n + W_n and the
/// child state is z_n + m_n·ż_n, with z = 0 at the root. The objective is
///   E[Σ m g(ż) + e(ż_N) + Σ m h*(u) + Σ (h*)^∞(s)].
struct ControlProblem {
  std::string name = "problem";
  std::size_t dim = 1;
  Eigen::MatrixXd A;
  Eigen::MatrixXd B;
  ScenarioTree tree;
  AdaptedProcess W;
  std::vector<SeparableIntegrand> g;  // per node
  std::vector<SeparableIntegrand> e;  // per leaf-path
  std::vector<SeparableIntegrand> h;  // per node; its box is D
  std::vector<std::string> notes;

  /// Shapes, properness, and the finite reductions of the standing
  /// assumptions: g and e finite everywhere and h*(0) finite at every node.
  /// Throws std::invalid_argument.
  void validate() const;
};

/// Conjugates and recession functions derived once per problem.
struct ProblemData {
  std::vector<SeparableIntegrand> g_star;
  std::vector<SeparableIntegrand> e_star;
  std::vector<SeparableIntegrand> h_star;
  std::vector<SeparableIntegrand> h_star_recession;
  std::vector<std::vector<Interval>> boxes;
};

ProblemData prepare(const ControlProblem& prob);

struct PrimalSolution {
  AdaptedProcess u;
  AdaptedProcess s;
  AdaptedProcess c;
  AdaptedProcess z;
  AdaptedProcess zdot;
  double value = 0.0;
};

struct DualSolution {
  AdaptedProcess w;
  LeafValues eta;
  RawProcess p;
  AdaptedProcess op;
  /// Bᵀ·ᵒp per node.
  AdaptedProcess q;
  double value = 0.0;
  /// Largest distance of q from the box D.
  double infeasibility = 0.0;
};

}  // namespace scdual
