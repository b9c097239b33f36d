#include "scdual/control/dynamics.hpp"

#include <cmath>
#include <stdexcept>

#include "scdual/stochastic/projection.hpp"

namespace scdual {

namespace {

using Vec = Eigen::VectorXd;

Vec row(const AdaptedProcess& v, std::size_t n) {
  const auto x = v.at(n);
  return Eigen::Map<const Vec>(x.data(), static_cast<Eigen::Index>(x.size()));
}

void put(AdaptedProcess& v, std::size_t n, const Vec& x) {
  auto dst = v.at(n);
  for (std::size_t k = 0; k < dst.size(); ++k) dst[k] = x(static_cast<Eigen::Index>(k));
}

void check_control(const ControlProblem& prob, const AdaptedProcess& v, const char* what) {
  if (v.rows() != prob.tree.num_nodes() || v.dim() != prob.dim) {
    throw std::invalid_argument(std::string(what) + " does not match the problem");
  }
}

}  // namespace

Trajectory forward_dynamics(const ControlProblem& prob, const AdaptedProcess& u, const AdaptedProcess& s,
                            bool with_disturbance) {
  check_control(prob, u, "u");
  check_control(prob, s, "s");
  const auto& tree = prob.tree;
  const std::size_t d = prob.dim;
  Trajectory tr{AdaptedProcess(tree.num_nodes(), d), AdaptedProcess(tree.num_nodes(), d),
                AdaptedProcess(tree.num_nodes(), d)};
  for (std::size_t t = 0; t <= tree.periods(); ++t) {
    for (std::size_t n : tree.nodes_at(t)) {
      const std::size_t parent = tree.node(n).parent;
      const double m = tree.mu(n);
      Vec c = row(u, n) * m + row(s, n);
      Vec z = Vec::Zero(static_cast<Eigen::Index>(d));
      if (parent != kNoParent) {
        c += row(tr.c, parent);
        z = row(tr.z, parent) + tree.mu(parent) * row(tr.zdot, parent);
      }
      Vec zdot = prob.A * z + prob.B * c;
      if (with_disturbance) zdot += row(prob.W, n);
      put(tr.c, n, c);
      put(tr.z, n, z);
      put(tr.zdot, n, zdot);
    }
  }
  return tr;
}

ZeroControl zero_control_trajectory(const ControlProblem& prob) {
  const AdaptedProcess zero(prob.tree.num_nodes(), prob.dim);
  Trajectory tr = forward_dynamics(prob, zero, zero, true);
  return {std::move(tr.z), std::move(tr.zdot)};
}

Adjoint adjoint_dynamics(const ControlProblem& prob, const AdaptedProcess& w, const LeafValues& eta) {
  check_control(prob, w, "w");
  const auto& tree = prob.tree;
  const std::size_t d = prob.dim;
  if (eta.rows() != tree.num_paths() || eta.dim() != d) throw std::invalid_argument("eta does not match the problem");
  const std::size_t times = tree.periods() + 1;
  Adjoint adj{RawProcess(tree.num_paths(), times, d), {}, AdaptedProcess(tree.num_nodes(), d),
              LeafValues(tree.num_paths(), d)};
  const Eigen::MatrixXd At = prob.A.transpose();
  for (std::size_t path = 0; path < tree.num_paths(); ++path) {
    const Vec terminal = -row(eta, path);
    put(adj.terminal, path, terminal);
    Vec next = terminal;
    bool last = true;
    for (std::size_t t = times; t-- > 0;) {
      const std::size_t n = tree.path_node(path, t);
      const double m = tree.mu(n);
      Vec p = last ? Vec(next - m * row(w, n)) : Vec(next + m * (At * next) - m * row(w, n));
      last = false;
      auto dst = adj.p.at(path, t);
      for (std::size_t k = 0; k < d; ++k) dst[k] = p(static_cast<Eigen::Index>(k));
      next = std::move(p);
    }
  }
  adj.op = optional_projection(tree, adj.p);
  const Eigen::MatrixXd Bt = prob.B.transpose();
  for (std::size_t n = 0; n < tree.num_nodes(); ++n) put(adj.q, n, Bt * row(adj.op, n));
  return adj;
}

PairingSides pairing_sides(const ControlProblem& prob, const AdaptedProcess& u, const AdaptedProcess& s,
                           const AdaptedProcess& w, const LeafValues& eta) {
  const auto& tree = prob.tree;
  const Trajectory lin = forward_dynamics(prob, u, s, false);
  const Adjoint adj = adjoint_dynamics(prob, w, eta);
  PairingSides r;
  for (std::size_t n = 0; n < tree.num_nodes(); ++n) {
    const double pn = tree.probability(n);
    const double m = tree.mu(n);
    r.state_side += pn * m * row(w, n).dot(row(lin.zdot, n));
    r.control_side += pn * -row(adj.q, n).dot(row(u, n) * m + row(s, n));
  }
  for (std::size_t path = 0; path < tree.num_paths(); ++path) {
    r.state_side += tree.path_probability(path) * row(eta, path).dot(row(lin.zdot, tree.leaf(path)));
  }
  r.residual = std::abs(r.state_side - r.control_side);
  return r;
}

double pairing_identity_check(const ControlProblem& prob, const AdaptedProcess& u, const AdaptedProcess& s,
                              const AdaptedProcess& w, const LeafValues& eta) {
  return pairing_sides(prob, u, s, w, eta).residual;
}

}  // namespace scdual
