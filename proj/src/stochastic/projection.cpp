#include "scdual/stochastic/projection.hpp"

#include <cmath>
#include <stdexcept>

#include "scdual/convex/calculus.hpp"

namespace scdual {

AdaptedProcess optional_projection(const ScenarioTree& tree, const RawProcess& v) {
  if (v.paths() != tree.num_paths() || v.times() != tree.periods() + 1) {
    throw std::invalid_argument("optional_projection: process does not match the tree");
  }
  AdaptedProcess out(tree.num_nodes(), v.dim());
  for (std::size_t n = 0; n < tree.num_nodes(); ++n) {
    const auto [first, end] = tree.path_range(n);
    const std::size_t t = tree.node(n).time;
    double mass = 0.0;
    auto dst = out.at(n);
    for (std::size_t p = first; p < end; ++p) {
      const double w = tree.path_probability(p);
      mass += w;
      const auto x = v.at(p, t);
      for (std::size_t k = 0; k < v.dim(); ++k) dst[k] += w * x[k];
    }
    for (double& x : dst) x /= mass;
  }
  return out;
}

std::vector<SeparableIntegrand> project_integrand(const ScenarioTree& tree, const LeafIntegrands& h) {
  if (h.size() != tree.num_paths()) throw std::invalid_argument("project_integrand: need one row per leaf-path");
  std::vector<SeparableIntegrand> out;
  out.reserve(tree.num_nodes());
  for (std::size_t n = 0; n < tree.num_nodes(); ++n) {
    const auto [first, end] = tree.path_range(n);
    const std::size_t t = tree.node(n).time;
    std::vector<double> w;
    double mass = 0.0;
    for (std::size_t p = first; p < end; ++p) mass += tree.path_probability(p);
    for (std::size_t p = first; p < end; ++p) w.push_back(tree.path_probability(p) / mass);
    const std::size_t d = h[first].at(t).dim();
    std::vector<PLQFunction> coords;
    for (std::size_t k = 0; k < d; ++k) {
      std::vector<PLQFunction> fs;
      for (std::size_t p = first; p < end; ++p) {
        if (h[p].size() != tree.periods() + 1 || h[p][t].dim() != d) {
          throw std::invalid_argument("project_integrand: inconsistent integrand shapes");
        }
        fs.push_back(h[p][t][k]);
      }
      coords.push_back(expectation(w, fs));
    }
    out.emplace_back(std::move(coords));
  }
  return out;
}

bool is_adapted(const ScenarioTree& tree, const RawProcess& v, double tol) {
  if (v.paths() != tree.num_paths() || v.times() != tree.periods() + 1) return false;
  for (std::size_t n = 0; n < tree.num_nodes(); ++n) {
    const auto [first, end] = tree.path_range(n);
    const std::size_t t = tree.node(n).time;
    const auto ref = v.at(first, t);
    for (std::size_t p = first + 1; p < end; ++p) {
      const auto x = v.at(p, t);
      for (std::size_t k = 0; k < v.dim(); ++k) {
        if (!(std::abs(x[k] - ref[k]) <= tol)) return false;
      }
    }
  }
  return true;
}

AdaptedProcess to_adapted(const ScenarioTree& tree, const RawProcess& v, double tol) {
  if (!is_adapted(tree, v, tol)) throw std::invalid_argument("process is not adapted to the tree");
  AdaptedProcess out(tree.num_nodes(), v.dim());
  for (std::size_t n = 0; n < tree.num_nodes(); ++n) {
    const auto src = v.at(tree.path_range(n).first, tree.node(n).time);
    auto dst = out.at(n);
    for (std::size_t k = 0; k < v.dim(); ++k) dst[k] = src[k];
  }
  return out;
}

std::vector<double> snell_envelope(const ScenarioTree& tree, std::span<const double> reward) {
  std::vector<double> u(tree.num_nodes(), 0.0);
  for (std::size_t t = tree.periods() + 1; t-- > 0;) {
    for (std::size_t n : tree.nodes_at(t)) {
      double cont = 0.0;
      for (std::size_t c : tree.node(n).children) cont += tree.node(c).branch_prob * u[c];
      u[n] = std::max(reward[n], cont);
    }
  }
  return u;
}

double r1_norm(const ScenarioTree& tree, const AdaptedProcess& v) {
  if (v.rows() != tree.num_nodes()) throw std::invalid_argument("r1_norm: process does not match the tree");
  std::vector<double> reward(tree.num_nodes(), 0.0);
  for (std::size_t n = 0; n < tree.num_nodes(); ++n) {
    for (double x : v.at(n)) reward[n] += std::abs(x);
  }
  return snell_envelope(tree, reward)[tree.root()];
}

double verify_projection_identity(const ScenarioTree& tree, const RawProcess& v, const StoppingTime& tau) {
  if (!is_stopping_time(tree, tau)) throw std::invalid_argument("not a stopping time of this tree");
  const auto lhs = stopped_expectation(tree, v, tau);
  const auto rhs = stopped_expectation(tree, lift(tree, optional_projection(tree, v)), tau);
  double worst = 0.0;
  for (std::size_t k = 0; k < lhs.size(); ++k) worst = std::max(worst, std::abs(lhs[k] - rhs[k]));
  return worst;
}

}  // namespace scdual
