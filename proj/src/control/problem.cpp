#include "scdual/control/problem.hpp"

#include <cmath>
#include <stdexcept>

namespace scdual {

namespace {

[[noreturn]] void reject(const std::string& what) { throw std::invalid_argument("invalid control problem: " + what); }

void check_integrands(const std::vector<SeparableIntegrand>& fs, std::size_t count, std::size_t dim, const char* name) {
  if (fs.size() != count) reject(std::string("wrong number of ") + name + " integrands");
  for (std::size_t i = 0; i < fs.size(); ++i) {
    if (fs[i].dim() != dim) reject(std::string(name) + " integrand " + std::to_string(i) + " has the wrong dimension");
    if (!fs[i].proper()) reject(std::string(name) + " integrand " + std::to_string(i) + " is improper");
  }
}

}  // namespace

void ControlProblem::validate() const {
  if (dim == 0) reject("zero dimension");
  if (A.rows() != static_cast<Eigen::Index>(dim) || A.cols() != static_cast<Eigen::Index>(dim)) reject("A is not d×d");
  if (B.rows() != static_cast<Eigen::Index>(dim) || B.cols() != static_cast<Eigen::Index>(dim)) reject("B is not d×d");
  if (!A.allFinite() || !B.allFinite()) reject("non-finite matrix entry");
  if (tree.num_nodes() == 0) reject("empty tree");
  if (W.rows() != tree.num_nodes() || W.dim() != dim) reject("W does not match the tree");
  for (double x : W.data()) {
    if (!std::isfinite(x)) reject("non-finite disturbance");
  }
  check_integrands(g, tree.num_nodes(), dim, "g");
  check_integrands(e, tree.num_paths(), dim, "e");
  check_integrands(h, tree.num_nodes(), dim, "h");
  for (std::size_t n = 0; n < g.size(); ++n) {
    for (std::size_t k = 0; k < dim; ++k) {
      if (std::isfinite(g[n][k].lo()) || std::isfinite(g[n][k].hi())) {
        reject("g at node " + std::to_string(n) + " must be finite everywhere");
      }
    }
  }
  for (std::size_t p = 0; p < e.size(); ++p) {
    for (std::size_t k = 0; k < dim; ++k) {
      if (std::isfinite(e[p][k].lo()) || std::isfinite(e[p][k].hi())) {
        reject("e on path " + std::to_string(p) + " must be finite everywhere");
      }
    }
  }
  for (std::size_t n = 0; n < h.size(); ++n) {
    const SeparableIntegrand hs = h[n].conjugate();
    for (std::size_t k = 0; k < dim; ++k) {
      if (!std::isfinite(hs[k](0.0))) reject("h* at node " + std::to_string(n) + " is not finite at 0 (h unbounded below)");
    }
  }
}

ProblemData prepare(const ControlProblem& prob) {
  prob.validate();
  ProblemData d;
  for (const auto& f : prob.g) d.g_star.push_back(f.conjugate());
  for (const auto& f : prob.e) d.e_star.push_back(f.conjugate());
  for (const auto& f : prob.h) {
    d.h_star.push_back(f.conjugate());
    d.h_star_recession.push_back(d.h_star.back().recession());
    d.boxes.push_back(f.box());
  }
  return d;
}

}  // namespace scdual
