#include "scdual/stochastic/process.hpp"

#include <cmath>
#include <stdexcept>

#include "scdual/stochastic/tree.hpp"

namespace scdual {

RawProcess lift(const ScenarioTree& tree, const AdaptedProcess& v) {
  if (v.rows() != tree.num_nodes()) throw std::invalid_argument("lift: process does not match the tree");
  const std::size_t times = tree.periods() + 1;
  RawProcess out(tree.num_paths(), times, v.dim());
  for (std::size_t p = 0; p < tree.num_paths(); ++p) {
    for (std::size_t t = 0; t < times; ++t) {
      const auto src = v.at(tree.path_node(p, t));
      auto dst = out.at(p, t);
      for (std::size_t k = 0; k < v.dim(); ++k) dst[k] = src[k];
    }
  }
  return out;
}

double max_abs(const AdaptedProcess& v) {
  double m = 0.0;
  for (double x : v.data()) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace scdual
