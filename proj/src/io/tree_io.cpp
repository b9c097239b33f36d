#include "scdual/io/formats.hpp"
#include "scdual/util/text.hpp"

namespace scdual {

std::string format_tree(const ScenarioTree& tree) {
  std::string out;
  for (std::size_t n = 0; n < tree.num_nodes(); ++n) {
    const auto& node = tree.node(n);
    out += "node " + std::to_string(n) + " " + std::to_string(node.time) + " " +
           (node.parent == kNoParent ? std::string("-") : std::to_string(node.parent)) + " " +
           format_double(node.branch_prob) + " " + format_double(node.mu) + "\n";
  }
  return out;
}

std::string format_process(const AdaptedProcess& v, std::string_view keyword) {
  std::string out;
  for (std::size_t n = 0; n < v.rows(); ++n) {
    out += std::string(keyword) + " " + std::to_string(n);
    for (double x : v.at(n)) out += " " + format_double(x);
    out += "\n";
  }
  return out;
}

std::string format_measure(const RandomMeasure& theta) {
  return format_process(theta.density, "den") + format_process(theta.atoms, "atom");
}

}  // namespace scdual
