#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "scdual/control/problem.hpp"
#include "scdual/convex/plq.hpp"
#include "scdual/functionals/functionals.hpp"
#include "scdual/measures/random_measure.hpp"
#include "scdual/stochastic/tree.hpp"

namespace scdual {

/// `plq <lo> <hi>` followed by one `<left_end> <a> <b> <c>` line per piece.
std::string format_plq(const PLQFunction& f);
/// Parses a text holding exactly one PLQ block. Throws ParseError.
PLQFunction parse_plq(std::string_view text);

/// `node <id> <time> <parent|-> <branch_prob> <mu>` per node.
std::string format_tree(const ScenarioTree& tree);
/// `val <node> v_1 … v_d` per node.
std::string format_process(const AdaptedProcess& v, std::string_view keyword = "val");
/// `den` and `atom` lines per node.
std::string format_measure(const RandomMeasure& theta);

/// Everything an instance file may hold. Records may appear in any order
/// except that matrix rows and PLQ pieces follow their header line.
///
///   dim <d>
///   matrix A | matrix B        followed by d rows of d numbers
///   node <id> <time> <parent|-> <branch_prob> <mu>
///   val <node> v…              an adapted process
///   val <path>:<time> v…       a raw process
///   den <node> v…  /  atom <node> v…
///   process W  …val lines…  end
///   integrand <g|e|h> <node|path|*> <coord|*>   followed by a PLQ block
///   instance <name>
struct InstanceFile {
  struct Integrand {
    char kind;
    std::optional<std::size_t> target;  // node (g, h) or path (e); empty means all
    std::optional<std::size_t> coord;   // empty means all coordinates
    PLQFunction f;
    std::size_t line;
  };
  struct Record {
    std::size_t row;
    std::optional<std::size_t> time;
    std::vector<double> values;
    std::size_t line;
  };

  std::string name;
  std::optional<std::size_t> dim;
  std::vector<std::vector<double>> A, B;
  std::vector<ScenarioTree::NodeSpec> nodes;
  std::vector<std::size_t> node_ids;
  std::vector<Record> values, density, atoms, disturbance;
  std::vector<Integrand> integrands;

  ScenarioTree tree() const;
  /// Adapted `val` records; throws ParseError if absent or inconsistent.
  AdaptedProcess adapted_process(const ScenarioTree& tree) const;
  bool has_raw_process() const;
  RawProcess raw_process(const ScenarioTree& tree) const;
  bool has_measure() const { return !density.empty() || !atoms.empty(); }
  RandomMeasure measure(const ScenarioTree& tree) const;
  /// Node integrands of kind `kind` ('g' or 'h') or path integrands ('e').
  std::vector<SeparableIntegrand> integrands_of(char kind, std::size_t rows, std::size_t dim) const;
  ControlProblem problem() const;
  FunctionalInstance functional() const;
};

InstanceFile parse_instance(std::string_view text);
InstanceFile read_instance_file(const std::string& path);
std::string read_text_file(const std::string& path);

/// A problem file that parse_instance reads back into the same problem.
std::string format_problem(const ControlProblem& prob);

}  // namespace scdual
