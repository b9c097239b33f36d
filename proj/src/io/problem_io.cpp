#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "lines.hpp"
#include "scdual/io/formats.hpp"

namespace scdual {

using io_detail::Line;
using io_detail::LineReader;

namespace {

std::optional<std::size_t> target_or_all(const Line& l, std::size_t i) {
  if (i >= l.tokens.size()) throw ParseError(l.number, "missing field " + std::to_string(i + 1));
  if (l.tokens[i] == "*") return std::nullopt;
  return io_detail::index(l, i);
}

InstanceFile::Record read_record(const Line& l) {
  if (l.tokens.size() < 3) throw ParseError(l.number, "expected '" + std::string(l.tokens[0]) + " <row> <values…>'");
  InstanceFile::Record r{0, std::nullopt, {}, l.number};
  const std::string_view where = l.tokens[1];
  if (const auto colon = where.find(':'); colon != std::string_view::npos) {
    Line head{l.number, {where.substr(0, colon), where.substr(colon + 1)}};
    r.row = io_detail::index(head, 0);
    r.time = io_detail::index(head, 1);
  } else {
    r.row = io_detail::index(l, 1);
  }
  for (std::size_t i = 2; i < l.tokens.size(); ++i) r.values.push_back(io_detail::number(l, i));
  return r;
}

std::vector<std::vector<double>> read_matrix(LineReader& reader, const Line& header, std::optional<std::size_t> dim) {
  if (!dim) throw ParseError(header.number, "'dim' must precede matrices");
  std::vector<std::vector<double>> m;
  for (std::size_t r = 0; r < *dim; ++r) {
    if (reader.done()) throw ParseError(reader.last_line(), "matrix ends early");
    const Line& l = reader.next();
    if (l.tokens.size() != *dim) throw ParseError(l.number, "matrix row needs " + std::to_string(*dim) + " entries");
    std::vector<double> row;
    for (std::size_t c = 0; c < *dim; ++c) row.push_back(io_detail::number(l, c));
    m.push_back(std::move(row));
  }
  return m;
}

void fill(AdaptedProcess& v, const std::vector<InstanceFile::Record>& records, const char* what) {
  std::vector<bool> seen(v.rows(), false);
  for (const auto& r : records) {
    if (r.time) throw ParseError(r.line, std::string(what) + " records are indexed by node");
    if (r.row >= v.rows()) throw ParseError(r.line, "unknown node " + std::to_string(r.row));
    if (r.values.size() != v.dim()) throw ParseError(r.line, "expected " + std::to_string(v.dim()) + " values");
    if (seen[r.row]) throw ParseError(r.line, "duplicate record for node " + std::to_string(r.row));
    seen[r.row] = true;
    for (std::size_t k = 0; k < v.dim(); ++k) v(r.row, k) = r.values[k];
  }
}

std::size_t record_dim(const std::vector<InstanceFile::Record>& records, std::optional<std::size_t> dim) {
  if (dim) return *dim;
  return records.empty() ? 1 : records.front().values.size();
}

}  // namespace

InstanceFile parse_instance(std::string_view text) {
  InstanceFile file;
  LineReader reader(text);
  bool in_w = false;
  while (!reader.done()) {
    const Line& l = reader.next();
    const std::string_view key = l.tokens.front();
    if (in_w) {
      if (key == "end") {
        in_w = false;
      } else if (key == "val") {
        file.disturbance.push_back(read_record(l));
      } else {
        throw ParseError(l.number, "expected 'val' or 'end' inside 'process W'");
      }
      continue;
    }
    if (key == "instance") {
      if (l.tokens.size() != 2) throw ParseError(l.number, "expected 'instance <name>'");
      file.name = std::string(l.tokens[1]);
    } else if (key == "dim") {
      if (l.tokens.size() != 2) throw ParseError(l.number, "expected 'dim <d>'");
      file.dim = io_detail::index(l, 1);
      if (*file.dim == 0) throw ParseError(l.number, "dimension must be positive");
    } else if (key == "matrix") {
      if (l.tokens.size() != 2 || (l.tokens[1] != "A" && l.tokens[1] != "B")) {
        throw ParseError(l.number, "expected 'matrix A' or 'matrix B'");
      }
      (l.tokens[1] == "A" ? file.A : file.B) = read_matrix(reader, l, file.dim);
    } else if (key == "node") {
      if (l.tokens.size() != 6) throw ParseError(l.number, "expected 'node <id> <time> <parent|-> <branch_prob> <mu>'");
      ScenarioTree::NodeSpec spec{io_detail::index(l, 2), std::nullopt, io_detail::number(l, 4), io_detail::number(l, 5)};
      if (l.tokens[3] != "-") spec.parent = io_detail::index(l, 3);
      file.node_ids.push_back(io_detail::index(l, 1));
      file.nodes.push_back(spec);
    } else if (key == "val") {
      file.values.push_back(read_record(l));
    } else if (key == "den") {
      file.density.push_back(read_record(l));
    } else if (key == "atom") {
      file.atoms.push_back(read_record(l));
    } else if (key == "process") {
      if (l.tokens.size() != 2 || l.tokens[1] != "W") throw ParseError(l.number, "expected 'process W'");
      in_w = true;
    } else if (key == "integrand") {
      if (l.tokens.size() != 4 || l.tokens[1].size() != 1 || std::string_view("geh").find(l.tokens[1][0]) == std::string_view::npos) {
        throw ParseError(l.number, "expected 'integrand <g|e|h> <index|*> <coord|*>'");
      }
      InstanceFile::Integrand in{l.tokens[1][0], target_or_all(l, 2), target_or_all(l, 3), PLQFunction(), l.number};
      if (reader.done() || reader.peek().tokens.front() != "plq") {
        throw ParseError(reader.done() ? l.number : reader.peek().number, "expected a 'plq' block after 'integrand'");
      }
      const Line& header = reader.next();
      in.f = io_detail::read_plq_block(reader, header);
      file.integrands.push_back(std::move(in));
    } else if (key == "plq") {
      throw ParseError(l.number, "'plq' block without a preceding 'integrand' line");
    } else {
      throw ParseError(l.number, "unknown record '" + std::string(key) + "'");
    }
  }
  if (in_w) throw ParseError(reader.last_line(), "'process W' is not closed by 'end'");
  return file;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

InstanceFile read_instance_file(const std::string& path) { return parse_instance(read_text_file(path)); }

ScenarioTree InstanceFile::tree() const {
  if (nodes.empty()) throw ParseError(0, "no 'node' records");
  std::vector<ScenarioTree::NodeSpec> specs(nodes.size());
  std::vector<bool> seen(nodes.size(), false);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const std::size_t id = node_ids[i];
    if (id >= nodes.size() || seen[id]) throw ParseError(0, "node ids must be 0..N-1, each once (bad id " + std::to_string(id) + ")");
    seen[id] = true;
    specs[id] = nodes[i];
  }
  try {
    return ScenarioTree::build(specs);
  } catch (const std::invalid_argument& e) {
    throw ParseError(0, e.what());
  }
}

AdaptedProcess InstanceFile::adapted_process(const ScenarioTree& tree) const {
  std::vector<Record> adapted;
  for (const auto& r : values) {
    if (!r.time) adapted.push_back(r);
  }
  if (adapted.empty()) throw ParseError(0, "no adapted 'val <node>' records");
  AdaptedProcess v(tree.num_nodes(), record_dim(adapted, dim));
  fill(v, adapted, "val");
  return v;
}

bool InstanceFile::has_raw_process() const {
  for (const auto& r : values) {
    if (r.time) return true;
  }
  return false;
}

RawProcess InstanceFile::raw_process(const ScenarioTree& tree) const {
  std::vector<Record> raw;
  for (const auto& r : values) {
    if (r.time) raw.push_back(r);
  }
  if (raw.empty()) throw ParseError(0, "no raw 'val <path>:<time>' records");
  const std::size_t d = record_dim(raw, dim);
  RawProcess v(tree.num_paths(), tree.periods() + 1, d);
  for (const auto& r : raw) {
    if (r.row >= tree.num_paths() || *r.time > tree.periods()) throw ParseError(r.line, "path or time out of range");
    if (r.values.size() != d) throw ParseError(r.line, "expected " + std::to_string(d) + " values");
    for (std::size_t k = 0; k < d; ++k) v(r.row, *r.time, k) = r.values[k];
  }
  return v;
}

RandomMeasure InstanceFile::measure(const ScenarioTree& tree) const {
  const std::size_t d = dim ? *dim : (!density.empty() ? density.front().values.size() : atoms.front().values.size());
  RandomMeasure theta = zero_measure(tree, d);
  fill(theta.density, density, "den");
  fill(theta.atoms, atoms, "atom");
  return theta;
}

std::vector<SeparableIntegrand> InstanceFile::integrands_of(char kind, std::size_t rows, std::size_t d) const {
  std::vector<std::vector<std::optional<PLQFunction>>> slots(rows, std::vector<std::optional<PLQFunction>>(d));
  for (const auto& in : integrands) {
    if (in.kind != kind) continue;
    if (in.target && *in.target >= rows) throw ParseError(in.line, "integrand index out of range");
    if (in.coord && *in.coord >= d) throw ParseError(in.line, "coordinate out of range");
    for (std::size_t r = 0; r < rows; ++r) {
      if (in.target && *in.target != r) continue;
      for (std::size_t k = 0; k < d; ++k) {
        if (in.coord && *in.coord != k) continue;
        slots[r][k] = in.f;
      }
    }
  }
  std::vector<SeparableIntegrand> out;
  for (std::size_t r = 0; r < rows; ++r) {
    std::vector<PLQFunction> coords;
    for (std::size_t k = 0; k < d; ++k) {
      if (!slots[r][k]) {
        throw ParseError(0, std::string("missing integrand ") + kind + " for index " + std::to_string(r) + " coordinate " +
                                std::to_string(k));
      }
      coords.push_back(*slots[r][k]);
    }
    out.emplace_back(std::move(coords));
  }
  return out;
}

namespace {

Eigen::MatrixXd to_matrix(const std::vector<std::vector<double>>& m, std::size_t d, bool identity_default) {
  if (m.empty()) {
    const auto n = static_cast<Eigen::Index>(d);
    if (identity_default) return Eigen::MatrixXd::Identity(n, n);
    return Eigen::MatrixXd::Zero(n, n);
  }
  Eigen::MatrixXd out(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t r = 0; r < d; ++r) {
    for (std::size_t c = 0; c < d; ++c) out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = m[r][c];
  }
  return out;
}

}  // namespace

ControlProblem InstanceFile::problem() const {
  ControlProblem prob;
  prob.name = name.empty() ? "problem" : name;
  prob.dim = dim.value_or(1);
  prob.tree = tree();
  prob.A = to_matrix(A, prob.dim, false);
  prob.B = to_matrix(B, prob.dim, true);
  prob.W = AdaptedProcess(prob.tree.num_nodes(), prob.dim);
  fill(prob.W, disturbance, "W");
  prob.g = integrands_of('g', prob.tree.num_nodes(), prob.dim);
  prob.h = integrands_of('h', prob.tree.num_nodes(), prob.dim);
  const bool has_e = std::any_of(integrands.begin(), integrands.end(), [](const Integrand& i) { return i.kind == 'e'; });
  if (has_e) {
    prob.e = integrands_of('e', prob.tree.num_paths(), prob.dim);
  } else {
    prob.e.assign(prob.tree.num_paths(), SeparableIntegrand::uniform(prob.dim, PLQFunction()));
  }
  try {
    prob.validate();
  } catch (const std::invalid_argument& e) {
    throw ParseError(0, e.what());
  }
  return prob;
}

FunctionalInstance InstanceFile::functional() const {
  ScenarioTree t = tree();
  const std::size_t d = dim.value_or(1);
  auto h = integrands_of('h', t.num_nodes(), d);
  try {
    return FunctionalInstance::make(std::move(t), std::move(h));
  } catch (const std::invalid_argument& e) {
    throw ParseError(0, e.what());
  }
}

std::string format_problem(const ControlProblem& prob) {
  std::string out = "instance " + prob.name + "\n";
  out += "dim " + std::to_string(prob.dim) + "\n";
  for (const char* which : {"A", "B"}) {
    const Eigen::MatrixXd& m = which[0] == 'A' ? prob.A : prob.B;
    out += std::string("matrix ") + which + "\n";
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
      for (Eigen::Index c = 0; c < m.cols(); ++c) out += (c ? " " : "") + format_double(m(r, c));
      out += "\n";
    }
  }
  out += format_tree(prob.tree);
  out += "process W\n" + format_process(prob.W) + "end\n";
  const auto emit = [&](char kind, const std::vector<SeparableIntegrand>& fs) {
    for (std::size_t i = 0; i < fs.size(); ++i) {
      for (std::size_t k = 0; k < fs[i].dim(); ++k) {
        out += std::string("integrand ") + kind + " " + std::to_string(i) + " " + std::to_string(k) + "\n";
        out += format_plq(fs[i][k]);
      }
    }
  };
  emit('g', prob.g);
  emit('e', prob.e);
  emit('h', prob.h);
  return out;
}

}  // namespace scdual
