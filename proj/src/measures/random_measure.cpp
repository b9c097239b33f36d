#include "scdual/measures/random_measure.hpp"

#include <cmath>
#include <stdexcept>

#include "scdual/convex/calculus.hpp"
#include "scdual/stochastic/projection.hpp"
#include "scdual/stochastic/stopping.hpp"

namespace scdual {

namespace {

void check_shape(const ScenarioTree& tree, const AdaptedProcess& v, const char* what) {
  if (v.rows() != tree.num_nodes()) throw std::invalid_argument(std::string(what) + ": process does not match the tree");
}

void check_measure(const ScenarioTree& tree, const RandomMeasure& theta) {
  check_shape(tree, theta.density, "measure density");
  check_shape(tree, theta.atoms, "measure atoms");
  if (theta.density.dim() != theta.atoms.dim()) throw std::invalid_argument("measure parts differ in dimension");
}

double l1(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += std::abs(v);
  return s;
}

double linf(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s = std::max(s, std::abs(v));
  return s;
}

double dot(std::span<const double> x, std::span<const double> y) {
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) s += x[k] * y[k];
  return s;
}

}  // namespace

RandomMeasure zero_measure(const ScenarioTree& tree, std::size_t dim) {
  return {AdaptedProcess(tree.num_nodes(), dim), AdaptedProcess(tree.num_nodes(), dim)};
}

double pairing(const ScenarioTree& tree, const AdaptedProcess& v, const RandomMeasure& theta) {
  return refined_pairing(tree, v, v, theta);
}

double refined_pairing(const ScenarioTree& tree, const AdaptedProcess& v_density, const AdaptedProcess& v_atom,
                       const RandomMeasure& theta) {
  check_measure(tree, theta);
  check_shape(tree, v_density, "pairing");
  check_shape(tree, v_atom, "pairing");
  if (v_density.dim() != theta.dim() || v_atom.dim() != theta.dim()) {
    throw std::invalid_argument("pairing: dimension mismatch");
  }
  double total = 0.0;
  for (std::size_t n = 0; n < tree.num_nodes(); ++n) {
    const double term = dot(v_density.at(n), theta.density.at(n)) * tree.mu(n) + dot(v_atom.at(n), theta.atoms.at(n));
    total += tree.probability(n) * term;
  }
  return total;
}

double m_inf_norm(const ScenarioTree& tree, const RandomMeasure& theta) {
  check_measure(tree, theta);
  double best = 0.0;
  for (std::size_t p = 0; p < tree.num_paths(); ++p) {
    double tv = 0.0;
    for (std::size_t n : tree.path(p)) tv += linf(theta.density.at(n)) * tree.mu(n) + linf(theta.atoms.at(n));
    best = std::max(best, tv);
  }
  return best;
}

double refined_r1_norm(const ScenarioTree& tree, const AdaptedProcess& v_density, const AdaptedProcess& v_atom) {
  check_shape(tree, v_density, "refined_r1_norm");
  check_shape(tree, v_atom, "refined_r1_norm");
  std::vector<double> at_density(tree.num_nodes(), 0.0);
  for (std::size_t t = tree.periods() + 1; t-- > 0;) {
    for (std::size_t n : tree.nodes_at(t)) {
      double cont = 0.0;
      for (std::size_t c : tree.node(n).children) cont += tree.node(c).branch_prob * at_density[c];
      const double at_atom = std::max(l1(v_atom.at(n)), cont);
      at_density[n] = std::max(l1(v_density.at(n)), at_atom);
    }
  }
  return at_density[tree.root()];
}

ExtremePointResult dual_norm_by_extreme_points(const ScenarioTree& tree, const RandomMeasure& theta) {
  check_measure(tree, theta);
  if (!within_enumeration_cap(tree)) throw std::length_error("extreme-point enumeration refused above the cap");
  const std::size_t d = theta.dim();
  const std::size_t slots = 2 * (tree.periods() + 1);
  ExtremePointResult best;
  best.v_density = AdaptedProcess(tree.num_nodes(), d);
  best.v_atom = AdaptedProcess(tree.num_nodes(), d);
  for (std::size_t p = 0; p < tree.num_paths(); ++p) {
    const auto nodes = tree.path(p);
    for (std::size_t mask = 1; mask < (std::size_t{1} << slots); ++mask) {
      AdaptedProcess vd(tree.num_nodes(), d);
      AdaptedProcess va(tree.num_nodes(), d);
      for (std::size_t s = 0; s < slots; ++s) {
        if (!(mask >> s & 1)) continue;
        const std::size_t n = nodes[s / 2];
        const bool atom = s % 2 == 1;
        const auto target = atom ? theta.atoms.at(n) : theta.density.at(n);
        std::size_t k = 0;
        for (std::size_t j = 1; j < d; ++j) {
          if (std::abs(target[j]) > std::abs(target[k])) k = j;
        }
        const double sign = target[k] < 0.0 ? -1.0 : 1.0;
        (atom ? va : vd)(n, k) = sign / tree.probability(n);
      }
      ++best.candidates;
      if (refined_r1_norm(tree, vd, va) > 1.0 + 1e-12) continue;
      ++best.feasible;
      const double value = refined_pairing(tree, vd, va, theta);
      if (value > best.value) {
        best.value = value;
        best.v_density = std::move(vd);
        best.v_atom = std::move(va);
      }
    }
  }
  return best;
}

double J_functional(const ScenarioTree& tree, std::span<const SeparableIntegrand> h_star, const RandomMeasure& theta,
                    std::span<const SeparableIntegrand> h_star_recession) {
  check_measure(tree, theta);
  if (h_star.size() != tree.num_nodes()) throw std::invalid_argument("J_functional: need one integrand per node");
  std::vector<SeparableIntegrand> computed;
  if (h_star_recession.empty()) {
    for (const auto& f : h_star) {
      if (!f.proper()) throw std::invalid_argument("J_functional: improper node integrand");
      computed.push_back(f.recession());
    }
    h_star_recession = computed;
  }
  double total = 0.0;
  for (std::size_t n = 0; n < tree.num_nodes(); ++n) {
    const auto& f = h_star[n];
    if (!f.proper()) throw std::invalid_argument("J_functional: improper node integrand");
    if (f.dim() != theta.dim()) throw std::invalid_argument("J_functional: dimension mismatch");
    double term = 0.0;
    for (std::size_t k = 0; k < f.dim(); ++k) {
      const double a = f[k](theta.density(n, k));
      const double s = h_star_recession[n][k](theta.atoms(n, k));
      if (a == kInf || s == kInf) return kInf;
      term += a * tree.mu(n) + s;
    }
    total += tree.probability(n) * term;
  }
  return total;
}

AdaptedProcess CumulativePath::total() const {
  AdaptedProcess out = absolutely_continuous;
  auto dst = out.data();
  const auto src = singular.data();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
  return out;
}

RandomMeasure bv_to_measure(const ScenarioTree& tree, const CumulativePath& c) {
  check_shape(tree, c.absolutely_continuous, "bv_to_measure");
  check_shape(tree, c.singular, "bv_to_measure");
  const std::size_t d = c.absolutely_continuous.dim();
  RandomMeasure theta = zero_measure(tree, d);
  for (std::size_t n = 0; n < tree.num_nodes(); ++n) {
    const std::size_t parent = tree.node(n).parent;
    for (std::size_t k = 0; k < d; ++k) {
      const double ac_prev = parent == kNoParent ? 0.0 : c.absolutely_continuous(parent, k);
      const double s_prev = parent == kNoParent ? 0.0 : c.singular(parent, k);
      theta.density(n, k) = (c.absolutely_continuous(n, k) - ac_prev) / tree.mu(n);
      theta.atoms(n, k) = c.singular(n, k) - s_prev;
    }
  }
  return theta;
}

RandomMeasure bv_to_measure(const ScenarioTree& tree, const RawProcess& absolutely_continuous,
                            const RawProcess& singular) {
  return bv_to_measure(tree, CumulativePath{to_adapted(tree, absolutely_continuous), to_adapted(tree, singular)});
}

CumulativePath measure_to_path(const ScenarioTree& tree, const RandomMeasure& theta) {
  check_measure(tree, theta);
  const std::size_t d = theta.dim();
  CumulativePath c{AdaptedProcess(tree.num_nodes(), d), AdaptedProcess(tree.num_nodes(), d)};
  for (std::size_t t = 0; t <= tree.periods(); ++t) {
    for (std::size_t n : tree.nodes_at(t)) {
      const std::size_t parent = tree.node(n).parent;
      for (std::size_t k = 0; k < d; ++k) {
        const double ac_prev = parent == kNoParent ? 0.0 : c.absolutely_continuous(parent, k);
        const double s_prev = parent == kNoParent ? 0.0 : c.singular(parent, k);
        c.absolutely_continuous(n, k) = ac_prev + theta.density(n, k) * tree.mu(n);
        c.singular(n, k) = s_prev + theta.atoms(n, k);
      }
    }
  }
  return c;
}

}  // namespace scdual
