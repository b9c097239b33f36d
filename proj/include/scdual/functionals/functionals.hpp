#pragma once

#include <cstddef>
#include <random>
#include <span>
#include <vector>

#include "scdual/convex/separable.hpp"
#include "scdual/measures/random_measure.hpp"
#include "scdual/stochastic/process.hpp"
#include "scdual/stochastic/tree.hpp"

namespace scdual {

/// Node integrand h together with its conjugate, the recession function of
/// the conjugate (the support function of the box D) and the boxes.
struct FunctionalInstance {
  ScenarioTree tree;
  std::vector<SeparableIntegrand> h;
  std::vector<SeparableIntegrand> h_star;
  std::vector<SeparableIntegrand> h_star_recession;
  std::vector<std::vector<Interval>> boxes;

  /// Throws std::invalid_argument for an improper or mis-shaped integrand.
  static FunctionalInstance make(ScenarioTree tree, std::vector<SeparableIntegrand> h);
  std::size_t dim() const { return h.empty() ? 0 : h.front().dim(); }
};

/// E Σ h(v)·m; +inf when v leaves the box at some node.
double EI(const FunctionalInstance& inst, const AdaptedProcess& v);

double EJ(const FunctionalInstance& inst, const RandomMeasure& theta);

struct FenchelGapReport {
  double gap = 0.0;
  double ei = 0.0;
  double j = 0.0;
  double pairing = 0.0;
  /// Per node, the largest distance of a density coordinate from ∂h(v).
  std::vector<double> density_residual;
  /// Per node, the largest distance of an atom coordinate from N_D(v).
  std::vector<double> atom_residual;
  /// Per node, P-free Fenchel gaps m·Σ(h + h* − v·dens) and Σ(σ_D − v·atom).
  std::vector<double> density_gap;
  std::vector<double> atom_gap;
  double worst_density = 0.0;
  double worst_atom = 0.0;
};

/// EI(v) + EJ(θ) − ⟨v, θ⟩ with nodewise inclusion residuals. Throws
/// std::domain_error when EI(v) or EJ(θ) is infinite.
FenchelGapReport fenchel_gap(const FunctionalInstance& inst, const AdaptedProcess& v, const RandomMeasure& theta);

struct GridSpec {
  std::size_t intervals = 200;
};

struct BruteForceConjugate {
  /// sup of ⟨v, θ⟩ − EI(v) − δ_D over grid processes whose value at each
  /// node's atom instant is separate from the density instant.
  double value = 0.0;
  /// value ≥ EJ(θ) − bound whenever the truncated boxes contain maximizers;
  /// +inf otherwise.
  double resolution_bound = 0.0;
  /// The same supremum when one value per node serves both instants; never
  /// above value, equal to it when θ has no atoms.
  double shared_value = 0.0;
  double largest_radius = 0.0;
};

/// Exhaustive maximization over a per-node grid. The objective separates
/// across (node, coordinate, instant), so the maximum over the product grid
/// is the sum of per-slot grid maxima, each found by a full scan. Unbounded
/// boxes are truncated at radius 10·(1 + largest |breakpoint|). Throws
/// std::length_error above the enumeration cap and std::domain_error when
/// EJ(θ) is infinite.
BruteForceConjugate conjugate_bruteforce(const FunctionalInstance& inst, const RandomMeasure& theta,
                                         GridSpec grid = {});

struct InterchangeResult {
  /// Σ w_i f_i(u_i) at the explicit minimum-norm minimizers.
  double value = 0.0;
  /// |value − (−Σ w_i f_i*(0))|.
  double residual = 0.0;
};

/// Finite-sample interchange of minimization and summation. Throws
/// std::invalid_argument for an unbounded-below function or bad weights.
InterchangeResult interchange_check(std::span<const PLQFunction> fs, std::span<const double> weights);

/// An adapted process with EI finite: per node the minimum-norm minimizer of
/// each coordinate, or the point of the box nearest 0 when unbounded below.
AdaptedProcess properness_witness(const FunctionalInstance& inst);

struct CertificateCheck {
  bool ok = false;
  /// Largest excess of h*(x̄) over α and of h(v̄) over α across nodes.
  double worst_conjugate_excess = 0.0;
  double worst_primal_excess = 0.0;
};

/// Nodewise check of the two lower bounds h(v) ≥ v·x̄ − α and
/// h*(x) ≥ v̄·x − α, i.e. h*(x̄) ≤ α and h(v̄) ≤ α.
CertificateCheck check_regularity_certificate(const FunctionalInstance& inst, const AdaptedProcess& v_bar,
                                              const AdaptedProcess& x_bar, std::span<const double> alpha);

/// A pair with zero Fenchel gap: v in the box with some coordinates on its
/// boundary, densities inside ∂h(v), atoms inside the normal cone.
struct ZeroGapPair {
  AdaptedProcess v;
  RandomMeasure theta;
};
ZeroGapPair random_zero_gap_pair(std::mt19937_64& rng, const FunctionalInstance& inst);

/// Moves one density or atom coordinate of θ outside the corresponding
/// inclusion by `step`, keeping EJ finite. Returns false when no such move
/// exists at the chosen coordinate.
bool perturb_outside_inclusions(std::mt19937_64& rng, const FunctionalInstance& inst, const AdaptedProcess& v,
                                RandomMeasure& theta, double step);

/// A measure with EJ finite whose per-slot maximizers lie inside the
/// brute-force truncation boxes.
RandomMeasure random_finite_measure(std::mt19937_64& rng, const FunctionalInstance& inst);

struct RandomTreeOptions {
  std::size_t max_periods = 3;
  std::size_t max_branching = 2;
  std::size_t max_leaves = 8;
  double mu_lo = 0.2;
  double mu_hi = 0.5;
};
ScenarioTree random_tree(std::mt19937_64& rng, const RandomTreeOptions& options = {});

}  // namespace scdual
