#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "scdual/control/instances.hpp"
#include "scdual/convex/calculus.hpp"
#include "scdual/convex/random_plq.hpp"
#include "scdual/functionals/functionals.hpp"

using namespace scdual;

namespace {

FunctionalInstance uniform_instance(const ScenarioTree& t, const PLQFunction& h) {
  return FunctionalInstance::make(t, std::vector<SeparableIntegrand>(t.num_nodes(), SeparableIntegrand::uniform(1, h)));
}

const PLQFunction ls_h = conjugate(ls_cost(2.0));

}  // namespace

TEST_CASE("EI") {
  const double mu[] = {0.5, 0.5};
  const ScenarioTree line = ScenarioTree::uniform(1, 1, mu);
  const auto inst = uniform_instance(line, ls_h);
  CHECK(EI(inst, AdaptedProcess(2, 1, 2.0)) == doctest::Approx(1.0));
  AdaptedProcess out(2, 1, 2.0);
  out(1, 0) = 2.5;
  CHECK(EI(inst, out) == kInf);
  CHECK(EI(uniform_instance(line, PLQFunction()), out) == 0.0);
}

TEST_CASE("Fenchel gap and inclusions") {
  const double mu[] = {0.5, 0.5, 0.5};
  const ScenarioTree t = ScenarioTree::uniform(2, 2, mu);
  const auto quad = uniform_instance(t, PLQFunction::quadratic(0.5));
  const auto rep = fenchel_gap(quad, AdaptedProcess(t.num_nodes(), 1), zero_measure(t, 1));
  CHECK(rep.gap == doctest::Approx(0.0));
  CHECK(rep.worst_density == 0.0);
  CHECK(rep.worst_atom == 0.0);

  // v at the right end of D = [-2, 2]: densities in ∂h(2) = [1, ∞), atoms in [0, ∞).
  const auto ls = uniform_instance(t, ls_h);
  RandomMeasure theta = zero_measure(t, 1);
  for (double& x : theta.density.data()) x = 1.0;
  theta.atoms(t.nodes_at(1)[0], 0) = 1.0;
  const AdaptedProcess two(t.num_nodes(), 1, 2.0);
  const auto at_end = fenchel_gap(ls, two, theta);
  CHECK(at_end.worst_atom == 0.0);
  CHECK(at_end.worst_density <= 1e-12);
  CHECK(std::abs(at_end.gap) <= 1e-12);

  theta.atoms(t.nodes_at(1)[0], 0) = -1.0;
  const auto wrong_sign = fenchel_gap(ls, two, theta);
  CHECK(wrong_sign.worst_atom == doctest::Approx(1.0));
  CHECK(wrong_sign.gap == doctest::Approx(4.0 * t.probability(t.nodes_at(1)[0])));
}

TEST_CASE("zero-gap pairs and their perturbations") {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 20; ++i) {
    const ScenarioTree t = random_tree(rng);
    std::vector<SeparableIntegrand> h;
    for (std::size_t n = 0; n < t.num_nodes(); ++n) h.push_back(SeparableIntegrand::uniform(2, random_plq(rng)));
    const auto inst = FunctionalInstance::make(t, h);
    const auto pair = random_zero_gap_pair(rng, inst);
    const auto rep = fenchel_gap(inst, pair.v, pair.theta);
    CHECK(std::abs(rep.gap) <= 1e-9);
    CHECK(rep.worst_density <= 1e-9);
    CHECK(rep.worst_atom <= 1e-9);
    RandomMeasure moved = pair.theta;
    if (perturb_outside_inclusions(rng, inst, pair.v, moved, 0.2)) CHECK(fenchel_gap(inst, pair.v, moved).gap > 0.0);
  }
}

TEST_CASE("brute-force conjugate") {
  const double mu[] = {0.5, 0.5, 0.5};
  const ScenarioTree t = ScenarioTree::uniform(2, 2, mu);
  const auto zero = uniform_instance(t, PLQFunction::indicator({0.0, 0.0}));
  RandomMeasure theta = zero_measure(t, 1);
  theta.density(3, 0) = 1.7;
  theta.atoms(1, 0) = -0.4;
  const auto b0 = conjugate_bruteforce(zero, theta);
  CHECK(b0.value == 0.0);
  CHECK(EJ(zero, theta) == 0.0);

  const double one[] = {1.0};
  const ScenarioTree single = ScenarioTree::uniform(0, 1, one);
  const auto quad = uniform_instance(single, PLQFunction::quadratic(0.5));
  for (double s : {-1.3, 0.0, 0.45, 2.0}) {
    RandomMeasure d = zero_measure(single, 1);
    d.density(0, 0) = s;
    const auto b = conjugate_bruteforce(quad, d);
    CHECK(EJ(quad, d) == doctest::Approx(s * s / 2.0));
    CHECK(EJ(quad, d) - b.value <= b.resolution_bound);
    CHECK(b.value <= EJ(quad, d) + 1e-12);
  }

  std::mt19937_64 rng(32);
  for (int i = 0; i < 5; ++i) {
    std::vector<SeparableIntegrand> h;
    for (std::size_t n = 0; n < t.num_nodes(); ++n) h.push_back(SeparableIntegrand::uniform(1, random_plq(rng)));
    const auto inst = FunctionalInstance::make(t, h);
    const RandomMeasure m = random_finite_measure(rng, inst);
    const double j = EJ(inst, m);
    const auto coarse = conjugate_bruteforce(inst, m, GridSpec{100});
    const auto fine = conjugate_bruteforce(inst, m, GridSpec{400});
    CHECK(j - coarse.value <= coarse.resolution_bound + 1e-12);
    CHECK(j - fine.value <= fine.resolution_bound + 1e-12);
    CHECK(coarse.value <= j + 1e-9);
    CHECK(fine.value <= j + 1e-9);
    CHECK(coarse.shared_value <= coarse.value + 1e-12);
    CHECK(coarse.resolution_bound == doctest::Approx(4.0 * fine.resolution_bound));
  }
}

TEST_CASE("interchange of minimization and summation") {
  const PLQFunction fs[] = {PLQFunction::quadratic(1.0, 0.0, 1.0), PLQFunction::quadratic(1.0, -6.0, 11.0)};
  const double w[] = {1.0, 1.0};
  const auto r = interchange_check(fs, w);
  CHECK(r.value == doctest::Approx(3.0));
  CHECK(r.residual <= 1e-12);
  CHECK(interchange_check(std::span<const PLQFunction>(fs, 1), std::span<const double>(w, 1)).residual == 0.0);
  const PLQFunction unbounded[] = {PLQFunction::affine(1.0)};
  CHECK_THROWS_AS(interchange_check(unbounded, std::span<const double>(w, 1)), std::invalid_argument);
}

TEST_CASE("properness witness and certificates") {
  std::mt19937_64 rng(33);
  for (int i = 0; i < 20; ++i) {
    const ScenarioTree t = random_tree(rng);
    std::vector<SeparableIntegrand> h;
    for (std::size_t n = 0; n < t.num_nodes(); ++n) h.push_back(SeparableIntegrand::uniform(1, random_plq(rng)));
    const auto inst = FunctionalInstance::make(t, h);
    CHECK(std::isfinite(EI(inst, properness_witness(inst))));
  }
  const double mu[] = {1.0};
  const ScenarioTree single = ScenarioTree::uniform(0, 1, mu);
  const auto quad = uniform_instance(single, PLQFunction::quadratic(0.5));
  const AdaptedProcess zero(1, 1);
  const double ok_alpha[] = {0.0};
  CHECK(check_regularity_certificate(quad, zero, zero, ok_alpha).ok);
  AdaptedProcess far(1, 1, 3.0);
  const auto bad = check_regularity_certificate(quad, zero, far, ok_alpha);
  CHECK_FALSE(bad.ok);
  CHECK(bad.worst_conjugate_excess == doctest::Approx(4.5));
}
