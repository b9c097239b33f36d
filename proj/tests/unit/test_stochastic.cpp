#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "scdual/convex/calculus.hpp"
#include "scdual/functionals/functionals.hpp"
#include "scdual/stochastic/projection.hpp"
#include "scdual/stochastic/stopping.hpp"

using namespace scdual;

namespace {

ScenarioTree two_leaves() {
  const double mu[] = {0.5, 0.5};
  return ScenarioTree::uniform(1, 2, mu);
}

// Stopping times found by trying every map path -> {never, 0..T} and keeping
// those for which {τ ≤ i} is a union of time-i nodes.
std::size_t count_by_brute_force(const ScenarioTree& tree) {
  const std::size_t paths = tree.num_paths(), choices = tree.periods() + 2;
  std::vector<int> tau(paths, -1);
  std::size_t total = 0, combos = 1;
  for (std::size_t p = 0; p < paths; ++p) combos *= choices;
  for (std::size_t code = 0; code < combos; ++code) {
    std::size_t c = code;
    for (std::size_t p = 0; p < paths; ++p, c /= choices) tau[p] = static_cast<int>(c % choices) - 1;
    bool ok = true;
    for (std::size_t i = 0; i <= tree.periods() && ok; ++i) {
      for (std::size_t a = 0; a < paths && ok; ++a) {
        for (std::size_t b = 0; b < paths && ok; ++b) {
          if (tree.path_node(a, i) != tree.path_node(b, i)) continue;
          const bool sa = tau[a] >= 0 && tau[a] <= static_cast<int>(i);
          const bool sb = tau[b] >= 0 && tau[b] <= static_cast<int>(i);
          ok = sa == sb;
        }
      }
    }
    total += ok ? 1 : 0;
  }
  return total;
}

AdaptedProcess random_adapted(std::mt19937_64& rng, const ScenarioTree& tree, std::size_t d) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  AdaptedProcess v(tree.num_nodes(), d);
  for (double& x : v.data()) x = u(rng);
  return v;
}

}  // namespace

TEST_CASE("tree bookkeeping") {
  const double mu[] = {1.0, 0.5, 0.25};
  const ScenarioTree t = ScenarioTree::uniform(2, 3, mu);
  CHECK(t.num_nodes() == 13);
  CHECK(t.num_paths() == 9);
  double total = 0.0;
  for (std::size_t p = 0; p < t.num_paths(); ++p) {
    total += t.path_probability(p);
    CHECK(t.path_node(p, 0) == t.root());
    CHECK(t.path_of_leaf(t.leaf(p)) == p);
    for (std::size_t i = 0; i <= 2; ++i) {
      const auto [b, e] = t.path_range(t.path_node(p, i));
      CHECK((b <= p && p < e));
    }
  }
  CHECK(total == doctest::Approx(1.0));
  CHECK(t.nodes_at(2).size() == 9);
}

TEST_CASE("invalid trees are rejected") {
  using S = ScenarioTree::NodeSpec;
  CHECK_THROWS_AS(ScenarioTree::build({}), std::invalid_argument);
  CHECK_THROWS_AS(ScenarioTree::build({{0, std::nullopt, 1.0, 1.0}, {1, 0, 0.4, 1.0}, {1, 0, 0.4, 1.0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(ScenarioTree::build({S{0, std::nullopt, 1.0, 1.0}, S{2, 0, 1.0, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(ScenarioTree::build({S{0, std::nullopt, 1.0, 1.0}, S{0, std::nullopt, 1.0, 1.0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(ScenarioTree::build({S{0, std::nullopt, 1.0, 0.0}}), std::invalid_argument);
  // Leaves at different depths.
  CHECK_THROWS_AS(ScenarioTree::build({S{0, std::nullopt, 1.0, 1.0}, S{1, 0, 0.5, 1.0}, S{1, 0, 0.5, 1.0},
                                       S{2, 1, 1.0, 1.0}}),
                  std::invalid_argument);
}

TEST_CASE("optional projection") {
  const ScenarioTree t = two_leaves();
  RawProcess v(2, 2, 1);
  v(0, 0, 0) = 0.0;
  v(1, 0, 0) = 2.0;
  v(0, 1, 0) = 5.0;
  v(1, 1, 0) = -1.0;
  const AdaptedProcess o = optional_projection(t, v);
  CHECK(o(t.root(), 0) == doctest::Approx(1.0));
  CHECK(o(t.leaf(0), 0) == doctest::Approx(5.0));
  CHECK(o(t.leaf(1), 0) == doctest::Approx(-1.0));

  std::mt19937_64 rng(3);
  const ScenarioTree r = random_tree(rng);
  const AdaptedProcess a = random_adapted(rng, r, 2);
  const AdaptedProcess back = optional_projection(r, lift(r, a));
  for (std::size_t i = 0; i < a.data().size(); ++i) CHECK(back.data()[i] == doctest::Approx(a.data()[i]));
  CHECK(is_adapted(r, lift(r, a)));
  CHECK_FALSE(is_adapted(t, v));
  CHECK_THROWS_AS(to_adapted(t, v), std::invalid_argument);
}

TEST_CASE("projected integrands") {
  const ScenarioTree t = two_leaves();
  const auto sep = [](const PLQFunction& f) { return SeparableIntegrand::uniform(1, f); };
  LeafIntegrands h(2);
  h[0] = {sep(PLQFunction::quadratic(0.5, -1.0, 0.5)), sep(PLQFunction())};
  h[1] = {sep(PLQFunction::quadratic(0.5, 1.0, 0.5)), sep(PLQFunction())};
  auto nodes = project_integrand(t, h);
  CHECK(equal_on_probes(nodes[t.root()][0], PLQFunction::quadratic(0.5, 0.0, 0.5)));

  h[0][0] = sep(PLQFunction::indicator({0.0, 2.0}));
  h[1][0] = sep(PLQFunction::indicator({1.0, 3.0}));
  nodes = project_integrand(t, h);
  CHECK(equal_on_probes(nodes[t.root()][0], PLQFunction::indicator({1.0, 2.0})));

  h[0][0] = sep(PLQFunction::abs());
  h[1][0] = sep(PLQFunction::abs());
  nodes = project_integrand(t, h);
  CHECK(equal_on_probes(nodes[t.root()][0], PLQFunction::abs()));
}

TEST_CASE("stopping-time counts") {
  const ScenarioTree t = two_leaves();
  CHECK(count_stopping_times(t) == 5);
  CHECK(enumerate_stopping_times(t).size() == 5);
  CHECK(count_by_brute_force(t) == 5);

  std::mt19937_64 rng(4);
  for (int i = 0; i < 30; ++i) {
    RandomTreeOptions opt;
    opt.max_periods = 3;
    opt.max_leaves = 6;
    const ScenarioTree r = random_tree(rng, opt);
    const auto all = enumerate_stopping_times(r);
    CHECK(all.size() == count_stopping_times(r));
    CHECK(all.size() == count_by_brute_force(r));
    for (const auto& tau : all) CHECK(is_stopping_time(r, tau));
  }
  StoppingTime bad{{1, 0}};
  CHECK_FALSE(is_stopping_time(t, bad));
}

TEST_CASE("enumeration refuses large trees") {
  const double mu[] = {1, 1, 1, 1, 1, 1};
  const ScenarioTree big = ScenarioTree::uniform(5, 1, mu);
  CHECK_FALSE(within_enumeration_cap(big));
  CHECK_THROWS_AS(enumerate_stopping_times(big), std::length_error);
}

TEST_CASE("R1 norm by Snell envelope") {
  const double mu[] = {1.0, 1.0, 1.0};
  const ScenarioTree line = ScenarioTree::uniform(2, 1, mu);
  AdaptedProcess v(3, 1);
  v(0, 0) = 1.0;
  v(1, 0) = -4.0;
  v(2, 0) = 2.0;
  CHECK(r1_norm(line, v) == doctest::Approx(4.0));

  const ScenarioTree t = two_leaves();
  AdaptedProcess w(3, 1);
  w(t.leaf(0), 0) = 1.0;
  w(t.leaf(1), 0) = -1.0;
  CHECK(r1_norm(t, w) == doctest::Approx(1.0));

  // A case where waiting beats stopping at the root: |v_0| = 1 while the
  // expected absolute value later is 1.5.
  w(t.root(), 0) = 1.0;
  w(t.leaf(0), 0) = 3.0;
  w(t.leaf(1), 0) = 0.0;
  CHECK(r1_norm(t, w) == doctest::Approx(1.5));

  std::mt19937_64 rng(5);
  for (int i = 0; i < 40; ++i) {
    RandomTreeOptions opt;
    opt.max_periods = 4;
    opt.max_leaves = 12;
    const ScenarioTree r = random_tree(rng, opt);
    const AdaptedProcess a = random_adapted(rng, r, 1 + static_cast<std::size_t>(i % 2));
    CHECK(std::abs(r1_norm(r, a) - r1_norm_by_enumeration(r, a)) <= 1e-12);
  }
}

TEST_CASE("projection commutes with stopped expectations") {
  const ScenarioTree t = two_leaves();
  RawProcess v(2, 2, 1);
  v(0, 0, 0) = 0.0;
  v(1, 0, 0) = 2.0;
  CHECK(verify_projection_identity(t, v, StoppingTime{{0, 0}}) <= 1e-15);
  const auto e = stopped_expectation(t, v, StoppingTime{{0, 0}});
  CHECK(e[0] == doctest::Approx(1.0));

  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    const ScenarioTree r = random_tree(rng);
    RawProcess raw(r.num_paths(), r.periods() + 1, 2);
    for (std::size_t p = 0; p < r.num_paths(); ++p) {
      for (std::size_t s = 0; s <= r.periods(); ++s) {
        for (std::size_t k = 0; k < 2; ++k) raw(p, s, k) = u(rng);
      }
    }
    for_each_stopping_time(r, [&](const StoppingTime& tau) { CHECK(verify_projection_identity(r, raw, tau) <= 1e-12); });
  }
}
