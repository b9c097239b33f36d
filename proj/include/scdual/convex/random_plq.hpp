#pragma once

#include <random>

#include "scdual/convex/plq.hpp"

namespace scdual {

/// Knobs for the randomized PLQ generator used by the fuzz suites.
struct RandomPLQOptions {
  int max_breakpoints = 4;
  double span = 5.0;  // breakpoints and finite domain ends lie in [-span, span]
  double finite_end_prob = 0.35;
  double linear_piece_prob = 0.35;
  double max_curvature = 2.0;
  double point_domain_prob = 0.0;
  bool full_domain = false;
  bool bounded_domain = false;
  bool strongly_convex = false;
};

/// A valid PLQ function built by integrating nondecreasing slopes, so that
/// convexity and continuity hold by construction.
PLQFunction random_plq(std::mt19937_64& rng, const RandomPLQOptions& options = {});

}  // namespace scdual
