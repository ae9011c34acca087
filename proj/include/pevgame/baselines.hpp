#pragma once

// Comparison allocators evaluated at a fixed price: equal distribution and a
// global-best particle swarm.

#include <cstdint>
#include <functional>
#include <vector>

#include "pevgame/model.hpp"

namespace pevgame {

/// Equal split C/N, capped at each group's satiation demand. With `redistribute`
/// the capped-off remainder is re-split among uncapped groups until none is left.
Allocation ed_allocate(const Scenario& scenario, double price, bool redistribute = false);

struct PsoConfig {
  int particles = 40;
  int iterations = 200;
  double inertia = 0.72;
  double cognitive = 1.49;
  double social = 1.49;
  std::uint64_t seed = 1;

  void validate() const;
};

struct PsoTrace {
  std::vector<double> best_utility;  ///< global best after each iteration
  double best_initial_utility = 0.0;
};

/// Maximizes joint_utility at `price` over the feasible set. Positions are
/// repaired by projection after every move; deterministic for a given seed.
Allocation pso_allocate(const Scenario& scenario, double price, const PsoConfig& cfg = {},
                        PsoTrace* trace = nullptr);

}  // namespace pevgame
