#pragma once

// Leader/follower layer: the followers' variational equilibrium at a price,
// the grid's capacity-binding optimal price, a closed-form active-set route
// to the same equilibrium, and a brute-force equilibrium checker.

#include <vector>

#include "pevgame/model.hpp"
#include "pevgame/vi.hpp"

namespace pevgame {

struct GseOutcome {
  Allocation x_star;
  double p_star = 0.0;
  double lambda = 0.0;  ///< shared multiplier at p_star, ~0
  double revenue = 0.0;
  std::vector<double> utilities;
  int iterations_total = 0;

  double lambda_initial = 0.0;  ///< multiplier of the followers' game at p0
  /// Capacity was slack at p0, so the price was read off a zero-price probe instead.
  bool slack_at_initial_price = false;

  double total_demand() const;
};

/// p* = b_n - s_n x_n on the interior coordinates of a VE computed at p_used.
/// Equals p_used + lambda whenever the capacity binds.
double optimal_price(const Scenario& scenario, const VeSolution& ve, double p_used);

/// The price level L at which sum_n max(0, (b_n - L)/s_n) = C, by active-set elimination.
double binding_price_level(const Scenario& scenario);

/// Followers' VE at a fixed price from the binding level: lambda = max(0, L - p).
VeSolution closed_form_ve(const Scenario& scenario, double price);

/// Analytic equilibrium: p* = max(0, L), x_n* = max(0, (b_n - p*)/s_n).
GseOutcome closed_form_gse(const Scenario& scenario);

/// Two-phase iterative equilibrium search driven by the hyperplane projection solver.
/// Throws NonConvergence or ConsistencyError.
GseOutcome gse_solve(const Scenario& scenario, const SolverConfig& cfg = {});

struct GseCheck {
  bool pass = false;
  double max_violation = 0.0;       ///< max(follower, leader)
  double follower_violation = 0.0;  ///< best unilateral utility gain of any group
  double leader_violation = 0.0;    ///< best revenue gain over capacity-binding prices
  /// Best revenue gain over every grid price, including those where the followers
  /// leave capacity unsold. Diagnostic only.
  double unrestricted_leader_gain = 0.0;
};

struct CheckOptions {
  double price_step = 0.01;
  double demand_step = 0.01;
  double tol = 1e-6;
};

GseCheck check_gse(const Scenario& scenario, const GseOutcome& outcome,
                   const CheckOptions& options = {});

}  // namespace pevgame
