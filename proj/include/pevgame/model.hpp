#pragma once

// Domain types of the grid-to-vehicle pricing game and the payoff functions
// shared by every solver.

#include <cstdint>
#include <span>
#include <vector>

namespace pevgame {

/// Demand vector in MWh, one entry per PEV group, indexed like Scenario::pevgs.
using Allocation = std::vector<double>;

inline constexpr double kFeasibilityTol = 1e-9;

/// One follower: a group of plug-in electric vehicles.
struct PevgParams {
  double b = 0.0;      ///< battery capacity, MWh
  double s = 0.0;      ///< satisfaction parameter
  double x_ini = 0.0;  ///< energy already stored, MWh

  void validate() const;
};

struct GridParams {
  double capacity = 0.0;       ///< energy C the grid can sell, MWh
  double initial_price = 0.0;  ///< p0, USD/MWh

  void validate() const;
};

struct Scenario {
  GridParams grid;
  std::vector<PevgParams> pevgs;
  std::uint64_t seed = 0;

  std::size_t size() const { return pevgs.size(); }
  double capacity() const { return grid.capacity; }

  /// Throws InputError naming the first violated invariant.
  void validate() const;
};

/// b*x - s*x^2/2 - p*x. Negative demand is rejected.
double pevg_utility(const PevgParams& params, double x, double price);

/// p * sum(x).
double grid_revenue(double price, std::span<const double> x);

/// Sum of pevg_utility over all groups.
double joint_utility(const Scenario& scenario, std::span<const double> x, double price);

/// x >= -tol componentwise and sum(x) <= C + tol.
bool feasible(const Scenario& scenario, std::span<const double> x,
              double tol = kFeasibilityTol);

/// Non-trivial game condition: sum(b) > p*N + sum(s*x).
bool capacity_condition(const Scenario& scenario, std::span<const double> x, double price);

/// Demand beyond which a group's utility declines at this price,
/// reduced by what is already in the battery. Never negative.
double satiation_demand(const PevgParams& params, double price);

}  // namespace pevgame
