#pragma once

// Variational-inequality machinery for the followers' game at a fixed price:
// the game map, projections, the Armijo search and the Solodov-Svaiter
// hyperplane projection solver.

#include <functional>
#include <span>
#include <vector>

#include "pevgame/model.hpp"

namespace pevgame {

struct SolverConfig {
  double tol = 1e-8;   ///< stop when ||r(x)|| <= tol
  int max_iter = 10000;
  double sigma = 0.3;  ///< Armijo sufficient-decrease constant
  double gamma = 0.5;  ///< backtracking ratio
  double eta0 = 1.0;   ///< first trial step

  void validate() const;
};

/// Demands with x_n above this count as interior when reading off multipliers.
inline constexpr double kInteriorThreshold = 1e-7;

struct SsIterate {
  Allocation x;
  std::vector<double> z;
  double eta = 0.0;
  double residual = 0.0;
};

struct VeSolution {
  Allocation x_star;
  double lambda = 0.0;
  int iterations = 0;
  double residual = 0.0;      ///< ||r(x_star)|| at exit
  double kkt_residual = 0.0;  ///< see kkt_residual()
};

/// F_n = s_n x_n + p - b_n.
std::vector<double> game_map(const Scenario& scenario, std::span<const double> x, double price);

/// Diagonal of dF/dx. All entries positive means F is strongly monotone.
std::vector<double> jacobian_diag(const Scenario& scenario);

/// Euclidean projection onto {x >= 0, sum(x) <= capacity}.
Allocation project_feasible(std::span<const double> y, double capacity);

/// Euclidean projection onto {x >= 0, sum(x) <= capacity, <normal, x - anchor> <= 0}.
/// Throws GeometryError when the intersection is empty.
std::vector<double> project_capped_halfspace(std::span<const double> y, double capacity,
                                             std::span<const double> normal,
                                             std::span<const double> anchor);

/// Natural residual r(x) = x - Proj_X(x - F(x)).
std::vector<double> natural_residual(const Scenario& scenario, std::span<const double> x,
                                     double price);

struct ArmijoStep {
  std::vector<double> z;
  double eta = 0.0;
};

/// Backtracks eta = eta0 * gamma^m until <F(x - eta r), r> >= sigma ||r||^2.
/// Throws ConsistencyError after 60 backtracks.
ArmijoStep armijo_search(const Scenario& scenario, std::span<const double> x,
                         std::span<const double> r, double price, const SolverConfig& cfg);

/// Shared multiplier read off the interior coordinates: max_n (b_n - s_n x_n - p), >= 0,
/// and 0 when the capacity is slack by more than kInteriorThreshold.
double recover_lambda(const Scenario& scenario, std::span<const double> x, double price);

/// Largest spread of b_n - s_n x_n - p across interior coordinates.
double lambda_spread(const Scenario& scenario, std::span<const double> x, double price);

/// Solves the followers' variational equilibrium at a fixed price.
/// `observer`, if given, sees every iterate (used to check Fejer monotonicity).
/// Throws NonConvergence when max_iter is reached.
VeSolution ss_solve(const Scenario& scenario, double price, std::span<const double> x0,
                    const SolverConfig& cfg = {},
                    const std::function<void(const SsIterate&)>& observer = {});

/// Max of the stationarity (min-map), complementarity and primal violations.
double kkt_residual(const Scenario& scenario, std::span<const double> x, double lambda,
                    double price);

}  // namespace pevgame
