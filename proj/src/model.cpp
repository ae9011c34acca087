#include "pevgame/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "pevgame/errors.hpp"

namespace pevgame {

namespace {

void require_length(const Scenario& scenario, std::span<const double> x) {
  if (x.size() != scenario.size()) {
    throw InputError("allocation has " + std::to_string(x.size()) +
                     " entries but the scenario has " + std::to_string(scenario.size()) +
                     " PEV groups");
  }
}

}  // namespace

void PevgParams::validate() const {
  if (!(b > 0.0) || !std::isfinite(b)) throw InputError("pevg.b must be > 0");
  if (!(s > 0.0) || !std::isfinite(s)) throw InputError("pevg.s must be > 0");
  if (!(x_ini >= 0.0)) throw InputError("pevg.x_ini must be >= 0");
  if (x_ini > b) throw InputError("pevg.x_ini must not exceed pevg.b");
}

void GridParams::validate() const {
  if (!(capacity > 0.0) || !std::isfinite(capacity)) throw InputError("capacity must be > 0");
  if (!(initial_price >= 0.0) || !std::isfinite(initial_price)) {
    throw InputError("initial_price must be >= 0");
  }
}

void Scenario::validate() const {
  grid.validate();
  if (pevgs.empty()) throw InputError("scenario needs at least one pevg");
  for (std::size_t n = 0; n < pevgs.size(); ++n) {
    try {
      pevgs[n].validate();
    } catch (const InputError& e) {
      throw InputError(std::string(e.what()) + " (pevg #" + std::to_string(n + 1) + ")");
    }
  }
}

double pevg_utility(const PevgParams& params, double x, double price) {
  if (x < 0.0) throw InputError("demand must be nonnegative");
  return params.b * x - 0.5 * params.s * x * x - price * x;
}

double grid_revenue(double price, std::span<const double> x) {
  return price * std::accumulate(x.begin(), x.end(), 0.0);
}

double joint_utility(const Scenario& scenario, std::span<const double> x, double price) {
  require_length(scenario, x);
  double total = 0.0;
  for (std::size_t n = 0; n < x.size(); ++n) {
    total += pevg_utility(scenario.pevgs[n], x[n], price);
  }
  return total;
}

bool feasible(const Scenario& scenario, std::span<const double> x, double tol) {
  if (x.size() != scenario.size()) return false;
  double sum = 0.0;
  for (double v : x) {
    if (v < -tol) return false;
    sum += v;
  }
  return sum <= scenario.capacity() + tol;
}

bool capacity_condition(const Scenario& scenario, std::span<const double> x, double price) {
  require_length(scenario, x);
  double sum_b = 0.0;
  double sum_sx = 0.0;
  for (std::size_t n = 0; n < x.size(); ++n) {
    sum_b += scenario.pevgs[n].b;
    sum_sx += scenario.pevgs[n].s * x[n];
  }
  return sum_b > price * static_cast<double>(x.size()) + sum_sx;
}

double satiation_demand(const PevgParams& params, double price) {
  return std::max(0.0, (params.b - price) / params.s - params.x_ini);
}

}  // namespace pevgame
