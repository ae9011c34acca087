#include "pevgame/stackelberg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pevgame/errors.hpp"

namespace pevgame {

namespace {

// Phase-2 agreement with the explicit demand formula.
constexpr double kConsistencyTol = 1e-6;

double sum_of(const Allocation& x) { return std::accumulate(x.begin(), x.end(), 0.0); }

bool capacity_binds(const Scenario& scenario, const Allocation& x) {
  return sum_of(x) >= scenario.capacity() * (1.0 - 1e-9);
}

GseOutcome make_outcome(const Scenario& scenario, Allocation x, double price, double lambda) {
  GseOutcome out;
  out.x_star = std::move(x);
  out.p_star = price;
  out.lambda = lambda;
  out.revenue = grid_revenue(price, out.x_star);
  out.utilities.reserve(scenario.size());
  for (std::size_t n = 0; n < scenario.size(); ++n) {
    out.utilities.push_back(pevg_utility(scenario.pevgs[n], out.x_star[n], price));
  }
  return out;
}

}  // namespace

double GseOutcome::total_demand() const { return sum_of(x_star); }

double optimal_price(const Scenario& scenario, const VeSolution& ve, double p_used) {
  if (ve.x_star.size() != scenario.size()) throw InputError("optimal_price: length mismatch");
  // Every interior coordinate gives an estimate b_n - s_n x_n of the same price.
  // Weighting them by 1/s_n cancels the per-coordinate solver error along the face.
  bool any_interior = false;
  double weighted = 0.0;
  double weight = 0.0;
  for (std::size_t n = 0; n < scenario.size(); ++n) {
    if (ve.x_star[n] > kInteriorThreshold) {
      const auto& g = scenario.pevgs[n];
      weighted += (g.b - g.s * ve.x_star[n]) / g.s;
      weight += 1.0 / g.s;
      any_interior = true;
    }
  }
  if (!any_interior) {
    throw DegenerateScenario("optimal_price: no PEV group has positive demand at p = " +
                             std::to_string(p_used));
  }
  return std::max(weighted / weight, 0.0);
}

double binding_price_level(const Scenario& scenario) {
  std::vector<bool> active(scenario.size(), true);
  double level = 0.0;
  for (;;) {
    double weighted_b = 0.0;
    double inv_s = 0.0;
    for (std::size_t n = 0; n < scenario.size(); ++n) {
      if (!active[n]) continue;
      weighted_b += scenario.pevgs[n].b / scenario.pevgs[n].s;
      inv_s += 1.0 / scenario.pevgs[n].s;
    }
    if (inv_s == 0.0) throw DegenerateScenario("active set became empty");
    level = (weighted_b - scenario.capacity()) / inv_s;
    bool dropped = false;
    for (std::size_t n = 0; n < scenario.size(); ++n) {
      if (active[n] && scenario.pevgs[n].b <= level) {
        active[n] = false;
        dropped = true;
      }
    }
    if (!dropped) return level;
  }
}

VeSolution closed_form_ve(const Scenario& scenario, double price) {
  const double level = binding_price_level(scenario);
  VeSolution ve;
  ve.lambda = std::max(0.0, level - price);
  ve.x_star.resize(scenario.size());
  for (std::size_t n = 0; n < scenario.size(); ++n) {
    const auto& g = scenario.pevgs[n];
    ve.x_star[n] = std::max(0.0, (g.b - price - ve.lambda) / g.s);
  }
  ve.kkt_residual = kkt_residual(scenario, ve.x_star, ve.lambda, price);
  return ve;
}

GseOutcome closed_form_gse(const Scenario& scenario) {
  scenario.validate();
  const double p_star = std::max(0.0, binding_price_level(scenario));
  Allocation x(scenario.size());
  for (std::size_t n = 0; n < scenario.size(); ++n) {
    const auto& g = scenario.pevgs[n];
    x[n] = std::max(0.0, (g.b - p_star) / g.s);
  }
  auto out = make_outcome(scenario, std::move(x), p_star, 0.0);
  out.lambda_initial = std::max(0.0, p_star - scenario.grid.initial_price);
  out.slack_at_initial_price = scenario.grid.initial_price > p_star;
  return out;
}

GseOutcome gse_solve(const Scenario& scenario, const SolverConfig& cfg) {
  scenario.validate();
  cfg.validate();
  const double p0 = scenario.grid.initial_price;

  // Phase 1: followers' VE at the posted price, started from their stored energy.
  Allocation start(scenario.size());
  for (std::size_t n = 0; n < scenario.size(); ++n) start[n] = scenario.pevgs[n].x_ini;
  start = project_feasible(start, scenario.capacity());

  VeSolution ve = ss_solve(scenario, p0, start, cfg);
  int iterations = ve.iterations;
  const double lambda_initial = ve.lambda;
  double p_used = p0;
  bool slack = false;

  if (!capacity_binds(scenario, ve.x_star)) {
    // Demand saturates below C at p0. Every price below the binding level
    // yields p + lambda(p) = that level, so probe at zero price.
    slack = true;
    p_used = 0.0;
    ve = ss_solve(scenario, 0.0, ve.x_star, cfg);
    iterations += ve.iterations;
  }

  // Phase 2: leader moves to the capacity-binding price.
  const double p_star = capacity_binds(scenario, ve.x_star) ? optimal_price(scenario, ve, p_used)
                                                            : 0.0;
  VeSolution at_star = ss_solve(scenario, p_star, ve.x_star, cfg);
  iterations += at_star.iterations;

  if (at_star.lambda > kConsistencyTol) {
    throw ConsistencyError("multiplier did not vanish at the optimal price (lambda = " +
                           std::to_string(at_star.lambda) + ")");
  }
  for (std::size_t n = 0; n < scenario.size(); ++n) {
    const auto& g = scenario.pevgs[n];
    const double explicit_demand = std::max(0.0, (g.b - p_star) / g.s);
    if (std::abs(at_star.x_star[n] - explicit_demand) > kConsistencyTol) {
      throw ConsistencyError("re-solved demand of PEVG " + std::to_string(n + 1) +
                             " disagrees with (b - p*)/s");
    }
  }

  auto out = make_outcome(scenario, std::move(at_star.x_star), p_star, at_star.lambda);
  out.iterations_total = iterations;
  out.lambda_initial = lambda_initial;
  out.slack_at_initial_price = slack;
  return out;
}

GseCheck check_gse(const Scenario& scenario, const GseOutcome& outcome,
                   const CheckOptions& options) {
  GseCheck check;
  const auto& x = outcome.x_star;
  const double price = outcome.p_star;
  const double capacity = scenario.capacity();
  const double total = sum_of(x);

  // Followers: unilateral deviations on a grid of the residual capacity.
  for (std::size_t n = 0; n < scenario.size(); ++n) {
    const auto& g = scenario.pevgs[n];
    const double room = std::max(0.0, capacity - (total - x[n]));
    const double base = pevg_utility(g, std::max(0.0, x[n]), price);
    const auto gain = [&](double d) { return pevg_utility(g, d, price) - base; };
    double best = gain(std::clamp((g.b - price) / g.s, 0.0, room));
    const auto steps = static_cast<long>(std::floor(room / options.demand_step));
    for (long i = 0; i <= steps; ++i) best = std::max(best, gain(i * options.demand_step));
    best = std::max(best, gain(room));
    check.follower_violation = std::max(check.follower_violation, best);
  }

  // Leader: price deviations against re-equilibrated followers.
  double max_b = 0.0;
  for (const auto& g : scenario.pevgs) max_b = std::max(max_b, g.b);
  const auto steps = static_cast<long>(std::floor(max_b / options.price_step));
  for (long i = 0; i <= steps; ++i) {
    const double p = i * options.price_step;
    const VeSolution ve = closed_form_ve(scenario, p);
    const double gain = grid_revenue(p, ve.x_star) - outcome.revenue;
    check.unrestricted_leader_gain = std::max(check.unrestricted_leader_gain, gain);
    if (capacity_binds(scenario, ve.x_star)) {
      check.leader_violation = std::max(check.leader_violation, gain);
    }
  }

  check.max_violation = std::max(check.follower_violation, check.leader_violation);
  check.pass = feasible(scenario, x, options.tol) && check.max_violation <= options.tol;
  return check;
}

}  // namespace pevgame
