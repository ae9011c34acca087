#include "pevgame/dynamics.hpp"

#include <algorithm>
#include <exception>
#include <string>

#include "pevgame/errors.hpp"

#ifdef PEVGAME_HAVE_OPENMP
#include <omp.h>
#endif

namespace pevgame {

namespace {

SlotState draw_state(const TransitionConfig& cfg, int t, StateRng& rng) {
  std::uniform_real_distribution<double> range(cfg.range_lo, cfg.range_hi);
  std::uniform_real_distribution<double> satisfaction(cfg.s_lo, cfg.s_hi);
  SlotState state;
  state.t = t;
  state.capacity = range(rng) * cfg.mean_capacity;
  state.pevgs.resize(cfg.groups);
  for (auto& g : state.pevgs) {
    g.b = std::clamp(range(rng) * cfg.mean_battery, cfg.battery_floor, cfg.battery_ceiling);
    g.s = satisfaction(rng);
  }
  return state;
}

const SlotState& scheduled(const TransitionConfig& cfg, int t) {
  if (t < 0 || static_cast<std::size_t>(t) >= cfg.schedule.size()) {
    throw InputError("transition schedule exhausted at slot " + std::to_string(t));
  }
  return cfg.schedule[t];
}

GseOutcome solve_slot(const SlotState& state, const TransitionConfig& cfg,
                      const SolverConfig& solver_cfg) {
  const std::string where = "slot " + std::to_string(state.t) + ": ";
  try {
    return gse_solve(slot_scenario(state, cfg.initial_price, cfg.seed), solver_cfg);
  } catch (const NonConvergence& e) {
    throw NonConvergence(where + e.what(), e.last_iterate(), e.residual(), e.iterations());
  } catch (const ConsistencyError& e) {
    throw ConsistencyError(where + e.what());
  } catch (const InputError& e) {
    throw InputError(where + e.what());
  }
}

}  // namespace

void TransitionConfig::validate() const {
  if (mode == TransitionMode::Schedule) {
    if (schedule.empty()) throw InputError("transition.mode = schedule needs slot entries");
    const std::size_t n = schedule.front().pevgs.size();
    for (const auto& s : schedule) {
      if (!(s.capacity > 0.0)) throw InputError("slot capacity must be > 0");
      if (s.pevgs.size() != n || n == 0) {
        throw InputError("all schedule slots must list the same nonzero number of PEV groups");
      }
      for (const auto& g : s.pevgs) g.validate();
    }
    return;
  }
  if (!(range_lo < range_hi) || !(range_lo > 0.0)) throw InputError("transition.range must satisfy 0 < lo < hi");
  if (!(mean_capacity > 0.0)) throw InputError("transition.mean_capacity must be > 0");
  if (!(mean_battery > 0.0)) throw InputError("transition.mean_battery must be > 0");
  if (!(battery_floor > 0.0) || !(battery_floor <= battery_ceiling)) {
    throw InputError("transition battery bounds must satisfy 0 < floor <= ceiling");
  }
  if (!(s_lo > 0.0) || !(s_lo <= s_hi)) throw InputError("satisfaction range must satisfy 0 < lo <= hi");
  if (groups == 0) throw InputError("transition needs at least one PEV group");
}

SlotState initial_state(const TransitionConfig& cfg, StateRng& rng) {
  if (cfg.mode == TransitionMode::Schedule) {
    SlotState s = scheduled(cfg, 0);
    s.t = 0;
    return s;
  }
  return draw_state(cfg, 0, rng);
}

SlotState state_transition(const TransitionConfig& cfg, const SlotState& prev,
                           const GseOutcome& /*outcome*/, StateRng& rng) {
  const int next = prev.t + 1;
  if (cfg.mode == TransitionMode::Schedule) {
    SlotState s = scheduled(cfg, next);
    s.t = next;
    return s;
  }
  return draw_state(cfg, next, rng);
}

Scenario slot_scenario(const SlotState& state, double initial_price, std::uint64_t seed) {
  Scenario sc;
  sc.grid.capacity = state.capacity;
  sc.grid.initial_price = initial_price;
  sc.pevgs = state.pevgs;
  sc.seed = seed;
  return sc;
}

HorizonResult simulate_horizon(const TransitionConfig& cfg, int horizon,
                               const SolverConfig& solver_cfg, int workers) {
  if (horizon < 1) throw InputError("horizon must be >= 1");
  cfg.validate();
  HorizonResult result;
  StateRng rng(cfg.seed);

  if (cfg.mode == TransitionMode::Schedule) {
    for (int t = 0; t < horizon; ++t) {
      SlotState s = scheduled(cfg, t);
      s.t = t;
      result.states.push_back(std::move(s));
    }
    result.slots.resize(horizon);
    std::vector<std::exception_ptr> errors(horizon);
#ifdef PEVGAME_HAVE_OPENMP
    const int threads = workers > 0 ? workers : omp_get_max_threads();
#pragma omp parallel for schedule(dynamic) num_threads(threads)
#endif
    for (int t = 0; t < horizon; ++t) {
      try {
        result.slots[t] = solve_slot(result.states[t], cfg, solver_cfg);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    }
    for (const auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  } else {
    (void)workers;
    SlotState state = initial_state(cfg, rng);
    for (int t = 0; t < horizon; ++t) {
      GseOutcome outcome = solve_slot(state, cfg, solver_cfg);
      result.states.push_back(state);
      if (t + 1 < horizon) state = state_transition(cfg, state, outcome, rng);
      result.slots.push_back(std::move(outcome));
    }
  }

  for (std::size_t t = 0; t < result.slots.size(); ++t) {
    const auto& slot = result.slots[t];
    result.leader_payoff += slot.revenue;
    double slot_utility = 0.0;
    for (double u : slot.utilities) slot_utility += u;
    result.follower_payoff += slot_utility;
  }
  return result;
}

}  // namespace pevgame
