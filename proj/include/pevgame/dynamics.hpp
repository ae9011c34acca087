#pragma once

// Discrete-time feedback extension: the slot state (available energy and the
// groups' parameters) evolves between slots and each slot plays the static game.

#include <cstdint>
#include <random>
#include <vector>

#include "pevgame/model.hpp"
#include "pevgame/stackelberg.hpp"
#include "pevgame/vi.hpp"

namespace pevgame {

struct SlotState {
  int t = 0;
  double capacity = 0.0;
  std::vector<PevgParams> pevgs;
};

enum class TransitionMode { IidUniform, Schedule };

struct TransitionConfig {
  TransitionMode mode = TransitionMode::IidUniform;
  double mean_capacity = 66.0;
  double mean_battery = 55.0 / 1.5;
  double range_lo = 0.5;
  double range_hi = 1.5;
  double battery_floor = 9.9;
  double battery_ceiling = 55.0;
  double s_lo = 1.0;
  double s_hi = 2.0;
  std::size_t groups = 10;
  double initial_price = 17.0;
  std::vector<SlotState> schedule;
  std::uint64_t seed = 1;

  void validate() const;
};

using StateRng = std::mt19937_64;

/// Slot 0: first schedule entry, or a fresh draw.
SlotState initial_state(const TransitionConfig& cfg, StateRng& rng);

/// Next slot state. Schedule mode reads the next entry verbatim; iid mode draws
/// C ~ U[lo, hi] * mean_capacity, b ~ U[lo, hi] * mean_battery (clamped to the
/// battery bounds) and s ~ U[s_lo, s_hi]. The outcome is accepted but unused
/// by both modes. Throws InputError when the schedule is exhausted.
SlotState state_transition(const TransitionConfig& cfg, const SlotState& prev,
                           const GseOutcome& outcome, StateRng& rng);

Scenario slot_scenario(const SlotState& state, double initial_price, std::uint64_t seed = 0);

struct HorizonResult {
  std::vector<SlotState> states;
  std::vector<GseOutcome> slots;
  double leader_payoff = 0.0;    ///< sum_t p_t * sum_n x_n^t
  double follower_payoff = 0.0;  ///< sum_t joint utility of slot t
};

/// Plays `horizon` slots. Schedule-mode slots are solved concurrently when
/// `workers` != 1 (0 = runtime default); results do not depend on `workers`.
HorizonResult simulate_horizon(const TransitionConfig& cfg, int horizon,
                               const SolverConfig& solver_cfg = {}, int workers = 0);

}  // namespace pevgame
