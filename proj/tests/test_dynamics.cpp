#include <cmath>

#include "doctest.h"
#include "pevgame/dynamics.hpp"
#include "pevgame/errors.hpp"

using namespace pevgame;

namespace {

SlotState worked_slot() {
  SlotState s;
  s.capacity = 30;
  s.pevgs = {{40, 1, 0}, {50, 2, 0}};
  return s;
}

TransitionConfig schedule_of(std::vector<SlotState> slots) {
  TransitionConfig cfg;
  cfg.mode = TransitionMode::Schedule;
  cfg.schedule = std::move(slots);
  return cfg;
}

}  // namespace

TEST_CASE("schedule mode passes states through verbatim") {
  SlotState a = worked_slot();
  SlotState b = worked_slot();
  b.capacity = 45;
  b.pevgs[1].b = 61;
  const TransitionConfig cfg = schedule_of({a, b});
  StateRng rng(1);
  const SlotState s0 = initial_state(cfg, rng);
  CHECK(s0.capacity == 30);
  const SlotState s1 = state_transition(cfg, s0, GseOutcome{}, rng);
  CHECK(s1.t == 1);
  CHECK(s1.capacity == 45);
  CHECK(s1.pevgs[1].b == 61);
  CHECK_THROWS_AS(state_transition(cfg, s1, GseOutcome{}, rng), InputError);
}

TEST_CASE("iid draws stay in range and repeat for a seed") {
  TransitionConfig cfg;
  cfg.seed = 42;
  StateRng rng(cfg.seed), again(cfg.seed);
  SlotState s = initial_state(cfg, rng);
  SlotState t = initial_state(cfg, again);
  for (int k = 0; k < 200; ++k) {
    CHECK(s.capacity >= 33);
    CHECK(s.capacity <= 99);
    CHECK(s.pevgs.size() == 10);
    for (const auto& g : s.pevgs) {
      CHECK(g.b >= 9.9);
      CHECK(g.b <= 55);
      CHECK(g.s >= 1);
      CHECK(g.s <= 2);
    }
    CHECK(s.capacity == t.capacity);
    CHECK(s.pevgs[3].b == t.pevgs[3].b);
    s = state_transition(cfg, s, GseOutcome{}, rng);
    t = state_transition(cfg, t, GseOutcome{}, again);
  }
}

TEST_CASE("invalid transition configs are rejected") {
  TransitionConfig cfg;
  cfg.range_lo = 1.5;
  cfg.range_hi = 0.5;
  CHECK_THROWS_AS(cfg.validate(), InputError);
  CHECK_THROWS_AS(schedule_of({}).validate(), InputError);
  CHECK_THROWS_AS(simulate_horizon(TransitionConfig{}, 0), InputError);
}

TEST_CASE("eight iid slots: additive payoffs and per-slot equilibria") {
  TransitionConfig cfg;
  cfg.seed = 7;
  const HorizonResult r = simulate_horizon(cfg, 8);
  REQUIRE(r.slots.size() == 8);
  double leader = 0, follower = 0;
  for (std::size_t t = 0; t < 8; ++t) {
    const auto& slot = r.slots[t];
    CHECK(slot.lambda <= 1e-6);
    CHECK(std::abs(slot.total_demand() - r.states[t].capacity) <= 1e-6 * r.states[t].capacity);
    const Scenario sc = slot_scenario(r.states[t], cfg.initial_price);
    CHECK(check_gse(sc, slot).pass);
    leader += slot.revenue;
    double u = 0;
    for (double v : slot.utilities) u += v;
    follower += u;
  }
  CHECK(r.leader_payoff == leader);
  CHECK(r.follower_payoff == follower);

  const HorizonResult again = simulate_horizon(cfg, 8);
  CHECK(again.leader_payoff == r.leader_payoff);
  CHECK(again.slots[5].x_star == r.slots[5].x_star);
}

TEST_CASE("time-invariant schedule scales a single slot") {
  const TransitionConfig cfg = schedule_of(std::vector<SlotState>(8, worked_slot()));
  const HorizonResult r = simulate_horizon(cfg, 8);
  const GseOutcome single = gse_solve(slot_scenario(worked_slot(), 17));
  double single_u = 0;
  for (double u : single.utilities) single_u += u;
  for (const auto& slot : r.slots) CHECK(slot.x_star == single.x_star);
  CHECK(r.leader_payoff == doctest::Approx(8 * single.revenue).epsilon(1e-12));
  CHECK(r.follower_payoff == doctest::Approx(8 * single_u).epsilon(1e-12));
  CHECK(r.leader_payoff == doctest::Approx(8 * 700).epsilon(1e-9));
}

TEST_CASE("one-slot horizon is a single equilibrium") {
  TransitionConfig cfg;
  cfg.seed = 9;
  const HorizonResult r = simulate_horizon(cfg, 1);
  const GseOutcome direct = gse_solve(slot_scenario(r.states[0], cfg.initial_price));
  CHECK(r.slots[0].x_star == direct.x_star);
  CHECK(r.slots[0].p_star == direct.p_star);
  CHECK(r.leader_payoff == direct.revenue);
}

TEST_CASE("schedule results do not depend on the worker count") {
  std::vector<SlotState> slots;
  for (int t = 0; t < 8; ++t) {
    SlotState s = worked_slot();
    s.capacity = 20 + 3 * t;
    s.pevgs[0].b = 40 + t;
    slots.push_back(s);
  }
  const TransitionConfig cfg = schedule_of(slots);
  const HorizonResult serial = simulate_horizon(cfg, 8, {}, 1);
  const HorizonResult parallel = simulate_horizon(cfg, 8, {}, 4);
  CHECK(serial.leader_payoff == parallel.leader_payoff);
  CHECK(serial.follower_payoff == parallel.follower_payoff);
  for (int t = 0; t < 8; ++t) CHECK(serial.slots[t].x_star == parallel.slots[t].x_star);
}

TEST_CASE("slot failures carry the slot index") {
  SlotState s = worked_slot();
  const TransitionConfig cfg = schedule_of({s, s});
  SolverConfig tight;
  tight.max_iter = 1;
  tight.tol = 1e-14;
  try {
    simulate_horizon(cfg, 2, tight, 1);
    FAIL("expected NonConvergence");
  } catch (const NonConvergence& e) {
    CHECK(std::string(e.what()).find("slot 0") != std::string::npos);
  }
}
