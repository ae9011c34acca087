#include "pevgame/baselines.hpp"

#include <algorithm>
#include <limits>
#include <random>

#include "pevgame/errors.hpp"
#include "pevgame/vi.hpp"

namespace pevgame {

Allocation ed_allocate(const Scenario& scenario, double price, bool redistribute) {
  if (scenario.pevgs.empty()) throw InputError("ed_allocate: no PEV groups");
  const std::size_t n_groups = scenario.size();
  Allocation x(n_groups, 0.0);
  std::vector<double> cap(n_groups);
  for (std::size_t n = 0; n < n_groups; ++n) cap[n] = satiation_demand(scenario.pevgs[n], price);

  const double share = scenario.capacity() / static_cast<double>(n_groups);
  for (std::size_t n = 0; n < n_groups; ++n) x[n] = std::min(share, cap[n]);
  if (!redistribute) return x;

  double left = scenario.capacity();
  for (double v : x) left -= v;
  while (left > 1e-12 * scenario.capacity()) {
    std::size_t open = 0;
    for (std::size_t n = 0; n < n_groups; ++n) open += x[n] < cap[n];
    if (open == 0) break;
    const double extra = left / static_cast<double>(open);
    for (std::size_t n = 0; n < n_groups; ++n) {
      if (x[n] >= cap[n]) continue;
      const double add = std::min(extra, cap[n] - x[n]);
      x[n] += add;
      left -= add;
    }
  }
  return x;
}

void PsoConfig::validate() const {
  if (particles < 1) throw InputError("pso particles must be >= 1");
  if (iterations < 1) throw InputError("pso iterations must be >= 1");
  if (!(inertia > 0.0) || !(cognitive > 0.0) || !(social > 0.0)) {
    throw InputError("pso inertia, cognitive and social weights must be > 0");
  }
}

Allocation pso_allocate(const Scenario& scenario, double price, const PsoConfig& cfg,
                        PsoTrace* trace) {
  cfg.validate();
  scenario.validate();
  const std::size_t dim = scenario.size();
  const double capacity = scenario.capacity();
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  // Search box per coordinate: nothing above min(C, satiation at price 0) helps.
  std::vector<double> upper(dim);
  for (std::size_t n = 0; n < dim; ++n) {
    upper[n] = std::min(capacity, scenario.pevgs[n].b / scenario.pevgs[n].s);
  }

  struct Particle {
    std::vector<double> pos, vel, best;
    double best_value;
  };
  std::vector<Particle> swarm(cfg.particles);
  std::vector<double> global_best;
  double global_value = -std::numeric_limits<double>::infinity();

  for (auto& p : swarm) {
    p.pos.resize(dim);
    p.vel.resize(dim);
    for (std::size_t n = 0; n < dim; ++n) {
      p.pos[n] = unit(rng) * upper[n];
      p.vel[n] = (unit(rng) - 0.5) * upper[n] * 0.2;
    }
    p.pos = project_feasible(p.pos, capacity);
    p.best = p.pos;
    p.best_value = joint_utility(scenario, p.pos, price);
    if (p.best_value > global_value) {
      global_value = p.best_value;
      global_best = p.best;
    }
  }
  if (trace) {
    trace->best_initial_utility = global_value;
    trace->best_utility.clear();
    trace->best_utility.reserve(cfg.iterations);
  }

  for (int it = 0; it < cfg.iterations; ++it) {
    for (auto& p : swarm) {
      for (std::size_t n = 0; n < dim; ++n) {
        const double r1 = unit(rng);
        const double r2 = unit(rng);
        p.vel[n] = cfg.inertia * p.vel[n] + cfg.cognitive * r1 * (p.best[n] - p.pos[n]) +
                   cfg.social * r2 * (global_best[n] - p.pos[n]);
        p.vel[n] = std::clamp(p.vel[n], -upper[n], upper[n]);
        p.pos[n] += p.vel[n];
      }
      p.pos = project_feasible(p.pos, capacity);
      const double value = joint_utility(scenario, p.pos, price);
      if (value > p.best_value) {
        p.best_value = value;
        p.best = p.pos;
      }
    }
    // Synchronous global-best update.
    for (const auto& p : swarm) {
      if (p.best_value > global_value) {
        global_value = p.best_value;
        global_best = p.best;
      }
    }
    if (trace) trace->best_utility.push_back(global_value);
  }
  return global_best;
}

}  // namespace pevgame
