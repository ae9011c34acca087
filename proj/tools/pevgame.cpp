// pevgame: command-line front end for the grid-to-vehicle pricing game.
//
// Exit codes: 0 success, 1 input error, 2 solver non-convergence,
// 3 internal consistency failure.

#include <cstdio>
#include <iostream>
#include <variant>

#include "CLI11.hpp"
#include "pevgame/config_file.hpp"
#include "pevgame/errors.hpp"
#include "pevgame/experiment.hpp"
#include "pevgame/stackelberg.hpp"
#include "pevgame/summary.hpp"

namespace {

using namespace pevgame;

struct CommonOptions {
  std::uint64_t seed = 1;
  int runs = 1000;
  std::string out = "out";
  double tol = 1e-8;
  int max_iter = 10000;
  bool redistribute_ed = false;
  int threads = 0;
  std::string config;
  std::vector<std::size_t> n_values;
  std::vector<double> capacities;
  int slots = 8;
  double mean_capacity = 66.0;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--seed", o.seed, "RNG seed");
  cmd->add_option("--runs", o.runs, "Monte-Carlo repetitions")->check(CLI::PositiveNumber);
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--tol", o.tol, "residual tolerance of the projection solver")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--max-iter", o.max_iter, "iteration cap of the projection solver")
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--redistribute-ed", o.redistribute_ed,
                "re-split capacity left over by satiated groups in the ED baseline");
  cmd->add_option("--threads", o.threads, "worker threads (0 = all)");
}

void add_experiment(CLI::App* cmd, CommonOptions& o) {
  add_common(cmd, o);
  cmd->add_option("--config", o.config, "experiment file")->check(CLI::ExistingFile);
  cmd->add_option("--n-values", o.n_values, "numbers of PEV groups")->delimiter(',');
  cmd->add_option("--capacities", o.capacities, "grid capacities in MWh")->delimiter(',');
}

// Explicit flags override the experiment file.
ExperimentSpec build_spec(CLI::App* cmd, const CommonOptions& o, ExperimentKind kind) {
  ExperimentSpec spec;
  if (!o.config.empty()) {
    spec = load_experiment(o.config);
    if (spec.kind != kind) {
      throw InputError(o.config + ": kind = " + to_string(spec.kind) + " but the subcommand is " +
                       to_string(kind));
    }
  }
  spec.kind = kind;
  if (cmd->count("--seed")) spec.seed = o.seed;
  if (cmd->count("--runs")) spec.runs = o.runs;
  if (cmd->count("--out") || o.config.empty()) spec.output_path = o.out;
  if (cmd->count("--tol")) spec.solver.tol = o.tol;
  if (cmd->count("--max-iter")) spec.solver.max_iter = o.max_iter;
  if (o.redistribute_ed) spec.redistribute_ed = true;
  if (cmd->count("--n-values")) spec.n_values = o.n_values;
  if (cmd->count("--capacities")) spec.capacities = o.capacities;
  if (kind == ExperimentKind::Dynamic) {
    if (cmd->count("--slots")) spec.horizon = o.slots;
    if (cmd->count("--mean-capacity")) spec.transition.mean_capacity = o.mean_capacity;
  }
  spec.apply_defaults();
  spec.validate();
  return spec;
}

int report(const ExperimentResult& result) {
  for (const auto& f : result.files) std::cout << f.string() << "\n";
  if (result.failed_runs > 0) {
    std::cerr << result.failed_runs << " run(s) failed; see failures.csv\n";
  }
  return result.exit_code;
}

void print_outcome(const Scenario& sc, const GseOutcome& out) {
  std::printf("p_star      %.10g USD/MWh\n", out.p_star);
  std::printf("lambda      %.3g (at p0: %.10g)\n", out.lambda, out.lambda_initial);
  std::printf("revenue     %.10g USD\n", out.revenue);
  std::printf("sum_x       %.10g of %.10g MWh\n", out.total_demand(), sc.capacity());
  std::printf("iterations  %d\n", out.iterations_total);
  if (out.slack_at_initial_price) {
    std::printf("warning     capacity is slack at the initial price; price lowered to the binding level\n");
  }
  for (std::size_t n = 0; n < sc.size(); ++n) {
    std::printf("pevg %-3zu   x = %.10g  u = %.10g\n", n + 1, out.x_star[n], out.utilities[n]);
  }
}

int run_solve(CLI::App* cmd, const CommonOptions& o, const std::string& file) {
  ExperimentSpec spec;
  auto loaded = load_config(file);
  if (auto* sc = std::get_if<Scenario>(&loaded)) {
    spec.kind = ExperimentKind::Solve;
    spec.scenario = *sc;
    spec.seed = sc->seed;
  } else {
    spec = std::get<ExperimentSpec>(loaded);
    if (spec.kind != ExperimentKind::Solve) {
      throw InputError(file + ": solve expects a scenario or a kind = solve experiment");
    }
  }
  if (cmd->count("--seed")) spec.seed = o.seed;
  if (cmd->count("--tol")) spec.solver.tol = o.tol;
  if (cmd->count("--max-iter")) spec.solver.max_iter = o.max_iter;
  if (o.redistribute_ed) spec.redistribute_ed = true;
  spec.output_path = o.out;
  spec.validate();

  if (!capacity_condition(*spec.scenario, Allocation(spec.scenario->size(), 0.0),
                          spec.scenario->grid.initial_price)) {
    std::cerr << "warning: total battery capacity does not exceed p0 * N\n";
  }
  const GseOutcome out = gse_solve(*spec.scenario, spec.solver);
  print_outcome(*spec.scenario, out);
  const GseCheck check = check_gse(*spec.scenario, out);
  std::printf("gse check   %s (max violation %.3g)\n", check.pass ? "pass" : "FAIL",
              check.max_violation);
  if (cmd->count("--out")) report(run_experiment(spec, o.threads));
  return check.pass ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Grid-to-vehicle Stackelberg pricing game: solver and experiment runner"};
  app.require_subcommand(1);

  CommonOptions solve_opts;
  std::string scenario_file;
  auto* solve = app.add_subcommand("solve", "solve one scenario file");
  solve->add_option("scenario", scenario_file, "scenario file")->required()->check(CLI::ExistingFile);
  add_common(solve, solve_opts);

  struct Sub {
    ExperimentKind kind;
    const char* name;
    const char* help;
  };
  const Sub subs[] = {
      {ExperimentKind::SweepN, "sweep-n", "mean price and iterations versus the number of groups"},
      {ExperimentKind::SweepCapacity, "sweep-capacity", "mean price versus grid capacity"},
      {ExperimentKind::Compare, "compare", "proposed allocation against PSO and equal distribution"},
      {ExperimentKind::Dynamic, "dynamic", "multi-slot horizon with random state transitions"},
  };
  std::vector<CommonOptions> opts(std::size(subs));
  std::vector<CLI::App*> cmds;
  for (std::size_t i = 0; i < std::size(subs); ++i) {
    auto* cmd = app.add_subcommand(subs[i].name, subs[i].help);
    add_experiment(cmd, opts[i]);
    if (subs[i].kind == ExperimentKind::Dynamic) {
      cmd->add_option("--slots", opts[i].slots, "number of time slots")->check(CLI::PositiveNumber);
      cmd->add_option("--mean-capacity", opts[i].mean_capacity, "average grid energy per slot")
          ->check(CLI::PositiveNumber);
    }
    cmds.push_back(cmd);
  }

  CLI11_PARSE(app, argc, argv);

  try {
    if (*solve) return run_solve(solve, solve_opts, scenario_file);
    for (std::size_t i = 0; i < cmds.size(); ++i) {
      if (*cmds[i]) {
        const auto spec = build_spec(cmds[i], opts[i], subs[i].kind);
        return report(run_experiment(spec, opts[i].threads));
      }
    }
  } catch (const NonConvergence& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const DegenerateScenario& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
