#pragma once

// Monte-Carlo experiment harness: random scenario generation, batch runners
// (OpenMP and a serial reference), CSV records and figure data files.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "pevgame/baselines.hpp"
#include "pevgame/dynamics.hpp"
#include "pevgame/model.hpp"
#include "pevgame/vi.hpp"

namespace pevgame {

enum class ExperimentKind { Solve, SweepN, SweepCapacity, Compare, Dynamic };

std::string to_string(ExperimentKind kind);
/// Accepts the CLI spellings: solve, sweep-n, sweep-capacity, compare, dynamic.
std::optional<ExperimentKind> parse_kind(std::string_view text);

struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::SweepN;
  int runs = 1000;
  std::vector<std::size_t> n_values;
  std::vector<double> capacities;
  std::filesystem::path output_path = "out";
  std::uint64_t seed = 1;

  double initial_price = 17.0;
  double b_lo = 35.0, b_hi = 65.0;
  double s_lo = 1.0, s_hi = 2.0;

  SolverConfig solver;
  PsoConfig pso;
  bool redistribute_ed = false;

  TransitionConfig transition;
  int horizon = 8;

  /// Scenario for kind = solve.
  std::optional<Scenario> scenario;

  /// Fills kind-specific defaults for empty lists.
  void apply_defaults();
  void validate() const;
};

/// Per-run generator seed: splitmix64(splitmix64(seed) xor run).
std::uint64_t run_seed(std::uint64_t seed, std::uint64_t run);

/// b ~ U[b_lo, b_hi], s ~ U[s_lo, s_hi], drawn pairwise in group order from
/// run_seed(spec.seed, run); a smaller N is a prefix of a larger one.
Scenario random_scenario(const ExperimentSpec& spec, std::size_t groups, double capacity,
                         std::uint64_t run);

struct RunRecord {
  int run = 0;
  std::size_t n = 0;
  double capacity = 0.0;
  double p_star = 0.0;
  double lambda = 0.0;
  int iterations = 0;
  double sum_x = 0.0;
  std::vector<double> x;
  std::vector<double> u;
  // Present for kind = compare and dynamic.
  std::vector<double> pso_u;
  std::vector<double> ed_u;
  double pso_sum_x = 0.0;
  double ed_sum_x = 0.0;

  bool failed = false;
  int exit_code = 0;  ///< 2 non-convergence, 3 consistency, 1 input
  std::string error;

  bool has_baselines() const { return !pso_u.empty(); }
  double utility() const;
  double pso_utility() const;
  double ed_utility() const;
};

/// Solves one scenario (and, when `baselines`, PSO and ED at p*). Never throws
/// for solver failures: they are captured in the record.
RunRecord solve_record(const ExperimentSpec& spec, const Scenario& scenario, int run,
                       bool baselines);

/// All runs of one (N, C) cell. The OpenMP version distributes runs across
/// `workers` threads (0 = runtime default) and must match the serial one exactly.
std::vector<RunRecord> run_cell(const ExperimentSpec& spec, std::size_t groups,
                                double capacity, bool baselines, int workers = 0);
std::vector<RunRecord> run_cell_serial(const ExperimentSpec& spec, std::size_t groups,
                                       double capacity, bool baselines);

/// Records for a dynamic experiment: `runs` independent horizons, one record
/// per (run, slot), grouped by slot.
std::vector<std::vector<RunRecord>> run_dynamic(const ExperimentSpec& spec, int workers = 0);

// CSV layout: run,N,C,p_star,lambda,iters,sum_x,x_1..x_N,u_1..u_N and, with
// baselines, pso_u_1..pso_u_N,ed_u_1..ed_u_N,pso_sum_x,ed_sum_x.
std::string csv_header(std::size_t n, bool baselines);
std::string csv_row(const RunRecord& record);
/// Parses rows written by csv_row (header line included). Throws InputError.
std::vector<RunRecord> parse_records_csv(std::string_view text);

struct ExperimentResult {
  std::vector<std::filesystem::path> files;
  int failed_runs = 0;
  int exit_code = 0;  ///< worst per-run code
};

/// Runs the experiment and writes its CSV, aggregate and plot-data files
/// under spec.output_path. Output bytes depend only on the spec.
ExperimentResult run_experiment(const ExperimentSpec& spec, int workers = 0);

}  // namespace pevgame
