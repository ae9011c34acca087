#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "pevgame/experiment.hpp"

namespace pevgame {

struct Stat {
  double mean = 0.0;
  double sd = 0.0;  ///< sample standard deviation, 0 for a single value
  double min = 0.0;
  double max = 0.0;
  std::size_t count = 0;
};

Stat describe(const std::vector<double>& values);

struct CellSummary {
  std::size_t n = 0;
  double capacity = 0.0;
  std::size_t runs = 0;
  std::size_t failed = 0;
  Stat p_star;
  Stat sum_x;
  Stat utility;     ///< joint utility of the proposed allocation
  Stat iterations;  ///< mean and max are the figure quantities
  Stat pso_utility;
  Stat ed_utility;
  bool has_baselines = false;
};

/// One summary per (N, C) cell in order of first appearance. Failed runs are
/// counted but excluded from the statistics. Throws InputError when empty.
std::vector<CellSummary> summarize(const std::vector<RunRecord>& records);

std::string summary_csv_header();
std::string summary_csv_row(const CellSummary& cell);

}  // namespace pevgame
