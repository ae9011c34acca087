#include "pevgame/summary.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "pevgame/errors.hpp"

namespace pevgame {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string stat_cells(const Stat& s) {
  return "," + fmt(s.mean) + "," + fmt(s.sd) + "," + fmt(s.min) + "," + fmt(s.max);
}

}  // namespace

Stat describe(const std::vector<double>& values) {
  Stat s;
  s.count = values.size();
  if (values.empty()) return s;
  double total = 0.0;
  for (double v : values) total += v;
  s.mean = total / static_cast<double>(values.size());
  double sq = 0.0;
  for (double v : values) sq += (v - s.mean) * (v - s.mean);
  s.sd = values.size() > 1 ? std::sqrt(sq / static_cast<double>(values.size() - 1)) : 0.0;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  s.min = *lo;
  s.max = *hi;
  return s;
}

std::vector<CellSummary> summarize(const std::vector<RunRecord>& records) {
  if (records.empty()) throw InputError("summarize: no records");

  struct Columns {
    std::vector<double> p, x, u, it, pso, ed;
  };
  std::vector<CellSummary> cells;
  std::vector<Columns> columns;
  for (const auto& r : records) {
    auto it = std::find_if(cells.begin(), cells.end(), [&](const CellSummary& c) {
      return c.n == r.n && c.capacity == r.capacity;
    });
    if (it == cells.end()) {
      cells.push_back(CellSummary{});
      cells.back().n = r.n;
      cells.back().capacity = r.capacity;
      columns.emplace_back();
      it = cells.end() - 1;
    }
    auto& cell = *it;
    auto& col = columns[it - cells.begin()];
    ++cell.runs;
    if (r.failed) {
      ++cell.failed;
      continue;
    }
    col.p.push_back(r.p_star);
    col.x.push_back(r.sum_x);
    col.u.push_back(r.utility());
    col.it.push_back(static_cast<double>(r.iterations));
    if (r.has_baselines()) {
      cell.has_baselines = true;
      col.pso.push_back(r.pso_utility());
      col.ed.push_back(r.ed_utility());
    }
  }
  for (std::size_t i = 0; i < cells.size(); ++i) {
    cells[i].p_star = describe(columns[i].p);
    cells[i].sum_x = describe(columns[i].x);
    cells[i].utility = describe(columns[i].u);
    cells[i].iterations = describe(columns[i].it);
    cells[i].pso_utility = describe(columns[i].pso);
    cells[i].ed_utility = describe(columns[i].ed);
  }
  return cells;
}

std::string summary_csv_header() {
  std::string s = "N,C,runs,failed";
  for (const char* name : {"p_star", "sum_x", "utility", "iters", "pso_utility", "ed_utility"}) {
    for (const char* stat : {"mean", "sd", "min", "max"}) {
      s += std::string(",") + name + "_" + stat;
    }
  }
  return s + "\n";
}

std::string summary_csv_row(const CellSummary& c) {
  std::string s = std::to_string(c.n) + "," + fmt(c.capacity) + "," + std::to_string(c.runs) +
                  "," + std::to_string(c.failed);
  s += stat_cells(c.p_star) + stat_cells(c.sum_x) + stat_cells(c.utility) +
       stat_cells(c.iterations) + stat_cells(c.pso_utility) + stat_cells(c.ed_utility);
  return s + "\n";
}

}  // namespace pevgame
