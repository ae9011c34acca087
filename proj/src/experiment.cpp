#include "pevgame/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <exception>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>

#include "pevgame/errors.hpp"
#include "pevgame/stackelberg.hpp"
#include "pevgame/summary.hpp"

#ifdef PEVGAME_HAVE_OPENMP
#include <omp.h>
#endif

namespace pevgame {

namespace {

constexpr std::uint64_t kPsoStream = 0x50534f5f5345454dULL;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string cell_tag(std::size_t n, double c) { return "N" + std::to_string(n) + "_C" + fmt(c); }

double sum_of(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

int thread_count(int workers) {
#ifdef PEVGAME_HAVE_OPENMP
  return workers > 0 ? workers : omp_get_max_threads();
#else
  (void)workers;
  return 1;
#endif
}

void write_file(const std::filesystem::path& path, const std::string& contents,
                ExperimentResult& result) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot write " + path.string());
  out << contents;
  result.files.push_back(path);
}

std::string records_csv(const std::vector<RunRecord>& records, std::size_t n, bool baselines) {
  std::string s = csv_header(n, baselines);
  for (const auto& r : records) {
    if (!r.failed) s += csv_row(r);
  }
  return s;
}

void note_failures(const std::vector<RunRecord>& records, std::string& failures,
                   ExperimentResult& result) {
  for (const auto& r : records) {
    if (!r.failed) continue;
    ++result.failed_runs;
    result.exit_code = std::max(result.exit_code, r.exit_code);
    std::string msg = r.error;
    std::replace(msg.begin(), msg.end(), ',', ';');
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    failures += std::to_string(r.run) + "," + std::to_string(r.n) + "," + fmt(r.capacity) +
                "," + std::to_string(r.exit_code) + "," + msg + "\n";
  }
}

std::string summary_table(const std::vector<CellSummary>& cells) {
  std::string s = summary_csv_header();
  for (const auto& c : cells) s += summary_csv_row(c);
  return s;
}

RunRecord fail_record(RunRecord r, int code, const char* what) {
  r.failed = true;
  r.exit_code = code;
  r.error = what;
  return r;
}

void add_baselines(const ExperimentSpec& spec, const Scenario& scenario, RunRecord& r,
                   double price) {
  PsoConfig pso = spec.pso;
  pso.seed = run_seed(spec.seed ^ kPsoStream, static_cast<std::uint64_t>(r.run));
  const Allocation x_pso = pso_allocate(scenario, price, pso);
  const Allocation x_ed = ed_allocate(scenario, price, spec.redistribute_ed);
  for (std::size_t n = 0; n < scenario.size(); ++n) {
    r.pso_u.push_back(pevg_utility(scenario.pevgs[n], x_pso[n], price));
    r.ed_u.push_back(pevg_utility(scenario.pevgs[n], x_ed[n], price));
  }
  r.pso_sum_x = sum_of(x_pso);
  r.ed_sum_x = sum_of(x_ed);
}

RunRecord record_from_outcome(const GseOutcome& out, int run, double capacity) {
  RunRecord r;
  r.run = run;
  r.n = out.x_star.size();
  r.capacity = capacity;
  r.p_star = out.p_star;
  r.lambda = out.lambda;
  r.iterations = out.iterations_total;
  r.sum_x = out.total_demand();
  r.x = out.x_star;
  r.u = out.utilities;
  return r;
}

// Plot data: whitespace-separated columns with a commented header.
struct Series {
  std::string header;
  std::vector<std::vector<double>> rows;

  std::string text() const {
    std::string s = "# " + header + "\n";
    for (const auto& row : rows) {
      for (std::size_t i = 0; i < row.size(); ++i) s += (i ? " " : "") + fmt(row[i]);
      s += "\n";
    }
    return s;
  }
};

const CellSummary* find_cell(const std::vector<CellSummary>& cells, std::size_t n, double c) {
  for (const auto& cell : cells) {
    if (cell.n == n && cell.capacity == c) return &cell;
  }
  return nullptr;
}

double mean_column(const std::vector<RunRecord>& records, std::size_t index,
                   const std::vector<double> RunRecord::*column) {
  double total = 0.0;
  std::size_t count = 0;
  for (const auto& r : records) {
    if (r.failed || (r.*column).size() <= index) continue;
    total += (r.*column)[index];
    ++count;
  }
  return count ? total / static_cast<double>(count) : 0.0;
}

}  // namespace

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::Solve: return "solve";
    case ExperimentKind::SweepN: return "sweep-n";
    case ExperimentKind::SweepCapacity: return "sweep-capacity";
    case ExperimentKind::Compare: return "compare";
    case ExperimentKind::Dynamic: return "dynamic";
  }
  return "?";
}

std::optional<ExperimentKind> parse_kind(std::string_view text) {
  for (auto k : {ExperimentKind::Solve, ExperimentKind::SweepN, ExperimentKind::SweepCapacity,
                 ExperimentKind::Compare, ExperimentKind::Dynamic}) {
    if (text == to_string(k)) return k;
  }
  return std::nullopt;
}

void ExperimentSpec::apply_defaults() {
  switch (kind) {
    case ExperimentKind::SweepN:
      if (n_values.empty()) n_values = {5, 10, 15, 20, 25};
      if (capacities.empty()) capacities = {99.0};
      break;
    case ExperimentKind::SweepCapacity:
      if (n_values.empty()) n_values = {10};
      if (capacities.empty()) capacities = {60.0, 80.0, 90.0};
      break;
    case ExperimentKind::Compare:
      if (n_values.empty()) n_values = {10};
      if (capacities.empty()) capacities = {99.0};
      break;
    case ExperimentKind::Dynamic:
      if (n_values.empty()) n_values = {transition.groups};
      transition.groups = n_values.front();
      break;
    case ExperimentKind::Solve:
      break;
  }
  transition.initial_price = initial_price;
  transition.seed = seed;
}

void ExperimentSpec::validate() const {
  if (runs < 1) throw InputError("runs must be >= 1");
  solver.validate();
  pso.validate();
  if (!(b_lo > 0.0 && b_lo <= b_hi)) throw InputError("b range must satisfy 0 < lo <= hi");
  if (!(s_lo > 0.0 && s_lo <= s_hi)) throw InputError("s range must satisfy 0 < lo <= hi");
  if (!(initial_price >= 0.0)) throw InputError("initial_price must be >= 0");
  switch (kind) {
    case ExperimentKind::Solve:
      if (!scenario) throw InputError("kind = solve needs a scenario");
      scenario->validate();
      break;
    case ExperimentKind::Dynamic:
      if (horizon < 1) throw InputError("horizon must be >= 1");
      transition.validate();
      break;
    default:
      if (n_values.empty()) throw InputError("n_values must not be empty");
      if (capacities.empty()) throw InputError("capacities must not be empty");
      for (auto n : n_values) {
        if (n < 1) throw InputError("n_values entries must be >= 1");
      }
      for (double c : capacities) {
        if (!(c > 0.0)) throw InputError("capacities entries must be > 0");
      }
  }
}

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t run_seed(std::uint64_t seed, std::uint64_t run) {
  // The seed is hashed before the xor; a raw seed ^ run makes small seeds
  // permute the same set of runs.
  return splitmix64(splitmix64(seed) ^ run);
}

Scenario random_scenario(const ExperimentSpec& spec, std::size_t groups, double capacity,
                         std::uint64_t run) {
  std::mt19937_64 rng(run_seed(spec.seed, run));
  std::uniform_real_distribution<double> battery(spec.b_lo, spec.b_hi);
  std::uniform_real_distribution<double> satisfaction(spec.s_lo, spec.s_hi);
  Scenario sc;
  sc.grid.capacity = capacity;
  sc.grid.initial_price = spec.initial_price;
  sc.seed = spec.seed;
  sc.pevgs.resize(groups);
  for (auto& g : sc.pevgs) {
    g.b = battery(rng);
    g.s = satisfaction(rng);
  }
  return sc;
}

double RunRecord::utility() const { return sum_of(u); }
double RunRecord::pso_utility() const { return sum_of(pso_u); }
double RunRecord::ed_utility() const { return sum_of(ed_u); }

RunRecord solve_record(const ExperimentSpec& spec, const Scenario& scenario, int run,
                       bool baselines) {
  RunRecord base;
  base.run = run;
  base.n = scenario.size();
  base.capacity = scenario.capacity();
  try {
    const GseOutcome out = gse_solve(scenario, spec.solver);
    RunRecord r = record_from_outcome(out, run, scenario.capacity());
    if (baselines) add_baselines(spec, scenario, r, out.p_star);
    return r;
  } catch (const NonConvergence& e) {
    return fail_record(base, 2, e.what());
  } catch (const ConsistencyError& e) {
    return fail_record(base, 3, e.what());
  } catch (const GeometryError& e) {
    return fail_record(base, 3, e.what());
  } catch (const InputError& e) {
    return fail_record(base, 1, e.what());
  }
}

std::vector<RunRecord> run_cell_serial(const ExperimentSpec& spec, std::size_t groups,
                                       double capacity, bool baselines) {
  std::vector<RunRecord> records;
  records.reserve(spec.runs);
  for (int run = 0; run < spec.runs; ++run) {
    records.push_back(
        solve_record(spec, random_scenario(spec, groups, capacity, run), run, baselines));
  }
  return records;
}

std::vector<RunRecord> run_cell(const ExperimentSpec& spec, std::size_t groups, double capacity,
                                bool baselines, int workers) {
  std::vector<RunRecord> records(spec.runs);
  const int threads = thread_count(workers);
  (void)threads;
#ifdef PEVGAME_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(threads)
#endif
  for (int run = 0; run < spec.runs; ++run) {
    records[run] =
        solve_record(spec, random_scenario(spec, groups, capacity, run), run, baselines);
  }
  return records;
}

std::vector<std::vector<RunRecord>> run_dynamic(const ExperimentSpec& spec, int workers) {
  std::vector<std::vector<RunRecord>> per_run(spec.runs);
  const int threads = thread_count(workers);
  (void)threads;
#ifdef PEVGAME_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(threads)
#endif
  for (int run = 0; run < spec.runs; ++run) {
    TransitionConfig tc = spec.transition;
    tc.seed = run_seed(spec.seed, static_cast<std::uint64_t>(run));
    std::vector<RunRecord> slots;
    try {
      const HorizonResult h = simulate_horizon(tc, spec.horizon, spec.solver, 1);
      for (std::size_t t = 0; t < h.slots.size(); ++t) {
        const Scenario sc = slot_scenario(h.states[t], spec.initial_price, tc.seed);
        RunRecord r = record_from_outcome(h.slots[t], run, sc.capacity());
        add_baselines(spec, sc, r, h.slots[t].p_star);
        slots.push_back(std::move(r));
      }
    } catch (const std::exception& e) {
      RunRecord r;
      r.run = run;
      r.n = spec.transition.groups;
      const bool nonconv = dynamic_cast<const NonConvergence*>(&e) != nullptr;
      const bool input = dynamic_cast<const InputError*>(&e) != nullptr;
      slots.assign(spec.horizon, fail_record(r, nonconv ? 2 : input ? 1 : 3, e.what()));
    }
    per_run[run] = std::move(slots);
  }
  std::vector<std::vector<RunRecord>> by_slot(spec.horizon);
  for (auto& run : per_run) {
    for (std::size_t t = 0; t < run.size(); ++t) by_slot[t].push_back(std::move(run[t]));
  }
  return by_slot;
}

std::string csv_header(std::size_t n, bool baselines) {
  std::string s = "run,N,C,p_star,lambda,iters,sum_x";
  for (std::size_t i = 1; i <= n; ++i) s += ",x_" + std::to_string(i);
  for (std::size_t i = 1; i <= n; ++i) s += ",u_" + std::to_string(i);
  if (baselines) {
    for (std::size_t i = 1; i <= n; ++i) s += ",pso_u_" + std::to_string(i);
    for (std::size_t i = 1; i <= n; ++i) s += ",ed_u_" + std::to_string(i);
    s += ",pso_sum_x,ed_sum_x";
  }
  return s + "\n";
}

std::string csv_row(const RunRecord& r) {
  std::string s = std::to_string(r.run) + "," + std::to_string(r.n) + "," + fmt(r.capacity) +
                  "," + fmt(r.p_star) + "," + fmt(r.lambda) + "," + std::to_string(r.iterations) +
                  "," + fmt(r.sum_x);
  for (double v : r.x) s += "," + fmt(v);
  for (double v : r.u) s += "," + fmt(v);
  if (r.has_baselines()) {
    for (double v : r.pso_u) s += "," + fmt(v);
    for (double v : r.ed_u) s += "," + fmt(v);
    s += "," + fmt(r.pso_sum_x) + "," + fmt(r.ed_sum_x);
  }
  return s + "\n";
}

std::vector<RunRecord> parse_records_csv(std::string_view text) {
  std::vector<RunRecord> out;
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line)) throw InputError("empty CSV");
  std::size_t columns = std::count(line.begin(), line.end(), ',') + 1;
  const bool baselines = line.find("pso_u_") != std::string::npos;
  // 7 fixed columns, then N x, N u, and optionally 2N baseline utilities + 2 sums.
  const std::size_t per_n = baselines ? 4 : 2;
  const std::size_t fixed = baselines ? 9 : 7;
  if (columns < fixed || (columns - fixed) % per_n != 0) throw InputError("unexpected CSV header");
  const std::size_t n = (columns - fixed) / per_n;

  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<double> v;
    std::size_t start = 0;
    while (start <= line.size()) {
      std::size_t end = line.find(',', start);
      if (end == std::string::npos) end = line.size();
      double d = 0.0;
      const auto [ptr, ec] = std::from_chars(line.data() + start, line.data() + end, d);
      if (ec != std::errc() || ptr != line.data() + end) {
        throw InputError("CSV line " + std::to_string(line_no) + ": bad number");
      }
      v.push_back(d);
      start = end + 1;
    }
    if (v.size() != columns) {
      throw InputError("CSV line " + std::to_string(line_no) + ": wrong column count");
    }
    RunRecord r;
    r.run = static_cast<int>(v[0]);
    r.n = static_cast<std::size_t>(v[1]);
    r.capacity = v[2];
    r.p_star = v[3];
    r.lambda = v[4];
    r.iterations = static_cast<int>(v[5]);
    r.sum_x = v[6];
    auto it = v.begin() + 7;
    r.x.assign(it, it + n);
    it += n;
    r.u.assign(it, it + n);
    it += n;
    if (baselines) {
      r.pso_u.assign(it, it + n);
      it += n;
      r.ed_u.assign(it, it + n);
      it += n;
      r.pso_sum_x = *it++;
      r.ed_sum_x = *it++;
    }
    out.push_back(std::move(r));
  }
  return out;
}

ExperimentResult run_experiment(const ExperimentSpec& spec_in, int workers) {
  ExperimentSpec spec = spec_in;
  spec.apply_defaults();
  spec.validate();
  std::filesystem::create_directories(spec.output_path);
  const auto& dir = spec.output_path;

  ExperimentResult result;
  std::string failures = "run,N,C,exit_code,error\n";
  std::vector<RunRecord> all;

  if (spec.kind == ExperimentKind::Solve) {
    const RunRecord r = solve_record(spec, *spec.scenario, 0, true);
    std::vector<RunRecord> records{r};
    note_failures(records, failures, result);
    write_file(dir / "solution.csv", records_csv(records, r.n, true), result);
    if (!r.failed) write_file(dir / "summary.csv", summary_table(summarize(records)), result);
    write_file(dir / "failures.csv", failures, result);
    return result;
  }

  if (spec.kind == ExperimentKind::Dynamic) {
    const auto by_slot = run_dynamic(spec, workers);
    const std::size_t n = spec.transition.groups;
    Series demand{"slot mean_demand_pevg_1..N", {}};
    Series utility{"slot mean_utility_per_pevg proposed pso ed", {}};
    std::vector<double> leader(spec.runs, 0.0), follower(spec.runs, 0.0);
    std::vector<bool> run_failed(spec.runs, false);
    for (std::size_t t = 0; t < by_slot.size(); ++t) {
      const auto& recs = by_slot[t];
      note_failures(recs, failures, result);
      write_file(dir / ("records_slot" + std::to_string(t + 1) + ".csv"),
                 records_csv(recs, n, true), result);
      std::vector<double> row{static_cast<double>(t + 1)};
      for (std::size_t i = 0; i < n; ++i) row.push_back(mean_column(recs, i, &RunRecord::x));
      demand.rows.push_back(std::move(row));
      double up = 0.0, pso = 0.0, ed = 0.0;
      std::size_t ok = 0;
      for (const auto& r : recs) {
        if (r.failed) {
          run_failed[r.run] = true;
          continue;
        }
        up += r.utility() / static_cast<double>(n);
        pso += r.pso_utility() / static_cast<double>(n);
        ed += r.ed_utility() / static_cast<double>(n);
        ++ok;
        leader[r.run] += r.p_star * r.sum_x;
        follower[r.run] += r.utility();
      }
      const double k = ok ? static_cast<double>(ok) : 1.0;
      utility.rows.push_back({static_cast<double>(t + 1), up / k, pso / k, ed / k});
      all.insert(all.end(), recs.begin(), recs.end());
    }
    std::string horizon = "run,leader_payoff,follower_payoff\n";
    for (int r = 0; r < spec.runs; ++r) {
      if (!run_failed[r]) {
        horizon += std::to_string(r) + "," + fmt(leader[r]) + "," + fmt(follower[r]) + "\n";
      }
    }
    write_file(dir / "horizon.csv", horizon, result);
    write_file(dir / "fig11_dynamic_demand.dat", demand.text(), result);
    write_file(dir / "fig12_dynamic_utility.dat", utility.text(), result);
    write_file(dir / "plots.gp",
               "set datafile commentschars '#'\n"
               "set terminal pngcairo size 800,600\n"
               "set output 'fig11_dynamic_demand.png'\n"
               "set xlabel 'time slot'; set ylabel 'average demand (MWh)'\n"
               "plot for [i=2:" + std::to_string(n + 1) +
                   "] 'fig11_dynamic_demand.dat' using 1:i with linespoints title sprintf('PEVG %d', i-1)\n"
                   "set output 'fig12_dynamic_utility.png'\n"
                   "set ylabel 'average utility per PEVG'\n"
                   "plot 'fig12_dynamic_utility.dat' using 1:2 w lp t 'proposed', '' using 1:3 w lp t 'PSO', '' using 1:4 w lp t 'ED'\n",
               result);
  } else {
    const bool baselines = spec.kind == ExperimentKind::Compare;
    std::vector<std::vector<RunRecord>> cells;
    for (double c : spec.capacities) {
      for (std::size_t n : spec.n_values) {
        auto recs = run_cell(spec, n, c, baselines, workers);
        note_failures(recs, failures, result);
        write_file(dir / ("records_" + cell_tag(n, c) + ".csv"), records_csv(recs, n, baselines),
                   result);
        all.insert(all.end(), recs.begin(), recs.end());
        cells.push_back(std::move(recs));
      }
    }
    const auto summary = summarize(all);
    std::string gp = "set datafile commentschars '#'\nset terminal pngcairo size 800,600\n";

    if (spec.kind == ExperimentKind::SweepN) {
      Series price{"N mean_p_star per capacity:", {}};
      Series iters{"N mean_iterations max_iterations per capacity:", {}};
      for (double c : spec.capacities) {
        price.header += " C=" + fmt(c);
        iters.header += " C=" + fmt(c);
      }
      for (std::size_t n : spec.n_values) {
        std::vector<double> prow{static_cast<double>(n)}, irow{static_cast<double>(n)};
        for (double c : spec.capacities) {
          const CellSummary* cell = find_cell(summary, n, c);
          prow.push_back(cell ? cell->p_star.mean : 0.0);
          irow.push_back(cell ? cell->iterations.mean : 0.0);
          irow.push_back(cell ? cell->iterations.max : 0.0);
        }
        price.rows.push_back(std::move(prow));
        iters.rows.push_back(std::move(irow));
      }
      write_file(dir / "fig6_price_vs_n.dat", price.text(), result);
      write_file(dir / "fig7_iterations_vs_n.dat", iters.text(), result);
      gp += "set output 'fig6_price_vs_n.png'\nset xlabel 'number of PEVGs'; set ylabel 'average optimal price (USD/MWh)'\n"
            "plot for [i=2:" + std::to_string(spec.capacities.size() + 1) +
            "] 'fig6_price_vs_n.dat' using 1:i with linespoints notitle\n"
            "set output 'fig7_iterations_vs_n.png'\nset ylabel 'iterations to GSE'\n"
            "plot 'fig7_iterations_vs_n.dat' using 1:2 w lp t 'average', '' using 1:3 w lp t 'maximum'\n";
    } else if (spec.kind == ExperimentKind::SweepCapacity) {
      Series price{"C mean_p_star per N:", {}};
      for (std::size_t n : spec.n_values) price.header += " N=" + std::to_string(n);
      for (double c : spec.capacities) {
        std::vector<double> row{c};
        for (std::size_t n : spec.n_values) {
          const CellSummary* cell = find_cell(summary, n, c);
          row.push_back(cell ? cell->p_star.mean : 0.0);
        }
        price.rows.push_back(std::move(row));
      }
      write_file(dir / "fig6_price_vs_capacity.dat", price.text(), result);
      gp += "set output 'fig6_price_vs_capacity.png'\nset xlabel 'grid capacity (MWh)'; set ylabel 'average optimal price (USD/MWh)'\n"
            "plot for [i=2:" + std::to_string(spec.n_values.size() + 1) +
            "] 'fig6_price_vs_capacity.dat' using 1:i with linespoints notitle\n";
    } else {
      Series demand{"N mean_demand_per_pevg proposed pso ed", {}};
      Series utility{"N mean_utility_per_pevg proposed pso ed", {}};
      std::size_t cell_index = 0;
      for (double c : spec.capacities) {
        for (std::size_t n : spec.n_values) {
          const auto& recs = cells[cell_index++];
          Series per_pevg{"pevg mean_utility proposed pso ed (N=" + std::to_string(n) +
                              ", C=" + fmt(c) + ")",
                          {}};
          for (std::size_t i = 0; i < n; ++i) {
            per_pevg.rows.push_back({static_cast<double>(i + 1),
                                     mean_column(recs, i, &RunRecord::u),
                                     mean_column(recs, i, &RunRecord::pso_u),
                                     mean_column(recs, i, &RunRecord::ed_u)});
          }
          write_file(dir / ("fig8_utility_per_pevg_" + cell_tag(n, c) + ".dat"), per_pevg.text(),
                     result);
          const CellSummary* cell = find_cell(summary, n, c);
          if (c == spec.capacities.front() && cell) {
            double pso_x = 0.0, ed_x = 0.0;
            std::size_t ok = 0;
            for (const auto& r : recs) {
              if (r.failed) continue;
              pso_x += r.pso_sum_x;
              ed_x += r.ed_sum_x;
              ++ok;
            }
            const double k = static_cast<double>(std::max<std::size_t>(ok, 1)) * n;
            demand.rows.push_back({static_cast<double>(n), cell->sum_x.mean / n, pso_x / k, ed_x / k});
            utility.rows.push_back({static_cast<double>(n), cell->utility.mean / n,
                                    cell->pso_utility.mean / n, cell->ed_utility.mean / n});
          }
        }
      }
      write_file(dir / "fig9_demand_vs_n.dat", demand.text(), result);
      write_file(dir / "fig10_utility_vs_n.dat", utility.text(), result);
      gp += "set output 'fig9_demand_vs_n.png'\nset xlabel 'number of PEVGs'; set ylabel 'average demand per PEVG (MWh)'\n"
            "plot 'fig9_demand_vs_n.dat' using 1:2 w lp t 'proposed', '' using 1:3 w lp t 'PSO', '' using 1:4 w lp t 'ED'\n"
            "set output 'fig10_utility_vs_n.png'\nset ylabel 'average utility per PEVG'\n"
            "plot 'fig10_utility_vs_n.dat' using 1:2 w lp t 'proposed', '' using 1:3 w lp t 'PSO', '' using 1:4 w lp t 'ED'\n";
    }
    write_file(dir / "plots.gp", gp, result);
  }

  bool any_ok = std::any_of(all.begin(), all.end(), [](const RunRecord& r) { return !r.failed; });
  if (any_ok && spec.kind != ExperimentKind::Dynamic) write_file(dir / "summary.csv", summary_table(summarize(all)), result);
  write_file(dir / "failures.csv", failures, result);
  return result;
}

}  // namespace pevgame
