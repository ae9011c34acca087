#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "pevgame/config_file.hpp"
#include "pevgame/errors.hpp"

using namespace pevgame;

namespace {

std::string error_of(auto&& fn) {
  try {
    fn();
  } catch (const InputError& e) {
    return e.what();
  }
  return "";
}

bool contains(const std::string& text, const std::string& part) {
  return text.find(part) != std::string::npos;
}

}  // namespace

TEST_CASE("minimal scenario") {
  const Scenario sc = parse_scenario(
      "# two groups\n"
      "capacity = 30\n"
      "initial_price = 17\n"
      "pevg = { b = 40, s = 1 }\n"
      "pevg = { b = 50, s = 2, x_ini = 3 }   # trailing comment\n");
  CHECK(sc.size() == 2);
  CHECK(sc.capacity() == 30);
  CHECK(sc.grid.initial_price == 17);
  CHECK(sc.pevgs[1].b == 50);
  CHECK(sc.pevgs[1].s == 2);
  CHECK(sc.pevgs[1].x_ini == 3);
  CHECK(sc.pevgs[0].x_ini == 0);
}

TEST_CASE("invalid fields are rejected with the field name and line") {
  const auto zero_s = error_of([] {
    parse_scenario("capacity = 30\npevg = { b = 40, s = 0 }\n", "f.txt");
  });
  CHECK(contains(zero_s, "f.txt:2:"));
  CHECK(contains(zero_s, "pevg.s"));

  const auto bad_capacity = error_of([] { parse_scenario("capacity = -1\npevg = { b = 40, s = 1 }\n"); });
  CHECK(contains(bad_capacity, ":1:"));
  CHECK(contains(bad_capacity, "capacity"));

  CHECK(contains(error_of([] { parse_scenario("pevg = { b = 40, s = 1 }\n"); }), "capacity is required"));
  CHECK(contains(error_of([] { parse_scenario("capacity = 3\n"); }), "pevg"));
}

TEST_CASE("unknown keys are rejected") {
  const auto top = error_of([] {
    parse_scenario("capacity = 30\ncapacty = 31\npevg = { b = 40, s = 1 }\n", "x");
  });
  CHECK(contains(top, "x:2:"));
  CHECK(contains(top, "capacty"));
  const auto nested = error_of([] { parse_scenario("capacity = 30\npevg = { b = 40, s = 1, q = 2 }\n"); });
  CHECK(contains(nested, "q"));
  CHECK(contains(error_of([] { parse_scenario("capacity = 30\ncapacity = 31\npevg = { b = 40, s = 1 }\n"); }),
                 "duplicate"));
}

TEST_CASE("syntax errors name the line") {
  CHECK(contains(error_of([] { parse_config("a = 1\nb = [1, 2\n", "s"); }), "s:2:"));
  CHECK(contains(error_of([] { parse_config("a 1\n", "s"); }), "s:1:"));
  CHECK(contains(error_of([] { parse_config("a = {x = 1\n", "s"); }), "s:1:"));
  const auto entries = parse_config("a = 1.5e1\nb = [1, 2, 3]\nc = { d = word }\n");
  REQUIRE(entries.size() == 3);
  CHECK(entries[0].value.number == 15);
  CHECK(entries[1].value.list.size() == 3);
  CHECK(entries[2].value.table[0].second.word == "word");
  CHECK(entries[2].line == 3);
}

TEST_CASE("experiment files") {
  const ExperimentSpec spec = parse_experiment(
      "kind = sweep-n\n"
      "runs = 20\n"
      "n_values = [5, 10]\n"
      "capacities = [99]\n"
      "seed = 5\n"
      "b_range = [35, 65]\n");
  CHECK(spec.kind == ExperimentKind::SweepN);
  CHECK(spec.runs == 20);
  CHECK(spec.n_values == std::vector<std::size_t>{5, 10});
  CHECK(spec.capacities == std::vector<double>{99});
  CHECK(spec.seed == 5);

  const ExperimentSpec dyn = parse_experiment(
      "kind = dynamic\n"
      "transition = { mode = schedule, slots = 2 }\n"
      "slot = { capacity = 30, b = [40, 50], s = [1, 2] }\n"
      "slot = { capacity = 35, b = [41, 50], s = [1, 2] }\n");
  CHECK(dyn.transition.mode == TransitionMode::Schedule);
  CHECK(dyn.horizon == 2);
  REQUIRE(dyn.transition.schedule.size() == 2);
  CHECK(dyn.transition.schedule[1].capacity == 35);
  CHECK(dyn.transition.schedule[1].pevgs[0].b == 41);

  CHECK(contains(error_of([] { parse_experiment("runs = 3\n"); }), "kind"));
  CHECK(contains(error_of([] { parse_experiment("kind = sweep-n\nruns = 0\n", "e"); }), "e:2:"));
  CHECK(contains(error_of([] { parse_experiment("kind = bogus\n"); }), "kind"));
  CHECK(contains(error_of([] { parse_experiment("kind = sweep-n\ncapacity = 3\n"); }), "kind = solve"));
}

TEST_CASE("load_config picks the file type") {
  const auto dir = std::filesystem::temp_directory_path() / "pevgame_config_test";
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "s.txt") << "capacity = 30\npevg = { b = 40, s = 1 }\n";
  std::ofstream(dir / "e.txt") << "kind = compare\nn_values = [10]\n";
  CHECK(std::holds_alternative<Scenario>(load_config(dir / "s.txt")));
  CHECK(std::holds_alternative<ExperimentSpec>(load_config(dir / "e.txt")));
  CHECK_THROWS_AS(load_scenario(dir / "missing.txt"), InputError);
  std::filesystem::remove_all(dir);
}
