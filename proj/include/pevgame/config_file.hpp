#pragma once

// Scenario and experiment files: one `key = value` entry per line, `#` comments.
// Values are numbers, bare words, lists `[a, b]` or tables `{k = v, ...}`.
//
//   capacity = 30
//   initial_price = 17
//   pevg = { b = 40, s = 1, x_ini = 0 }
//   pevg = { b = 50, s = 2 }
//
// Experiment files add kind, runs, n_values, capacities, transition = {...}
// and repeated `slot = { capacity = .., b = [..], s = [..] }` schedule entries.
// Unknown keys are rejected.

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "pevgame/experiment.hpp"
#include "pevgame/model.hpp"

namespace pevgame {

struct ConfigValue {
  enum class Kind { Number, Word, List, Table };
  Kind kind = Kind::Number;
  double number = 0.0;
  std::string word;
  std::vector<ConfigValue> list;
  std::vector<std::pair<std::string, ConfigValue>> table;
};

struct ConfigEntry {
  std::string key;
  ConfigValue value;
  int line = 0;
};

/// Syntax only. Errors read "<source>:<line>: <message>".
std::vector<ConfigEntry> parse_config(std::string_view text, std::string_view source = "<input>");

Scenario parse_scenario(std::string_view text, std::string_view source = "<input>");
ExperimentSpec parse_experiment(std::string_view text, std::string_view source = "<input>");

Scenario load_scenario(const std::filesystem::path& path);
ExperimentSpec load_experiment(const std::filesystem::path& path);

/// A file with a `kind` key is an experiment, otherwise a scenario.
std::variant<Scenario, ExperimentSpec> load_config(const std::filesystem::path& path);

}  // namespace pevgame
